//! Command definitions and their execution.

use std::collections::BTreeMap;
use std::io::{IsTerminal, Read};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gog_core::dehn::{
    classify_twist, efficiency_check, subdivide_to_classical, twistors, TwistClass,
};
use gog_core::fixtures;
use gog_core::hconj::is_h_zero;
use gog_core::surgery::{
    blowup, blowup_plan, partial_dehn_blowup, quotient_gog, quotient_iso, roundtrip,
    LocalModel, PartialOutcome, PlanOutcome, Subgraph,
};
use gog_core::syntax::{format_element, format_word, parse_element, parse_word};
use gog_core::word::pw_equal;
use gog_core::{GogIso, GraphOfGroups, PathWord, Report, VertexGroup, VertexId};
use serde_json::{json, Map, Value};

use crate::doc::{self, IsoDoc};

#[derive(Parser, Debug)]
#[command(name = "gog", version, about = "Graphs of groups, their automorphisms and Dehn twists")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a graph of groups or isomorphism document.
    Validate { file: String },
    /// Reduce a word.
    Reduce {
        file: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        start: Option<String>,
    },
    /// Decide whether two words are equal in the path group.
    Eq {
        file: String,
        first: String,
        second: String,
        #[arg(long)]
        start: Option<String>,
    },
    /// Apply an isomorphism to a word.
    Apply {
        iso: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        start: Option<String>,
    },
    /// Compose two isomorphisms, applying FIRST and then SECOND.
    Compose { second: String, first: String },
    /// Invert an isomorphism.
    Invert { iso: String },
    /// Dehn twist analysis.
    Dehn {
        #[command(subcommand)]
        action: DehnAction,
    },
    /// Decide whether a word has H-length zero.
    Hzero {
        iso: String,
        #[arg(long)]
        word: String,
        /// Use the inverse automorphism.
        #[arg(long)]
        inverse: bool,
        /// Read the word in this vertex's group and test it through the
        /// local model there (the default when there is exactly one).
        #[arg(long)]
        local: Option<String>,
        /// Ignore local models and test against the automorphism itself.
        #[arg(long, conflicts_with = "local")]
        global: bool,
        #[arg(long)]
        start: Option<String>,
    },
    /// Contract a connected subgraph to a single vertex.
    Quotient {
        file: String,
        /// Vertex and dart names of the subgraph, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        subgraph: Vec<String>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Compute a blow-up plan at a vertex carrying a local model.
    Plan {
        iso: String,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Blow up a vertex carrying a local model.
    Blowup {
        iso: String,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        plan: Option<String>,
    },
    /// Blow up every local model of a partial Dehn twist.
    PartialBlowup { iso: String },
    /// Quotient by a subgraph, blow it back up and compare.
    Roundtrip {
        gog: String,
        iso: String,
        #[arg(long, value_delimiter = ',', required = true)]
        subgraph: Vec<String>,
        #[arg(long)]
        base: Option<String>,
    },
    /// Print a built-in example document.
    Example {
        #[arg(value_parser = EXAMPLES)]
        name: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum DehnAction {
    /// Classical, general, or not a Dehn twist (exit 1)
    Classify { iso: String },
    /// Twistor exponents of a classical Dehn twist
    Twistors { iso: String },
    /// Subdivide edges to turn a general Dehn twist into a classical one
    Subdivide { iso: String },
    /// Check the five efficiency conditions
    Efficient { iso: String },
}

pub const EXAMPLES: [&str; 9] = [
    "FIX-A.gog",
    "FIX-A.iso",
    "FIX-B.gog",
    "FIX-B.iso",
    "FIX-C.gog",
    "FIX-C.iso",
    "FIX-D.gog",
    "FIX-D.iso",
    "FIX-D-xy.iso",
];

/// Result of a command: a document, its text rendering and an exit code.
pub struct Output {
    pub doc: Value,
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(doc: Value, text: String) -> Self {
        Output { doc, text, code: 0 }
    }

    fn verdict(doc: Value, text: String, yes: bool) -> Self {
        Output {
            doc,
            text,
            code: if yes { 0 } else { 1 },
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => doc::canonical(&self.doc),
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn color() -> bool {
    std::env::var("GOG_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

fn paint(s: &str, good: bool) -> String {
    if color() {
        let c = if good { 32 } else { 31 };
        format!("\x1b[1;{c}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn yes_no(b: bool) -> String {
    paint(if b { "yes" } else { "no" }, b)
}

fn report(command: &str, fields: Value) -> Value {
    let mut p = fields;
    p["command"] = json!(command);
    doc::envelope("report", p)
}

pub fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
    } else {
        s = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(s)
}

fn load(path: &str) -> Result<Value> {
    doc::parse_text(&read_input(path)?).with_context(|| format!("in {path}"))
}

fn ensure_valid(report: Report, what: &str) -> Result<()> {
    if report.is_valid() {
        Ok(())
    } else {
        bail!("invalid {what}:\n{report}")
    }
}

fn load_gog(path: &str) -> Result<Arc<GraphOfGroups>> {
    let v = load(path)?;
    let g = match doc::kind(&v)? {
        "gog" => Arc::new(doc::gog_from_payload(&v)?),
        "iso" => doc::iso_from_payload(&v)?.domain().clone(),
        k => bail!("expected a gog or iso document, found `{k}`"),
    };
    ensure_valid(g.validate(), "graph of groups")?;
    Ok(g)
}

fn load_iso(path: &str) -> Result<IsoDoc> {
    let v = load(path)?;
    if doc::kind(&v)? != "iso" {
        bail!("expected an iso document, found `{}`", doc::kind(&v)?);
    }
    let d = doc::iso_from_doc(&v)?;
    ensure_valid(d.iso.domain().validate(), "domain")?;
    ensure_valid(d.iso.codomain().validate(), "codomain")?;
    ensure_valid(d.iso.validate(), "isomorphism")?;
    Ok(d)
}

fn start_vertex(g: &GraphOfGroups, start: &Option<String>) -> Result<Option<VertexId>> {
    start.as_ref().map(|s| Ok(g.vertex(s)?)).transpose()
}

fn read_word(g: &GraphOfGroups, text: &str, start: &Option<String>) -> Result<PathWord> {
    let s = start_vertex(g, start)?;
    parse_word(g, text, s).with_context(|| format!("in word `{text}`"))
}

fn describe_group(group: &VertexGroup) -> String {
    match group {
        VertexGroup::Free(f) if f.rank() == 0 => "1".into(),
        VertexGroup::Free(f) => format!("<{}>", f.names().join(", ")),
        VertexGroup::Pi1(p) => format!(
            "pi1 at {} of a graph of groups with {} vertices and {} edges",
            p.gog.graph().vertex_name(p.base),
            p.gog.graph().vertex_count(),
            p.gog.graph().dart_count() / 2
        ),
    }
}

pub fn describe_gog(g: &GraphOfGroups) -> String {
    let graph = g.graph();
    let mut lines = Vec::new();
    for v in graph.vertices() {
        lines.push(format!("vertex {}: {}", graph.vertex_name(v), describe_group(g.vertex_group(v))));
    }
    for d in graph.darts() {
        let edge = match &g.edge_group(d).image {
            Some(x) => format!("{} -> {}", g.edge_group(d).generator, format_element(g.terminal_group(d), x)),
            None => "trivial".into(),
        };
        lines.push(format!(
            "dart {}: {} -> {}, {}",
            graph.dart_name(d),
            graph.vertex_name(graph.initial(d)),
            graph.vertex_name(graph.terminal(d)),
            edge
        ));
    }
    lines.join("\n")
}

pub fn describe_iso(h: &GogIso) -> String {
    let (dom, cod) = (h.domain(), h.codomain());
    let mut lines = Vec::new();
    for v in dom.graph().vertices() {
        let w = h.vertex_image(v);
        let group = dom.vertex_group(v);
        let map = match h.vertex_iso(v).is_identity_on(group) {
            Ok(true) => "id".to_string(),
            _ => match group.generators() {
                Ok(gens) => gens
                    .iter()
                    .map(|x| {
                        let y = h.apply_at(v, x).map(|y| format_element(cod.vertex_group(w), &y));
                        format!("{} -> {}", format_element(group, x), y.unwrap_or_else(|e| e.to_string()))
                    })
                    .collect::<Vec<_>>()
                    .join(", "),
                Err(e) => e.to_string(),
            },
        };
        lines.push(format!("vertex {} -> {}: {}", dom.graph().vertex_name(v), cod.graph().vertex_name(w), map));
    }
    for d in dom.graph().darts() {
        let e = h.dart_image(d);
        lines.push(format!(
            "dart {} -> {}: sign {}, delta {}",
            dom.graph().dart_name(d),
            cod.graph().dart_name(e),
            h.edge_sign(d),
            format_element(cod.terminal_group(e), h.correction(d))
        ));
    }
    lines.join("\n")
}

fn iso_output(d: &IsoDoc) -> Output {
    Output::ok(doc::iso_doc(d), describe_iso(&d.iso))
}

fn pick_local<'a>(d: &'a IsoDoc, name: &Option<String>) -> Result<(String, &'a LocalModel)> {
    match name {
        Some(n) => d
            .locals
            .get(n)
            .map(|l| (n.clone(), l))
            .ok_or_else(|| anyhow!("no local model at `{n}`")),
        None => match d.locals.len() {
            1 => {
                let (n, l) = d.locals.iter().next().expect("one entry");
                Ok((n.clone(), l))
            }
            0 => bail!("the isomorphism carries no local model"),
            _ => bail!("several local models; choose one with --vertex/--local"),
        },
    }
}

pub fn example(name: &str) -> Result<Value> {
    let local_d = || {
        let mut m = BTreeMap::new();
        m.insert("V0".to_string(), fixtures::local_d());
        m
    };
    Ok(match name {
        "FIX-A.gog" => doc::gog_doc(&fixtures::fix_a()),
        "FIX-A.iso" => doc::iso_doc(&fixtures::h_a().into()),
        "FIX-B.gog" => doc::gog_doc(&fixtures::fix_b()),
        "FIX-B.iso" => doc::iso_doc(&fixtures::d_b().into()),
        "FIX-C.gog" => doc::gog_doc(&fixtures::fix_c()),
        "FIX-C.iso" => doc::iso_doc(&fixtures::h_c().into()),
        "FIX-D.gog" => doc::gog_doc(&fixtures::fix_d()),
        "FIX-D.iso" => doc::iso_doc(&IsoDoc {
            iso: fixtures::h_d(),
            locals: local_d(),
        }),
        "FIX-D-xy.iso" => doc::iso_doc(&IsoDoc {
            iso: fixtures::h_d_xy(),
            locals: local_d(),
        }),
        other => bail!("unknown example `{other}`"),
    })
}

fn subgraph_and_base(
    g: &GraphOfGroups,
    names: &[String],
    base: &Option<String>,
) -> Result<(Subgraph, VertexId)> {
    let sub = Subgraph::from_names(g, names)?;
    let p0 = match base {
        Some(b) => g.vertex(b)?,
        None => *sub
            .vertices
            .first()
            .ok_or_else(|| anyhow!("the subgraph has no vertices"))?,
    };
    Ok((sub, p0))
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Validate { file } => {
            let v = load(file)?;
            let (checks, what) = match doc::kind(&v)? {
                "gog" => (doc::gog_from_payload(&v)?.validate(), "gog"),
                "iso" => {
                    let d = doc::iso_from_doc(&v)?;
                    let mut r = Report::new();
                    r.absorb("domain", d.iso.domain().validate());
                    r.absorb("codomain", d.iso.codomain().validate());
                    if r.is_valid() {
                        r = d.iso.validate();
                    }
                    (r, "iso")
                }
                k => bail!("cannot validate a `{k}` document"),
            };
            let violations: Vec<Value> = checks
                .violations
                .iter()
                .map(|x| json!({ "subject": x.subject, "message": x.message }))
                .collect();
            let valid = checks.is_valid();
            let doc = report("validate", json!({ "document": what, "valid": valid, "violations": violations }));
            let text = if valid { paint("valid", true) } else { format!("{}\n{checks}", paint("invalid", false)) };
            Ok(Output::verdict(doc, text, valid))
        }
        Command::Reduce { file, word, start } => {
            let g = load_gog(file)?;
            let w = read_word(&g, word, start)?.reduce(&g);
            Ok(Output::ok(doc::word_doc(&g, &w), format_word(&g, &w)))
        }
        Command::Eq { file, first, second, start } => {
            let g = load_gog(file)?;
            let a = read_word(&g, first, start)?;
            let b = read_word(&g, second, start)?;
            let same = a.start() == b.start() && a.end(&g) == b.end(&g) && pw_equal(&g, &a, &b)?;
            let doc = report("eq", json!({ "equal": same }));
            Ok(Output::verdict(doc, format!("equal: {}", yes_no(same)), same))
        }
        Command::Apply { iso, word, start } => {
            let d = load_iso(iso)?;
            let g = d.iso.domain();
            let w = d.iso.apply_word(&read_word(g, word, start)?)?.reduce(d.iso.codomain());
            let cod = d.iso.codomain();
            Ok(Output::ok(doc::word_doc(cod, &w), format_word(cod, &w)))
        }
        Command::Compose { second, first } => {
            let (s, f) = (load_iso(second)?, load_iso(first)?);
            let h = GogIso::compose(&s.iso, &f.iso)?;
            Ok(iso_output(&h.into()))
        }
        Command::Invert { iso } => {
            let h = load_iso(iso)?.iso.invert()?;
            Ok(iso_output(&h.into()))
        }
        Command::Dehn { action } => run_dehn(action),
        Command::Hzero { iso, word, inverse, local, global, start } => {
            let d = load_iso(iso)?;
            let use_local = !global && (local.is_some() || !d.locals.is_empty());
            let (h, w, scope) = if use_local {
                let (name, l) = pick_local(&d, local)?;
                let g = d.iso.domain();
                let group = g.vertex_group(g.vertex(&name)?);
                let x = parse_element(group, word).with_context(|| format!("in word `{word}`"))?;
                (l.twist.clone(), l.theta_word(group, &x)?, name)
            } else {
                let w = read_word(d.iso.domain(), word, start)?;
                (d.iso.clone(), w, String::new())
            };
            let h = if *inverse { h.invert()? } else { h };
            let g = h.domain().clone();
            let w = w.reduce(&g);
            let witness = is_h_zero(&h, &w)?;
            let mut fields = json!({ "zero": witness.is_some(), "word": doc::word_payload(&g, &w) });
            if !scope.is_empty() {
                fields["local"] = json!(scope);
            }
            let mut text = format!("zero: {}\nword: {}", yes_no(witness.is_some()), format_word(&g, &w));
            if let Some(wit) = &witness {
                let group = g.vertex_group(wit.vertex);
                fields["witness"] = json!({
                    "vertex": g.graph().vertex_name(wit.vertex),
                    "gamma": doc::word_payload(&g, &wit.gamma),
                    "g": doc::element_value(group, &wit.g),
                });
                text.push_str(&format!(
                    "\nvertex: {}\ngamma: {}\ng: {}",
                    g.graph().vertex_name(wit.vertex),
                    format_word(&g, &wit.gamma),
                    format_element(group, &wit.g)
                ));
            }
            Ok(Output::verdict(report("hzero", fields), text, witness.is_some()))
        }
        Command::Quotient { file, subgraph, base, name } => {
            let v = load(file)?;
            let is_iso = doc::kind(&v)? == "iso";
            let (g, h) = if is_iso {
                let d = load_iso(file)?;
                (d.iso.domain().clone(), Some(d.iso))
            } else {
                (load_gog(file)?, None)
            };
            let (sub, p0) = subgraph_and_base(&g, subgraph, base)?;
            let q = quotient_gog(&g, &sub, p0, None, name.as_deref())?;
            match h {
                Some(h) => Ok(iso_output(&quotient_iso(&h, &q)?.into())),
                None => Ok(Output::ok(doc::gog_doc(&q.quotient), describe_gog(&q.quotient))),
            }
        }
        Command::Plan { iso, vertex } => {
            let d = load_iso(iso)?;
            let (name, local) = pick_local(&d, vertex)?;
            let g = d.iso.domain();
            let v0 = g.vertex(&name)?;
            match blowup_plan(&d.iso, v0, local)? {
                PlanOutcome::Plan(plan) => {
                    let text = plan
                        .entries
                        .iter()
                        .map(|(dart, e)| {
                            format!(
                                "{}: attach at {}, connector {}, residual {}",
                                g.graph().dart_name(*dart),
                                local.sub.graph().vertex_name(e.vertex),
                                format_word(&local.sub, &e.connector),
                                format_element(local.sub.vertex_group(e.vertex), &e.residual)
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Output::ok(doc::plan_doc(&d.iso, v0, local, &plan), text))
                }
                other => Ok(refusal("plan", g, &name, &other)),
            }
        }
        Command::Blowup { iso, vertex, plan } => {
            let d = load_iso(iso)?;
            let (name, local) = pick_local(&d, vertex)?;
            let g = d.iso.domain();
            let (v0, plan) = match plan {
                Some(p) => {
                    let v = load(p)?;
                    if doc::kind(&v)? != "plan" {
                        bail!("expected a plan document");
                    }
                    let (v0, plan) = doc::plan_from(&v, &d.iso, local)?;
                    if g.graph().vertex_name(v0) != name {
                        bail!("the plan is for `{}`, not `{name}`", g.graph().vertex_name(v0));
                    }
                    (v0, plan)
                }
                None => {
                    let v0 = g.vertex(&name)?;
                    match blowup_plan(&d.iso, v0, local)? {
                        PlanOutcome::Plan(p) => (v0, p),
                        other => return Ok(refusal("blowup", g, &name, &other)),
                    }
                }
            };
            let res = blowup(&d.iso, v0, local, &plan)?;
            let mut locals = d.locals.clone();
            locals.remove(&name);
            Ok(iso_output(&IsoDoc { iso: res.iso, locals }))
        }
        Command::PartialBlowup { iso } => {
            let d = load_iso(iso)?;
            match partial_dehn_blowup(&d.iso, &d.locals)? {
                PartialOutcome::DehnTwist { iso, class, .. } => {
                    let mut out = iso_output(&iso.into());
                    out.text = format!("class: {}\n{}", class_name(&class), out.text);
                    Ok(out)
                }
                PartialOutcome::NotLocallyZero { vertex, dart } => {
                    let doc = report("partial-blowup", json!({ "outcome": "not-locally-zero", "vertex": vertex, "dart": dart }));
                    let text = format!("{}: correction of {dart} at {vertex}", paint("not locally zero", false));
                    Ok(Output::verdict(doc, text, false))
                }
            }
        }
        Command::Roundtrip { gog, iso, subgraph, base } => {
            let g = load_gog(gog)?;
            let d = load_iso(iso)?;
            if **d.iso.domain() != *g {
                bail!("the isomorphism does not act on {gog}");
            }
            let (sub, p0) = subgraph_and_base(&g, subgraph, base)?;
            let rt = roundtrip(&d.iso, &sub, p0)?;
            let pass = rt.same_data && rt.semi_conjugate;
            let doc = report(
                "roundtrip",
                json!({ "same_data": rt.same_data, "semi_conjugate": rt.semi_conjugate, "pass": pass }),
            );
            let text = format!(
                "same data: {}\nsemi-conjugate: {}",
                yes_no(rt.same_data),
                yes_no(rt.semi_conjugate)
            );
            Ok(Output::verdict(doc, text, pass))
        }
        Command::Example { name } => {
            let v = example(name)?;
            let text = doc::canonical(&v);
            Ok(Output::ok(v, text))
        }
    }
}

fn refusal(command: &str, g: &GraphOfGroups, vertex: &str, out: &PlanOutcome) -> Output {
    let (outcome, d) = match out {
        PlanOutcome::NotLocallyZero(d) => ("not-locally-zero", *d),
        PlanOutcome::NotCompatible(d) => ("not-compatible", *d),
        PlanOutcome::Plan(_) => unreachable!("plans are handled by the caller"),
    };
    let dart = g.graph().dart_name(d);
    let doc = report(command, json!({ "outcome": outcome, "vertex": vertex, "dart": dart }));
    let text = format!("{}: {dart} at {vertex}", paint(&outcome.replace('-', " "), false));
    Output::verdict(doc, text, false)
}

fn class_name(c: &TwistClass) -> &'static str {
    match c {
        TwistClass::Classical(_) => "classical",
        TwistClass::General => "general",
        TwistClass::NotADehnTwist(_) => "not a Dehn twist",
    }
}

fn per_dart(h: &GogIso, xs: &[i64]) -> Map<String, Value> {
    let graph = h.domain().graph();
    graph.darts().map(|d| (graph.dart_name(d).to_string(), json!(xs[d.0]))).collect()
}

fn run_dehn(action: &DehnAction) -> Result<Output> {
    match action {
        DehnAction::Classify { iso } => {
            let h = load_iso(iso)?.iso;
            let class = classify_twist(&h)?;
            let mut fields = json!({ "class": class_name(&class).replace(' ', "-") });
            let mut text = format!("class: {}", paint(class_name(&class), !matches!(class, TwistClass::NotADehnTwist(_))));
            match &class {
                TwistClass::Classical(t) => {
                    fields["gammas"] = Value::Object(per_dart(&h, &t.gammas));
                    fields["twistors"] = Value::Object(per_dart(&h, &t.twistors));
                }
                TwistClass::NotADehnTwist(r) => {
                    fields["reason"] = json!(r);
                    text.push_str(&format!("\nreason: {r}"));
                }
                TwistClass::General => {}
            }
            let yes = !matches!(class, TwistClass::NotADehnTwist(_));
            Ok(Output::verdict(report("dehn-classify", fields), text, yes))
        }
        DehnAction::Twistors { iso } => {
            let h = load_iso(iso)?.iso;
            let t = twistors(&h)?;
            let z = per_dart(&h, &t.twistors);
            let text = z.iter().map(|(k, v)| format!("z_{k} = {v}")).collect::<Vec<_>>().join("\n");
            Ok(Output::ok(report("dehn-twistors", json!({ "twistors": z })), text))
        }
        DehnAction::Subdivide { iso } => {
            let h = load_iso(iso)?.iso;
            let s = subdivide_to_classical(&h)?;
            Ok(iso_output(&s.twist.into()))
        }
        DehnAction::Efficient { iso } => {
            let h = load_iso(iso)?.iso;
            let r = efficiency_check(&h)?;
            let names = ["minimal", "no_invisible_vertex", "no_proper_power", "no_unused_edge", "not_positively_bonded"];
            let mut conditions = Map::new();
            let mut text = vec![format!("efficient: {}", yes_no(r.is_efficient()))];
            for (n, f) in names.iter().zip(r.flags()) {
                conditions.insert(n.to_string(), json!(f));
                text.push(format!("{}: {}", n.replace('_', " "), yes_no(f)));
            }
            text.extend(r.details.iter().cloned());
            let doc = report(
                "dehn-efficient",
                json!({ "efficient": r.is_efficient(), "conditions": conditions, "details": r.details }),
            );
            Ok(Output::verdict(doc, text.join("\n"), r.is_efficient()))
        }
    }
}
