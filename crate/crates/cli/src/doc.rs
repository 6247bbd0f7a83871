//! JSON documents for graphs of groups, isomorphisms, words and blow-up
//! plans.
//!
//! Every document is an object `{"version": 1, "kind": ..., ...}`. Keys are
//! emitted sorted and output is pretty-printed with a trailing newline, so
//! serialization is byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use gog_core::graph::Dart;
use gog_core::group::default_names;
use gog_core::surgery::{BlowupPlan, LocalModel, PlanEntry};
use gog_core::syntax::{format_element, parse_element};
use gog_core::word::PathLetter;
use gog_core::{
    DartId, EdgeGroup, GogIso, GraphOfGroups, GroupElement, GroupIso, PathWord, SerreGraph,
    VertexGroup, VertexId,
};
use serde_json::{json, Map, Value};

pub const VERSION: u64 = 1;

/// An isomorphism together with local Dehn twist models at some of its
/// vertices, keyed by vertex name.
#[derive(Clone, Debug)]
pub struct IsoDoc {
    pub iso: GogIso,
    pub locals: BTreeMap<String, LocalModel>,
}

impl From<GogIso> for IsoDoc {
    fn from(iso: GogIso) -> Self {
        IsoDoc {
            iso,
            locals: BTreeMap::new(),
        }
    }
}

pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn envelope(kind: &str, payload: Value) -> Value {
    let mut m = match payload {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    m.insert("version".into(), json!(VERSION));
    m.insert("kind".into(), json!(kind));
    Value::Object(m)
}

pub fn parse_text(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).context("malformed document")?;
    let version = v.get("version").and_then(Value::as_u64);
    if version != Some(VERSION) {
        bail!("unsupported document version {:?}", v.get("version"));
    }
    Ok(v)
}

pub fn kind(v: &Value) -> Result<&str> {
    v.get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("document has no kind"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| anyhow!("missing field `{key}`"))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| anyhow!("field `{key}` must be a string"))
}

fn vertex_named(g: &GraphOfGroups, name: &str) -> Result<VertexId> {
    g.graph()
        .vertex(name)
        .ok_or_else(|| anyhow!("unknown vertex `{name}`"))
}

fn dart_named(g: &GraphOfGroups, name: &str) -> Result<DartId> {
    g.graph()
        .dart(name)
        .ok_or_else(|| anyhow!("unknown dart `{name}`"))
}

pub fn element_value(group: &VertexGroup, x: &GroupElement) -> Value {
    json!(format_element(group, x))
}

pub fn element_from(group: &VertexGroup, v: &Value) -> Result<GroupElement> {
    let text = v.as_str().ok_or_else(|| anyhow!("group elements are strings"))?;
    parse_element(group, text).with_context(|| format!("in element `{text}`"))
}

fn group_value(group: &VertexGroup) -> Value {
    match group {
        VertexGroup::Free(f) => {
            if f.names() == default_names(f.rank()).as_slice() {
                json!({ "free": f.rank() })
            } else {
                json!({ "free": f.rank(), "names": f.names() })
            }
        }
        VertexGroup::Pi1(p) => json!({
            "pi1": { "gog": gog_payload(&p.gog), "base": p.gog.graph().vertex_name(p.base) }
        }),
    }
}

fn group_from(v: &Value) -> Result<VertexGroup> {
    if let Some(rank) = v.get("free") {
        let rank = rank.as_u64().ok_or_else(|| anyhow!("`free` takes a rank"))? as u32;
        return match v.get("names") {
            None => Ok(VertexGroup::free(rank)),
            Some(names) => {
                let names: Vec<String> = serde_json::from_value(names.clone())
                    .context("`names` must be a list of strings")?;
                if names.len() != rank as usize {
                    bail!("{} generator names for rank {rank}", names.len());
                }
                Ok(VertexGroup::free_named(names))
            }
        };
    }
    if let Some(p) = v.get("pi1") {
        let g = Arc::new(gog_from_payload(field(p, "gog")?)?);
        let base = vertex_named(&g, str_field(p, "base")?)?;
        return Ok(VertexGroup::pi1(g, base));
    }
    bail!("vertex group must be `free` or `pi1`")
}

pub fn gog_payload(g: &GraphOfGroups) -> Value {
    let graph = g.graph();
    let vertices: Vec<Value> = graph
        .vertices()
        .map(|v| json!({ "name": graph.vertex_name(v), "group": group_value(g.vertex_group(v)) }))
        .collect();
    let darts: Vec<Value> = graph
        .darts()
        .map(|d| {
            let eg = g.edge_group(d);
            let mut edge = json!({ "rank": eg.rank });
            if let Some(img) = &eg.image {
                edge["image"] = element_value(g.terminal_group(d), img);
            }
            if eg.generator != "x" {
                edge["generator"] = json!(eg.generator);
            }
            json!({
                "name": graph.dart_name(d),
                "bar": graph.dart_name(graph.bar(d)),
                "terminal": graph.vertex_name(graph.terminal(d)),
                "edge": edge,
            })
        })
        .collect();
    json!({ "vertices": vertices, "darts": darts })
}

/// Builds the graph of groups without validating it.
pub fn gog_from_payload(v: &Value) -> Result<GraphOfGroups> {
    let vs = field(v, "vertices")?
        .as_array()
        .ok_or_else(|| anyhow!("`vertices` must be a list"))?;
    let ds = field(v, "darts")?
        .as_array()
        .ok_or_else(|| anyhow!("`darts` must be a list"))?;
    let mut graph = SerreGraph::new();
    let mut groups = Vec::new();
    for x in vs {
        let name = str_field(x, "name")?;
        if graph.vertex(name).is_some() {
            bail!("duplicate vertex `{name}`");
        }
        graph.add_vertex(name);
        groups.push(group_from(field(x, "group")?).with_context(|| format!("at vertex `{name}`"))?);
    }
    let names: Vec<&str> = ds.iter().map(|d| str_field(d, "name")).collect::<Result<_>>()?;
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            bail!("duplicate dart `{n}`");
        }
    }
    for d in ds {
        let name = str_field(d, "name")?;
        let bar = str_field(d, "bar")?;
        let bar = names
            .iter()
            .position(|n| *n == bar)
            .ok_or_else(|| anyhow!("dart `{name}`: unknown bar `{bar}`"))?;
        let terminal = str_field(d, "terminal")?;
        let terminal = graph
            .vertex(terminal)
            .ok_or_else(|| anyhow!("dart `{name}`: unknown vertex `{terminal}`"))?;
        graph.push_dart(Dart {
            name: name.to_string(),
            bar: DartId(bar),
            terminal,
        });
    }
    let mut edges = Vec::new();
    for (i, d) in ds.iter().enumerate() {
        let e = field(d, "edge")?;
        let rank = field(e, "rank")?.as_u64().ok_or_else(|| anyhow!("edge rank must be 0 or 1"))?;
        let generator = e.get("generator").and_then(Value::as_str).unwrap_or("x").to_string();
        let group = &groups[graph.terminal(DartId(i)).0];
        let eg = match rank {
            0 => EdgeGroup::trivial(),
            1 => {
                let img = element_from(group, field(e, "image")?)
                    .with_context(|| format!("edge image of `{}`", names[i]))?;
                EdgeGroup::cyclic(img)
            }
            r => bail!("dart `{}`: edge rank {r} is not 0 or 1", names[i]),
        };
        edges.push(EdgeGroup { generator, ..eg });
    }
    Ok(GraphOfGroups::from_parts(graph, groups, edges))
}

pub fn gog_doc(g: &GraphOfGroups) -> Value {
    envelope("gog", gog_payload(g))
}

fn group_iso_value(iso: &GroupIso, cod: &VertexGroup) -> Value {
    match iso {
        GroupIso::Identity => json!("id"),
        GroupIso::Images(xs) => json!({
            "images": xs.iter().map(|x| element_value(cod, x)).collect::<Vec<_>>()
        }),
        GroupIso::Local { iso, base } => json!({
            "local": { "iso": iso_payload(iso), "base": iso.domain().graph().vertex_name(*base) }
        }),
    }
}

fn group_iso_from(v: &Value, cod: &VertexGroup) -> Result<GroupIso> {
    if v.as_str() == Some("id") {
        return Ok(GroupIso::Identity);
    }
    if let Some(xs) = v.get("images") {
        let xs = xs.as_array().ok_or_else(|| anyhow!("`images` must be a list"))?;
        return Ok(GroupIso::Images(
            xs.iter().map(|x| element_from(cod, x)).collect::<Result<_>>()?,
        ));
    }
    if let Some(l) = v.get("local") {
        let iso = iso_from_payload(field(l, "iso")?)?;
        let base = vertex_named(iso.domain(), str_field(l, "base")?)?;
        return Ok(GroupIso::Local {
            iso: Arc::new(iso),
            base,
        });
    }
    bail!("vertex isomorphism must be \"id\", `images` or `local`")
}

pub fn iso_payload(h: &GogIso) -> Value {
    let (dom, cod) = (h.domain(), h.codomain());
    let (dg, cg) = (dom.graph(), cod.graph());
    let mut vertices = Map::new();
    for v in dg.vertices() {
        let w = h.vertex_image(v);
        vertices.insert(
            dg.vertex_name(v).to_string(),
            json!({ "to": cg.vertex_name(w), "map": group_iso_value(h.vertex_iso(v), cod.vertex_group(w)) }),
        );
    }
    let mut darts = Map::new();
    for d in dg.darts() {
        let e = h.dart_image(d);
        darts.insert(
            dg.dart_name(d).to_string(),
            json!({
                "to": cg.dart_name(e),
                "sign": h.edge_sign(d),
                "delta": element_value(cod.terminal_group(e), h.correction(d)),
            }),
        );
    }
    let mut out = json!({ "gog": gog_payload(dom), "vertices": vertices, "darts": darts });
    if !(Arc::ptr_eq(dom, cod) || **dom == **cod) {
        out["codomain"] = gog_payload(cod);
    }
    out
}

/// Builds the isomorphism without validating it.
pub fn iso_from_payload(v: &Value) -> Result<GogIso> {
    let dom = Arc::new(gog_from_payload(field(v, "gog")?).context("in `gog`")?);
    let cod = match v.get("codomain") {
        Some(c) => Arc::new(gog_from_payload(c).context("in `codomain`")?),
        None => dom.clone(),
    };
    let vs = field(v, "vertices")?;
    let ds = field(v, "darts")?;
    let dg = dom.graph();
    let mut vertex_map = Vec::new();
    let mut vertex_isos = Vec::new();
    for x in dg.vertices() {
        let name = dg.vertex_name(x);
        let entry = vs.get(name).ok_or_else(|| anyhow!("no image for vertex `{name}`"))?;
        let to = vertex_named(&cod, str_field(entry, "to")?)?;
        vertex_map.push(to);
        vertex_isos.push(
            group_iso_from(field(entry, "map")?, cod.vertex_group(to))
                .with_context(|| format!("at vertex `{name}`"))?,
        );
    }
    let mut dart_map = Vec::new();
    let mut signs = Vec::new();
    let mut corrections = Vec::new();
    for d in dg.darts() {
        let name = dg.dart_name(d);
        let entry = ds.get(name).ok_or_else(|| anyhow!("no image for dart `{name}`"))?;
        let to = dart_named(&cod, str_field(entry, "to")?)?;
        dart_map.push(to);
        let sign = field(entry, "sign")?.as_i64().filter(|s| s.abs() == 1);
        signs.push(sign.ok_or_else(|| anyhow!("dart `{name}`: sign must be 1 or -1"))? as i8);
        corrections.push(
            element_from(cod.terminal_group(to), field(entry, "delta")?)
                .with_context(|| format!("correction of `{name}`"))?,
        );
    }
    if vs.as_object().map_or(0, Map::len) != dg.vertex_count()
        || ds.as_object().map_or(0, Map::len) != dg.dart_count()
    {
        bail!("vertex and dart maps must list exactly the domain's vertices and darts");
    }
    Ok(GogIso::from_parts(dom, cod, vertex_map, dart_map, vertex_isos, signs, corrections))
}

fn local_value(l: &LocalModel) -> Value {
    json!({
        "twist": iso_payload(&l.twist),
        "base": l.sub.graph().vertex_name(l.base),
        "theta": group_iso_value(&l.theta, &l.pi1()),
    })
}

fn local_from(v: &Value) -> Result<LocalModel> {
    let twist = iso_from_payload(field(v, "twist")?).context("in local twist")?;
    let sub = twist.domain().clone();
    let base = vertex_named(&sub, str_field(v, "base")?)?;
    let pi1 = VertexGroup::pi1(sub.clone(), base);
    let theta = group_iso_from(field(v, "theta")?, &pi1).context("in local identification")?;
    Ok(LocalModel {
        sub,
        twist,
        theta,
        base,
    })
}

pub fn iso_doc(doc: &IsoDoc) -> Value {
    let mut p = iso_payload(&doc.iso);
    if !doc.locals.is_empty() {
        let mut m = Map::new();
        for (name, l) in &doc.locals {
            m.insert(name.clone(), local_value(l));
        }
        p["locals"] = Value::Object(m);
    }
    envelope("iso", p)
}

pub fn iso_from_doc(v: &Value) -> Result<IsoDoc> {
    let iso = iso_from_payload(v)?;
    let mut locals = BTreeMap::new();
    if let Some(m) = v.get("locals") {
        let m = m.as_object().ok_or_else(|| anyhow!("`locals` must be an object"))?;
        for (name, l) in m {
            vertex_named(iso.domain(), name)?;
            locals.insert(name.clone(), local_from(l).with_context(|| format!("local model at `{name}`"))?);
        }
    }
    Ok(IsoDoc { iso, locals })
}

pub fn word_payload(g: &GraphOfGroups, w: &PathWord) -> Value {
    let graph = g.graph();
    let mut letters = Vec::new();
    for (i, s) in w.syllables().iter().enumerate() {
        if i > 0 {
            letters.push(json!({ "t": graph.dart_name(w.darts()[i - 1]) }));
        }
        let v = w.syllable_vertex(g, i);
        let group = g.vertex_group(v);
        if !group.is_identity(s) {
            letters.push(json!({ "v": graph.vertex_name(v), "w": element_value(group, s) }));
        }
    }
    json!({ "start": graph.vertex_name(w.start()), "letters": letters })
}

pub fn word_from_payload(g: &GraphOfGroups, v: &Value) -> Result<PathWord> {
    let start = vertex_named(g, str_field(v, "start")?)?;
    let ls = field(v, "letters")?
        .as_array()
        .ok_or_else(|| anyhow!("`letters` must be a list"))?;
    let mut letters = Vec::new();
    for l in ls {
        if let Some(t) = l.get("t") {
            let t = t.as_str().ok_or_else(|| anyhow!("`t` takes a dart name"))?;
            letters.push(PathLetter::Stable(dart_named(g, t)?));
        } else {
            let v = vertex_named(g, str_field(l, "v")?)?;
            letters.push(PathLetter::Vertex(v, element_from(g.vertex_group(v), field(l, "w")?)?));
        }
    }
    Ok(PathWord::from_letters(g, Some(start), &letters)?)
}

pub fn word_doc(g: &GraphOfGroups, w: &PathWord) -> Value {
    envelope("word", word_payload(g, w))
}

/// A plan names the blown-up vertex of the isomorphism it belongs to and
/// gives, per dart into it, the attaching vertex, connector and residual
/// in the local model.
pub fn plan_doc(hbar: &GogIso, v0: VertexId, local: &LocalModel, plan: &BlowupPlan) -> Value {
    let g = hbar.domain();
    let s = &local.sub;
    let mut entries = Map::new();
    for (d, e) in &plan.entries {
        entries.insert(
            g.graph().dart_name(*d).to_string(),
            json!({
                "attach": s.graph().vertex_name(e.vertex),
                "connector": word_payload(s, &e.connector),
                "residual": element_value(s.vertex_group(e.vertex), &e.residual),
            }),
        );
    }
    envelope(
        "plan",
        json!({ "vertex": g.graph().vertex_name(v0), "entries": entries }),
    )
}

pub fn plan_from(v: &Value, hbar: &GogIso, local: &LocalModel) -> Result<(VertexId, BlowupPlan)> {
    let g = hbar.domain();
    let s = &local.sub;
    let v0 = vertex_named(g, str_field(v, "vertex")?)?;
    let es = field(v, "entries")?
        .as_object()
        .ok_or_else(|| anyhow!("`entries` must be an object"))?;
    let mut plan = BlowupPlan::default();
    for (name, e) in es {
        let d = dart_named(g, name)?;
        let vertex = vertex_named(s, str_field(e, "attach")?)?;
        let connector = word_from_payload(s, field(e, "connector")?)?;
        let residual = element_from(s.vertex_group(vertex), field(e, "residual")?)?;
        plan.entries.insert(
            d,
            PlanEntry {
                vertex,
                connector,
                residual,
            },
        );
    }
    Ok((v0, plan))
}
