//! End-to-end acceptance checks. Run with
//! `cargo test -p gog-cli --test acceptance -- --nocapture` to see one
//! line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use common::*;
use gog_cli::doc;
use gog_core::dehn::{
    classify_twist, efficiency_check, subdivide_to_classical, trivial_edge_dehn, TrivialEdgeVerdict,
    TwistClass,
};
use gog_core::fixtures::{
    d_b, efficiency_mutants, fix_a, fix_b, fix_c, h_a, h_c, h_d, h_d_xy, local_d,
};
use gog_core::group::GroupIso;
use gog_core::hom::check_semi_conjugation;
use gog_core::iso::GogIso;
use gog_core::surgery::{partial_dehn_blowup, roundtrip, PartialOutcome, Subgraph};
use gog_core::word::{pi1_generators, pw_equal, tree_word, PathWord};
use gog_core::VertexId;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn normal_forms() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1001);
    let (mut words, mut equal) = (0, 0);
    for g in [fix_a(), fix_b(), fix_c()] {
        for i in 0..170 {
            let start = VertexId(rng.gen_range(0..g.graph().vertex_count()));
            let w = random_word(&g, &mut rng, start, 6, 3);
            let r = w.reduce(&g);
            ensure(r.reduce(&g) == r, || format!("reduce is not idempotent on {w:?}"))?;
            let mut x = w.clone();
            for _ in 0..3 {
                x = relation_rewrite(&g, &mut rng, &x);
            }
            ensure(x.reduce(&g).darts() == r.darts(), || format!("path type moved under rewriting: {w:?}"))?;
            let other = if i % 2 == 0 {
                x
            } else {
                let end = w.end(&g);
                let nudge = random_word(&g, &mut rng, end, 2, 1);
                let tree = g.graph().spanning_tree(end).unwrap();
                let back = tree_word(&g, &tree, nudge.end(&g)).inverse(&g);
                w.concat(&g, &nudge).unwrap().concat(&g, &back).unwrap()
            };
            let fast = pw_equal(&g, &w, &other).map_err(|e| e.to_string())?;
            let slow = oracle_equal(&g, &w, &other).ok_or_else(|| format!("oracle budget exceeded on {w:?}"))?;
            ensure(fast == slow, || format!("pw_equal disagrees with the oracle on {w:?} / {other:?}"))?;
            words += 1;
            equal += fast as usize;
        }
    }
    Ok(format!("{words} words, {equal} equal pairs, oracle agreement 100%"))
}

fn relations_killed() -> Outcome {
    let mut isos = fixture_isos();
    isos.push(h_d_xy());
    let mut checked = 0;
    for h in isos {
        let g = h.domain().clone();
        let graph = g.graph();
        for d in graph.darts() {
            let back = PathWord::stable(&g, d).concat(&g, &PathWord::stable(&g, graph.bar(d))).unwrap();
            ensure(h.apply_word(&back).unwrap().is_identity(&g), || {
                format!("t_e t_~e survives at `{}`", graph.dart_name(d))
            })?;
            checked += 1;
            if g.edge_rank(d) == 1 {
                let lhs = PathWord::vertex(graph.initial(d), g.edge_apply(graph.bar(d), 1));
                let rhs = PathWord::stable(&g, d)
                    .concat(&g, &PathWord::vertex(graph.terminal(d), g.edge_apply(d, 1)))
                    .unwrap()
                    .concat(&g, &PathWord::stable(&g, graph.bar(d)))
                    .unwrap();
                let diff = lhs.concat(&g, &rhs.inverse(&g)).unwrap();
                ensure(h.apply_word(&diff).unwrap().is_identity(&g), || {
                    format!("edge relation survives at `{}`", graph.dart_name(d))
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} relations killed"))
}

fn b_auto() -> GogIso {
    let g = fix_b();
    let (ab, cd) = (&["a", "b"], &["c", "d"]);
    GogIso::identity(g.clone())
        .with_vertex_iso(g.vertex("u").unwrap(), GroupIso::Images(vec![free("a", ab), free("b a", ab)]))
        .with_vertex_iso(g.vertex("v").unwrap(), GroupIso::Images(vec![free("c", cd), free("d c^-1", cd)]))
}

fn composition() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1003);
    let g = fix_b();
    let (h1, h2) = (d_b(), b_auto());
    let both = GogIso::compose(&h2, &h1).unwrap();
    let words: Vec<PathWord> = (0..100)
        .map(|_| {
            let v = VertexId(rng.gen_range(0..2));
            random_word(&g, &mut rng, v, 5, 2)
        })
        .collect();
    for w in &words {
        let lhs = both.apply_word(w).unwrap();
        let rhs = h2.apply_word(&h1.apply_word(w).unwrap()).unwrap();
        ensure(eq(&g, &lhs, &rhs), || format!("compose disagrees on {w:?}"))?;
    }
    for h in [h1, h2, both] {
        let inv = h.invert().unwrap();
        ensure(inv.validate().is_valid(), || "inverse does not validate".into())?;
        for w in &words {
            let back = inv.apply_word(&h.apply_word(w).unwrap()).unwrap();
            let forth = h.apply_word(&inv.apply_word(w).unwrap()).unwrap();
            ensure(eq(&g, &back, w) && eq(&g, &forth, w), || format!("inverse fails on {w:?}"))?;
        }
        let id = GogIso::compose(&h, &inv).unwrap();
        ensure(g.graph().darts().all(|d| g.terminal_group(d).is_identity(id.correction(d))), || {
            "H ∘ H⁻¹ has a nontrivial correction".into()
        })?;
    }
    Ok("100 words pointwise, 3 inverse round-trips exact".into())
}

fn dehn_suite() -> Outcome {
    let b = fix_b();
    let e = b.dart("e").unwrap();
    match classify_twist(&d_b()).unwrap() {
        TwistClass::Classical(t) => ensure(t.twistors[e.0] == 1, || format!("z_e = x^{}", t.twistors[e.0]))?,
        other => return Err(format!("D_B classified as {other:?}")),
    }
    let s = subdivide_to_classical(&h_a()).unwrap();
    let v = fix_a().vertex("v").unwrap();
    ensure(matches!(classify_twist(&s.twist).unwrap(), TwistClass::Classical(_)), || {
        "subdivision is not classical".into()
    })?;
    ensure(check_semi_conjugation(&s.theta, &h_a(), &s.twist, v).unwrap(), || {
        "subdivision square fails".into()
    })?;
    let gens = pi1_generators(&fix_a(), v).unwrap().len();
    ensure(efficiency_check(&d_b()).unwrap().is_efficient(), || "FIX-B twist is not efficient".into())?;
    for (i, h) in efficiency_mutants().into_iter().enumerate() {
        let flags = efficiency_check(&h).unwrap().flags();
        let expected: Vec<bool> = (0..5).map(|j| j != i).collect();
        ensure(flags.to_vec() == expected, || format!("mutant {} gives {flags:?}", i + 1))?;
    }
    Ok(format!("D_B classical with z_e = x; square on {gens} generators; 5 mutants isolated"))
}

fn h_lengths() -> Outcome {
    let cases: Vec<(&str, GogIso, usize, usize)> = vec![
        ("FIX-A", h_a(), 3, 3),
        ("FIX-A inverse", h_a().invert().unwrap(), 3, 3),
        ("FIX-B", d_b(), 3, 3),
        ("FIX-B inverse", d_b().invert().unwrap(), 3, 3),
        ("FIX-C", h_c(), 3, 3),
        ("FIX-C inverse", h_c().invert().unwrap(), 3, 3),
        ("FIX-D", h_d(), 3, 2),
        ("FIX-D inverse", h_d().invert().unwrap(), 3, 2),
    ];
    let mut checked = 0;
    for (name, h, wl, cl) in cases {
        let (n, bad) = h_length_agreement(&h, wl, cl);
        ensure(bad.is_empty(), || format!("{name}: {bad:?}"))?;
        checked += n;
    }
    Ok(format!("{checked} words agree with brute force"))
}

fn transfer() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1006);
    let mut squares = 0;
    let (mut zero, mut nonzero) = (0, 0);
    while squares < 100 {
        let t = transfer_check(&mut rng, 1);
        ensure(t.mismatches.is_empty(), || format!("transfer fails on {:?}", t.mismatches))?;
        squares += t.zero + t.nonzero;
        zero += t.zero;
        nonzero += t.nonzero;
    }
    ensure(zero > 10 && nonzero > 10, || format!("unbalanced sample: {zero} zero, {nonzero} not"))?;
    Ok(format!("{squares} squares, {zero} zero and {nonzero} non-zero words agree"))
}

fn roundtrips() -> Outcome {
    let mut cases = vec![(h_c(), vec!["v".to_string(), "f".to_string()])];
    let mut rng = StdRng::seed_from_u64(1007);
    cases.extend((0..10).map(|_| fix_c_variant(&mut rng)));
    for (i, (h, names)) in cases.iter().enumerate() {
        let g = h.domain().clone();
        let sub = Subgraph::from_names(&g, names).unwrap();
        let rt = roundtrip(h, &sub, g.vertex("v").unwrap()).map_err(|e| format!("case {i}: {e}"))?;
        ensure(rt.same_data && rt.semi_conjugate, || format!("case {i} does not reconstruct"))?;
    }
    Ok(format!("{} isomorphisms reconstructed", cases.len()))
}

fn partial_twists() -> Outcome {
    let mut locals = BTreeMap::new();
    locals.insert("V0".to_string(), local_d());
    match partial_dehn_blowup(&h_d(), &locals).unwrap() {
        PartialOutcome::DehnTwist { iso, theta, .. } => {
            ensure(trivial_edge_dehn(&iso).unwrap() == TrivialEdgeVerdict::DehnTwistAutomorphism, || {
                "blown-up twist is not certified".into()
            })?;
            ensure(check_semi_conjugation(&theta, &h_d(), &iso, VertexId(0)).unwrap(), || {
                "blow-up does not semi-conjugate".into()
            })?;
        }
        other => return Err(format!("x^2 gave {other:?}")),
    }
    match partial_dehn_blowup(&h_d_xy(), &locals).unwrap() {
        PartialOutcome::NotLocallyZero { .. } => {}
        other => return Err(format!("x y gave {other:?}")),
    }
    Ok("x^2 certified, x y not locally zero".into())
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn gog(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gog"))
        .args(args)
        .current_dir(fixtures_dir())
        .env("GOG_COLOR", "0")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn reserialize(text: &str) -> Result<String, String> {
    let v = doc::parse_text(text).map_err(|e| e.to_string())?;
    let back = match doc::kind(&v).map_err(|e| e.to_string())? {
        "gog" => doc::gog_doc(&doc::gog_from_payload(&v).map_err(|e| e.to_string())?),
        "iso" => doc::iso_doc(&doc::iso_from_doc(&v).map_err(|e| e.to_string())?),
        k => return Err(format!("unexpected kind {k}")),
    };
    Ok(doc::canonical(&back))
}

fn cli_contract() -> Outcome {
    let mut files = 0;
    for entry in std::fs::read_dir(fixtures_dir()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure(reserialize(&text)? == text, || format!("{name} is not byte-stable"))?;
        let (code, generated) = gog(&["example", &name]);
        ensure(code == 0 && generated == text, || format!("{name} differs from `gog example`"))?;
        files += 1;
    }
    ensure(files >= 9, || format!("only {files} golden files"))?;
    let scenarios: [(&[&str], i32); 3] = [
        (&["hzero", "FIX-D.iso", "--word", "x^2", "--inverse"], 0),
        (&["hzero", "FIX-D.iso", "--word", "x y", "--inverse"], 1),
        (&["roundtrip", "FIX-C.gog", "FIX-C.iso", "--subgraph", "v,f"], 0),
    ];
    for (args, want) in scenarios {
        let (code, _) = gog(args);
        ensure(code == want, || format!("`gog {}` exited {code}, expected {want}", args.join(" ")))?;
    }
    let (code, out) = gog(&["hzero", "FIX-D.iso", "--word", "x^2", "--inverse"]);
    let v = doc::parse_text(&out).map_err(|e| e.to_string())?;
    ensure(code == 0 && v["witness"]["g"] == "a^2" && v["witness"]["gamma"]["letters"] == serde_json::json!([]), || {
        format!("unexpected witness {out}")
    })?;
    Ok(format!("{files} golden files byte-stable, 3 exit codes as documented"))
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("normal forms", normal_forms),
        ("homomorphism laws", relations_killed),
        ("composition and inverse", composition),
        ("Dehn twists", dehn_suite),
        ("H-length oracle", h_lengths),
        ("zero transfer", transfer),
        ("quotient/blow-up roundtrip", roundtrips),
        ("partial Dehn twists", partial_twists),
        ("command line", cli_contract),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("[PASS] {} {name}: {detail} ({:.1?})", i + 1, t.elapsed()),
            Err(why) => {
                println!("[FAIL] {} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    println!("total {:.1?}", start.elapsed());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
