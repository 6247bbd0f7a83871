//! Small worked examples used by tests, benchmarks and the command line.

use std::sync::Arc;

use crate::dehn::from_twistors;
use crate::free_word::FreeWord;
use crate::gog::{GogBuilder, GraphOfGroups};
use crate::graph::{Orientation, VertexId};
use crate::group::{GroupElement, GroupIso};
use crate::iso::GogIso;
use crate::surgery::LocalModel;
use crate::word::PathWord;

fn w(text: &str, names: &[&str]) -> GroupElement {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    GroupElement::Free(FreeWord::parse(text, &names).expect("fixture word"))
}

/// One vertex `v` with group `⟨a⟩` and a loop `e` with trivial edge group.
pub fn fix_a() -> Arc<GraphOfGroups> {
    let mut b = GogBuilder::new();
    let v = b.free_vertex("v", &["a"]);
    b.edge("e", v, v);
    b.build_arc().expect("fixture")
}

/// The Dehn twist of [`fix_a`] with `δ(e) = a`.
pub fn h_a() -> GogIso {
    let g = fix_a();
    let e = g.dart("e").expect("fixture");
    GogIso::identity(g).with_correction(e, w("a", &["a"]))
}

/// Vertices `u = ⟨a,b⟩`, `v = ⟨c,d⟩` joined by `e` with `f_e = c`,
/// `f_ē = a`.
pub fn fix_b() -> Arc<GraphOfGroups> {
    let mut b = GogBuilder::new();
    let u = b.free_vertex("u", &["a", "b"]);
    let v = b.free_vertex("v", &["c", "d"]);
    b.cyclic_edge("e", u, v, w("c", &["c", "d"]), w("a", &["a", "b"]));
    b.build_arc().expect("fixture")
}

/// Dehn twist of [`fix_b`] with `δ(e) = c^-1`.
pub fn d_b() -> GogIso {
    let g = fix_b();
    let e = g.dart("e").expect("fixture");
    GogIso::identity(g).with_correction(e, w("c^-1", &["c", "d"]))
}

/// `u = ⟨a⟩`, `v = ⟨c⟩`, an edge `e: u → v` and a loop `f` at `v`, both with
/// trivial edge groups.
pub fn fix_c() -> Arc<GraphOfGroups> {
    let mut b = GogBuilder::new();
    let u = b.free_vertex("u", &["a"]);
    let v = b.free_vertex("v", &["c"]);
    b.edge("e", u, v);
    b.edge("f", v, v);
    b.build_arc().expect("fixture")
}

/// Dehn twist of [`fix_c`] with `δ(e) = δ(f) = c`.
pub fn h_c() -> GogIso {
    let g = fix_c();
    let e = g.dart("e").expect("fixture");
    let f = g.dart("f").expect("fixture");
    GogIso::identity(g)
        .with_correction(e, w("c", &["c"]))
        .with_correction(f, w("c", &["c"]))
}

/// One vertex `V0 = ⟨x,y⟩` with a loop `E` of trivial edge group.
pub fn fix_d() -> Arc<GraphOfGroups> {
    let mut b = GogBuilder::new();
    let v = b.free_vertex("V0", &["x", "y"]);
    b.edge("E", v, v);
    b.build_arc().expect("fixture")
}

/// `x ↦ x`, `y ↦ y x^-1` at `V0` and `δ(E) = x^2`.
pub fn h_d() -> GogIso {
    let g = fix_d();
    let v0 = g.vertex("V0").expect("fixture");
    let e = g.dart("E").expect("fixture");
    let n = ["x", "y"];
    GogIso::identity(g)
        .with_vertex_iso(v0, GroupIso::Images(vec![w("x", &n), w("y x^-1", &n)]))
        .with_correction(e, w("x^2", &n))
}

/// [`fix_a`] with [`h_a`], identified with `⟨x,y⟩` by `x ↦ a`, `y ↦ t_e`.
pub fn local_d() -> LocalModel {
    let sub = fix_a();
    let v = VertexId(0);
    let e = sub.dart("e").expect("fixture");
    let a = PathWord::vertex(v, w("a", &["a"]));
    let te = PathWord::stable(&sub, e);
    LocalModel {
        twist: h_a(),
        theta: GroupIso::Images(vec![GroupElement::Pi1(a), GroupElement::Pi1(te)]),
        base: v,
        sub,
    }
}

/// [`h_d`] with `δ(E) = x y`.
pub fn h_d_xy() -> GogIso {
    let g = h_d();
    let e = g.domain().dart("E").expect("fixture");
    g.with_correction(e, w("x y", &["x", "y"]))
}

/// The classical twist with twistor `z` on each named positive dart.
pub fn twist_by(g: Arc<GraphOfGroups>, z: &[(&str, i64)]) -> GogIso {
    let graph = g.graph();
    let mut zs = vec![0; graph.dart_count()];
    for &(n, k) in z {
        let d = graph.dart(n).expect("fixture");
        zs[d.0] = k;
        zs[graph.bar(d).0] = -k;
    }
    let o = Orientation::canonical(graph);
    from_twistors(g.clone(), &o, &zs).expect("fixture")
}

fn u_v(image: &str, v_names: &[&str]) -> (GogBuilder, VertexId, VertexId) {
    let mut b = GogBuilder::new();
    let u = b.free_vertex("u", &["a", "b"]);
    let v = b.free_vertex("v", v_names);
    b.cyclic_edge("e", u, v, w(image, v_names), w("a", &["a", "b"]));
    (b, u, v)
}

/// Five classical twists; the `i`-th violates exactly efficiency condition
/// `i + 1`: a rank-one group at a valence-one vertex, a rank-one vertex
/// whose two edges both fill it, an edge image `c^2`, the identity, and
/// two edges into `v` with conjugate images and twistors of equal sign.
pub fn efficiency_mutants() -> Vec<GogIso> {
    let (b, _, _) = u_v("c", &["c"]);
    let one = twist_by(b.build_arc().expect("fixture"), &[("e", 1)]);

    let mut b = GogBuilder::new();
    let u = b.free_vertex("u", &["a", "b"]);
    let m = b.free_vertex("w", &["y"]);
    let v = b.free_vertex("v", &["c", "d"]);
    b.cyclic_edge("e1", u, m, w("y", &["y"]), w("a", &["a", "b"]));
    b.cyclic_edge("e2", v, m, w("y", &["y"]), w("c", &["c", "d"]));
    let two = twist_by(b.build_arc().expect("fixture"), &[("e1", 1), ("e2", -1)]);

    let (b, _, _) = u_v("c^2", &["c", "d"]);
    let three = twist_by(b.build_arc().expect("fixture"), &[("e", 1)]);

    let four = GogIso::identity(fix_b());

    let (mut b, u, v) = u_v("c", &["c", "d"]);
    b.cyclic_edge("g", u, v, w("d c d^-1", &["c", "d"]), w("b", &["a", "b"]));
    let five = twist_by(b.build_arc().expect("fixture"), &[("e", 1), ("g", 1)]);
    vec![one, two, three, four, five]
}
