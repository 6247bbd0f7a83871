//! Dehn twists: classification, twistors, subdivision to classical form,
//! efficiency and bondedness.
//!
//! Edge groups have rank at most one, so `γ_e` and the twistor `z_e` are
//! recorded as exponents of the edge generator `x`; `z_e = γ_ē - γ_e` is the
//! additive form of `γ_ē γ_e^-1`.

use std::sync::Arc;

use crate::error::GogError;
use crate::free_word::FreeWord;
use crate::gog::{EdgeGroup, GraphOfGroups};
use crate::graph::{Dart, DartId, Orientation, SerreGraph, VertexId};
use crate::group::{GroupElement, GroupIso, VertexGroup};
use crate::hom::{HomStage, PathHom, VertexMap};
use crate::iso::GogIso;
use crate::word::PathWord;

/// Exponents per dart: `δ(e) = f_e(x^{gammas[e]})` and the twistors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistData {
    pub gammas: Vec<i64>,
    pub twistors: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistClass {
    Classical(TwistData),
    General,
    NotADehnTwist(String),
}

/// Checks that `h` fixes the graph, the vertex groups and the edge groups.
fn twist_shape(h: &GogIso) -> Result<Option<String>, GogError> {
    if !h.is_automorphism() {
        return Ok(Some("not an automorphism".into()));
    }
    if !h.fixes_graph() {
        return Ok(Some("graph part is not the identity".into()));
    }
    let g = h.domain();
    for v in g.graph().vertices() {
        if !h.vertex_iso(v).is_identity_on(g.vertex_group(v))? {
            return Ok(Some(format!(
                "vertex isomorphism at `{}` is not the identity",
                g.graph().vertex_name(v)
            )));
        }
    }
    for d in g.graph().darts() {
        if g.edge_rank(d) == 1 && h.edge_sign(d) != 1 {
            return Ok(Some(format!(
                "edge isomorphism of `{}` inverts the generator",
                g.graph().dart_name(d)
            )));
        }
    }
    Ok(None)
}

pub fn classify_twist(h: &GogIso) -> Result<TwistClass, GogError> {
    if let Some(reason) = twist_shape(h)? {
        return Ok(TwistClass::NotADehnTwist(reason));
    }
    let g = h.domain();
    let graph = g.graph();
    let mut gammas = vec![0; graph.dart_count()];
    let mut classical = true;
    for d in graph.darts() {
        let delta = h.correction(d);
        if let Some(k) = g.edge_membership(d, delta) {
            gammas[d.0] = k;
            continue;
        }
        classical = false;
        if g.edge_rank(d) == 1 {
            let group = g.terminal_group(d);
            if !group.commute(delta, &g.edge_apply(d, 1)) {
                return Ok(TwistClass::NotADehnTwist(format!(
                    "correction of `{}` does not centralize the edge image",
                    graph.dart_name(d)
                )));
            }
        }
    }
    if !classical {
        return Ok(TwistClass::General);
    }
    let twistors = graph
        .darts()
        .map(|d| gammas[graph.bar(d).0] - gammas[d.0])
        .collect();
    Ok(TwistClass::Classical(TwistData { gammas, twistors }))
}

pub fn twistors(h: &GogIso) -> Result<TwistData, GogError> {
    match classify_twist(h)? {
        TwistClass::Classical(t) => Ok(t),
        TwistClass::General => Err(GogError::Precondition(
            "twist is not classical; subdivide it first".into(),
        )),
        TwistClass::NotADehnTwist(r) => Err(GogError::Precondition(r)),
    }
}

/// The classical twist with `γ_e = z_e^-1` on positive darts and `γ_e = 1`
/// on negative darts.
pub fn from_twistors(
    gog: Arc<GraphOfGroups>,
    orientation: &Orientation,
    z: &[i64],
) -> Result<GogIso, GogError> {
    let graph = gog.graph();
    if z.len() != graph.dart_count() {
        return Err(GogError::Precondition("one twistor per dart is required".into()));
    }
    for d in graph.darts() {
        if z[graph.bar(d).0] != -z[d.0] {
            return Err(GogError::Precondition(format!(
                "twistor of `{}` is not inverse to that of its reverse",
                graph.dart_name(d)
            )));
        }
        if gog.edge_rank(d) == 0 && z[d.0] != 0 {
            return Err(GogError::Precondition(format!(
                "`{}` has a trivial edge group",
                graph.dart_name(d)
            )));
        }
    }
    let mut h = GogIso::identity(gog.clone());
    for d in graph.darts() {
        if orientation.is_positive(d) {
            h = h.with_correction(d, gog.edge_apply(d, -z[d.0]));
        }
    }
    Ok(h)
}

/// Result of [`subdivide_to_classical`].
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub gog: Arc<GraphOfGroups>,
    pub twist: GogIso,
    /// `π₁(G) → π₁(G')`, intertwining the two twists.
    pub theta: PathHom,
    /// Old vertex ids in the new graph.
    pub vertex_map: Vec<VertexId>,
    pub already_classical: bool,
}

/// Generator of `⟨f_e(G_e), δ⟩` and the exponents of the edge image and
/// of `δ` in it.
fn cyclic_hull(
    group: &VertexGroup,
    image: Option<&GroupElement>,
    delta: &GroupElement,
) -> Result<(GroupElement, i64, i64), GogError> {
    let Some(u) = image else {
        return Ok((delta.clone(), 0, 1));
    };
    if let Some(m) = group.power_index(u, delta) {
        return Ok((delta.clone(), m, 1));
    }
    match (u, delta) {
        (GroupElement::Free(uw), GroupElement::Free(dw)) => {
            let (rho, _) = uw.primitive_root()?;
            let m = uw.power_of(&rho)?.expect("root divides its power");
            let j = dw.power_of(&rho)?.ok_or_else(|| {
                GogError::Precondition("correction does not centralize the edge image".into())
            })?;
            let g = gcd(m, j);
            Ok((GroupElement::Free(rho.pow(g)), m / g, j / g))
        }
        _ => Err(GogError::Unsupported(
            "subdivision over a fundamental-group vertex needs the edge image to be a power of the correction".into(),
        )),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn push_pair(graph: &mut SerreGraph, name: &str, bar: &str, from: VertexId, to: VertexId) -> DartId {
    let e = DartId(graph.dart_count());
    graph.push_dart(Dart {
        name: name.into(),
        bar: DartId(e.0 + 1),
        terminal: to,
    });
    graph.push_dart(Dart {
        name: bar.into(),
        bar: e,
        terminal: from,
    });
    e
}

struct Segment {
    delta_fwd: GroupElement,
    delta_back: GroupElement,
}

/// Replaces a general twist by an equivalent classical one, subdividing
/// every edge with a non-classical correction.
pub fn subdivide_to_classical(h: &GogIso) -> Result<Subdivision, GogError> {
    let g = h.domain().clone();
    match classify_twist(h)? {
        TwistClass::Classical(_) => {
            return Ok(Subdivision {
                gog: g.clone(),
                twist: h.clone(),
                theta: PathHom::identity(g.clone()),
                vertex_map: g.graph().vertices().collect(),
                already_classical: true,
            })
        }
        TwistClass::NotADehnTwist(r) => return Err(GogError::Precondition(r)),
        TwistClass::General => {}
    }
    let graph = g.graph();
    let non_classical = |d: DartId| g.edge_membership(d, h.correction(d)).is_none();

    let mut new_graph = SerreGraph::new();
    let mut vgs: Vec<VertexGroup> = Vec::new();
    for v in graph.vertices() {
        new_graph.add_vertex(graph.vertex_name(v));
        vgs.push(g.vertex_group(v).clone());
    }
    let mut egs: Vec<EdgeGroup> = Vec::new();
    let mut deltas: Vec<GroupElement> = Vec::new();
    // Images of old darts as stable-letter paths in the new graph.
    let mut paths: Vec<Vec<DartId>> = vec![Vec::new(); graph.dart_count()];

    // Untouched edges keep their order; subdivided ones follow by name.
    let order: Vec<DartId> = graph.edges();
    let mut subdivided: Vec<DartId> = order
        .iter()
        .copied()
        .filter(|&p| non_classical(p) || non_classical(graph.bar(p)))
        .collect();
    subdivided.sort_by(|a, b| graph.dart_name(*a).cmp(graph.dart_name(*b)));

    for &p in &order {
        if subdivided.contains(&p) {
            continue;
        }
        let pb = graph.bar(p);
        let np = push_pair(
            &mut new_graph,
            graph.dart_name(p),
            graph.dart_name(pb),
            graph.initial(p),
            graph.terminal(p),
        );
        egs.push(g.edge_group(p).clone());
        egs.push(g.edge_group(pb).clone());
        deltas.push(h.correction(p).clone());
        deltas.push(h.correction(pb).clone());
        paths[p.0] = vec![np];
        paths[pb.0] = vec![DartId(np.0 + 1)];
    }

    let new_vertex = |graph_out: &mut SerreGraph,
                          vgs: &mut Vec<VertexGroup>,
                          name: String|
     -> Result<VertexId, GogError> {
        if graph_out.vertex(&name).is_some() {
            return Err(GogError::Precondition(format!("vertex name `{name}` already in use")));
        }
        vgs.push(VertexGroup::free_named(["s"]));
        Ok(graph_out.add_vertex(name))
    };
    let s = GroupElement::Free(FreeWord::generator(0));

    for &p in &subdivided {
        let pb = graph.bar(p);
        let a = graph.initial(p);
        let pname = graph.dart_name(p).to_string();
        let pbname = graph.dart_name(pb).to_string();
        // One-sided subdivision is expressed on the non-classical dart e0.
        let both = non_classical(p) && non_classical(pb);
        let e0 = if both || non_classical(p) { p } else { pb };
        let e0b = graph.bar(e0);
        let mut segments: Vec<Segment> = Vec::new();
        let mut chain: Vec<DartId> = Vec::new();

        // Near end of e0: vertex w0 with the hull at τ(e0).
        let group_t = g.terminal_group(e0);
        let (sigma_t, m_t, _) = cyclic_hull(
            group_t,
            g.edge_group(e0).image.as_ref(),
            h.correction(e0),
        )?;
        let w0 = new_vertex(
            &mut new_graph,
            &mut vgs,
            format!("v0@{}", graph.dart_name(e0)),
        )?;
        let (start, w_start, far_delta_elem);
        if both {
            let group_i = g.terminal_group(e0b);
            let (sigma_i, m_i, _) = cyclic_hull(
                group_i,
                g.edge_group(e0b).image.as_ref(),
                h.correction(e0b),
            )?;
            let w1 = new_vertex(
                &mut new_graph,
                &mut vgs,
                format!("v0@{}", graph.dart_name(e0b)),
            )?;
            // p''' from ι(p) to w1, edge group ⟨s⟩ at w1.
            let d3 = push_pair(
                &mut new_graph,
                &format!("{pname}'''"),
                &format!("{pbname}'''"),
                a,
                w1,
            );
            egs.push(EdgeGroup::cyclic(s.clone()));
            egs.push(EdgeGroup::cyclic(sigma_i.clone()));
            segments.push(Segment {
                delta_fwd: GroupElement::Free(FreeWord::identity()),
                delta_back: h.correction(e0b).clone(),
            });
            chain.push(d3);
            start = w1;
            w_start = Some(m_i);
            far_delta_elem = GroupElement::Free(FreeWord::identity());
        } else {
            start = graph.initial(e0);
            w_start = None;
            far_delta_elem = h.correction(e0b).clone();
        }
        // e0' from `start` to w0 carrying the original edge group.
        let (n1, n1b) = if e0 == p {
            (format!("{pname}'"), format!("{pbname}'"))
        } else {
            (format!("{pbname}'"), format!("{pname}'"))
        };
        let d1 = push_pair(&mut new_graph, &n1, &n1b, start, w0);
        let rank = g.edge_rank(e0);
        let at_w0 = GroupElement::Free(FreeWord::power(0, m_t));
        let at_start = match w_start {
            Some(m_i) => GroupElement::Free(FreeWord::power(0, m_i)),
            None => g.edge_group(e0b).image.clone().unwrap_or_else(|| g.terminal_group(e0b).identity()),
        };
        if rank == 1 {
            egs.push(EdgeGroup::cyclic(at_w0));
            egs.push(EdgeGroup::cyclic(at_start));
        } else {
            egs.push(EdgeGroup::trivial());
            egs.push(EdgeGroup::trivial());
        }
        segments.push(Segment {
            delta_fwd: GroupElement::Free(FreeWord::identity()),
            delta_back: far_delta_elem,
        });
        chain.push(d1);
        // e0'' from w0 to τ(e0), edge group ⟨s⟩.
        let (n2, n2b) = if e0 == p {
            (format!("{pname}''"), format!("{pbname}''"))
        } else {
            (format!("{pbname}''"), format!("{pname}''"))
        };
        let end = graph.terminal(e0);
        let d2 = push_pair(&mut new_graph, &n2, &n2b, w0, end);
        egs.push(EdgeGroup::cyclic(sigma_t));
        egs.push(EdgeGroup::cyclic(s.clone()));
        segments.push(Segment {
            delta_fwd: h.correction(e0).clone(),
            delta_back: GroupElement::Free(FreeWord::identity()),
        });
        chain.push(d2);
        for seg in &segments {
            deltas.push(seg.delta_fwd.clone());
            deltas.push(seg.delta_back.clone());
        }
        let fwd: Vec<DartId> = chain.clone();
        let back: Vec<DartId> = chain.iter().rev().map(|d| DartId(d.0 + 1)).collect();
        if e0 == p {
            paths[p.0] = fwd;
            paths[pb.0] = back;
        } else {
            paths[pb.0] = fwd;
            paths[p.0] = back;
        }
    }

    let new_gog = Arc::new(GraphOfGroups::new(new_graph, vgs, egs)?);
    let mut twist = GogIso::identity(new_gog.clone());
    for (i, delta) in deltas.into_iter().enumerate() {
        twist = twist.with_correction(DartId(i), delta);
    }
    let report = twist.validate();
    report.into_result()?;
    let dart_images = graph
        .darts()
        .map(|d| PathWord::along(&new_gog, graph.initial(d), &paths[d.0]))
        .collect::<Result<Vec<_>, _>>()?;
    let theta = PathHom::from_stage(HomStage {
        domain: g.clone(),
        codomain: new_gog.clone(),
        vertex_target: graph.vertices().collect(),
        vertex_maps: vec![VertexMap::Same; graph.vertex_count()],
        dart_images,
    });
    Ok(Subdivision {
        gog: new_gog,
        twist,
        theta,
        vertex_map: graph.vertices().collect(),
        already_classical: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bonding {
    Positive,
    Negative,
    None,
}

/// Whether two rank-one darts with common terminal vertex and nontrivial
/// twistors are positively or negatively bonded.
pub fn bondedness(h: &GogIso, e1: DartId, e2: DartId) -> Result<Bonding, GogError> {
    let data = twistors(h)?;
    let g = h.domain();
    let graph = g.graph();
    if graph.terminal(e1) != graph.terminal(e2) {
        return Err(GogError::Precondition("darts do not share a terminal vertex".into()));
    }
    for d in [e1, e2] {
        if g.edge_rank(d) != 1 || data.twistors[d.0] == 0 {
            return Err(GogError::Precondition(format!(
                "`{}` needs a cyclic edge group and a nontrivial twistor",
                graph.dart_name(d)
            )));
        }
    }
    let word = |d: DartId| -> Result<FreeWord, GogError> {
        match g.edge_apply(d, data.twistors[d.0]) {
            GroupElement::Free(w) => Ok(w),
            GroupElement::Pi1(_) => Err(GogError::Unsupported(
                "bondedness over a fundamental-group vertex".into(),
            )),
        }
    };
    let (r1, _) = word(e1)?.primitive_root()?;
    let (r2, _) = word(e2)?.primitive_root()?;
    if r1.conjugator_to(&r2).is_some() {
        Ok(Bonding::Positive)
    } else if r1.conjugator_to(&r2.inverse()).is_some() {
        Ok(Bonding::Negative)
    } else {
        Ok(Bonding::None)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EfficiencyReport {
    pub minimal: bool,
    pub no_invisible_vertex: bool,
    pub no_proper_power: bool,
    pub no_unused_edge: bool,
    pub not_positively_bonded: bool,
    pub details: Vec<String>,
}

impl EfficiencyReport {
    pub fn is_efficient(&self) -> bool {
        self.minimal
            && self.no_invisible_vertex
            && self.no_proper_power
            && self.no_unused_edge
            && self.not_positively_bonded
    }

    /// Condition flags in order (1)..(5).
    pub fn flags(&self) -> [bool; 5] {
        [
            self.minimal,
            self.no_invisible_vertex,
            self.no_proper_power,
            self.no_unused_edge,
            self.not_positively_bonded,
        ]
    }
}

fn surjective(g: &GraphOfGroups, d: DartId) -> bool {
    let VertexGroup::Free(f) = g.terminal_group(d) else {
        return false;
    };
    match g.edge_group(d).image.as_ref().and_then(|i| i.as_free()) {
        None => f.rank() == 0,
        Some(w) => f.rank() == 1 && w.len() == 1,
    }
}

pub fn efficiency_check(h: &GogIso) -> Result<EfficiencyReport, GogError> {
    let data = twistors(h)?;
    let g = h.domain();
    let graph = g.graph();
    for v in graph.vertices() {
        if !matches!(g.vertex_group(v), VertexGroup::Free(_)) {
            return Err(GogError::Unsupported(
                "efficiency is only checked over free vertex groups".into(),
            ));
        }
    }
    let mut r = EfficiencyReport {
        minimal: true,
        no_invisible_vertex: true,
        no_proper_power: true,
        no_unused_edge: true,
        not_positively_bonded: true,
        details: Vec::new(),
    };
    for v in graph.vertices() {
        let incoming = graph.incoming(v);
        let name = graph.vertex_name(v);
        if incoming.len() == 1 && surjective(g, incoming[0]) {
            r.minimal = false;
            r.details
                .push(format!("(1) valence-one vertex `{name}` has a surjective edge map"));
        }
        if incoming.len() == 2 && surjective(g, incoming[0]) && surjective(g, incoming[1]) {
            r.no_invisible_vertex = false;
            r.details.push(format!("(2) `{name}` is invisible"));
        }
    }
    for d in graph.darts() {
        if let Some(GroupElement::Free(w)) = &g.edge_group(d).image {
            if w.primitive_root()?.1 > 1 {
                r.no_proper_power = false;
                r.details.push(format!(
                    "(3) image of `{}` is a proper power",
                    graph.dart_name(d)
                ));
            }
        }
    }
    for e in graph.edges() {
        if data.twistors[e.0] == 0 {
            r.no_unused_edge = false;
            r.details
                .push(format!("(4) twistor of `{}` is trivial", graph.dart_name(e)));
        }
    }
    for v in graph.vertices() {
        let incoming: Vec<DartId> = graph
            .incoming(v)
            .into_iter()
            .filter(|&d| g.edge_rank(d) == 1 && data.twistors[d.0] != 0)
            .collect();
        for (i, &d1) in incoming.iter().enumerate() {
            for &d2 in &incoming[i + 1..] {
                if bondedness(h, d1, d2)? == Bonding::Positive {
                    r.not_positively_bonded = false;
                    r.details.push(format!(
                        "(5) `{}` and `{}` are positively bonded",
                        graph.dart_name(d1),
                        graph.dart_name(d2)
                    ));
                }
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OuterComparison {
    Equal,
    Distinct,
    HypothesisFails(String),
}

/// Compares two classical twists on the same graph of groups by their
/// twistors, after certifying for every dart an element `r` with
/// `f_e(G_e) ∩ r f_e(G_e) r^-1 = {1}`.
pub fn same_outer_by_twistors(d1: &GogIso, d2: &GogIso) -> Result<OuterComparison, GogError> {
    if !(Arc::ptr_eq(d1.domain(), d2.domain()) || **d1.domain() == **d2.domain()) {
        return Err(GogError::Precondition("twists act on different graphs of groups".into()));
    }
    let t1 = twistors(d1)?;
    let t2 = twistors(d2)?;
    let g = d1.domain();
    let graph = g.graph();
    for d in graph.darts() {
        let Some(image) = &g.edge_group(d).image else {
            continue;
        };
        let name = graph.dart_name(d);
        let (VertexGroup::Free(f), GroupElement::Free(u)) = (g.terminal_group(d), image) else {
            return Ok(OuterComparison::HypothesisFails(format!(
                "cannot certify malnormality at `{name}` over a fundamental group"
            )));
        };
        let (root, _) = u.primitive_root()?;
        let witness = (0..f.rank())
            .map(FreeWord::generator)
            .find(|r| matches!(r.power_of(&root), Ok(None)));
        if witness.is_none() {
            return Ok(OuterComparison::HypothesisFails(format!(
                "every element of the group at the end of `{name}` commutes with its edge image"
            )));
        }
    }
    if t1.twistors == t2.twistors {
        Ok(OuterComparison::Equal)
    } else {
        Ok(OuterComparison::Distinct)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialEdgeVerdict {
    DehnTwistAutomorphism,
    No(String),
}

/// An automorphism with trivial edge groups, identity graph part and
/// identity vertex isomorphisms is a Dehn twist.
pub fn trivial_edge_dehn(h: &GogIso) -> Result<TrivialEdgeVerdict, GogError> {
    let g = h.domain();
    if let Some(d) = g.graph().darts().find(|&d| g.edge_rank(d) != 0) {
        return Ok(TrivialEdgeVerdict::No(format!(
            "`{}` has a nontrivial edge group",
            g.graph().dart_name(d)
        )));
    }
    match twist_shape(h)? {
        Some(reason) => Ok(TrivialEdgeVerdict::No(reason)),
        None => Ok(TrivialEdgeVerdict::DehnTwistAutomorphism),
    }
}

/// Identity of the vertex isomorphism, exposed for callers building twists.
pub fn identity_vertex_isos(g: &GraphOfGroups) -> Vec<GroupIso> {
    vec![GroupIso::Identity; g.graph().vertex_count()]
}
