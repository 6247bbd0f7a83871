//! Contracting connected subgraphs into single vertices, blowing a vertex
//! up into a graph of groups, and turning partial Dehn twists into Dehn
//! twists.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::dehn::{classify_twist, TwistClass};
use crate::error::{GogError, Report};
use crate::gog::{EdgeGroup, GraphOfGroups};
use crate::graph::{Dart, DartId, SerreGraph, SpanningTree, VertexId};
use crate::group::{GroupElement, GroupIso, VertexGroup};
use crate::hconj::{element_ball, is_h_zero};
use crate::hom::{check_semi_conjugation, Embedding, HomStage, PathHom, VertexMap};
use crate::iso::GogIso;
use crate::word::{pi1_generators, pw_equal, tree_word, PathWord};

/// A connected subgraph given by its vertices and one dart per edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<DartId>,
}

impl Subgraph {
    /// Resolves a list of vertex and dart names.
    pub fn from_names<S: AsRef<str>>(g: &GraphOfGroups, names: &[S]) -> Result<Self, GogError> {
        let mut sub = Subgraph::default();
        for n in names {
            let n = n.as_ref();
            if let Some(v) = g.graph().vertex(n) {
                sub.vertices.push(v);
            } else if let Some(d) = g.graph().dart(n) {
                sub.edges.push(d);
            } else {
                return Err(GogError::UnknownVertex(n.to_string()));
            }
        }
        Ok(sub)
    }
}

fn unique_name(graph: &SerreGraph, base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    let mut i = 1;
    while graph.vertex(&name).is_some() || taken.contains(&name) {
        name = format!("{base}_{i}");
        i += 1;
    }
    name
}

/// Contraction of a connected subgraph `Γ₀` to a vertex `V₀`.
#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub original: Arc<GraphOfGroups>,
    pub quotient: Arc<GraphOfGroups>,
    /// The restriction `G₀` to `Γ₀`.
    pub sub: Arc<GraphOfGroups>,
    pub v0: VertexId,
    pub p0: VertexId,
    pub sub_p0: VertexId,
    /// Ids of `G₀` in the original.
    pub sub_vertices: Vec<VertexId>,
    pub sub_darts: Vec<DartId>,
    /// Original vertex of each quotient vertex; `None` for `V₀`.
    pub quotient_vertices: Vec<Option<VertexId>>,
    /// Original dart of each quotient dart.
    pub quotient_darts: Vec<DartId>,
    /// Connectors `γ_e` in `G₀` from `P₀` to `τ(e)`, keyed by original dart.
    pub gammas: BTreeMap<DartId, PathWord>,
    /// `π₁(quotient, V₀) → π₁(original, P₀)`.
    pub theta: PathHom,
    /// Inverse of `theta`.
    pub psi: PathHom,
}

impl QuotientResult {
    /// Checks that `psi` and `theta` are mutually inverse on generators.
    pub fn verify_theta(&self) -> Result<bool, GogError> {
        check_mutually_inverse(&self.theta, &self.psi, self.v0, self.p0)
    }

    pub fn original_dart(&self, d: DartId) -> DartId {
        self.quotient_darts[d.0]
    }

    pub fn quotient_dart(&self, d: DartId) -> Option<DartId> {
        self.quotient_darts.iter().position(|&x| x == d).map(DartId)
    }
}

/// `psi ∘ theta = id` on generators at `a` and `theta ∘ psi = id` on
/// generators at `b`.
pub fn check_mutually_inverse(
    theta: &PathHom,
    psi: &PathHom,
    a: VertexId,
    b: VertexId,
) -> Result<bool, GogError> {
    let dom = theta.domain();
    for x in pi1_generators(dom, a)? {
        let y = psi.apply(&theta.apply(&x)?)?;
        if y.start() != x.start() || !pw_equal(dom, &x, &y)? {
            return Ok(false);
        }
    }
    let cod = theta.codomain();
    for x in pi1_generators(cod, b)? {
        let y = theta.apply(&psi.apply(&x)?)?;
        if y.start() != x.start() || !pw_equal(cod, &x, &y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn embed(q: &QuotientResult, w: &PathWord) -> PathWord {
    w.relabel(|v| q.sub_vertices[v.0], |d| q.sub_darts[d.0])
}

/// Contracts `sub` to a vertex named `name` (default `V0`). Connectors
/// default to spanning-tree paths from `p0`; supplied connectors are words
/// of the original graph of groups lying in the subgraph.
pub fn quotient_gog(
    g: &Arc<GraphOfGroups>,
    sub: &Subgraph,
    p0: VertexId,
    gammas: Option<&BTreeMap<DartId, PathWord>>,
    name: Option<&str>,
) -> Result<QuotientResult, GogError> {
    let graph = g.graph();
    let mut svs = sub.vertices.clone();
    svs.sort();
    svs.dedup();
    if !svs.contains(&p0) {
        return Err(GogError::Precondition("base vertex is not in the subgraph".into()));
    }
    let mut sdarts: Vec<DartId> = sub.edges.iter().flat_map(|&e| [e, graph.bar(e)]).collect();
    sdarts.sort();
    sdarts.dedup();
    for &d in &sdarts {
        if !svs.contains(&graph.terminal(d)) {
            return Err(GogError::Precondition(format!(
                "edge `{}` leaves the subgraph",
                graph.dart_name(d)
            )));
        }
    }
    let (g0, sub_vertices, sub_darts) = g.restrict(&svs, &sdarts).map_err(|e| match e {
        GogError::Invalid(_) => GogError::Precondition("subgraph is disconnected".into()),
        other => other,
    })?;
    let g0 = Arc::new(g0);
    let to_sub_v: BTreeMap<VertexId, VertexId> = sub_vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, VertexId(i)))
        .collect();
    let to_sub_d: BTreeMap<DartId, DartId> = sub_darts
        .iter()
        .enumerate()
        .map(|(i, &d)| (d, DartId(i)))
        .collect();
    let sub_p0 = to_sub_v[&p0];
    let tree = g0.graph().spanning_tree(sub_p0)?;
    let in_s = |v: VertexId| to_sub_v.contains_key(&v);

    let mut gam: BTreeMap<DartId, PathWord> = BTreeMap::new();
    for d in graph.darts() {
        if !in_s(graph.terminal(d)) || to_sub_d.contains_key(&d) {
            continue;
        }
        let t = to_sub_v[&graph.terminal(d)];
        let w = match gammas.and_then(|m| m.get(&d)) {
            Some(w) => {
                if w.start() != p0 || w.end(g) != graph.terminal(d) {
                    return Err(GogError::Endpoint(format!(
                        "connector for `{}` must run from the base vertex to its terminal vertex",
                        graph.dart_name(d)
                    )));
                }
                if w.darts().iter().any(|x| !to_sub_d.contains_key(x)) {
                    return Err(GogError::Precondition(format!(
                        "connector for `{}` leaves the subgraph",
                        graph.dart_name(d)
                    )));
                }
                w.relabel(|v| to_sub_v[&v], |x| to_sub_d[&x])
            }
            None => tree_word(&g0, &tree, t),
        };
        gam.insert(d, w);
    }

    let mut qgraph = SerreGraph::new();
    let mut vgs = Vec::new();
    let mut vertex_map = vec![VertexId(0); graph.vertex_count()];
    let mut quotient_vertices = Vec::new();
    let mut v0 = None;
    let v0_name = unique_name(
        &SerreGraph::new(),
        name.unwrap_or("V0"),
        &graph
            .vertices()
            .filter(|&v| !in_s(v))
            .map(|v| graph.vertex_name(v).to_string())
            .collect(),
    );
    for v in graph.vertices() {
        if in_s(v) {
            let id = *v0.get_or_insert_with(|| {
                quotient_vertices.push(None);
                vgs.push(VertexGroup::pi1(g0.clone(), sub_p0));
                qgraph.add_vertex(v0_name.clone())
            });
            vertex_map[v.0] = id;
        } else {
            quotient_vertices.push(Some(v));
            vgs.push(g.vertex_group(v).clone());
            vertex_map[v.0] = qgraph.add_vertex(graph.vertex_name(v));
        }
    }
    let v0 = v0.expect("subgraph is nonempty");
    let kept: Vec<DartId> = graph.darts().filter(|d| !to_sub_d.contains_key(d)).collect();
    let new_index: BTreeMap<DartId, DartId> =
        kept.iter().enumerate().map(|(i, &d)| (d, DartId(i))).collect();
    let mut egs = Vec::new();
    for &d in &kept {
        qgraph.push_dart(Dart {
            name: graph.dart_name(d).to_string(),
            bar: new_index[&graph.bar(d)],
            terminal: vertex_map[graph.terminal(d).0],
        });
        let eg = g.edge_group(d);
        if in_s(graph.terminal(d)) && eg.rank == 1 {
            let gamma = &gam[&d];
            let t = to_sub_v[&graph.terminal(d)];
            let conj = gamma
                .concat(&g0, &PathWord::vertex(t, g.edge_apply(d, 1)))?
                .concat(&g0, &gamma.inverse(&g0))?
                .reduce(&g0);
            egs.push(EdgeGroup {
                rank: 1,
                generator: eg.generator.clone(),
                image: Some(GroupElement::Pi1(conj)),
            });
        } else {
            egs.push(eg.clone());
        }
    }
    let quotient = Arc::new(GraphOfGroups::new(qgraph, vgs, egs)?);

    let emb = Embedding {
        sub: g0.clone(),
        vertices: sub_vertices.clone(),
        darts: sub_darts.clone(),
    };
    let embed_word = |w: &PathWord| emb.map_word(w);
    let mut theta_images = Vec::new();
    for &d in &kept {
        let pre = if in_s(graph.initial(d)) {
            embed_word(&gam[&graph.bar(d)])
        } else {
            PathWord::identity(g, graph.initial(d))
        };
        let post = if in_s(graph.terminal(d)) {
            embed_word(&gam[&d]).inverse(g)
        } else {
            PathWord::identity(g, graph.terminal(d))
        };
        theta_images.push(
            pre.concat(g, &PathWord::stable(g, d))?
                .concat(g, &post)?
                .reduce(g),
        );
    }
    let theta = PathHom::from_stage(HomStage {
        domain: quotient.clone(),
        codomain: g.clone(),
        vertex_target: quotient_vertices.iter().map(|v| v.unwrap_or(p0)).collect(),
        vertex_maps: quotient_vertices
            .iter()
            .map(|v| match v {
                Some(_) => VertexMap::Same,
                None => VertexMap::Expand(emb.clone()),
            })
            .collect(),
        dart_images: theta_images,
    });

    let tau = |v: VertexId| tree_word(&g0, &tree, to_sub_v[&v]);
    let loop_at_v0 = |w: PathWord| PathWord::vertex(v0, GroupElement::Pi1(w.reduce(&g0)));
    let mut psi_images = Vec::new();
    for d in graph.darts() {
        if let Some(&sd) = to_sub_d.get(&d) {
            let w = tau(graph.initial(d))
                .concat(&g0, &PathWord::stable(&g0, sd))?
                .concat(&g0, &tau(graph.terminal(d)).inverse(&g0))?;
            psi_images.push(loop_at_v0(w));
            continue;
        }
        let qd = new_index[&d];
        let left = if in_s(graph.initial(d)) {
            let w = gam[&graph.bar(d)].concat(&g0, &tau(graph.initial(d)).inverse(&g0))?;
            loop_at_v0(w.inverse(&g0))
        } else {
            PathWord::identity(&quotient, vertex_map[graph.initial(d).0])
        };
        let right = if in_s(graph.terminal(d)) {
            let w = gam[&d].concat(&g0, &tau(graph.terminal(d)).inverse(&g0))?;
            loop_at_v0(w)
        } else {
            PathWord::identity(&quotient, vertex_map[graph.terminal(d).0])
        };
        psi_images.push(
            left.concat(&quotient, &PathWord::stable(&quotient, qd))?
                .concat(&quotient, &right)?
                .reduce(&quotient),
        );
    }
    let psi = PathHom::from_stage(HomStage {
        domain: g.clone(),
        codomain: quotient.clone(),
        vertex_target: vertex_map.clone(),
        vertex_maps: graph
            .vertices()
            .map(|v| {
                if in_s(v) {
                    VertexMap::Collapse {
                        sub: g0.clone(),
                        prefix: tau(v),
                    }
                } else {
                    VertexMap::Same
                }
            })
            .collect(),
        dart_images: psi_images,
    });

    Ok(QuotientResult {
        original: g.clone(),
        quotient,
        sub: g0,
        v0,
        p0,
        sub_p0,
        sub_vertices,
        sub_darts,
        quotient_vertices,
        quotient_darts: kept,
        gammas: gam,
        theta,
        psi,
    })
}

/// Restriction of an automorphism fixing the graph to the subgraph `G₀`.
pub fn restrict_iso(h: &GogIso, q: &QuotientResult) -> Result<GogIso, GogError> {
    let sub = &q.sub;
    let sg = sub.graph();
    Ok(GogIso::from_parts(
        sub.clone(),
        sub.clone(),
        sg.vertices().collect(),
        sg.darts().collect(),
        q.sub_vertices
            .iter()
            .map(|&v| h.vertex_iso(v).clone())
            .collect(),
        q.sub_darts.iter().map(|&d| h.edge_sign(d)).collect(),
        q.sub_darts.iter().map(|&d| h.correction(d).clone()).collect(),
    ))
}

fn check_graph_fixing_automorphism(h: &GogIso) -> Result<(), GogError> {
    if !h.is_automorphism() || !h.fixes_graph() {
        return Err(GogError::Precondition(
            "expected an automorphism acting trivially on the graph".into(),
        ));
    }
    Ok(())
}

/// The automorphism induced on the quotient:
/// `H̄_{V₀}` is induced by `H|G₀` at `P₀` and
/// `δ(E) = H_*(γ_e) δ(e) γ_e^-1` for darts into `V₀`.
pub fn quotient_iso(h: &GogIso, q: &QuotientResult) -> Result<GogIso, GogError> {
    check_graph_fixing_automorphism(h)?;
    if !(Arc::ptr_eq(h.domain(), &q.original) || **h.domain() == *q.original) {
        return Err(GogError::Precondition(
            "isomorphism does not act on the quotiented graph of groups".into(),
        ));
    }
    let h0 = Arc::new(restrict_iso(h, q)?);
    let qg = &q.quotient;
    let graph = q.original.graph();
    let to_sub_v: BTreeMap<VertexId, VertexId> = q
        .sub_vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, VertexId(i)))
        .collect();
    let vertex_isos = q
        .quotient_vertices
        .iter()
        .map(|v| match v {
            Some(v) => h.vertex_iso(*v).clone(),
            None => GroupIso::Local {
                iso: h0.clone(),
                base: q.sub_p0,
            },
        })
        .collect();
    let mut corrections = Vec::new();
    for &d in &q.quotient_darts {
        let t = graph.terminal(d);
        match to_sub_v.get(&t) {
            None => corrections.push(h.correction(d).clone()),
            Some(&st) => {
                let gamma = &q.gammas[&d];
                let w = h0
                    .apply_word(gamma)?
                    .concat(&q.sub, &PathWord::vertex(st, h.correction(d).clone()))?
                    .concat(&q.sub, &gamma.inverse(&q.sub))?
                    .reduce(&q.sub);
                corrections.push(GroupElement::Pi1(w));
            }
        }
    }
    let hbar = GogIso::from_parts(
        qg.clone(),
        qg.clone(),
        qg.graph().vertices().collect(),
        qg.graph().darts().collect(),
        vertex_isos,
        q.quotient_darts.iter().map(|&d| h.edge_sign(d)).collect(),
        corrections,
    );
    hbar.validate().into_result()?;
    Ok(hbar)
}

/// A quotient by several disjoint subgraphs, performed one at a time.
#[derive(Clone, Debug)]
pub struct MultiQuotient {
    pub quotient: Arc<GraphOfGroups>,
    pub steps: Vec<QuotientResult>,
    pub theta: PathHom,
    pub psi: PathHom,
}

/// Contracts each named subgraph in turn (sorted by their smallest vertex
/// name); each entry lists vertex and dart names and the base vertex name.
pub fn quotient_multi(
    g: &Arc<GraphOfGroups>,
    subgraphs: &[(Vec<String>, String)],
) -> Result<MultiQuotient, GogError> {
    let mut requests: Vec<(Vec<String>, String)> = subgraphs.to_vec();
    let key = |s: &(Vec<String>, String)| -> String {
        s.0.iter()
            .filter(|n| g.graph().vertex(n).is_some())
            .min()
            .cloned()
            .unwrap_or_default()
    };
    requests.sort_by_key(key);
    let mut seen = BTreeSet::new();
    for (names, _) in &requests {
        for n in names {
            if g.graph().vertex(n).is_some() && !seen.insert(n.clone()) {
                return Err(GogError::Precondition(format!(
                    "subgraphs overlap at vertex `{n}`"
                )));
            }
        }
    }
    let mut cur = g.clone();
    let mut steps: Vec<QuotientResult> = Vec::new();
    for (i, (names, base)) in requests.iter().enumerate() {
        let sub = Subgraph::from_names(&cur, names)?;
        let p0 = cur.vertex(base)?;
        let name = format!("V{i}");
        let q = quotient_gog(&cur, &sub, p0, None, Some(&name))?;
        cur = q.quotient.clone();
        steps.push(q);
    }
    let mut theta = PathHom::identity(cur.clone());
    for q in steps.iter().rev() {
        theta = theta.then(q.theta.clone());
    }
    let mut psi = PathHom::identity(g.clone());
    for q in &steps {
        psi = psi.then(q.psi.clone());
    }
    Ok(MultiQuotient {
        quotient: cur,
        steps,
        theta,
        psi,
    })
}

/// Re-expresses the quotient automorphism for `q1` over the quotient built
/// with the connectors of `q2`, and checks it equals the automorphism
/// induced through `q2`.
pub fn connector_change_witness(
    h: &GogIso,
    q1: &QuotientResult,
    q2: &QuotientResult,
) -> Result<bool, GogError> {
    if q1.p0 != q2.p0 || q1.quotient_darts != q2.quotient_darts {
        return Err(GogError::Precondition(
            "quotients must share the base vertex and the contracted subgraph".into(),
        ));
    }
    let h1 = quotient_iso(h, q1)?;
    let h2 = quotient_iso(h, q2)?;
    let sub = &q1.sub;
    let qg = &q1.quotient;
    let mut w = Vec::new();
    for (i, &d) in q1.quotient_darts.iter().enumerate() {
        let qd = DartId(i);
        if qg.graph().terminal(qd) == q1.v0 {
            let x = q1.gammas[&d]
                .concat(sub, &q2.gammas[&d].inverse(sub))?
                .reduce(sub);
            w.push(GroupElement::Pi1(x));
        } else {
            w.push(qg.terminal_group(qd).identity());
        }
    }
    let twisted = crate::iso::twist_corrections(&h1, &w)?;
    let q2g = &q2.quotient;
    for d in q2g.graph().darts() {
        let group = q2g.terminal_group(d);
        let a = twisted.gog.edge_group(d).image.as_ref();
        let b = q2g.edge_group(d).image.as_ref();
        match (a, b) {
            (Some(x), Some(y)) if !group.equal(x, y) => return Ok(false),
            (Some(_), None) | (None, Some(_)) => return Ok(false),
            _ => {}
        }
        if !group.equal(twisted.iso.correction(d), h2.correction(d)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The local data for a blow-up at `V₀`: the graph of groups `G₀`, its
/// automorphism `H₀`, the identification `θ₀: G_{V₀} → π₁(G₀, P₀)` and
/// `P₀`.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub sub: Arc<GraphOfGroups>,
    pub twist: GogIso,
    pub theta: GroupIso,
    pub base: VertexId,
}

impl LocalModel {
    pub fn pi1(&self) -> VertexGroup {
        VertexGroup::pi1(self.sub.clone(), self.base)
    }

    pub fn theta_word(&self, dom: &VertexGroup, x: &GroupElement) -> Result<PathWord, GogError> {
        match self.theta.apply(x, dom, &self.pi1())? {
            GroupElement::Pi1(w) => Ok(w.reduce(&self.sub)),
            GroupElement::Free(_) => Err(GogError::GroupMismatch(
                "local identification must land in the fundamental group".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanEntry {
    /// `v(E)` in `G₀`.
    pub vertex: VertexId,
    /// `γ_E`, a word in `G₀` from `P₀` to `v(E)`.
    pub connector: PathWord,
    /// `g_E` in the group at `v(E)`.
    pub residual: GroupElement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlowupPlan {
    pub entries: BTreeMap<DartId, PlanEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanOutcome {
    Plan(BlowupPlan),
    NotLocallyZero(DartId),
    NotCompatible(DartId),
}

fn check_assumptions(hbar: &GogIso, v0: VertexId, local: &LocalModel) -> Result<(), GogError> {
    check_graph_fixing_automorphism(hbar)?;
    check_graph_fixing_automorphism(&local.twist)?;
    if !(Arc::ptr_eq(local.twist.domain(), &local.sub) || **local.twist.domain() == *local.sub) {
        return Err(GogError::Precondition(
            "local twist does not act on the local graph of groups".into(),
        ));
    }
    let g = hbar.domain();
    let gv0 = g.vertex_group(v0);
    let report = local.theta.validate(gv0, &local.pi1());
    if !report.is_valid() {
        return Err(GogError::Invalid(report));
    }
    for x in gv0.generators()? {
        let lhs = local.theta_word(gv0, &hbar.apply_at(v0, &x)?)?;
        let rhs = local.twist.apply_word(&local.theta_word(gv0, &x)?)?;
        if !pw_equal(&local.sub, &lhs, &rhs)? {
            return Err(GogError::Precondition(format!(
                "local identification does not intertwine the automorphisms on generator {}",
                gv0.display(&x)
            )));
        }
    }
    Ok(())
}

fn condition3(
    local: &LocalModel,
    image: Option<&PathWord>,
    connector: &PathWord,
) -> Result<bool, GogError> {
    let Some(y) = image else {
        return Ok(true);
    };
    let s = &local.sub;
    let w = connector
        .inverse(s)
        .concat(s, y)?
        .concat(s, connector)?
        .reduce(s);
    Ok(w.path_length() == 0)
}

/// Residual `H₀_*(γ)^-1 w γ` when it has path length zero.
fn residual(local: &LocalModel, w: &PathWord, connector: &PathWord) -> Result<Option<GroupElement>, GogError> {
    let s = &local.sub;
    let r = local
        .twist
        .apply_word(connector)?
        .inverse(s)
        .concat(s, w)?
        .concat(s, connector)?
        .reduce(s);
    Ok((r.path_length() == 0).then(|| r.syllables()[0].clone()))
}

/// Derives `v(E)`, `γ_E` and `g_E` for every dart into `V₀`.
pub fn blowup_plan(hbar: &GogIso, v0: VertexId, local: &LocalModel) -> Result<PlanOutcome, GogError> {
    check_assumptions(hbar, v0, local)?;
    let g = hbar.domain();
    let graph = g.graph();
    let gv0 = g.vertex_group(v0);
    let h0inv = local.twist.invert()?;
    let mut incoming = graph.incoming(v0);
    incoming.sort_by(|a, b| graph.dart_name(*a).cmp(graph.dart_name(*b)));
    let mut plan = BlowupPlan::default();
    for d in incoming {
        let w = local.theta_word(gv0, hbar.correction(d))?;
        let Some(wit) = is_h_zero(&h0inv, &w)? else {
            return Ok(PlanOutcome::NotLocallyZero(d));
        };
        let image = match g.edge_rank(d) {
            1 => Some(local.theta_word(gv0, &g.edge_apply(d, 1))?),
            _ => None,
        };
        if condition3(local, image.as_ref(), &wit.gamma)? {
            plan.entries.insert(
                d,
                PlanEntry {
                    vertex: wit.vertex,
                    connector: wit.gamma,
                    residual: wit.g,
                },
            );
            continue;
        }
        match search_connector(local, &w, &wit.gamma, image.as_ref())? {
            Some(entry) => {
                plan.entries.insert(d, entry);
            }
            None => return Ok(PlanOutcome::NotCompatible(d)),
        }
    }
    Ok(PlanOutcome::Plan(plan))
}

/// Alternative connectors `γ c` and `γ c t_d` with `c` of length at most
/// four in the group at the end of `γ`.
fn search_connector(
    local: &LocalModel,
    w: &PathWord,
    gamma: &PathWord,
    image: Option<&PathWord>,
) -> Result<Option<PlanEntry>, GogError> {
    let s = &local.sub;
    let sg = s.graph();
    let end = gamma.end(s);
    let mut candidates = Vec::new();
    for c in element_ball(s.vertex_group(end), 4)? {
        let base = gamma.concat(s, &PathWord::vertex(end, c))?.reduce(s);
        candidates.push(base.clone());
        for d in sg.darts() {
            if sg.initial(d) == end {
                candidates.push(base.concat(s, &PathWord::stable(s, d))?.reduce(s));
            }
        }
    }
    for cand in candidates {
        if !condition3(local, image, &cand)? {
            continue;
        }
        if let Some(r) = residual(local, w, &cand)? {
            return Ok(Some(PlanEntry {
                vertex: cand.end(s),
                connector: cand,
                residual: r,
            }));
        }
    }
    Ok(None)
}

/// Checks a plan against conditions (3) and (4).
pub fn validate_plan(
    hbar: &GogIso,
    v0: VertexId,
    local: &LocalModel,
    plan: &BlowupPlan,
) -> Result<Report, GogError> {
    let g = hbar.domain();
    let graph = g.graph();
    let gv0 = g.vertex_group(v0);
    let s = &local.sub;
    let mut report = Report::new();
    let incoming: BTreeSet<DartId> = graph.incoming(v0).into_iter().collect();
    let planned: BTreeSet<DartId> = plan.entries.keys().copied().collect();
    for d in incoming.symmetric_difference(&planned) {
        report.push(graph.dart_name(*d), "plan entries must be exactly the darts into the blown-up vertex");
    }
    for (d, entry) in &plan.entries {
        if !incoming.contains(d) {
            continue;
        }
        let name = graph.dart_name(*d);
        let c = &entry.connector;
        if !c.is_well_formed(s) || c.start() != local.base || c.end(s) != entry.vertex {
            report.push(name, "connector must run from the base vertex to the attaching vertex");
            continue;
        }
        if !s.vertex_group(entry.vertex).contains(&entry.residual) {
            report.push(name, "residual does not lie in the group at the attaching vertex");
            continue;
        }
        let image = match g.edge_rank(*d) {
            1 => Some(local.theta_word(gv0, &g.edge_apply(*d, 1))?),
            _ => None,
        };
        if !condition3(local, image.as_ref(), c)? {
            report.push(name, "edge group is not conjugated into the attaching vertex group by the connector");
        }
        let w = local.theta_word(gv0, hbar.correction(*d))?;
        match residual(local, &w, c)? {
            Some(r) if s.vertex_group(entry.vertex).equal(&r, &entry.residual) => {}
            _ => report.push(name, "residual does not match H₀(γ)^-1 θ₀(δ) γ"),
        }
    }
    Ok(report)
}

/// Output of [`blowup`].
#[derive(Clone, Debug)]
pub struct BlowupResult {
    pub gog: Arc<GraphOfGroups>,
    pub iso: GogIso,
    /// `π₁(Ḡ) → π₁(G)`, intertwining `H̄` and the blown-up automorphism.
    pub theta: PathHom,
    /// Ids of the outer graph's vertices (other than `V₀`) in the result.
    pub outer_vertices: Vec<Option<VertexId>>,
    /// Ids of `G₀`'s vertices in the result.
    pub sub_vertices: Vec<VertexId>,
    pub sub_darts: Vec<DartId>,
}

/// Replaces `V₀` by `G₀`, attaching each dart `E` into `V₀` at `v(E)`.
pub fn blowup(
    hbar: &GogIso,
    v0: VertexId,
    local: &LocalModel,
    plan: &BlowupPlan,
) -> Result<BlowupResult, GogError> {
    check_assumptions(hbar, v0, local)?;
    validate_plan(hbar, v0, local, plan)?.into_result()?;
    let gb = hbar.domain();
    let graph = gb.graph();
    let s = &local.sub;
    let sg = s.graph();
    if graph.incoming(v0).is_empty() {
        return Err(GogError::Precondition(
            "blown-up vertex has no incident edges; the result would not be attached".into(),
        ));
    }
    for v in sg.vertices() {
        let n = sg.vertex_name(v);
        if graph.vertices().any(|w| w != v0 && graph.vertex_name(w) == n) {
            return Err(GogError::Precondition(format!("vertex name `{n}` occurs on both sides")));
        }
    }
    for d in sg.darts() {
        let n = sg.dart_name(d);
        if graph.dart(n).is_some() {
            return Err(GogError::Precondition(format!("dart name `{n}` occurs on both sides")));
        }
    }

    let mut out = SerreGraph::new();
    let mut vgs = Vec::new();
    let mut outer_vertices = vec![None; graph.vertex_count()];
    let mut sub_vertices = vec![VertexId(0); sg.vertex_count()];
    for v in graph.vertices() {
        if v == v0 {
            for w in sg.vertices() {
                sub_vertices[w.0] = out.add_vertex(sg.vertex_name(w));
                vgs.push(s.vertex_group(w).clone());
            }
        } else {
            outer_vertices[v.0] = Some(out.add_vertex(graph.vertex_name(v)));
            vgs.push(gb.vertex_group(v).clone());
        }
    }
    let outer_target = |v: VertexId, d: Option<DartId>| -> VertexId {
        match outer_vertices[v.0] {
            Some(x) => x,
            None => sub_vertices[d.map_or(local.base, |d| plan.entries[&d].vertex).0],
        }
    };
    let n = graph.dart_count();
    let mut egs = Vec::new();
    let mut corrections = Vec::new();
    let mut signs = Vec::new();
    let mut vertex_isos = Vec::new();
    let gv0 = gb.vertex_group(v0);
    for d in graph.darts() {
        out.push_dart(Dart {
            name: graph.dart_name(d).to_string(),
            bar: graph.bar(d),
            terminal: outer_target(graph.terminal(d), Some(d)),
        });
        signs.push(hbar.edge_sign(d));
        if graph.terminal(d) == v0 {
            let entry = &plan.entries[&d];
            let eg = gb.edge_group(d);
            if eg.rank == 1 {
                let y = local.theta_word(gv0, &gb.edge_apply(d, 1))?;
                let c = &entry.connector;
                let w = c.inverse(s).concat(s, &y)?.concat(s, c)?.reduce(s);
                egs.push(EdgeGroup {
                    rank: 1,
                    generator: eg.generator.clone(),
                    image: Some(w.syllables()[0].clone()),
                });
            } else {
                egs.push(eg.clone());
            }
            corrections.push(entry.residual.clone());
        } else {
            egs.push(gb.edge_group(d).clone());
            corrections.push(hbar.correction(d).clone());
        }
    }
    let mut sub_darts = Vec::new();
    for d in sg.darts() {
        sub_darts.push(out.push_dart(Dart {
            name: sg.dart_name(d).to_string(),
            bar: DartId(n + sg.bar(d).0),
            terminal: sub_vertices[sg.terminal(d).0],
        }));
        egs.push(s.edge_group(d).clone());
        signs.push(local.twist.edge_sign(d));
        corrections.push(local.twist.correction(d).clone());
    }
    for v in graph.vertices() {
        if v == v0 {
            for w in sg.vertices() {
                vertex_isos.push(local.twist.vertex_iso(w).clone());
            }
        } else {
            vertex_isos.push(hbar.vertex_iso(v).clone());
        }
    }
    let gog = Arc::new(GraphOfGroups::new(out, vgs, egs)?);
    let iso = GogIso::from_parts(
        gog.clone(),
        gog.clone(),
        gog.graph().vertices().collect(),
        gog.graph().darts().collect(),
        vertex_isos,
        signs,
        corrections,
    );
    iso.validate().into_result()?;

    let emb = Embedding {
        sub: s.clone(),
        vertices: sub_vertices.clone(),
        darts: sub_darts.clone(),
    };
    let connector = |d: DartId| -> PathWord {
        match plan.entries.get(&d) {
            Some(e) => emb.map_word(&e.connector),
            None => PathWord::identity(&gog, outer_target(graph.terminal(d), Some(d))),
        }
    };
    let mut dart_images = Vec::new();
    for d in graph.darts() {
        let w = connector(graph.bar(d))
            .concat(&gog, &PathWord::stable(&gog, d))?
            .concat(&gog, &connector(d).inverse(&gog))?
            .reduce(&gog);
        dart_images.push(w);
    }
    let theta = PathHom::from_stage(HomStage {
        domain: gb.clone(),
        codomain: gog.clone(),
        vertex_target: graph.vertices().map(|v| outer_target(v, None)).collect(),
        vertex_maps: graph
            .vertices()
            .map(|v| {
                if v == v0 {
                    VertexMap::Through {
                        iso: local.theta.clone(),
                        via: local.pi1(),
                        then: Box::new(VertexMap::Expand(emb.clone())),
                    }
                } else {
                    VertexMap::Same
                }
            })
            .collect(),
        dart_images,
    });
    Ok(BlowupResult {
        gog,
        iso,
        theta,
        outer_vertices,
        sub_vertices,
        sub_darts,
    })
}

/// Whether `h` is a partial Dehn twist relative to `exceptional`.
pub fn partial_dehn_detect(h: &GogIso, exceptional: &[VertexId]) -> Result<bool, GogError> {
    if !h.is_automorphism() || !h.fixes_graph() {
        return Ok(false);
    }
    let g = h.domain();
    let graph = g.graph();
    for v in graph.vertices() {
        if !exceptional.contains(&v) && !h.vertex_iso(v).is_identity_on(g.vertex_group(v))? {
            return Ok(false);
        }
    }
    for d in graph.darts() {
        let rank = g.edge_rank(d);
        if exceptional.contains(&graph.terminal(d)) && rank != 0 {
            return Ok(false);
        }
        if rank == 1 {
            if h.edge_sign(d) != 1 {
                return Ok(false);
            }
            let group = g.terminal_group(d);
            if !group.commute(h.correction(d), &g.edge_apply(d, 1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub enum PartialOutcome {
    DehnTwist {
        gog: Arc<GraphOfGroups>,
        iso: GogIso,
        theta: PathHom,
        class: TwistClass,
    },
    NotLocallyZero {
        vertex: String,
        dart: String,
    },
}

/// Blows up every exceptional vertex (keyed by name) via its local Dehn
/// twist, in name order.
pub fn partial_dehn_blowup(
    hbar: &GogIso,
    locals: &BTreeMap<String, LocalModel>,
) -> Result<PartialOutcome, GogError> {
    let g = hbar.domain();
    let exceptional: Vec<VertexId> = locals
        .keys()
        .map(|n| g.vertex(n))
        .collect::<Result<_, _>>()?;
    if !partial_dehn_detect(hbar, &exceptional)? {
        return Err(GogError::Precondition(
            "not a partial Dehn twist relative to the given vertices".into(),
        ));
    }
    for (name, local) in locals {
        if let TwistClass::NotADehnTwist(r) = classify_twist(&local.twist)? {
            return Err(GogError::Precondition(format!(
                "local twist at `{name}` is not a Dehn twist: {r}"
            )));
        }
    }
    let mut iso = hbar.clone();
    let mut theta = PathHom::identity(g.clone());
    for (name, local) in locals {
        let cur = iso.domain().clone();
        let v = cur.vertex(name)?;
        match blowup_plan(&iso, v, local)? {
            PlanOutcome::NotLocallyZero(d) => {
                return Ok(PartialOutcome::NotLocallyZero {
                    vertex: name.clone(),
                    dart: cur.graph().dart_name(d).to_string(),
                })
            }
            PlanOutcome::NotCompatible(d) => {
                return Err(GogError::Precondition(format!(
                    "no compatible connector for `{}`",
                    cur.graph().dart_name(d)
                )))
            }
            PlanOutcome::Plan(plan) => {
                let res = blowup(&iso, v, local, &plan)?;
                theta = theta.then(res.theta);
                iso = res.iso;
            }
        }
    }
    let class = classify_twist(&iso)?;
    if let TwistClass::NotADehnTwist(r) = &class {
        return Err(GogError::Precondition(format!("blown-up automorphism is not a Dehn twist: {r}")));
    }
    Ok(PartialOutcome::DehnTwist {
        gog: iso.domain().clone(),
        iso,
        theta,
        class,
    })
}

/// Spanning tree of `G₀` used for default connectors.
pub fn default_tree(q: &QuotientResult) -> Result<SpanningTree, GogError> {
    q.sub.graph().spanning_tree(q.sub_p0)
}

/// Connector `γ_e` for an original dart, embedded in the original graph.
pub fn embedded_connector(q: &QuotientResult, d: DartId) -> Option<PathWord> {
    q.gammas.get(&d).map(|w| embed(q, w))
}

/// The local model recovered from a quotient: `G₀`, `H` restricted to it,
/// and the tautological identification of `G_{V₀}` with `π₁(G₀, P₀)`.
pub fn local_model(h: &GogIso, q: &QuotientResult) -> Result<LocalModel, GogError> {
    Ok(LocalModel {
        sub: q.sub.clone(),
        twist: restrict_iso(h, q)?,
        theta: GroupIso::Identity,
        base: q.sub_p0,
    })
}

/// Quotient followed by blow-up of the same subgraph.
#[derive(Clone, Debug)]
pub struct Roundtrip {
    pub quotient: QuotientResult,
    pub hbar: GogIso,
    pub plan: BlowupPlan,
    pub result: BlowupResult,
    /// Vertex groups, edge images and corrections agree with the input,
    /// matched by name.
    pub same_data: bool,
    /// `π₁(G) → π₁(Ḡ) → π₁(G')` intertwines the input and the output.
    pub semi_conjugate: bool,
}

pub fn roundtrip(h: &GogIso, sub: &Subgraph, p0: VertexId) -> Result<Roundtrip, GogError> {
    let g = h.domain();
    let q = quotient_gog(g, sub, p0, None, None)?;
    let hbar = quotient_iso(h, &q)?;
    let local = local_model(h, &q)?;
    let plan = match blowup_plan(&hbar, q.v0, &local)? {
        PlanOutcome::Plan(p) => p,
        PlanOutcome::NotLocallyZero(d) | PlanOutcome::NotCompatible(d) => {
            return Err(GogError::Precondition(format!(
                "no blow-up plan for `{}`",
                q.quotient.graph().dart_name(d)
            )))
        }
    };
    let result = blowup(&hbar, q.v0, &local, &plan)?;
    let same_data = same_by_names(h, &result.iso)?;
    let theta = q.psi.clone().then(result.theta.clone());
    let semi_conjugate = check_semi_conjugation(&theta, h, &result.iso, p0)?;
    Ok(Roundtrip {
        quotient: q,
        hbar,
        plan,
        result,
        same_data,
        semi_conjugate,
    })
}

fn same_by_names(a: &GogIso, b: &GogIso) -> Result<bool, GogError> {
    let (ga, gb) = (a.domain(), b.domain());
    if ga.graph().vertex_count() != gb.graph().vertex_count()
        || ga.graph().dart_count() != gb.graph().dart_count()
    {
        return Ok(false);
    }
    for v in ga.graph().vertices() {
        let Some(w) = gb.graph().vertex(ga.graph().vertex_name(v)) else {
            return Ok(false);
        };
        if ga.vertex_group(v) != gb.vertex_group(w)
            || !a.vertex_iso(v).equal_on(b.vertex_iso(w), ga.vertex_group(v))?
        {
            return Ok(false);
        }
    }
    for d in ga.graph().darts() {
        let Some(e) = gb.graph().dart(ga.graph().dart_name(d)) else {
            return Ok(false);
        };
        let group = ga.terminal_group(d);
        if gb.graph().vertex_name(gb.graph().terminal(e)) != ga.graph().vertex_name(ga.graph().terminal(d)) {
            return Ok(false);
        }
        let same_image = match (&ga.edge_group(d).image, &gb.edge_group(e).image) {
            (Some(x), Some(y)) => group.equal(x, y),
            (None, None) => true,
            _ => false,
        };
        if !same_image
            || a.edge_sign(d) != b.edge_sign(e)
            || !group.equal(a.correction(d), b.correction(e))
        {
            return Ok(false);
        }
    }
    Ok(true)
}
