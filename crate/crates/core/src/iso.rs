//! Isomorphisms of graphs of groups and the maps they induce on path
//! groups.
//!
//! An isomorphism consists of a graph isomorphism, an isomorphism of each
//! vertex group onto the group at the image vertex, a sign per edge telling
//! whether the edge generator is preserved or inverted, and a correcting
//! element `δ(e)` per dart. On stable letters the induced map is
//! `t_e ↦ δ(ē) t_{H(e)} δ(e)^-1`.

use std::sync::Arc;

use crate::error::{GogError, Report};
use crate::gog::GraphOfGroups;
use crate::graph::{DartId, VertexId};
use crate::group::{GroupElement, GroupIso};
use crate::word::{PathLetter, PathWord};

#[derive(Clone, Debug, PartialEq)]
pub struct GogIso {
    domain: Arc<GraphOfGroups>,
    codomain: Arc<GraphOfGroups>,
    vertex_map: Vec<VertexId>,
    dart_map: Vec<DartId>,
    vertex_isos: Vec<GroupIso>,
    edge_signs: Vec<i8>,
    corrections: Vec<GroupElement>,
}

fn same_gog(a: &Arc<GraphOfGroups>, b: &Arc<GraphOfGroups>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GogIso {
    /// Assembles the parts without checking them; see [`Self::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        domain: Arc<GraphOfGroups>,
        codomain: Arc<GraphOfGroups>,
        vertex_map: Vec<VertexId>,
        dart_map: Vec<DartId>,
        vertex_isos: Vec<GroupIso>,
        edge_signs: Vec<i8>,
        corrections: Vec<GroupElement>,
    ) -> Self {
        GogIso {
            domain,
            codomain,
            vertex_map,
            dart_map,
            vertex_isos,
            edge_signs,
            corrections,
        }
    }

    pub fn identity(gog: Arc<GraphOfGroups>) -> Self {
        let graph = gog.graph();
        let corrections = graph.darts().map(|d| gog.terminal_group(d).identity()).collect();
        GogIso {
            vertex_map: graph.vertices().collect(),
            dart_map: graph.darts().collect(),
            vertex_isos: vec![GroupIso::Identity; graph.vertex_count()],
            edge_signs: vec![1; graph.dart_count()],
            corrections,
            codomain: gog.clone(),
            domain: gog,
        }
    }

    pub fn with_correction(mut self, d: DartId, delta: GroupElement) -> Self {
        self.corrections[d.0] = delta;
        self
    }

    pub fn with_vertex_iso(mut self, v: VertexId, iso: GroupIso) -> Self {
        self.vertex_isos[v.0] = iso;
        self
    }

    /// Sets the sign of the edge containing `d`.
    pub fn with_sign(mut self, d: DartId, sign: i8) -> Self {
        let b = self.domain.graph().bar(d);
        self.edge_signs[d.0] = sign;
        self.edge_signs[b.0] = sign;
        self
    }

    pub fn domain(&self) -> &Arc<GraphOfGroups> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<GraphOfGroups> {
        &self.codomain
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn dart_image(&self, d: DartId) -> DartId {
        self.dart_map[d.0]
    }

    pub fn vertex_iso(&self, v: VertexId) -> &GroupIso {
        &self.vertex_isos[v.0]
    }

    pub fn edge_sign(&self, d: DartId) -> i8 {
        self.edge_signs[d.0]
    }

    pub fn correction(&self, d: DartId) -> &GroupElement {
        &self.corrections[d.0]
    }

    pub fn is_automorphism(&self) -> bool {
        same_gog(&self.domain, &self.codomain)
    }

    /// Whether the graph part is the identity.
    pub fn fixes_graph(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, v)| v.0 == i)
            && self.dart_map.iter().enumerate().all(|(i, d)| d.0 == i)
    }

    /// `H_v(x)`.
    pub fn apply_at(&self, v: VertexId, x: &GroupElement) -> Result<GroupElement, GogError> {
        self.vertex_isos[v.0].apply(
            x,
            self.domain.vertex_group(v),
            self.codomain.vertex_group(self.vertex_map[v.0]),
        )
    }

    /// The induced map on path-group words, reduced.
    pub fn apply_word(&self, w: &PathWord) -> Result<PathWord, GogError> {
        let graph = self.domain.graph();
        let cgraph = self.codomain.graph();
        let mut letters = Vec::with_capacity(4 * w.path_length() + 1);
        let v0 = w.start();
        letters.push(PathLetter::Vertex(
            self.vertex_map[v0.0],
            self.apply_at(v0, &w.syllables()[0])?,
        ));
        for (i, &d) in w.darts().iter().enumerate() {
            let hd = self.dart_map[d.0];
            let bar = graph.bar(d);
            letters.push(PathLetter::Vertex(
                cgraph.initial(hd),
                self.corrections[bar.0].clone(),
            ));
            letters.push(PathLetter::Stable(hd));
            let t = cgraph.terminal(hd);
            let group = self.codomain.vertex_group(t);
            letters.push(PathLetter::Vertex(t, group.inv(&self.corrections[d.0])));
            let v = graph.terminal(d);
            letters.push(PathLetter::Vertex(t, self.apply_at(v, &w.syllables()[i + 1])?));
        }
        Ok(PathWord::from_letters(&self.codomain, Some(self.vertex_map[v0.0]), &letters)?
            .reduce(&self.codomain))
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        report.absorb("domain", self.domain.validate());
        report.absorb("codomain", self.codomain.validate());
        if !report.is_valid() {
            return report;
        }
        let (g, h) = (self.domain.graph(), self.codomain.graph());
        let nv = g.vertex_count();
        let nd = g.dart_count();
        if self.vertex_map.len() != nv
            || self.vertex_isos.len() != nv
            || self.dart_map.len() != nd
            || self.edge_signs.len() != nd
            || self.corrections.len() != nd
        {
            report.push("iso", "component lengths do not match the domain");
            return report;
        }
        if h.vertex_count() != nv || h.dart_count() != nd {
            report.push("iso", "domain and codomain graphs have different sizes");
            return report;
        }
        let mut hit = vec![false; nv];
        for (i, v) in self.vertex_map.iter().enumerate() {
            if v.0 >= nv || std::mem::replace(&mut hit[v.0], true) {
                report.push(g.vertex_name(VertexId(i)), "vertex map is not a bijection");
            }
        }
        let mut hit = vec![false; nd];
        for (i, d) in self.dart_map.iter().enumerate() {
            if d.0 >= nd || std::mem::replace(&mut hit[d.0], true) {
                report.push(g.dart_name(DartId(i)), "dart map is not a bijection");
            }
        }
        if !report.is_valid() {
            return report;
        }
        for d in g.darts() {
            let name = g.dart_name(d).to_string();
            let hd = self.dart_map[d.0];
            if self.dart_map[g.bar(d).0] != h.bar(hd) {
                report.push(name.clone(), "graph map does not commute with reversal");
            }
            if h.terminal(hd) != self.vertex_map[g.terminal(d).0] {
                report.push(name.clone(), "graph map does not commute with the terminal map");
            }
            if self.domain.edge_rank(d) != self.codomain.edge_rank(hd) {
                report.push(name.clone(), "edge group ranks differ");
            }
            let s = self.edge_signs[d.0];
            if s != 1 && s != -1 {
                report.push(name.clone(), "edge sign must be +1 or -1");
            } else if s != self.edge_signs[g.bar(d).0] {
                report.push(name.clone(), "edge sign differs across the dart pair");
            }
            if !self.codomain.vertex_group(h.terminal(hd)).contains(&self.corrections[d.0]) {
                report.push(name, "correction does not lie in the group at the image terminal");
            }
        }
        for v in g.vertices() {
            let sub = self.vertex_isos[v.0].validate(
                self.domain.vertex_group(v),
                self.codomain.vertex_group(self.vertex_map[v.0]),
            );
            report.absorb(g.vertex_name(v), sub);
        }
        if !report.is_valid() {
            return report;
        }
        for d in g.darts() {
            if self.domain.edge_rank(d) != 1 {
                continue;
            }
            let hd = self.dart_map[d.0];
            let t = h.terminal(hd);
            let group = self.codomain.vertex_group(t);
            let lhs = match self.apply_at(g.terminal(d), &self.domain.edge_apply(d, 1)) {
                Ok(x) => x,
                Err(e) => {
                    report.push(g.dart_name(d), format!("cannot apply vertex isomorphism: {e}"));
                    continue;
                }
            };
            let rhs = group.conjugate(
                &self.corrections[d.0],
                &self.codomain.edge_apply(hd, self.edge_signs[d.0] as i64),
            );
            if !group.equal(&lhs, &rhs) {
                report.push(
                    g.dart_name(d),
                    "edge compatibility fails: H(f_e(x)) differs from δ(e) f_H(e)(x^ε) δ(e)^-1",
                );
            }
        }
        report
    }

    /// `second ∘ first`.
    pub fn compose(second: &GogIso, first: &GogIso) -> Result<GogIso, GogError> {
        if !same_gog(&first.codomain, &second.domain) {
            return Err(GogError::Precondition(
                "codomain of the first isomorphism is not the domain of the second".into(),
            ));
        }
        let a = &first.domain;
        let b = &first.codomain;
        let c = &second.codomain;
        let ga = a.graph();
        let mut vertex_isos = Vec::with_capacity(ga.vertex_count());
        for v in ga.vertices() {
            let m = first.vertex_map[v.0];
            vertex_isos.push(GroupIso::compose(
                &first.vertex_isos[v.0],
                &second.vertex_isos[m.0],
                a.vertex_group(v),
                b.vertex_group(m),
                c.vertex_group(second.vertex_map[m.0]),
            )?);
        }
        let mut corrections = Vec::with_capacity(ga.dart_count());
        for d in ga.darts() {
            let hd = first.dart_map[d.0];
            let t = b.graph().terminal(hd);
            let group = c.vertex_group(second.vertex_map[t.0]);
            let carried = second.apply_at(t, &first.corrections[d.0])?;
            corrections.push(group.mul(&carried, &second.corrections[hd.0]));
        }
        Ok(GogIso {
            domain: a.clone(),
            codomain: c.clone(),
            vertex_map: first.vertex_map.iter().map(|v| second.vertex_map[v.0]).collect(),
            dart_map: first.dart_map.iter().map(|d| second.dart_map[d.0]).collect(),
            vertex_isos,
            edge_signs: ga
                .darts()
                .map(|d| first.edge_signs[d.0] * second.edge_signs[first.dart_map[d.0].0])
                .collect(),
            corrections,
        })
    }

    pub fn invert(&self) -> Result<GogIso, GogError> {
        let g = self.domain.graph();
        let h = self.codomain.graph();
        let mut vinv = vec![VertexId(0); h.vertex_count()];
        for (i, v) in self.vertex_map.iter().enumerate() {
            vinv[v.0] = VertexId(i);
        }
        let mut dinv = vec![DartId(0); h.dart_count()];
        for (i, d) in self.dart_map.iter().enumerate() {
            dinv[d.0] = DartId(i);
        }
        let mut vertex_isos = Vec::with_capacity(h.vertex_count());
        for w in h.vertices() {
            let v = vinv[w.0];
            vertex_isos.push(self.vertex_isos[v.0].invert(
                self.domain.vertex_group(v),
                self.codomain.vertex_group(w),
            )?);
        }
        let mut corrections = Vec::with_capacity(h.dart_count());
        for e in h.darts() {
            let d = dinv[e.0];
            let t = g.terminal(d);
            let cod_group = self.codomain.vertex_group(self.vertex_map[t.0]);
            let inv_delta = cod_group.inv(&self.corrections[d.0]);
            corrections.push(vertex_isos[self.vertex_map[t.0].0].apply(
                &inv_delta,
                cod_group,
                self.domain.vertex_group(t),
            )?);
        }
        Ok(GogIso {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            vertex_map: vinv,
            edge_signs: dinv.iter().map(|d| self.edge_signs[d.0]).collect(),
            dart_map: dinv,
            vertex_isos,
            corrections,
        })
    }
}

/// Result of re-expressing an automorphism after conjugating its edge maps.
#[derive(Clone, Debug)]
pub struct TwistedCorrections {
    /// `G'` with `f'_e = ad(w_e^-1) ∘ f_e`.
    pub gog: Arc<GraphOfGroups>,
    /// The automorphism of `G'` corresponding to the input.
    pub iso: GogIso,
    /// The isomorphism `G → G'` with identity graph and vertex parts and
    /// `δ(e) = w_e`.
    pub equivalence: GogIso,
}

/// Given an automorphism `H` of `G` and elements `w_e` at the terminal
/// vertex of each dart, builds `G'`, the equivalence `H₀: G → G'` and the
/// automorphism `H₀ H H₀^-1` with corrections `H(w_e)^-1 δ(e) w_{H(e)}`.
pub fn twist_corrections(h: &GogIso, w: &[GroupElement]) -> Result<TwistedCorrections, GogError> {
    if !h.is_automorphism() {
        return Err(GogError::Precondition("expected an automorphism".into()));
    }
    let g = &h.domain;
    let graph = g.graph();
    if w.len() != graph.dart_count() {
        return Err(GogError::Precondition("one element per dart is required".into()));
    }
    let mut edge_groups = Vec::with_capacity(graph.dart_count());
    for d in graph.darts() {
        let group = g.terminal_group(d);
        if !group.contains(&w[d.0]) {
            return Err(GogError::GroupMismatch(format!(
                "twisting element for `{}` is not in the terminal group",
                graph.dart_name(d)
            )));
        }
        let mut eg = g.edge_group(d).clone();
        if let Some(img) = &eg.image {
            eg.image = Some(group.normalize(&group.conjugate(&group.inv(&w[d.0]), img)));
        }
        edge_groups.push(eg);
    }
    let vertex_groups = graph.vertices().map(|v| g.vertex_group(v).clone()).collect();
    let twisted = Arc::new(GraphOfGroups::from_parts(graph.clone(), vertex_groups, edge_groups));
    let mut equivalence = GogIso::identity(g.clone());
    equivalence.codomain = twisted.clone();
    equivalence.corrections = w.to_vec();
    let inverse = equivalence.invert()?;
    let iso = GogIso::compose(&equivalence, &GogIso::compose(h, &inverse)?)?;
    Ok(TwistedCorrections {
        gog: twisted,
        iso,
        equivalence,
    })
}

/// `G'` equal to `G` except `f'_{e₀} = ad(g₀^-1) ∘ f_{e₀}`, with the
/// equivalence `G → G'` having `δ(e₀) = g₀` and trivial corrections
/// elsewhere.
pub fn elementary_equivalence(
    g: &Arc<GraphOfGroups>,
    e0: DartId,
    g0: &GroupElement,
) -> Result<(Arc<GraphOfGroups>, GogIso), GogError> {
    let graph = g.graph();
    if e0.0 >= graph.dart_count() {
        return Err(GogError::UnknownDart(format!("#{}", e0.0)));
    }
    let w: Vec<GroupElement> = graph
        .darts()
        .map(|d| {
            if d == e0 {
                g0.clone()
            } else {
                g.terminal_group(d).identity()
            }
        })
        .collect();
    let t = twist_corrections(&GogIso::identity(g.clone()), &w)?;
    Ok((t.gog, t.equivalence))
}
