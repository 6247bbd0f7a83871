//! Graphs of groups with trivial or infinite cyclic edge groups.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{GogError, Report};
use crate::free_word::FreeWord;
use crate::graph::{DartId, SerreGraph, VertexId};
use crate::group::{GroupElement, VertexGroup};

/// The edge group seen from one dart: its rank and, for rank one, the image
/// of the generator in the vertex group at the dart's terminal vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeGroup {
    pub rank: u8,
    pub generator: String,
    pub image: Option<GroupElement>,
}

impl EdgeGroup {
    pub fn trivial() -> Self {
        EdgeGroup {
            rank: 0,
            generator: "x".into(),
            image: None,
        }
    }

    pub fn cyclic(image: GroupElement) -> Self {
        EdgeGroup {
            rank: 1,
            generator: "x".into(),
            image: Some(image),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphOfGroups {
    graph: SerreGraph,
    vertex_groups: Vec<VertexGroup>,
    edge_groups: Vec<EdgeGroup>,
}

impl GraphOfGroups {
    /// Assembles the parts without checking them; see [`Self::validate`].
    pub fn from_parts(
        graph: SerreGraph,
        vertex_groups: Vec<VertexGroup>,
        edge_groups: Vec<EdgeGroup>,
    ) -> Self {
        GraphOfGroups {
            graph,
            vertex_groups,
            edge_groups,
        }
    }

    /// Assembles and validates.
    pub fn new(
        graph: SerreGraph,
        vertex_groups: Vec<VertexGroup>,
        edge_groups: Vec<EdgeGroup>,
    ) -> Result<Self, GogError> {
        let g = Self::from_parts(graph, vertex_groups, edge_groups);
        g.validate().into_result()?;
        Ok(g)
    }

    pub fn graph(&self) -> &SerreGraph {
        &self.graph
    }

    pub fn vertex_group(&self, v: VertexId) -> &VertexGroup {
        &self.vertex_groups[v.0]
    }

    pub fn edge_group(&self, d: DartId) -> &EdgeGroup {
        &self.edge_groups[d.0]
    }

    pub fn edge_rank(&self, d: DartId) -> u8 {
        self.edge_groups[d.0].rank
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GogError> {
        self.graph
            .vertex(name)
            .ok_or_else(|| GogError::UnknownVertex(name.into()))
    }

    pub fn dart(&self, name: &str) -> Result<DartId, GogError> {
        self.graph
            .dart(name)
            .ok_or_else(|| GogError::UnknownDart(name.into()))
    }

    /// Group at the terminal vertex of `d`.
    pub fn terminal_group(&self, d: DartId) -> &VertexGroup {
        self.vertex_group(self.graph.terminal(d))
    }

    /// `f_d(x^k)`.
    pub fn edge_apply(&self, d: DartId, k: i64) -> GroupElement {
        let group = self.terminal_group(d);
        match &self.edge_groups[d.0].image {
            Some(img) if self.edge_rank(d) == 1 => group.pow(img, k),
            _ => group.identity(),
        }
    }

    /// `Some(k)` with `g = f_d(x^k)`.
    pub fn edge_membership(&self, d: DartId, g: &GroupElement) -> Option<i64> {
        let group = self.terminal_group(d);
        match &self.edge_groups[d.0].image {
            Some(img) if self.edge_rank(d) == 1 => group.power_index(g, img),
            _ => group.is_identity(g).then_some(0),
        }
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        report.absorb("graph", self.graph.validate());
        if !report.is_valid() {
            return report;
        }
        if self.vertex_groups.len() != self.graph.vertex_count() {
            report.push("gog", "vertex group count differs from vertex count");
            return report;
        }
        if self.edge_groups.len() != self.graph.dart_count() {
            report.push("gog", "edge group count differs from dart count");
            return report;
        }
        for v in self.graph.vertices() {
            if let VertexGroup::Pi1(p) = self.vertex_group(v) {
                let name = self.graph.vertex_name(v).to_string();
                let sub = p.gog.validate();
                if !sub.is_valid() {
                    report.absorb(&name, sub);
                } else if p.base.0 >= p.gog.graph.vertex_count() {
                    report.push(name, "base vertex out of range");
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        for d in self.graph.darts() {
            let name = self.graph.dart_name(d).to_string();
            let eg = &self.edge_groups[d.0];
            let bar = &self.edge_groups[self.graph.bar(d).0];
            if eg.rank > 1 {
                report.push(name.clone(), "edge group rank must be 0 or 1");
                continue;
            }
            if eg.rank != bar.rank {
                report.push(name.clone(), "edge groups of a dart and its reverse differ");
                continue;
            }
            match (&eg.image, eg.rank) {
                (None, 1) => report.push(name, "edge map missing"),
                (Some(_), 0) => report.push(name, "trivial edge group with an edge map"),
                (Some(img), _) => {
                    let group = self.terminal_group(d);
                    if !group.contains(img) {
                        report.push(name, "edge image does not lie in the terminal vertex group");
                    } else if group.is_identity(img) {
                        report.push(name, "edge map is not injective");
                    }
                }
                (None, _) => {}
            }
        }
        report
    }

    /// Rank of the fundamental group computed from Euler characteristics;
    /// meaningful when that group is free.
    pub fn euler_rank(&self) -> i64 {
        let mut total = 1 - self.graph.vertex_count() as i64 + self.graph.edges().len() as i64;
        for v in self.graph.vertices() {
            total += match self.vertex_group(v) {
                VertexGroup::Free(f) => f.rank() as i64,
                VertexGroup::Pi1(p) => p.gog.euler_rank(),
            };
        }
        for e in self.graph.edges() {
            total -= self.edge_rank(e) as i64;
        }
        total
    }

    /// Restriction to a subgraph given by vertices and darts (both darts of
    /// every edge). Returns the restriction and the maps from its ids to
    /// ids of `self`.
    pub fn restrict(
        &self,
        vertices: &[VertexId],
        darts: &[DartId],
    ) -> Result<(GraphOfGroups, Vec<VertexId>, Vec<DartId>), GogError> {
        let mut vmap = BTreeMap::new();
        let mut graph = SerreGraph::new();
        let mut vgs = Vec::new();
        for &v in vertices {
            let id = graph.add_vertex(self.graph.vertex_name(v));
            vmap.insert(v, id);
            vgs.push(self.vertex_group(v).clone());
        }
        let mut dmap = BTreeMap::new();
        for (i, &d) in darts.iter().enumerate() {
            dmap.insert(d, DartId(i));
        }
        let mut egs = Vec::new();
        for &d in darts {
            let t = *vmap.get(&self.graph.terminal(d)).ok_or_else(|| {
                GogError::Precondition(format!(
                    "dart `{}` leaves the subgraph",
                    self.graph.dart_name(d)
                ))
            })?;
            let b = *dmap.get(&self.graph.bar(d)).ok_or_else(|| {
                GogError::Precondition(format!(
                    "reverse of `{}` missing from the subgraph",
                    self.graph.dart_name(d)
                ))
            })?;
            graph.push_dart(crate::graph::Dart {
                name: self.graph.dart_name(d).to_string(),
                bar: b,
                terminal: t,
            });
            egs.push(self.edge_group(d).clone());
        }
        let sub = GraphOfGroups::from_parts(graph, vgs, egs);
        sub.validate().into_result()?;
        Ok((sub, vertices.to_vec(), darts.to_vec()))
    }
}

/// Incremental construction of a graph of groups.
#[derive(Default)]
pub struct GogBuilder {
    graph: SerreGraph,
    vertex_groups: Vec<VertexGroup>,
    edge_groups: Vec<EdgeGroup>,
}

impl GogBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str, group: VertexGroup) -> VertexId {
        self.vertex_groups.push(group);
        self.graph.add_vertex(name)
    }

    pub fn free_vertex(&mut self, name: &str, generators: &[&str]) -> VertexId {
        self.vertex(name, VertexGroup::free_named(generators.iter().copied()))
    }

    /// Edge with trivial edge group from `from` to `to`.
    pub fn edge(&mut self, name: &str, from: VertexId, to: VertexId) -> DartId {
        self.edge_groups.push(EdgeGroup::trivial());
        self.edge_groups.push(EdgeGroup::trivial());
        self.graph.add_edge(name, from, to)
    }

    /// Edge with infinite cyclic edge group: `at_to` is the image of the
    /// generator in the group of `to`, `at_from` in the group of `from`.
    pub fn cyclic_edge(
        &mut self,
        name: &str,
        from: VertexId,
        to: VertexId,
        at_to: GroupElement,
        at_from: GroupElement,
    ) -> DartId {
        self.edge_groups.push(EdgeGroup::cyclic(at_to));
        self.edge_groups.push(EdgeGroup::cyclic(at_from));
        self.graph.add_edge(name, from, to)
    }

    /// Cyclic edge between free vertex groups, images given as words.
    pub fn cyclic_free_edge(
        &mut self,
        name: &str,
        from: VertexId,
        to: VertexId,
        at_to: FreeWord,
        at_from: FreeWord,
    ) -> DartId {
        self.cyclic_edge(
            name,
            from,
            to,
            GroupElement::Free(at_to),
            GroupElement::Free(at_from),
        )
    }

    pub fn build(self) -> Result<GraphOfGroups, GogError> {
        GraphOfGroups::new(self.graph, self.vertex_groups, self.edge_groups)
    }

    pub fn build_arc(self) -> Result<Arc<GraphOfGroups>, GogError> {
        self.build().map(Arc::new)
    }
}
