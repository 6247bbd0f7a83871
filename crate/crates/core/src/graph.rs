//! Serre graphs: darts with a fixed-point-free involution and a terminal map.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{GogError, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DartId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dart {
    pub name: String,
    pub bar: DartId,
    pub terminal: VertexId,
}

/// A graph in the sense of Serre. Values may be malformed; `validate`
/// reports every violation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SerreGraph {
    vertices: Vec<String>,
    darts: Vec<Dart>,
}

/// Name of the reverse dart created by [`SerreGraph::add_edge`].
pub fn bar_name(name: &str) -> String {
    match name.strip_prefix('~') {
        Some(rest) => rest.to_string(),
        None => format!("~{name}"),
    }
}

impl SerreGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Resolves a graph given by names: `(dart, bar, terminal)` triples.
    pub fn from_named(
        vertices: Vec<String>,
        darts: &[(String, String, String)],
    ) -> Result<Self, GogError> {
        let mut g = SerreGraph {
            vertices,
            darts: Vec::new(),
        };
        for (name, _, terminal) in darts {
            let t = g
                .vertex(terminal)
                .ok_or_else(|| GogError::UnknownVertex(terminal.clone()))?;
            g.darts.push(Dart {
                name: name.clone(),
                bar: DartId(usize::MAX),
                terminal: t,
            });
        }
        for (i, (_, bar, _)) in darts.iter().enumerate() {
            let b = g
                .dart(bar)
                .ok_or_else(|| GogError::UnknownDart(bar.clone()))?;
            g.darts[i].bar = b;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        self.vertices.push(name.into());
        VertexId(self.vertices.len() - 1)
    }

    /// Adds the edge `{e, ~e}` with `e` running from `from` to `to`, and
    /// returns `e`.
    pub fn add_edge(&mut self, name: impl Into<String>, from: VertexId, to: VertexId) -> DartId {
        let name = name.into();
        let e = DartId(self.darts.len());
        let eb = DartId(self.darts.len() + 1);
        self.darts.push(Dart {
            name: name.clone(),
            bar: eb,
            terminal: to,
        });
        self.darts.push(Dart {
            name: bar_name(&name),
            bar: e,
            terminal: from,
        });
        e
    }

    /// Pushes a single dart without pairing it.
    pub fn push_dart(&mut self, dart: Dart) -> DartId {
        self.darts.push(dart);
        DartId(self.darts.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn darts(&self) -> impl Iterator<Item = DartId> + '_ {
        (0..self.darts.len()).map(DartId)
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn dart(&self, name: &str) -> Option<DartId> {
        self.darts.iter().position(|d| d.name == name).map(DartId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn dart_name(&self, d: DartId) -> &str {
        &self.darts[d.0].name
    }

    pub fn dart_data(&self, d: DartId) -> &Dart {
        &self.darts[d.0]
    }

    pub fn bar(&self, d: DartId) -> DartId {
        self.darts[d.0].bar
    }

    pub fn terminal(&self, d: DartId) -> VertexId {
        self.darts[d.0].terminal
    }

    pub fn initial(&self, d: DartId) -> VertexId {
        self.terminal(self.bar(d))
    }

    /// Darts ending at `v`.
    pub fn incoming(&self, v: VertexId) -> Vec<DartId> {
        self.darts().filter(|&d| self.terminal(d) == v).collect()
    }

    /// Number of darts ending at `v`.
    pub fn valence(&self, v: VertexId) -> usize {
        self.darts.iter().filter(|d| d.terminal == v).count()
    }

    /// Canonical representative of each edge: the dart with smaller index.
    pub fn edges(&self) -> Vec<DartId> {
        self.darts().filter(|&d| d.0 < self.bar(d).0).collect()
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        if self.vertices.is_empty() {
            report.push("graph", "graph has no vertices");
            return report;
        }
        let mut names = BTreeSet::new();
        for v in &self.vertices {
            if !names.insert(v.as_str()) {
                report.push(v.clone(), "duplicate vertex name");
            }
        }
        let mut dnames = BTreeSet::new();
        let n = self.darts.len();
        let mut well_formed = true;
        for (i, d) in self.darts.iter().enumerate() {
            if !dnames.insert(d.name.as_str()) {
                report.push(d.name.clone(), "duplicate dart name");
            }
            if d.terminal.0 >= self.vertices.len() {
                report.push(d.name.clone(), "terminal vertex out of range");
                well_formed = false;
            }
            if d.bar.0 >= n {
                report.push(d.name.clone(), "reverse dart out of range");
                well_formed = false;
                continue;
            }
            if d.bar.0 == i {
                report.push(d.name.clone(), "involution has a fixed point");
            } else if self.darts[d.bar.0].bar.0 != i {
                report.push(d.name.clone(), "bar is not an involution");
            }
        }
        if well_formed {
            let reach = self.reachable(VertexId(0));
            if let Some(v) = reach.iter().position(|r| !r) {
                report.push(self.vertices[v].clone(), "graph is disconnected");
            }
        }
        report
    }

    fn reachable(&self, root: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for d in &self.darts {
            let a = self.darts[d.bar.0].terminal.0;
            adj[a].push(d.terminal.0);
            adj[d.terminal.0].push(a);
        }
        let mut queue = VecDeque::from([root.0]);
        seen[root.0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Breadth-first spanning tree rooted at `root`, scanning outgoing darts
    /// in name order.
    pub fn spanning_tree(&self, root: VertexId) -> Result<SpanningTree, GogError> {
        if root.0 >= self.vertices.len() {
            return Err(GogError::UnknownVertex(format!("#{}", root.0)));
        }
        let mut outgoing: Vec<Vec<DartId>> = vec![Vec::new(); self.vertices.len()];
        for d in self.darts() {
            outgoing[self.initial(d).0].push(d);
        }
        for out in &mut outgoing {
            out.sort_by(|a, b| self.dart_name(*a).cmp(self.dart_name(*b)));
        }
        let mut parent = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        let mut order = vec![root];
        let mut darts = Vec::new();
        seen[root.0] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &d in &outgoing[v.0] {
                let t = self.terminal(d);
                if !seen[t.0] {
                    seen[t.0] = true;
                    parent[t.0] = Some(d);
                    darts.push(d);
                    order.push(t);
                }
            }
        }
        if order.len() != self.vertices.len() {
            return Err(GogError::Precondition("graph is disconnected".into()));
        }
        Ok(SpanningTree {
            root,
            order,
            parent,
            darts,
        })
    }
}

/// A spanning tree with its darts oriented away from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: VertexId,
    /// Vertices in discovery order, root first.
    pub order: Vec<VertexId>,
    /// Tree dart ending at each vertex; `None` at the root.
    pub parent: Vec<Option<DartId>>,
    /// Tree darts in discovery order.
    pub darts: Vec<DartId>,
}

impl SpanningTree {
    /// Darts of the tree path from the root to `v`.
    pub fn path_to(&self, graph: &SerreGraph, v: VertexId) -> Vec<DartId> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(d) = self.parent[cur.0] {
            path.push(d);
            cur = graph.initial(d);
        }
        path.reverse();
        path
    }

    pub fn contains(&self, graph: &SerreGraph, d: DartId) -> bool {
        self.darts.contains(&d) || self.darts.contains(&graph.bar(d))
    }
}

/// A choice of one dart from each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    positive: Vec<bool>,
}

impl Orientation {
    /// The orientation taking the lower-indexed dart of each edge.
    pub fn canonical(graph: &SerreGraph) -> Self {
        Orientation {
            positive: graph.darts().map(|d| d.0 < graph.bar(d).0).collect(),
        }
    }

    pub fn new(graph: &SerreGraph, positive: &[DartId]) -> Result<Self, GogError> {
        let mut flags = vec![false; graph.dart_count()];
        for &d in positive {
            flags[d.0] = true;
        }
        for d in graph.darts() {
            if flags[d.0] == flags[graph.bar(d).0] {
                return Err(GogError::Precondition(format!(
                    "orientation must pick exactly one of `{}` and its reverse",
                    graph.dart_name(d)
                )));
            }
        }
        Ok(Orientation { positive: flags })
    }

    pub fn is_positive(&self, d: DartId) -> bool {
        self.positive[d.0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_has_empty_tree() {
        let mut g = SerreGraph::new();
        let v = g.add_vertex("v");
        g.add_edge("e", v, v);
        assert!(g.validate().is_valid());
        assert!(g.spanning_tree(v).unwrap().darts.is_empty());
    }

    #[test]
    fn fixed_point_reported() {
        let mut g = SerreGraph::new();
        let v = g.add_vertex("v");
        g.push_dart(Dart {
            name: "e".into(),
            bar: DartId(0),
            terminal: v,
        });
        let r = g.validate();
        assert!(r.violations.iter().any(|x| x.message.contains("fixed point")));
    }
}
