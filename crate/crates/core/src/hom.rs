//! Homomorphisms between path groups given on generators, used for the
//! comparison maps produced by subdivision, quotients and blow-ups.

use std::sync::Arc;

use crate::error::GogError;
use crate::gog::GraphOfGroups;
use crate::graph::{DartId, VertexId};
use crate::group::{GroupElement, GroupIso, VertexGroup};
use crate::iso::GogIso;
use crate::word::{pi1_generators, pw_equal, PathWord};

/// Inclusion of a graph of groups into a larger one, by id maps.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub sub: Arc<GraphOfGroups>,
    pub vertices: Vec<VertexId>,
    pub darts: Vec<DartId>,
}

impl Embedding {
    pub fn map_word(&self, w: &PathWord) -> PathWord {
        w.relabel(|v| self.vertices[v.0], |d| self.darts[d.0])
    }
}

/// How a vertex group is carried into the codomain.
#[derive(Clone, Debug)]
pub enum VertexMap {
    /// The same group sits at the target vertex.
    Same,
    /// The vertex group is the fundamental group of an embedded subgraph.
    Expand(Embedding),
    /// Elements at a vertex of an embedded subgraph, carried into the
    /// group of the contracted vertex by conjugating along `prefix`.
    Collapse {
        sub: Arc<GraphOfGroups>,
        prefix: PathWord,
    },
    /// Apply an isomorphism onto `via`, then continue.
    Through {
        iso: GroupIso,
        via: VertexGroup,
        then: Box<VertexMap>,
    },
}

/// One homomorphism `π₁(domain) → π₁(codomain)` sending vertex groups by
/// [`VertexMap`]s and each stable letter to a word.
#[derive(Clone, Debug)]
pub struct HomStage {
    pub domain: Arc<GraphOfGroups>,
    pub codomain: Arc<GraphOfGroups>,
    pub vertex_target: Vec<VertexId>,
    pub vertex_maps: Vec<VertexMap>,
    pub dart_images: Vec<PathWord>,
}

impl HomStage {
    fn map_element(
        &self,
        map: &VertexMap,
        target: VertexId,
        x: &GroupElement,
        group: &VertexGroup,
    ) -> Result<PathWord, GogError> {
        match map {
            VertexMap::Same => Ok(PathWord::vertex(target, x.clone())),
            VertexMap::Expand(emb) => {
                let w = x.as_path().ok_or_else(|| {
                    GogError::GroupMismatch("expanded vertex holds a free element".into())
                })?;
                Ok(emb.map_word(w))
            }
            VertexMap::Collapse { sub, prefix } => {
                let at = PathWord::vertex(prefix.end(sub), x.clone());
                let loop_word = prefix
                    .concat(sub, &at)?
                    .concat(sub, &prefix.inverse(sub))?
                    .reduce(sub);
                Ok(PathWord::vertex(target, GroupElement::Pi1(loop_word)))
            }
            VertexMap::Through { iso, via, then } => {
                let y = iso.apply(x, group, via)?;
                self.map_element(then, target, &y, via)
            }
        }
    }

    pub fn apply(&self, w: &PathWord) -> Result<PathWord, GogError> {
        let g = &self.domain;
        let graph = g.graph();
        let v0 = w.start();
        let mut out = self.map_element(
            &self.vertex_maps[v0.0],
            self.vertex_target[v0.0],
            &w.syllables()[0],
            g.vertex_group(v0),
        )?;
        for (i, &d) in w.darts().iter().enumerate() {
            let v = graph.terminal(d);
            let piece = self.map_element(
                &self.vertex_maps[v.0],
                self.vertex_target[v.0],
                &w.syllables()[i + 1],
                g.vertex_group(v),
            )?;
            out = out
                .concat(&self.codomain, &self.dart_images[d.0])?
                .concat(&self.codomain, &piece)?;
        }
        Ok(out.reduce(&self.codomain))
    }
}

/// A composite of stages, applied first to last.
#[derive(Clone, Debug)]
pub struct PathHom {
    domain: Arc<GraphOfGroups>,
    stages: Vec<HomStage>,
}

impl PathHom {
    pub fn identity(gog: Arc<GraphOfGroups>) -> Self {
        PathHom {
            domain: gog,
            stages: Vec::new(),
        }
    }

    pub fn from_stage(stage: HomStage) -> Self {
        PathHom {
            domain: stage.domain.clone(),
            stages: vec![stage],
        }
    }

    /// The map induced on path groups by an isomorphism.
    pub fn from_iso(h: &GogIso) -> Result<Self, GogError> {
        let g = h.domain();
        let graph = g.graph();
        let vertex_maps = graph
            .vertices()
            .map(|v| VertexMap::Through {
                iso: h.vertex_iso(v).clone(),
                via: h.codomain().vertex_group(h.vertex_image(v)).clone(),
                then: Box::new(VertexMap::Same),
            })
            .collect();
        let dart_images = graph
            .darts()
            .map(|d| h.apply_word(&PathWord::stable(g, d)))
            .collect::<Result<_, _>>()?;
        Ok(PathHom::from_stage(HomStage {
            domain: g.clone(),
            codomain: h.codomain().clone(),
            vertex_target: graph.vertices().map(|v| h.vertex_image(v)).collect(),
            vertex_maps,
            dart_images,
        }))
    }

    pub fn domain(&self) -> &Arc<GraphOfGroups> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<GraphOfGroups> {
        self.stages.last().map_or(&self.domain, |s| &s.codomain)
    }

    pub fn stages(&self) -> &[HomStage] {
        &self.stages
    }

    /// `next ∘ self`.
    pub fn then(mut self, next: PathHom) -> Self {
        self.stages.extend(next.stages);
        self
    }

    /// Image of a vertex under the underlying graph maps.
    pub fn vertex_target(&self, v: VertexId) -> VertexId {
        self.stages.iter().fold(v, |v, s| s.vertex_target[v.0])
    }

    pub fn apply(&self, w: &PathWord) -> Result<PathWord, GogError> {
        let mut cur = w.reduce(&self.domain);
        for s in &self.stages {
            cur = s.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// Checks `θ ∘ A_* = B_* ∘ θ` on the standard generators of `π₁(domain, v)`,
/// where `A` is an automorphism of the domain of `θ` and `B` of its
/// codomain.
pub fn check_semi_conjugation(
    theta: &PathHom,
    a: &GogIso,
    b: &GogIso,
    v: VertexId,
) -> Result<bool, GogError> {
    let dom = theta.domain();
    let cod = theta.codomain();
    for x in pi1_generators(dom, v)? {
        let lhs = theta.apply(&a.apply_word(&x)?)?;
        let rhs = b.apply_word(&theta.apply(&x)?)?;
        if lhs.start() != rhs.start() || lhs.end(cod) != rhs.end(cod) {
            return Ok(false);
        }
        if !pw_equal(cod, &lhs, &rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}
