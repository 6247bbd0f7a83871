//! Vertex groups, their elements, and isomorphisms between vertex groups.

use std::sync::Arc;

use crate::error::{GogError, Report};
use crate::free_word::{invert_automorphism, FreeWord};
use crate::gog::GraphOfGroups;
use crate::graph::VertexId;
use crate::iso::GogIso;
use crate::word::{self, PathWord};

/// A free group with named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    names: Vec<String>,
}

/// Default basis names: `a`, `b`, ... then `g26`, `g27`, ...
pub fn default_names(rank: u32) -> Vec<String> {
    (0..rank)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

impl FreeGroup {
    pub fn new(rank: u32) -> Self {
        FreeGroup {
            names: default_names(rank),
        }
    }

    pub fn with_names<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        FreeGroup {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// The fundamental group of a graph of groups based at a vertex.
#[derive(Clone, Debug)]
pub struct Pi1Group {
    pub gog: Arc<GraphOfGroups>,
    pub base: VertexId,
}

impl PartialEq for Pi1Group {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && (Arc::ptr_eq(&self.gog, &other.gog) || *self.gog == *other.gog)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VertexGroup {
    Free(FreeGroup),
    Pi1(Pi1Group),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Free(FreeWord),
    Pi1(PathWord),
}

impl GroupElement {
    pub fn as_free(&self) -> Option<&FreeWord> {
        match self {
            GroupElement::Free(w) => Some(w),
            GroupElement::Pi1(_) => None,
        }
    }

    pub fn as_path(&self) -> Option<&PathWord> {
        match self {
            GroupElement::Pi1(w) => Some(w),
            GroupElement::Free(_) => None,
        }
    }
}

impl VertexGroup {
    pub fn free(rank: u32) -> Self {
        VertexGroup::Free(FreeGroup::new(rank))
    }

    pub fn free_named<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VertexGroup::Free(FreeGroup::with_names(names))
    }

    pub fn pi1(gog: Arc<GraphOfGroups>, base: VertexId) -> Self {
        VertexGroup::Pi1(Pi1Group { gog, base })
    }

    /// Whether both describe the same abstract group, ignoring basis names.
    pub fn same_group(&self, other: &VertexGroup) -> bool {
        match (self, other) {
            (VertexGroup::Free(a), VertexGroup::Free(b)) => a.rank() == b.rank(),
            (VertexGroup::Pi1(a), VertexGroup::Pi1(b)) => a == b,
            _ => false,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            VertexGroup::Free(_) => GroupElement::Free(FreeWord::identity()),
            VertexGroup::Pi1(p) => GroupElement::Pi1(PathWord::identity(&p.gog, p.base)),
        }
    }

    /// A generating set: the basis, or the standard generators of the
    /// fundamental group.
    pub fn generators(&self) -> Result<Vec<GroupElement>, GogError> {
        match self {
            VertexGroup::Free(f) => Ok((0..f.rank())
                .map(|i| GroupElement::Free(FreeWord::generator(i)))
                .collect()),
            VertexGroup::Pi1(p) => Ok(word::pi1_generators(&p.gog, p.base)?
                .into_iter()
                .map(GroupElement::Pi1)
                .collect()),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (VertexGroup::Free(f), GroupElement::Free(w)) => {
                w.max_generator().is_none_or(|g| g < f.rank())
            }
            (VertexGroup::Pi1(p), GroupElement::Pi1(w)) => {
                w.start() == p.base && w.end(&p.gog) == p.base && w.is_well_formed(&p.gog)
            }
            _ => false,
        }
    }

    fn check(&self, x: &GroupElement) {
        debug_assert!(self.contains(x), "element {x:?} is not in {self:?}");
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.check(a);
        self.check(b);
        match (self, a, b) {
            (VertexGroup::Free(_), GroupElement::Free(x), GroupElement::Free(y)) => {
                GroupElement::Free(x.mul(y))
            }
            (VertexGroup::Pi1(p), GroupElement::Pi1(x), GroupElement::Pi1(y)) => GroupElement::Pi1(
                x.concat(&p.gog, y)
                    .expect("closed words at the same base")
                    .reduce(&p.gog),
            ),
            _ => panic!("element kind does not match its vertex group"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (VertexGroup::Free(_), GroupElement::Free(x)) => GroupElement::Free(x.inverse()),
            (VertexGroup::Pi1(p), GroupElement::Pi1(x)) => GroupElement::Pi1(x.inverse(&p.gog)),
            _ => panic!("element kind does not match its vertex group"),
        }
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        match (self, a) {
            (VertexGroup::Free(_), GroupElement::Free(x)) => GroupElement::Free(x.pow(k)),
            _ => {
                let base = if k < 0 { self.inv(a) } else { a.clone() };
                let mut acc = self.identity();
                for _ in 0..k.unsigned_abs() {
                    acc = self.mul(&acc, &base);
                }
                acc
            }
        }
    }

    /// `c * x * c^-1`.
    pub fn conjugate(&self, c: &GroupElement, x: &GroupElement) -> GroupElement {
        self.mul(&self.mul(c, x), &self.inv(c))
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (VertexGroup::Free(_), GroupElement::Free(x)) => x.is_identity(),
            (VertexGroup::Pi1(p), GroupElement::Pi1(x)) => x.is_identity(&p.gog),
            _ => false,
        }
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> bool {
        match (self, a, b) {
            (VertexGroup::Free(_), GroupElement::Free(x), GroupElement::Free(y)) => x == y,
            (VertexGroup::Pi1(_), GroupElement::Pi1(_), GroupElement::Pi1(_)) => {
                self.is_identity(&self.mul(a, &self.inv(b)))
            }
            _ => false,
        }
    }

    /// Canonical representative: reduced words for fundamental groups.
    pub fn normalize(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (VertexGroup::Pi1(p), GroupElement::Pi1(x)) => GroupElement::Pi1(x.reduce(&p.gog)),
            _ => a.clone(),
        }
    }

    pub fn commute(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.equal(&self.mul(a, b), &self.mul(b, a))
    }

    /// `Some(k)` with `w = u^k`; `None` when no such `k` exists or `u` is
    /// trivial and `w` is not.
    pub fn power_index(&self, w: &GroupElement, u: &GroupElement) -> Option<i64> {
        if self.is_identity(w) {
            return Some(0);
        }
        match (self, w, u) {
            (VertexGroup::Free(_), GroupElement::Free(x), GroupElement::Free(y)) => {
                x.power_of(y).ok().flatten()
            }
            (VertexGroup::Pi1(p), GroupElement::Pi1(x), GroupElement::Pi1(y)) => {
                word::subgroup_power_membership(&p.gog, x, y).ok().flatten()
            }
            _ => None,
        }
    }

    /// A length used to bound searches: letters, or path length plus the
    /// syllable lengths.
    pub fn element_size(&self, a: &GroupElement) -> usize {
        match (self, a) {
            (_, GroupElement::Free(x)) => x.len(),
            (VertexGroup::Pi1(p), GroupElement::Pi1(x)) => x.size(&p.gog),
            _ => 0,
        }
    }

    pub fn display(&self, a: &GroupElement) -> String {
        match (self, a) {
            (VertexGroup::Free(f), GroupElement::Free(x)) => x.display_with(f.names()),
            (VertexGroup::Pi1(p), GroupElement::Pi1(x)) => {
                format!("[{}]", crate::syntax::format_word(&p.gog, x))
            }
            _ => format!("{a:?}"),
        }
    }
}

/// An isomorphism between two vertex groups.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupIso {
    Identity,
    /// Images of the basis of a free domain.
    Images(Vec<GroupElement>),
    /// The map induced on fundamental groups by an isomorphism of graphs of
    /// groups, based at `base` in its domain.
    Local { iso: Arc<GogIso>, base: VertexId },
}

impl GroupIso {
    pub fn free_images(images: Vec<FreeWord>) -> Self {
        GroupIso::Images(images.into_iter().map(GroupElement::Free).collect())
    }

    pub fn apply(
        &self,
        x: &GroupElement,
        _dom: &VertexGroup,
        cod: &VertexGroup,
    ) -> Result<GroupElement, GogError> {
        match self {
            GroupIso::Identity => Ok(x.clone()),
            GroupIso::Images(images) => {
                let w = x.as_free().ok_or_else(|| {
                    GogError::GroupMismatch("basis images given for a non-free domain".into())
                })?;
                let mut acc = cod.identity();
                for &(g, k) in w.runs() {
                    let img = images.get(g as usize).ok_or_else(|| {
                        GogError::GroupMismatch(format!("no image for generator {g}"))
                    })?;
                    acc = cod.mul(&acc, &cod.pow(img, k));
                }
                Ok(acc)
            }
            GroupIso::Local { iso, base } => {
                let w = x.as_path().ok_or_else(|| {
                    GogError::GroupMismatch("local isomorphism applied to a free element".into())
                })?;
                if w.start() != *base {
                    return Err(GogError::Endpoint(
                        "element is not based at the isomorphism's base vertex".into(),
                    ));
                }
                Ok(GroupElement::Pi1(iso.apply_word(w)?))
            }
        }
    }

    /// Whether both maps agree on the generators of `dom`, an automorphism
    /// domain.
    pub fn equal_on(&self, other: &GroupIso, dom: &VertexGroup) -> Result<bool, GogError> {
        for g in dom.generators()? {
            if !dom.equal(&self.apply(&g, dom, dom)?, &other.apply(&g, dom, dom)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the map fixes every generator of `dom` (with `dom` as its
    /// own codomain).
    pub fn is_identity_on(&self, dom: &VertexGroup) -> Result<bool, GogError> {
        if matches!(self, GroupIso::Identity) {
            return Ok(true);
        }
        for g in dom.generators()? {
            let img = self.apply(&g, dom, dom)?;
            if !dom.equal(&img, &g) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `second ∘ first` where `first: dom → mid` and `second: mid → cod`.
    pub fn compose(
        first: &GroupIso,
        second: &GroupIso,
        dom: &VertexGroup,
        mid: &VertexGroup,
        cod: &VertexGroup,
    ) -> Result<GroupIso, GogError> {
        match (first, second) {
            (GroupIso::Identity, s) => Ok(s.clone()),
            (f, GroupIso::Identity) => Ok(f.clone()),
            _ => match dom {
                VertexGroup::Free(_) => {
                    let mut images = Vec::new();
                    for g in dom.generators()? {
                        let m = first.apply(&g, dom, mid)?;
                        images.push(cod.normalize(&second.apply(&m, mid, cod)?));
                    }
                    Ok(GroupIso::Images(images))
                }
                VertexGroup::Pi1(_) => match (first, second) {
                    (GroupIso::Local { iso: a, base }, GroupIso::Local { iso: b, .. }) => {
                        Ok(GroupIso::Local {
                            iso: Arc::new(GogIso::compose(b, a)?),
                            base: *base,
                        })
                    }
                    _ => Err(GogError::Unsupported(
                        "composition on a fundamental group needs induced isomorphisms".into(),
                    )),
                },
            },
        }
    }

    /// The inverse, as a map `cod → dom`.
    pub fn invert(&self, dom: &VertexGroup, cod: &VertexGroup) -> Result<GroupIso, GogError> {
        match self {
            GroupIso::Identity => Ok(GroupIso::Identity),
            GroupIso::Images(images) => {
                let (VertexGroup::Free(fd), VertexGroup::Free(fc)) = (dom, cod) else {
                    return Err(GogError::Unsupported(
                        "inverting a free-to-fundamental-group isomorphism".into(),
                    ));
                };
                if fd.rank() != fc.rank() {
                    return Err(GogError::GroupMismatch("ranks differ".into()));
                }
                let words: Vec<FreeWord> = images
                    .iter()
                    .map(|x| x.as_free().cloned())
                    .collect::<Option<_>>()
                    .ok_or_else(|| GogError::GroupMismatch("non-free image".into()))?;
                Ok(GroupIso::free_images(invert_automorphism(&words, fd.rank())?))
            }
            GroupIso::Local { iso, base } => {
                let inv = iso.invert()?;
                let b = iso.vertex_image(*base);
                Ok(GroupIso::Local {
                    iso: Arc::new(inv),
                    base: b,
                })
            }
        }
    }

    pub fn validate(&self, dom: &VertexGroup, cod: &VertexGroup) -> Report {
        let mut report = Report::new();
        match self {
            GroupIso::Identity => {
                if !dom.same_group(cod) {
                    report.push("iso", "identity between different groups");
                }
            }
            GroupIso::Images(images) => {
                let VertexGroup::Free(fd) = dom else {
                    report.push("iso", "basis images need a free domain");
                    return report;
                };
                if images.len() != fd.rank() as usize {
                    report.push(
                        "iso",
                        format!("{} images for a basis of size {}", images.len(), fd.rank()),
                    );
                    return report;
                }
                for (i, img) in images.iter().enumerate() {
                    if !cod.contains(img) {
                        report.push(
                            fd.names()[i].clone(),
                            "image does not lie in the codomain",
                        );
                    }
                }
                if !report.is_valid() {
                    return report;
                }
                if let VertexGroup::Free(_) = cod {
                    if let Err(e) = self.invert(dom, cod) {
                        report.push("iso", format!("not an automorphism: {e}"));
                    }
                }
            }
            GroupIso::Local { iso, base } => {
                let (VertexGroup::Pi1(pd), VertexGroup::Pi1(pc)) = (dom, cod) else {
                    report.push("iso", "induced isomorphism between non-fundamental groups");
                    return report;
                };
                if !(Arc::ptr_eq(&pd.gog, iso.domain()) || *pd.gog == **iso.domain()) {
                    report.push("iso", "domain graph of groups differs");
                }
                if !(Arc::ptr_eq(&pc.gog, iso.codomain()) || *pc.gog == **iso.codomain()) {
                    report.push("iso", "codomain graph of groups differs");
                }
                if *base != pd.base {
                    report.push("iso", "base vertex differs from the domain base");
                } else if iso.vertex_image(*base) != pc.base {
                    report.push("iso", "base vertex is not sent to the codomain base");
                }
                report.absorb("local", iso.validate());
            }
        }
        report
    }
}
