//! Connected words in the path group and the algorithms on them.
//!
//! A [`PathWord`] is `r0 t1 r1 ... tq rq` where the `t_i` are stable letters
//! of darts forming an edge path and each `r_i` lies in the vertex group at
//! the corresponding vertex. Connectedness holds by construction.

use crate::error::GogError;
use crate::gog::GraphOfGroups;
use crate::graph::{DartId, VertexId};
use crate::group::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWord {
    start: VertexId,
    darts: Vec<DartId>,
    syllables: Vec<GroupElement>,
}

/// Input letter for [`PathWord::from_letters`]: a vertex-group element
/// tagged with its vertex, or a stable letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathLetter {
    Vertex(VertexId, GroupElement),
    Stable(DartId),
}

impl PathWord {
    pub fn identity(gog: &GraphOfGroups, v: VertexId) -> Self {
        PathWord {
            start: v,
            darts: Vec::new(),
            syllables: vec![gog.vertex_group(v).identity()],
        }
    }

    /// The length-zero word `g` at `v`.
    pub fn vertex(v: VertexId, g: GroupElement) -> Self {
        PathWord {
            start: v,
            darts: Vec::new(),
            syllables: vec![g],
        }
    }

    /// The stable letter `t_d`.
    pub fn stable(gog: &GraphOfGroups, d: DartId) -> Self {
        let g = gog.graph();
        PathWord {
            start: g.initial(d),
            darts: vec![d],
            syllables: vec![
                gog.vertex_group(g.initial(d)).identity(),
                gog.vertex_group(g.terminal(d)).identity(),
            ],
        }
    }

    /// Product of stable letters along an edge path starting at `start`.
    pub fn along(gog: &GraphOfGroups, start: VertexId, darts: &[DartId]) -> Result<Self, GogError> {
        let letters: Vec<PathLetter> = darts.iter().map(|&d| PathLetter::Stable(d)).collect();
        PathWord::from_letters(gog, Some(start), &letters)
    }

    /// Builds a word from letters, rejecting disconnected input.
    pub fn from_letters(
        gog: &GraphOfGroups,
        start: Option<VertexId>,
        letters: &[PathLetter],
    ) -> Result<Self, GogError> {
        let graph = gog.graph();
        let mut cur = start;
        let mut word: Option<PathWord> = start.map(|v| PathWord::identity(gog, v));
        for (i, letter) in letters.iter().enumerate() {
            match letter {
                PathLetter::Vertex(v, g) => {
                    if v.0 >= graph.vertex_count() {
                        return Err(GogError::UnknownVertex(format!("#{}", v.0)));
                    }
                    match cur {
                        None => {
                            cur = Some(*v);
                            word = Some(PathWord::identity(gog, *v));
                        }
                        Some(c) if c != *v => {
                            return Err(GogError::Disconnected {
                                position: i,
                                detail: format!(
                                    "element of `{}` where the path is at `{}`",
                                    graph.vertex_name(*v),
                                    graph.vertex_name(c)
                                ),
                            })
                        }
                        _ => {}
                    }
                    let group = gog.vertex_group(*v);
                    if !group.contains(g) {
                        return Err(GogError::GroupMismatch(format!(
                            "letter {i} is not an element of the group at `{}`",
                            graph.vertex_name(*v)
                        )));
                    }
                    let w = word.as_mut().expect("set above");
                    let last = w.syllables.last_mut().expect("nonempty");
                    *last = group.mul(last, g);
                }
                PathLetter::Stable(d) => {
                    if d.0 >= graph.dart_count() {
                        return Err(GogError::UnknownDart(format!("#{}", d.0)));
                    }
                    let from = graph.initial(*d);
                    match cur {
                        None => {
                            word = Some(PathWord::identity(gog, from));
                        }
                        Some(c) if c != from => {
                            return Err(GogError::Disconnected {
                                position: i,
                                detail: format!(
                                    "`t_{}` leaves `{}` but the path is at `{}`",
                                    graph.dart_name(*d),
                                    graph.vertex_name(from),
                                    graph.vertex_name(c)
                                ),
                            })
                        }
                        _ => {}
                    }
                    let to = graph.terminal(*d);
                    let w = word.as_mut().expect("set above");
                    w.darts.push(*d);
                    w.syllables.push(gog.vertex_group(to).identity());
                    cur = Some(to);
                }
            }
        }
        word.ok_or_else(|| GogError::Precondition("an empty word needs a base vertex".into()))
    }

    /// Assembles a word from its syllables and darts, checking it.
    pub fn from_parts(
        gog: &GraphOfGroups,
        start: VertexId,
        darts: Vec<DartId>,
        syllables: Vec<GroupElement>,
    ) -> Result<Self, GogError> {
        let w = PathWord {
            start,
            darts,
            syllables,
        };
        if !w.is_well_formed(gog) {
            return Err(GogError::Precondition("malformed path word".into()));
        }
        Ok(w)
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self, gog: &GraphOfGroups) -> VertexId {
        match self.darts.last() {
            Some(&d) => gog.graph().terminal(d),
            None => self.start,
        }
    }

    pub fn darts(&self) -> &[DartId] {
        &self.darts
    }

    pub fn syllables(&self) -> &[GroupElement] {
        &self.syllables
    }

    /// Number of stable letters.
    pub fn path_length(&self) -> usize {
        self.darts.len()
    }

    /// Vertex of syllable `i`.
    pub fn syllable_vertex(&self, gog: &GraphOfGroups, i: usize) -> VertexId {
        if i == 0 {
            self.start
        } else {
            gog.graph().terminal(self.darts[i - 1])
        }
    }

    pub fn is_closed(&self, gog: &GraphOfGroups) -> bool {
        self.end(gog) == self.start
    }

    /// Whether this is an element of the fundamental group at `v`.
    pub fn is_pi1(&self, gog: &GraphOfGroups, v: VertexId) -> bool {
        self.start == v && self.is_well_formed(gog) && self.is_closed(gog)
    }

    pub fn is_well_formed(&self, gog: &GraphOfGroups) -> bool {
        let graph = gog.graph();
        if self.start.0 >= graph.vertex_count() || self.syllables.len() != self.darts.len() + 1 {
            return false;
        }
        let mut cur = self.start;
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                let d = self.darts[i - 1];
                if d.0 >= graph.dart_count() || graph.initial(d) != cur {
                    return false;
                }
                cur = graph.terminal(d);
            }
            if !gog.vertex_group(cur).contains(s) {
                return false;
            }
        }
        true
    }

    /// Path length plus syllable sizes.
    pub fn size(&self, gog: &GraphOfGroups) -> usize {
        self.darts.len()
            + self
                .syllables
                .iter()
                .enumerate()
                .map(|(i, s)| gog.vertex_group(self.syllable_vertex(gog, i)).element_size(s))
                .sum::<usize>()
    }

    /// Concatenation without reduction.
    pub fn concat(&self, gog: &GraphOfGroups, other: &PathWord) -> Result<PathWord, GogError> {
        let end = self.end(gog);
        if end != other.start {
            return Err(GogError::Endpoint(format!(
                "word ends at `{}` but the next starts at `{}`",
                gog.graph().vertex_name(end),
                gog.graph().vertex_name(other.start)
            )));
        }
        let mut out = self.clone();
        let group = gog.vertex_group(end);
        let last = out.syllables.last_mut().expect("nonempty");
        *last = group.mul(last, &other.syllables[0]);
        out.darts.extend_from_slice(&other.darts);
        out.syllables.extend_from_slice(&other.syllables[1..]);
        Ok(out)
    }

    /// Reduced product.
    pub fn mul(&self, gog: &GraphOfGroups, other: &PathWord) -> Result<PathWord, GogError> {
        Ok(self.concat(gog, other)?.reduce(gog))
    }

    pub fn inverse(&self, gog: &GraphOfGroups) -> PathWord {
        let graph = gog.graph();
        let end = self.end(gog);
        let darts: Vec<DartId> = self.darts.iter().rev().map(|&d| graph.bar(d)).collect();
        let n = self.syllables.len();
        let syllables = (0..n)
            .rev()
            .map(|i| {
                gog.vertex_group(self.syllable_vertex(gog, i))
                    .inv(&self.syllables[i])
            })
            .collect();
        PathWord {
            start: end,
            darts,
            syllables,
        }
    }

    pub fn pow(&self, gog: &GraphOfGroups, k: i64) -> Result<PathWord, GogError> {
        let base = if k < 0 { self.inverse(gog) } else { self.clone() };
        let mut acc = PathWord::identity(gog, self.start);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(gog, &base)?;
        }
        Ok(acc)
    }

    /// Normal form under `t_e f_e(g) t_ē → f_ē(g)`; also normalizes the
    /// syllables of fundamental-group vertex groups.
    pub fn reduce(&self, gog: &GraphOfGroups) -> PathWord {
        let graph = gog.graph();
        let mut darts: Vec<DartId> = Vec::with_capacity(self.darts.len());
        let first = gog.vertex_group(self.start).normalize(&self.syllables[0]);
        let mut syllables: Vec<GroupElement> = vec![first];
        for (i, &d) in self.darts.iter().enumerate() {
            let mut cancelled = false;
            if let Some(&prev) = darts.last() {
                if prev == graph.bar(d) {
                    let mid = syllables.last().expect("nonempty");
                    if let Some(k) = gog.edge_membership(prev, mid) {
                        darts.pop();
                        syllables.pop();
                        let at = gog.vertex_group(graph.terminal(d));
                        let last = syllables.last_mut().expect("nonempty");
                        *last = at.mul(last, &gog.edge_apply(d, k));
                        cancelled = true;
                    }
                }
            }
            if !cancelled {
                darts.push(d);
                syllables.push(gog.vertex_group(graph.terminal(d)).identity());
            }
            let at = gog.vertex_group(graph.terminal(d));
            let last = syllables.last_mut().expect("nonempty");
            *last = at.mul(last, &self.syllables[i + 1]);
        }
        PathWord {
            start: self.start,
            darts,
            syllables,
        }
    }

    pub fn is_reduced(&self, gog: &GraphOfGroups) -> bool {
        self.reduce(gog).darts.len() == self.darts.len()
    }

    pub fn is_identity(&self, gog: &GraphOfGroups) -> bool {
        let r = self.reduce(gog);
        r.darts.is_empty() && gog.vertex_group(r.start).is_identity(&r.syllables[0])
    }

    /// Maps every syllable and dart through the given relabelling into
    /// another graph of groups that has the same groups at corresponding
    /// vertices.
    pub fn relabel(&self, vertex: impl Fn(VertexId) -> VertexId, dart: impl Fn(DartId) -> DartId) -> PathWord {
        PathWord {
            start: vertex(self.start),
            darts: self.darts.iter().map(|&d| dart(d)).collect(),
            syllables: self.syllables.clone(),
        }
    }
}

/// Equality in the path group; words must share their endpoints.
pub fn pw_equal(gog: &GraphOfGroups, a: &PathWord, b: &PathWord) -> Result<bool, GogError> {
    if a.start != b.start || a.end(gog) != b.end(gog) {
        return Err(GogError::Endpoint("words have different endpoints".into()));
    }
    Ok(a.concat(gog, &b.inverse(gog))?.is_identity(gog))
}

/// Returns `(core, conj)` with `w = conj * core * conj^-1` and `core`
/// cyclically reduced.
pub fn cyclic_reduce(gog: &GraphOfGroups, w: &PathWord) -> Result<(PathWord, PathWord), GogError> {
    if !w.is_closed(gog) {
        return Err(GogError::Precondition("cyclic reduction needs a closed word".into()));
    }
    let graph = gog.graph();
    let mut core = w.reduce(gog);
    let mut conj = PathWord::identity(gog, w.start);
    loop {
        let q = core.darts.len();
        if q < 2 || core.darts[0] != graph.bar(core.darts[q - 1]) {
            break;
        }
        let at = gog.vertex_group(core.start);
        let junction = at.mul(&core.syllables[q], &core.syllables[0]);
        if gog.edge_membership(core.darts[q - 1], &junction).is_none() {
            break;
        }
        let c = PathWord {
            start: core.start,
            darts: vec![core.darts[0]],
            syllables: vec![
                core.syllables[0].clone(),
                gog.terminal_group(core.darts[0]).identity(),
            ],
        };
        core = c.inverse(gog).concat(gog, &core)?.concat(gog, &c)?.reduce(gog);
        conj = conj.concat(gog, &c)?.reduce(gog);
    }
    Ok((core, conj))
}

/// Tree path from the root to `v`, as stable letters.
pub fn tree_word(
    gog: &GraphOfGroups,
    tree: &crate::graph::SpanningTree,
    v: VertexId,
) -> PathWord {
    let path = tree.path_to(gog.graph(), v);
    PathWord::along(gog, tree.root, &path).expect("tree paths are connected")
}

/// Standard generating set of the fundamental group at `v`: conjugated
/// vertex-group generators along tree paths, then one loop per non-tree
/// edge.
pub fn pi1_generators(gog: &GraphOfGroups, v: VertexId) -> Result<Vec<PathWord>, GogError> {
    let graph = gog.graph();
    let tree = graph.spanning_tree(v)?;
    let mut out = Vec::new();
    for &w in &tree.order {
        let gamma = tree_word(gog, &tree, w);
        for g in gog.vertex_group(w).generators()? {
            let x = gamma
                .concat(gog, &PathWord::vertex(w, g))?
                .concat(gog, &gamma.inverse(gog))?;
            out.push(x.reduce(gog));
        }
    }
    for d in graph.edges() {
        if tree.contains(graph, d) {
            continue;
        }
        let a = tree_word(gog, &tree, graph.initial(d));
        let b = tree_word(gog, &tree, graph.terminal(d));
        let x = a
            .concat(gog, &PathWord::stable(gog, d))?
            .concat(gog, &b.inverse(gog))?;
        out.push(x.reduce(gog));
    }
    Ok(out)
}

/// Conjugation by a path from `from` to `to`, carrying loops at `to` to
/// loops at `from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChange {
    pub path: PathWord,
}

impl BaseChange {
    pub fn new(path: PathWord) -> Self {
        BaseChange { path }
    }

    pub fn from(&self) -> VertexId {
        self.path.start
    }

    pub fn apply(&self, gog: &GraphOfGroups, x: &PathWord) -> Result<PathWord, GogError> {
        let to = self.path.end(gog);
        if x.start != to || !x.is_closed(gog) {
            return Err(GogError::Endpoint("element is not a loop at the path's end".into()));
        }
        Ok(self
            .path
            .concat(gog, x)?
            .concat(gog, &self.path.inverse(gog))?
            .reduce(gog))
    }
}

/// `Some(k)` with `r = u^k` in the fundamental group.
pub fn subgroup_power_membership(
    gog: &GraphOfGroups,
    r: &PathWord,
    u: &PathWord,
) -> Result<Option<i64>, GogError> {
    if !r.is_closed(gog) || !u.is_closed(gog) || r.start != u.start {
        return Err(GogError::Endpoint("both words must be loops at one vertex".into()));
    }
    let r = r.reduce(gog);
    let u = u.reduce(gog);
    if u.is_identity(gog) {
        return Err(GogError::TrivialBase);
    }
    if r.is_identity(gog) {
        return Ok(Some(0));
    }
    let (core, c) = cyclic_reduce(gog, &u)?;
    let rc = c
        .inverse(gog)
        .concat(gog, &r)?
        .concat(gog, &c)?
        .reduce(gog);
    let len = core.path_length();
    if len == 0 {
        if rc.path_length() != 0 {
            return Ok(None);
        }
        let group = gog.vertex_group(core.start);
        return Ok(group.power_index(&rc.syllables[0], &core.syllables[0]));
    }
    if rc.path_length() % len != 0 {
        return Ok(None);
    }
    let k = (rc.path_length() / len) as i64;
    for cand in [k, -k] {
        if pw_equal(gog, &core.pow(gog, cand)?, &rc)? {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// For reduced words of the same path type, the exponents `h_1..h_q` that
/// transform `a` into `b`, if any.
pub fn transfer_elements(
    gog: &GraphOfGroups,
    a: &PathWord,
    b: &PathWord,
) -> Result<Option<Vec<i64>>, GogError> {
    if a.start != b.start || a.darts != b.darts {
        return Ok(None);
    }
    let graph = gog.graph();
    let q = a.darts.len();
    let g0 = gog.vertex_group(a.start);
    if q == 0 {
        return Ok(g0.equal(&a.syllables[0], &b.syllables[0]).then(Vec::new));
    }
    let mut hs = Vec::with_capacity(q);
    let x = g0.mul(&g0.inv(&a.syllables[0]), &b.syllables[0]);
    let Some(h) = gog.edge_membership(graph.bar(a.darts[0]), &x) else {
        return Ok(None);
    };
    hs.push(h);
    for i in 1..q {
        let e = a.darts[i - 1];
        let group = gog.terminal_group(e);
        let left = group.mul(&group.inv(&gog.edge_apply(e, hs[i - 1])), &a.syllables[i]);
        let x = group.mul(&group.inv(&left), &b.syllables[i]);
        let Some(h) = gog.edge_membership(graph.bar(a.darts[i]), &x) else {
            return Ok(None);
        };
        hs.push(h);
    }
    let e = a.darts[q - 1];
    let group = gog.terminal_group(e);
    let last = group.mul(&group.inv(&gog.edge_apply(e, hs[q - 1])), &a.syllables[q]);
    Ok(group.equal(&last, &b.syllables[q]).then_some(hs))
}
