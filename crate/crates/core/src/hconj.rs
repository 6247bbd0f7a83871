//! Conjugation twisted by an automorphism: `w₁ = w w₂ H_*(w)^-1`.
//!
//! The elementary operation conjugates off the first syllable and stable
//! letter; iterating it until the path length stops dropping yields an
//! H-reduced representative whose path length is the H-length.

use crate::error::GogError;
use crate::free_word::FreeWord;
use crate::gog::GraphOfGroups;
use crate::graph::VertexId;
use crate::group::{GroupElement, VertexGroup};
use crate::iso::GogIso;
use crate::word::{pw_equal, PathWord};

fn check_shape(h: &GogIso, w: &PathWord) -> Result<(), GogError> {
    if !h.is_automorphism() {
        return Err(GogError::Precondition("expected an automorphism".into()));
    }
    let g = h.domain();
    if w.end(g) != h.vertex_image(w.start()) {
        return Err(GogError::Endpoint(
            "word must end at the image of its start vertex".into(),
        ));
    }
    Ok(())
}

/// `w ↦ (r₀t₁)^-1 w H_*(r₀t₁)`, returning the new word and `r₀t₁`.
pub fn elementary_op(h: &GogIso, w: &PathWord) -> Result<(PathWord, PathWord), GogError> {
    check_shape(h, w)?;
    let g = h.domain();
    let w = w.reduce(g);
    if w.path_length() == 0 {
        return Err(GogError::Precondition(
            "elementary operation needs a stable letter".into(),
        ));
    }
    let p = PathWord::from_parts(
        g,
        w.start(),
        vec![w.darts()[0]],
        vec![w.syllables()[0].clone(), g.terminal_group(w.darts()[0]).identity()],
    )?;
    let next = p
        .inverse(g)
        .concat(g, &w)?
        .concat(g, &h.apply_word(&p)?)?
        .reduce(g);
    Ok((next, p))
}

/// An H-reduced word together with `u` such that `word = u^-1 w H_*(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HReduced {
    pub word: PathWord,
    pub conjugator: PathWord,
}

/// Sweeps `w → w₁ → … → w_q` with elementary operations, restarting
/// whenever the path length drops.
pub fn h_reduce(h: &GogIso, w: &PathWord) -> Result<HReduced, GogError> {
    check_shape(h, w)?;
    let g = h.domain();
    let mut cur = w.reduce(g);
    let mut u = PathWord::identity(g, w.start());
    'restart: while cur.path_length() > 0 {
        let n = cur.path_length();
        let mut step = cur.clone();
        let mut acc = u.clone();
        for _ in 0..n {
            let (next, p) = elementary_op(h, &step)?;
            acc = acc.mul(g, &p)?;
            debug_assert!(next.path_length() <= step.path_length());
            if next.path_length() < n {
                cur = next;
                u = acc;
                continue 'restart;
            }
            step = next;
        }
        break;
    }
    Ok(HReduced {
        word: cur,
        conjugator: u.reduce(g),
    })
}

pub fn is_h_reduced(h: &GogIso, w: &PathWord) -> Result<bool, GogError> {
    let g = h.domain();
    let w = w.reduce(g);
    if w.path_length() == 0 {
        return Ok(true);
    }
    let (next, _) = elementary_op(h, &w)?;
    Ok(next.path_length() >= w.path_length())
}

pub fn h_length(h: &GogIso, w: &PathWord) -> Result<usize, GogError> {
    Ok(h_reduce(h, w)?.word.path_length())
}

/// Certificate that `w` has H-length zero:
/// `w = (H^-1)_*(gamma) · g · gamma^-1` with `g` in the group at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HZeroWitness {
    pub vertex: VertexId,
    pub gamma: PathWord,
    pub g: GroupElement,
}

pub fn is_h_zero(h: &GogIso, w: &PathWord) -> Result<Option<HZeroWitness>, GogError> {
    let red = h_reduce(h, w)?;
    if red.word.path_length() != 0 {
        return Ok(None);
    }
    let gamma = h.apply_word(&red.conjugator)?;
    let witness = HZeroWitness {
        vertex: red.word.start(),
        g: red.word.syllables()[0].clone(),
        gamma,
    };
    debug_assert!(verify_h_zero(h, w, &witness).unwrap_or(false));
    Ok(Some(witness))
}

/// Checks `w = (H^-1)_*(gamma) · g · gamma^-1`.
pub fn verify_h_zero(h: &GogIso, w: &PathWord, witness: &HZeroWitness) -> Result<bool, GogError> {
    let g = h.domain();
    let back = h.invert()?.apply_word(&witness.gamma)?;
    let rhs = back
        .concat(g, &PathWord::vertex(witness.vertex, witness.g.clone()))?
        .concat(g, &witness.gamma.inverse(g))?;
    if rhs.start() != w.start() || rhs.end(g) != w.end(g) {
        return Ok(false);
    }
    pw_equal(g, w, &rhs)
}

/// Finite set of vertex-group elements used by bounded searches: free
/// words of length at most `radius`, or the identity and generators with
/// inverses for fundamental groups.
pub fn element_ball(group: &VertexGroup, radius: usize) -> Result<Vec<GroupElement>, GogError> {
    match group {
        VertexGroup::Free(f) => {
            let mut out = vec![FreeWord::identity()];
            let mut frontier = vec![FreeWord::identity()];
            for _ in 0..radius {
                let mut next = Vec::new();
                for w in &frontier {
                    for gen in 0..f.rank() {
                        for s in [1, -1] {
                            let x = w.mul(&FreeWord::power(gen, s));
                            if x.len() == w.len() + 1 {
                                next.push(x);
                            }
                        }
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
            }
            Ok(out.into_iter().map(GroupElement::Free).collect())
        }
        VertexGroup::Pi1(_) => {
            let mut out = vec![group.identity()];
            if radius > 0 {
                for x in group.generators()? {
                    out.push(group.inv(&x));
                    out.push(x);
                }
            }
            Ok(out)
        }
    }
}

/// Words starting at `from` with path length at most `max_len` and
/// syllables drawn from [`element_ball`].
pub fn word_ball(
    g: &GraphOfGroups,
    from: VertexId,
    max_len: usize,
    syllable_radius: usize,
) -> Result<Vec<PathWord>, GogError> {
    let graph = g.graph();
    let balls: Vec<Vec<GroupElement>> = graph
        .vertices()
        .map(|v| element_ball(g.vertex_group(v), syllable_radius))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut frontier: Vec<PathWord> = balls[from.0]
        .iter()
        .map(|x| PathWord::vertex(from, x.clone()))
        .collect();
    out.extend(frontier.iter().cloned());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let end = w.end(g);
            for d in graph.darts() {
                if graph.initial(d) != end {
                    continue;
                }
                if w.darts().last() == Some(&graph.bar(d))
                    && g.edge_membership(d, w.syllables().last().expect("nonempty")).is_some()
                {
                    continue;
                }
                for x in &balls[graph.terminal(d).0] {
                    let ext = w
                        .concat(g, &PathWord::stable(g, d))?
                        .concat(g, &PathWord::vertex(graph.terminal(d), x.clone()))?;
                    next.push(ext);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Searches for `c` with `w1 = c w2 H_*(c)^-1`, after H-reducing both
/// words, among connecting words of path length at most `radius` and
/// syllables of size at most `radius`.
pub fn h_conjugate_bounded(
    h: &GogIso,
    w1: &PathWord,
    w2: &PathWord,
    radius: usize,
) -> Result<Option<PathWord>, GogError> {
    let g = h.domain();
    let r1 = h_reduce(h, w1)?;
    let r2 = h_reduce(h, w2)?;
    if r1.word.path_length() != r2.word.path_length() {
        return Ok(None);
    }
    let target = r1.word.start();
    for x in word_ball(g, r2.word.start(), radius, radius)? {
        if x.end(g) != target {
            continue;
        }
        let c = x.inverse(g);
        let cand = c
            .concat(g, &r2.word)?
            .concat(g, &h.apply_word(&c)?.inverse(g))?;
        if pw_equal(g, &cand, &r1.word)? {
            let total = r1
                .conjugator
                .concat(g, &c)?
                .concat(g, &r2.conjugator.inverse(g))?
                .reduce(g);
            return Ok(Some(total));
        }
    }
    Ok(None)
}
