#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use gog_core::free_word::FreeWord;
use gog_core::gog::GraphOfGroups;
use gog_core::graph::{DartId, VertexId};
use gog_core::group::{GroupElement, VertexGroup};
use gog_core::fixtures::{d_b, fix_b, h_a, h_c, h_d};
use gog_core::gog::GogBuilder;
use gog_core::hconj::is_h_zero;
use gog_core::iso::{elementary_equivalence, twist_corrections, GogIso};
use gog_core::syntax::{format_word, parse_word};
use gog_core::word::{PathLetter, PathWord};
use rand::rngs::StdRng;
use rand::Rng;

pub fn word(g: &GraphOfGroups, text: &str) -> PathWord {
    parse_word(g, text, None).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn word_at(g: &GraphOfGroups, v: &str, text: &str) -> PathWord {
    parse_word(g, text, Some(g.vertex(v).unwrap())).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn free(text: &str, names: &[&str]) -> GroupElement {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    GroupElement::Free(FreeWord::parse(text, &names).unwrap())
}

pub fn fword(text: &str, names: &[&str]) -> FreeWord {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    FreeWord::parse(text, &names).unwrap()
}

pub fn eq(g: &GraphOfGroups, a: &PathWord, b: &PathWord) -> bool {
    a.start() == b.start()
        && a.end(g) == b.end(g)
        && gog_core::word::pw_equal(g, a, b).unwrap()
}

fn rank(g: &GraphOfGroups, v: VertexId) -> u32 {
    match g.vertex_group(v) {
        VertexGroup::Free(f) => f.rank(),
        VertexGroup::Pi1(_) => panic!("random words need free vertex groups"),
    }
}

pub fn random_free(rng: &mut StdRng, rank: u32, runs: usize, max_exp: i64) -> FreeWord {
    if rank == 0 {
        return FreeWord::identity();
    }
    let n = rng.gen_range(0..=runs);
    let mut w = FreeWord::identity();
    for _ in 0..n {
        let gen = rng.gen_range(0..rank);
        let mut k = rng.gen_range(-max_exp..=max_exp);
        if k == 0 {
            k = 1;
        }
        w = w.mul(&FreeWord::power(gen, k));
    }
    w
}

/// Random connected word: a random walk with random syllables, not reduced.
pub fn random_word(
    g: &GraphOfGroups,
    rng: &mut StdRng,
    start: VertexId,
    max_len: usize,
    max_exp: i64,
) -> PathWord {
    let graph = g.graph();
    let len = rng.gen_range(0..=max_len);
    let mut letters = Vec::new();
    let mut cur = start;
    letters.push(PathLetter::Vertex(
        cur,
        GroupElement::Free(random_free(rng, rank(g, cur), 2, max_exp)),
    ));
    for _ in 0..len {
        let out: Vec<DartId> = graph.darts().filter(|&d| graph.initial(d) == cur).collect();
        if out.is_empty() {
            break;
        }
        let d = out[rng.gen_range(0..out.len())];
        letters.push(PathLetter::Stable(d));
        cur = graph.terminal(d);
        // Occasionally place an edge-group element to invite backtracking.
        let syl = if rng.gen_bool(0.3) && g.edge_rank(d) == 1 {
            g.edge_apply(d, rng.gen_range(-3..=3))
        } else if rng.gen_bool(0.25) {
            GroupElement::Free(FreeWord::identity())
        } else {
            GroupElement::Free(random_free(rng, rank(g, cur), 2, max_exp))
        };
        letters.push(PathLetter::Vertex(cur, syl));
    }
    PathWord::from_letters(g, Some(start), &letters).unwrap()
}

/// Random closed word at `start`, closing the walk along a shortest path.
pub fn random_loop(
    g: &GraphOfGroups,
    rng: &mut StdRng,
    start: VertexId,
    max_len: usize,
    max_exp: i64,
) -> PathWord {
    let w = random_word(g, rng, start, max_len, max_exp);
    let end = w.end(g);
    let tree = g.graph().spanning_tree(start).unwrap();
    let back = gog_core::word::tree_word(g, &tree, end).inverse(g);
    w.concat(g, &back).unwrap()
}

/// Inserts a relation `f_ē(x^k) = t_e f_e(x^k) t_ē` at a random syllable.
pub fn relation_rewrite(g: &GraphOfGroups, rng: &mut StdRng, w: &PathWord) -> PathWord {
    let graph = g.graph();
    let i = rng.gen_range(0..w.syllables().len());
    let v = w.syllable_vertex(g, i);
    let out: Vec<DartId> = graph.darts().filter(|&d| graph.initial(d) == v).collect();
    if out.is_empty() {
        return w.clone();
    }
    let e = out[rng.gen_range(0..out.len())];
    let k = if g.edge_rank(e) == 1 { rng.gen_range(-3..=3) } else { 0 };
    let group = g.vertex_group(v);
    let here = g.edge_apply(graph.bar(e), k);
    let mut letters = Vec::new();
    for j in 0..w.syllables().len() {
        let vj = w.syllable_vertex(g, j);
        if j == i {
            letters.push(PathLetter::Vertex(
                vj,
                group.mul(&w.syllables()[j], &group.inv(&here)),
            ));
            letters.push(PathLetter::Stable(e));
            letters.push(PathLetter::Vertex(graph.terminal(e), g.edge_apply(e, k)));
            letters.push(PathLetter::Stable(graph.bar(e)));
            letters.push(PathLetter::Vertex(vj, group.identity()));
        } else {
            letters.push(PathLetter::Vertex(vj, w.syllables()[j].clone()));
        }
        if j < w.darts().len() {
            letters.push(PathLetter::Stable(w.darts()[j]));
        }
    }
    PathWord::from_letters(g, Some(w.start()), &letters).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum L {
    V(usize, u32, bool),
    T(usize),
}

fn naive_letters(v: usize, w: &FreeWord) -> Vec<L> {
    let mut out = Vec::new();
    for &(gen, k) in w.runs() {
        for _ in 0..k.abs() {
            out.push(L::V(v, gen, k < 0));
        }
    }
    out
}

fn naive_free_reduce(letters: &[L]) -> Vec<L> {
    let mut out: Vec<L> = Vec::new();
    for l in letters {
        if let (Some(L::V(v1, g1, s1)), L::V(v2, g2, s2)) = (out.last(), l) {
            if v1 == v2 && g1 == g2 && s1 != s2 {
                out.pop();
                continue;
            }
        }
        out.push(l.clone());
    }
    out
}

fn naive_inverse(letters: &[L], g: &GraphOfGroups) -> Vec<L> {
    letters
        .iter()
        .rev()
        .map(|l| match l {
            L::V(v, x, s) => L::V(*v, *x, !s),
            L::T(d) => L::T(g.graph().bar(DartId(*d)).0),
        })
        .collect()
}

fn path_letters(g: &GraphOfGroups, w: &PathWord) -> Vec<L> {
    let mut out = Vec::new();
    for (i, s) in w.syllables().iter().enumerate() {
        let v = w.syllable_vertex(g, i);
        out.extend(naive_letters(v.0, s.as_free().expect("free vertex groups")));
        if i < w.darts().len() {
            out.push(L::T(w.darts()[i].0));
        }
    }
    out
}

fn image_letters(g: &GraphOfGroups, d: DartId, k: i64) -> Vec<L> {
    let v = g.graph().terminal(d).0;
    let u = g.edge_group(d).image.as_ref().and_then(|x| x.as_free().cloned());
    let mut out = Vec::new();
    if let Some(u) = u {
        let base = naive_letters(v, &u);
        let piece = if k < 0 { naive_inverse(&base, g) } else { base };
        for _ in 0..k.abs() {
            out.extend(piece.iter().cloned());
        }
    }
    naive_free_reduce(&out)
}

/// `Some(k)` when the reduced vertex segment `m` equals `f_d(x^k)`.
fn naive_membership(g: &GraphOfGroups, d: DartId, m: &[L]) -> Option<i64> {
    if m.is_empty() {
        return Some(0);
    }
    if g.edge_rank(d) == 0 {
        return None;
    }
    let bound = m.len() as i64 + 1;
    (-bound..=bound).find(|&k| image_letters(g, d, k) == m)
}

/// Brute-force decision of `w = 1` by exhaustive pinch rewriting; `None` if
/// more than `budget` states were visited.
pub fn oracle_trivial(g: &GraphOfGroups, w: &PathWord, budget: usize) -> Option<bool> {
    let start = naive_free_reduce(&path_letters(g, w));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        if s.is_empty() {
            return Some(true);
        }
        let stables: Vec<usize> = (0..s.len()).filter(|&i| matches!(s[i], L::T(_))).collect();
        for pair in stables.windows(2) {
            let (i, j) = (pair[0], pair[1]);
            let (L::T(a), L::T(b)) = (&s[i], &s[j]) else { unreachable!() };
            let e = DartId(*a);
            if g.graph().bar(e).0 != *b {
                continue;
            }
            let m = naive_free_reduce(&s[i + 1..j]);
            if let Some(k) = naive_membership(g, e, &m) {
                let mut next = s[..i].to_vec();
                next.extend(image_letters(g, g.graph().bar(e), k));
                next.extend(s[j + 1..].iter().cloned());
                let next = naive_free_reduce(&next);
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Some(false)
}

pub fn oracle_equal(g: &GraphOfGroups, a: &PathWord, b: &PathWord) -> Option<bool> {
    if a.start() != b.start() || a.end(g) != b.end(g) {
        return Some(false);
    }
    let w = a.concat(g, &b.inverse(g)).unwrap();
    oracle_trivial(g, &w, 10_000)
}

/// Vertex elements `x^k`, one generator at a time, `|k| ≤ max_exp`.
pub fn letter_ball(group: &VertexGroup, max_exp: i64) -> Vec<GroupElement> {
    let mut out = vec![group.identity()];
    if let VertexGroup::Free(f) = group {
        for gen in 0..f.rank() {
            for k in 1..=max_exp {
                out.push(GroupElement::Free(FreeWord::power(gen, k)));
                out.push(GroupElement::Free(FreeWord::power(gen, -k)));
            }
        }
    }
    out
}

/// All words from `start` of path length at most `max_len` with syllables
/// from `syllables(v)`.
pub fn enumerate_words(
    g: &GraphOfGroups,
    start: VertexId,
    max_len: usize,
    syllables: &dyn Fn(VertexId) -> Vec<GroupElement>,
) -> Vec<PathWord> {
    let graph = g.graph();
    let mut out = Vec::new();
    let mut frontier: Vec<PathWord> = syllables(start)
        .into_iter()
        .map(|x| PathWord::vertex(start, x))
        .collect();
    out.extend(frontier.iter().cloned());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let end = w.end(g);
            for d in graph.darts().filter(|&d| graph.initial(d) == end) {
                for x in syllables(graph.terminal(d)) {
                    let ext = w
                        .concat(g, &PathWord::stable(g, d))
                        .unwrap()
                        .concat(g, &PathWord::vertex(graph.terminal(d), x))
                        .unwrap();
                    next.push(ext);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Pairs `(c^-1, H_*(c))` over the reduced, deduplicated words from `v` of
/// path length at most `max_len` with syllables from [`letter_ball`].
pub fn conjugator_table(h: &GogIso, v: VertexId, max_len: usize, max_exp: i64) -> Vec<(PathWord, PathWord)> {
    let g = h.domain();
    let ball = |u: VertexId| letter_ball(g.vertex_group(u), max_exp);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in enumerate_words(g, v, max_len, &ball) {
        let c = c.reduce(g);
        if seen.insert(format_word(g, &c)) {
            out.push((c.inverse(g), h.apply_word(&c).unwrap()));
        }
    }
    out
}

/// Minimum path length of `c^-1 w H_*(c)` over the table and `w` itself.
pub fn brute_h_length(h: &GogIso, w: &PathWord, table: &[(PathWord, PathWord)]) -> usize {
    let g = h.domain();
    let mut best = w.reduce(g).path_length();
    for (ci, hc) in table {
        if best == 0 {
            break;
        }
        if ci.end(g) != w.start() {
            continue;
        }
        let x = ci.concat(g, w).unwrap().concat(g, hc).unwrap().reduce(g);
        best = best.min(x.path_length());
    }
    best
}

/// Reduced closed words at `v` of positive path length and at most
/// `max_len`, with syllables the identity or a generator.
pub fn closed_test_words(g: &GraphOfGroups, v: VertexId, max_len: usize) -> Vec<PathWord> {
    let syl = |u: VertexId| {
        let mut out = vec![g.vertex_group(u).identity()];
        out.extend(g.vertex_group(u).generators().unwrap());
        out
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in enumerate_words(g, v, max_len, &syl) {
        if w.end(g) != v {
            continue;
        }
        let r = w.reduce(g);
        if r.path_length() > 0 && seen.insert(format_word(g, &r)) {
            out.push(r);
        }
    }
    out
}

/// Compares `h_length` with the brute-force minimum on every closed test
/// word; the verified witness of `h_reduce` joins the conjugators, so a
/// mismatch means the sweep missed a shorter representative. Returns the
/// number of words checked and the mismatching ones.
pub fn h_length_agreement(h: &GogIso, word_len: usize, conj_len: usize) -> (usize, Vec<String>) {
    let g = h.domain();
    let mut checked = 0;
    let mut bad = Vec::new();
    for v in g.graph().vertices() {
        let table = conjugator_table(h, v, conj_len, 2);
        for w in closed_test_words(g, v, word_len) {
            let red = gog_core::hconj::h_reduce(h, &w).unwrap();
            let n = red.word.path_length();
            let check = red
                .conjugator
                .inverse(g)
                .concat(g, &w)
                .unwrap()
                .concat(g, &h.apply_word(&red.conjugator).unwrap())
                .unwrap();
            assert!(gog_core::word::pw_equal(g, &check, &red.word).unwrap());
            checked += 1;
            if n > 0 && brute_h_length(h, &w, &table) < n {
                bad.push(format_word(g, &w));
            }
        }
    }
    (checked, bad)
}

/// The fixture isomorphisms and their inverses.
pub fn fixture_isos() -> Vec<GogIso> {
    let base = vec![h_a(), d_b(), h_c(), h_d(), GogIso::identity(fix_b())];
    let mut out = base.clone();
    out.extend(base.iter().map(|h| h.invert().unwrap()));
    out
}

/// Triples `(h1, h2, theta)` with `h2 ∘ theta = theta ∘ h1`, two per
/// fixture iso: one from corrections and one from an elementary equivalence.
pub fn equivalence_squares(rng: &mut StdRng) -> Vec<(GogIso, GogIso, GogIso)> {
    let mut out = Vec::new();
    for h in fixture_isos() {
        let g = h.domain().clone();
        let w: Vec<GroupElement> = g
            .graph()
            .darts()
            .map(|d| GroupElement::Free(random_free(rng, rank(&g, g.graph().terminal(d)), 2, 2)))
            .collect();
        let t = twist_corrections(&h, &w).unwrap();
        out.push((h.clone(), t.iso, t.equivalence));
        let d = g.graph().darts().next().unwrap();
        let x = GroupElement::Free(random_free(rng, rank(&g, g.graph().terminal(d)), 2, 2));
        let (_, h0) = elementary_equivalence(&g, d, &x).unwrap();
        let h2 = GogIso::compose(&GogIso::compose(&h0, &h).unwrap(), &h0.invert().unwrap()).unwrap();
        out.push((h, h2, h0));
    }
    out
}

pub struct Transfer {
    pub zero: usize,
    pub nonzero: usize,
    pub mismatches: Vec<String>,
}

/// Checks that `theta` carries H1-zero words to H2-zero words and the rest
/// to non-zero words. Half the words are built to be zero.
pub fn transfer_check(rng: &mut StdRng, per_square: usize) -> Transfer {
    let mut t = Transfer { zero: 0, nonzero: 0, mismatches: Vec::new() };
    for (h1, h2, theta) in equivalence_squares(rng) {
        let g = h1.domain().clone();
        let g2 = h2.domain().clone();
        for i in 0..per_square {
            let v = VertexId(rng.gen_range(0..g.graph().vertex_count()));
            let w = if i % 2 == 0 {
                random_loop(&g, rng, v, 4, 2)
            } else {
                let c = random_word(&g, rng, v, 3, 2).reduce(&g);
                let e = c.end(&g);
                let x = PathWord::vertex(e, GroupElement::Free(random_free(rng, rank(&g, e), 1, 2)));
                c.concat(&g, &x).unwrap().concat(&g, &h1.apply_word(&c).unwrap().inverse(&g)).unwrap()
            }
            .reduce(&g);
            let here = is_h_zero(&h1, &w).unwrap();
            let moved = theta.apply_word(&w).unwrap().reduce(&g2);
            let there = is_h_zero(&h2, &moved).unwrap();
            if here.is_some() != there.is_some() {
                t.mismatches.push(format_word(&g, &w));
            }
            if here.is_some() {
                t.zero += 1;
            } else {
                t.nonzero += 1;
            }
        }
    }
    t
}

/// A random twist on `u - v` with one or two loops at `v` and maybe one at
/// `u`, with the subgraph names spanning `v` and its loops.
pub fn fix_c_variant(rng: &mut StdRng) -> (GogIso, Vec<String>) {
    let mut b = GogBuilder::new();
    let u = b.free_vertex("u", &["a"]);
    let v = b.free_vertex("v", &["c"]);
    b.edge("e", u, v);
    let loops = rng.gen_range(1..=2);
    let mut names = vec!["v".to_string()];
    for i in 0..loops {
        let n = format!("f{i}");
        b.edge(&n, v, v);
        names.push(n);
    }
    if rng.gen_bool(0.5) {
        b.edge("l", u, u);
    }
    let g = b.build_arc().unwrap();
    let mut h = GogIso::identity(g.clone());
    for d in g.graph().darts() {
        let x = if g.graph().vertex_name(g.graph().terminal(d)) == "v" { "c" } else { "a" };
        let k = rng.gen_range(-3..=3);
        h = h.with_correction(d, free(&format!("{x}^{k}"), &[x]));
    }
    (h, names)
}
