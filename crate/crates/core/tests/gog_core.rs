mod common;

use std::sync::Arc;

use common::*;
use gog_core::fixtures::{fix_a, fix_b, fix_c};
use gog_core::free_word::FreeWord;
use gog_core::gog::{EdgeGroup, GraphOfGroups};
use gog_core::group::GroupElement;
use gog_core::word::{
    cyclic_reduce, pi1_generators, pw_equal, subgroup_power_membership, transfer_elements,
    tree_word, BaseChange, PathWord,
};
use gog_core::GogError;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn with_edge_image(g: &GraphOfGroups, dart: &str, image: GroupElement) -> GraphOfGroups {
    let d = g.dart(dart).unwrap();
    let graph = g.graph().clone();
    let vgs = graph.vertices().map(|v| g.vertex_group(v).clone()).collect();
    let egs = graph
        .darts()
        .map(|x| {
            if x == d {
                EdgeGroup::cyclic(image.clone())
            } else {
                g.edge_group(x).clone()
            }
        })
        .collect();
    GraphOfGroups::from_parts(graph, vgs, egs)
}

#[test]
fn validation() {
    assert!(fix_a().validate().is_valid());
    let b = fix_b();
    let trivial = with_edge_image(&b, "e", GroupElement::Free(FreeWord::identity()));
    let report = trivial.validate();
    assert!(report.to_string().contains("e: edge map is not injective"), "{report}");
    let outside = with_edge_image(&b, "e", GroupElement::Free(FreeWord::generator(2)));
    let report = outside.validate();
    assert!(!report.is_valid());
    assert!(report.to_string().contains("does not lie"), "{report}");
    let path = with_edge_image(
        &b,
        "e",
        GroupElement::Pi1(PathWord::identity(&b, b.vertex("v").unwrap())),
    );
    assert!(!path.validate().is_valid());
}

#[test]
fn reduction_examples() {
    let a = fix_a();
    assert_eq!(word(&a, "t_e t_~e").reduce(&a), word_at(&a, "v", "1"));
    let w = word(&a, "t_e a t_~e");
    assert_eq!(w.reduce(&a), w);

    let b = fix_b();
    let w = word(&b, "t_e c^3 t_~e");
    let r = w.reduce(&b);
    assert_eq!(r, word_at(&b, "u", "a^3"));
    assert_eq!(oracle_equal(&b, &w, &r), Some(true));
}

#[test]
fn equality_examples() {
    let b = fix_b();
    let w = word(&b, "a^2 t_e c d t_~e b");
    assert!(pw_equal(&b, &w, &w).unwrap());
    assert!(pw_equal(&b, &word_at(&b, "u", "a^3"), &word(&b, "t_e c^3 t_~e")).unwrap());
    let a = fix_a();
    assert!(!pw_equal(&a, &word(&a, "t_e"), &word(&a, "t_e a")).unwrap());
    assert!(matches!(
        pw_equal(&a, &word(&a, "t_e"), &word(&a, "a")),
        Ok(false) | Err(GogError::Endpoint(_))
    ));
    let bu = word(&b, "t_e");
    let bv = word(&b, "t_~e");
    assert!(matches!(pw_equal(&b, &bu, &bv), Err(GogError::Endpoint(_))));
}

#[test]
fn path_types() {
    let a = fix_a();
    assert!(word(&a, "a^3").darts().is_empty());
    let e = a.dart("e").unwrap();
    assert_eq!(word(&a, "t_e a t_~e").darts(), &[e, a.dart("~e").unwrap()]);
    let c = fix_c();
    let names: Vec<&str> = word(&c, "t_e t_f t_~e")
        .darts()
        .iter()
        .map(|&d| c.graph().dart_name(d))
        .collect();
    assert_eq!(names, ["e", "f", "~e"]);
}

#[test]
fn cyclic_reduction_examples() {
    let a = fix_a();
    let w = word(&a, "t_e a t_~e");
    let (core, conj) = cyclic_reduce(&a, &w).unwrap();
    assert_eq!(core, word_at(&a, "v", "a"));
    assert_eq!(conj, word(&a, "t_e"));
    assert!(eq(&a, &conj.mul(&a, &core).unwrap().mul(&a, &conj.inverse(&a)).unwrap(), &w));

    let w = word(&a, "t_e a");
    let (core, conj) = cyclic_reduce(&a, &w).unwrap();
    assert_eq!(core, w);
    assert!(conj.is_identity(&a));

    let (core, conj) = cyclic_reduce(&a, &word_at(&a, "v", "a^2")).unwrap();
    assert_eq!(core, word_at(&a, "v", "a^2"));
    assert!(conj.is_identity(&a));

    let b = fix_b();
    assert!(cyclic_reduce(&b, &word(&b, "t_e")).is_err());
}

#[test]
fn pi1_membership() {
    let a = fix_a();
    let v = a.vertex("v").unwrap();
    assert!(word(&a, "t_e").is_pi1(&a, v));
    let b = fix_b();
    let u = b.vertex("u").unwrap();
    assert!(!word(&b, "t_e").is_pi1(&b, u));
    assert!(word(&b, "a t_e d t_~e").is_pi1(&b, u));
}

#[test]
fn base_change_examples() {
    let b = fix_b();
    let c = word_at(&b, "v", "c");
    let id = BaseChange::new(PathWord::identity(&b, b.vertex("v").unwrap()));
    assert_eq!(id.apply(&b, &c).unwrap(), c);
    let along = BaseChange::new(word(&b, "t_e"));
    assert_eq!(along.apply(&b, &c).unwrap(), word_at(&b, "u", "a"));
}

#[test]
fn base_change_composes() {
    let b = fix_b();
    let mut rng = StdRng::seed_from_u64(7);
    let u = b.vertex("u").unwrap();
    let v = b.vertex("v").unwrap();
    for _ in 0..20 {
        let w1 = random_word(&b, &mut rng, u, 3, 2);
        let end1 = w1.end(&b);
        let mut w2 = random_word(&b, &mut rng, end1, 3, 2);
        if w2.end(&b) != v {
            w2 = w2.concat(&b, &PathWord::along(&b, w2.end(&b), &[b.graph().dart("e").unwrap()]).unwrap()).unwrap();
        }
        let x = random_loop(&b, &mut rng, v, 4, 2);
        let step = BaseChange::new(w1.clone())
            .apply(&b, &BaseChange::new(w2.clone()).apply(&b, &x).unwrap())
            .unwrap();
        let whole = BaseChange::new(w1.concat(&b, &w2).unwrap()).apply(&b, &x).unwrap();
        assert!(eq(&b, &step, &whole));
    }
}

fn assert_generators(g: &GraphOfGroups, v: &str, expected: &[&str]) {
    let gens = pi1_generators(g, g.vertex(v).unwrap()).unwrap();
    assert_eq!(gens.len(), expected.len());
    for (x, text) in gens.iter().zip(expected) {
        assert!(eq(g, x, &word_at(g, v, text)), "{text}");
    }
}

#[test]
fn generator_sets() {
    assert_generators(&fix_a(), "v", &["a", "t_e"]);
    assert_generators(&fix_b(), "u", &["a", "b", "t_e c t_~e", "t_e d t_~e"]);
    assert_generators(&fix_c(), "u", &["a", "t_e c t_~e", "t_e t_f t_~e"]);
}

#[test]
fn power_membership() {
    let a = fix_a();
    let u = word(&a, "t_e a");
    assert_eq!(subgroup_power_membership(&a, &u.pow(&a, 3).unwrap(), &u).unwrap(), Some(3));
    let one = word_at(&a, "v", "1");
    assert_eq!(subgroup_power_membership(&a, &one, &u).unwrap(), Some(0));
    let r = word(&a, "t_e a t_e a");
    assert_eq!(subgroup_power_membership(&a, &r, &u).unwrap(), Some(2));
    assert_eq!(subgroup_power_membership(&a, &word(&a, "t_e"), &u).unwrap(), None);
    let x = word(&a, "a t_e");
    assert_eq!(subgroup_power_membership(&a, &x.pow(&a, -2).unwrap(), &x).unwrap(), Some(-2));
    assert_eq!(
        subgroup_power_membership(&a, &word(&a, "a^6"), &word(&a, "a^-2")).unwrap(),
        Some(-3)
    );
    assert!(subgroup_power_membership(&a, &u, &one).is_err());
}

fn fixtures() -> Vec<Arc<GraphOfGroups>> {
    vec![fix_a(), fix_b(), fix_c()]
}

#[test]
fn reduction_properties() {
    let mut rng = StdRng::seed_from_u64(11);
    for g in fixtures() {
        for _ in 0..200 {
            let start = gog_core::VertexId(rng.gen_range(0..g.graph().vertex_count()));
            let w = random_word(&g, &mut rng, start, 6, 3);
            let r = w.reduce(&g);
            assert_eq!(r.reduce(&g), r);
            assert!(r.path_length() <= w.path_length());
            assert_eq!(r.path_length() == w.path_length(), w.is_reduced(&g));
            let mut x = w.clone();
            for _ in 0..3 {
                x = relation_rewrite(&g, &mut rng, &x);
            }
            let rx = x.reduce(&g);
            assert_eq!(rx.darts(), r.darts());
            assert!(transfer_elements(&g, &r, &rx).unwrap().is_some());
            assert!(pw_equal(&g, &w, &x).unwrap());
        }
    }
}

/// Reduced words of one path type that differ by edge-group transfers.
#[test]
fn transfers_are_recovered() {
    let mut rng = StdRng::seed_from_u64(5);
    let b = fix_b();
    let graph = b.graph();
    for _ in 0..200 {
        let w = random_word(&b, &mut rng, b.vertex("u").unwrap(), 5, 2).reduce(&b);
        let q = w.path_length();
        if q == 0 {
            continue;
        }
        let hs: Vec<i64> = (0..q).map(|_| rng.gen_range(-3..=3)).collect();
        let mut syl = w.syllables().to_vec();
        for i in 0..q {
            let d = w.darts()[i];
            let left = b.terminal_group(graph.bar(d));
            syl[i] = left.mul(&syl[i], &b.edge_apply(graph.bar(d), hs[i]));
            let right = b.terminal_group(d);
            syl[i + 1] = right.mul(&b.edge_apply(d, -hs[i]), &syl[i + 1]);
        }
        let w2 = PathWord::from_parts(&b, w.start(), w.darts().to_vec(), syl).unwrap();
        assert!(w2.is_reduced(&b));
        assert!(pw_equal(&b, &w, &w2).unwrap());
        assert_eq!(transfer_elements(&b, &w, &w2).unwrap(), Some(hs));
    }
}

#[test]
fn equality_matches_rewriting_oracle() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut agreed = 0;
    let mut equal = 0;
    for g in fixtures() {
        for i in 0..120 {
            let start = gog_core::VertexId(rng.gen_range(0..g.graph().vertex_count()));
            let w = random_word(&g, &mut rng, start, 5, 2);
            let other = if i % 2 == 0 {
                let mut x = w.clone();
                for _ in 0..3 {
                    x = relation_rewrite(&g, &mut rng, &x);
                }
                x
            } else {
                let end = w.end(&g);
                let nudge = random_word(&g, &mut rng, end, 2, 1);
                let tree = g.graph().spanning_tree(end).unwrap();
                let back = tree_word(&g, &tree, nudge.end(&g)).inverse(&g);
                w.concat(&g, &nudge).unwrap().concat(&g, &back).unwrap()
            };
            let fast = pw_equal(&g, &w, &other).unwrap();
            let slow = oracle_equal(&g, &w, &other).expect("within budget");
            assert_eq!(fast, slow);
            agreed += 1;
            equal += fast as usize;
        }
    }
    assert_eq!(agreed, 360);
    assert!(equal >= 180 && equal < 360, "{equal}");
}

#[test]
fn equality_is_an_equivalence() {
    let mut rng = StdRng::seed_from_u64(21);
    let b = fix_b();
    let u = b.vertex("u").unwrap();
    let pool: Vec<PathWord> = (0..30)
        .map(|i| {
            if i % 3 == 0 {
                word_at(&b, "u", "a")
            } else {
                random_loop(&b, &mut rng, u, 2, 1)
            }
        })
        .collect();
    for x in &pool {
        assert!(pw_equal(&b, x, x).unwrap());
        for y in &pool {
            let xy = pw_equal(&b, x, y).unwrap();
            assert_eq!(xy, pw_equal(&b, y, x).unwrap());
            let y2 = relation_rewrite(&b, &mut rng, y);
            assert_eq!(xy, pw_equal(&b, x, &y2).unwrap());
            for z in &pool {
                if xy && pw_equal(&b, y, z).unwrap() {
                    assert!(pw_equal(&b, x, z).unwrap());
                }
            }
        }
    }
}

/// Writes a loop as a product of standard generators by inserting tree
/// paths around every letter.
fn decompose(g: &GraphOfGroups, w: &PathWord, gens: &[PathWord]) -> Vec<(usize, i64)> {
    let graph = g.graph();
    let tree = graph.spanning_tree(w.start()).unwrap();
    let gamma = |v| tree_word(g, &tree, v);
    let mut out = Vec::new();
    let mut push_piece = |piece: PathWord| {
        if piece.is_identity(g) {
            return;
        }
        let i = gens
            .iter()
            .position(|x| eq(g, x, &piece) || eq(g, &x.inverse(g), &piece))
            .expect("piece is a generator");
        let sign = if eq(g, &gens[i], &piece) { 1 } else { -1 };
        out.push((i, sign));
    };
    for (i, s) in w.syllables().iter().enumerate() {
        let v = w.syllable_vertex(g, i);
        let cv = gamma(v);
        for &(gen, k) in s.as_free().unwrap().runs() {
            let x = PathWord::vertex(v, GroupElement::Free(FreeWord::generator(gen)));
            let conj = cv.concat(g, &x).unwrap().concat(g, &cv.inverse(g)).unwrap();
            for _ in 0..k.abs() {
                push_piece(if k > 0 { conj.clone() } else { conj.inverse(g) });
            }
        }
        if i < w.darts().len() {
            let d = w.darts()[i];
            let loop_word = cv
                .concat(g, &PathWord::stable(g, d))
                .unwrap()
                .concat(g, &gamma(graph.terminal(d)).inverse(g))
                .unwrap();
            push_piece(loop_word);
        }
    }
    out
}

#[test]
fn generators_generate() {
    let mut rng = StdRng::seed_from_u64(99);
    for g in fixtures() {
        let v = g.graph().vertices().next().unwrap();
        let gens = pi1_generators(&g, v).unwrap();
        for _ in 0..34 {
            let w = random_loop(&g, &mut rng, v, 5, 2);
            let pieces = decompose(&g, &w, &gens);
            let mut acc = PathWord::identity(&g, v);
            for (i, s) in pieces {
                let x = if s > 0 { gens[i].clone() } else { gens[i].inverse(&g) };
                acc = acc.mul(&g, &x).unwrap();
            }
            assert!(eq(&g, &acc, &w));
        }
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]

    #[test]
    fn reduced_form_is_canonical(seed: u64, which in 0usize..3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let gs = fixtures().swap_remove(which);
        let g = &*gs;
        let start = gog_core::VertexId(rng.gen_range(0..g.graph().vertex_count()));
        let w = random_word(g, &mut rng, start, 6, 3);
        let r = w.reduce(g);
        proptest::prop_assert_eq!(&r.reduce(g), &r);
        let x = relation_rewrite(g, &mut rng, &w);
        let rx = x.reduce(g);
        proptest::prop_assert_eq!(rx.darts(), r.darts());
        proptest::prop_assert!(pw_equal(g, &w, &x).unwrap());
        proptest::prop_assert!(w.concat(g, &w.inverse(g)).unwrap().is_identity(g));
    }
}
