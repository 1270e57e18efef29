mod common;

use common::*;
use marked_groups::abelian::{self, AbelianNF, Verdict};
use marked_groups::ball::{ball, balls_agree, BallOptions};
use marked_groups::identity::merge_identities;
use marked_groups::identity::sentence::{evaluate_sentence_on_ball, parse_sentence, SentenceVerdict, COMMUTATIVE_TRANSITIVITY};
use marked_groups::{parse_group, parse_word, Element, GroupModel, MarkedGroup, Word};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

const MODELS: &[&str] = &[
    "Z^2 x Z/6",
    "F2",
    "N2_2",
    "N2_2/5",
    "N2_3",
    "Grig",
    "BS(1,2)",
    "BS(1,3)",
    "FM2",
    "Hall(free)",
    "(F2)*(Z/3)",
    "(Z)wr(Z)",
    "(Z/2)wr(Z^2)",
    "(Z/2)wrXGrig",
    "(N2_2)x(BS(1,2))",
];

fn letters(k: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let k = k as i32;
    prop::collection::vec((1..=k, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..=max_len)
}

fn elem(model: &GroupModel, l: &[i32]) -> Element {
    model.eval_word(&word(l), &model.generators()).unwrap()
}

fn model_and_words(n: usize) -> impl Strategy<Value = (GroupModel, Vec<Vec<i32>>)> {
    (0..MODELS.len()).prop_flat_map(move |i| {
        let m = parse_group(MODELS[i]).unwrap();
        let k = m.num_gens();
        (Just(m), prop::collection::vec(letters(k, 12), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn group_laws((m, ws) in model_and_words(3)) {
        let (a, b, c) = (elem(&m, &ws[0]), elem(&m, &ws[1]), elem(&m, &ws[2]));
        prop_assert_eq!(m.mul(&m.mul(&a, &b), &c).key(), m.mul(&a, &m.mul(&b, &c)).key());
        prop_assert_eq!(m.mul(&a, &m.identity()).key(), a.key());
        prop_assert_eq!(m.mul(&m.identity(), &a).key(), a.key());
        prop_assert!(m.is_identity(&m.mul(&a, &m.inv(&a))));
        prop_assert!(m.is_identity(&m.mul(&m.inv(&a), &a)));
    }

    #[test]
    fn keys_decide_equality((m, ws) in model_and_words(2)) {
        let (a, b) = (elem(&m, &ws[0]), elem(&m, &ws[1]));
        let same = m.is_identity(&m.mul(&a, &m.inv(&b)));
        prop_assert_eq!(same, a.key() == b.key());
        // the word evaluated letter by letter and in two halves
        let mid = ws[0].len() / 2;
        let split = m.mul(&elem(&m, &ws[0][..mid]), &elem(&m, &ws[0][mid..]));
        prop_assert_eq!(split.key(), a.key());
    }

    #[test]
    fn free_metabelian_identity(ws in prop::collection::vec(letters(2, 8), 4)) {
        let m = parse_group("FM2").unwrap();
        let g: Vec<Element> = ws.iter().map(|w| elem(&m, w)).collect();
        let c = m.commutator(&m.commutator(&g[0], &g[1]), &m.commutator(&g[2], &g[3]));
        prop_assert!(m.is_identity(&c));
    }

    #[test]
    fn baumslag_solitar_relation(w in letters(2, 20), p in 2i64..6) {
        let m = parse_group(&format!("BS(1,{p})")).unwrap();
        let g = elem(&m, &w);
        let gens = m.generators();
        let (a, t) = (&gens[0], &gens[1]);
        let lhs = m.mul(&m.mul(&m.inv(t), a), t);
        let rhs = m.pow(a, &p.into());
        prop_assert_eq!(lhs.key(), rhs.key());
        // conjugates of the relation hold as well
        let conj = |x: &Element| m.mul(&m.mul(&m.inv(&g), x), &g);
        prop_assert_eq!(conj(&lhs).key(), conj(&rhs).key());
    }

    #[test]
    fn hall_commutators_central_and_shift_invariant(g in letters(2, 6), h in letters(2, 4)) {
        let m = parse_group("Hall(free)").unwrap();
        let a = &m.generators()[2];
        let g = elem(&m, &g);
        let h = elem(&m, &h);
        let conj = |x: &Element, y: &Element| m.mul(&m.mul(&m.inv(y), x), y);
        let c = m.commutator(a, &conj(a, &h));
        for s in m.generators() {
            prop_assert_eq!(conj(&c, &s).key(), c.key());
        }
        let shifted = m.commutator(&conj(a, &g), &conj(&conj(a, &h), &g));
        prop_assert_eq!(shifted.key(), c.key());
    }

    #[test]
    fn word_laws(a in letters(3, 16), b in letters(3, 16)) {
        let (u, v) = (word(&a), word(&b));
        prop_assert!(u.letters.windows(2).all(|p| p[0] != -p[1]));
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert!(u.mul(&u.inverse()).is_empty());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        let (c, core) = u.cyclic_split();
        prop_assert_eq!(c.mul(&core).mul(&c.inverse()), u.clone());
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(parse_word(&u.render(&names), 3).unwrap(), u);
    }

    #[test]
    fn normal_form_invariants(raw in prop::collection::vec(0u64..40, 1..6), seed in any::<u64>()) {
        let n = abelian::abelian_nf(&raw);
        prop_assert!(n.factors.iter().all(|&d| d >= 2));
        prop_assert!(n.factors.windows(2).all(|w| w[1] % w[0] == 0));
        let mut again = n.factors.clone();
        again.extend(std::iter::repeat_n(0, n.rank));
        prop_assert_eq!(abelian::abelian_nf(&again), n.clone());
        let mut shuffled = raw.clone();
        shuffled.rotate_left(seed as usize % raw.len());
        prop_assert_eq!(abelian::abelian_nf(&shuffled), n.clone());
        prop_assert_eq!(n.is_infinite(), raw.contains(&0));
    }

    #[test]
    fn merged_identity_vanishes(
        ws in prop::collection::vec(letters(2, 5), 1..4),
        tuple in prop::collection::vec(letters(2, 6), 2),
        wreath in any::<bool>(),
    ) {
        let ws: Vec<Word> = ws.iter().map(|w| word(w)).filter(|w| !w.is_empty()).collect();
        prop_assume!(!ws.is_empty());
        let merged = merge_identities(&ws).unwrap();
        prop_assert!(!merged.is_empty());
        prop_assert_eq!(Word::new(merged.letters.iter().copied()), merged.clone());
        let m = if wreath { parse_group("(Z)wr(Z)").unwrap() } else { GroupModel::nil(2, 12) };
        let t: Vec<Element> = tuple.iter().map(|l| elem(&m, l)).collect();
        if ws.iter().any(|w| m.is_identity(&m.eval_word(w, &t).unwrap())) {
            prop_assert!(m.is_identity(&m.eval_word(&merged, &t).unwrap()));
        }
    }
}

fn catalog_matrix() -> &'static (Vec<AbelianNF>, Vec<Vec<bool>>) {
    static M: OnceLock<(Vec<AbelianNF>, Vec<Vec<bool>>)> = OnceLock::new();
    M.get_or_init(|| {
        let cat = abelian::catalog();
        let rel = cat
            .iter()
            .map(|a| {
                cat.iter()
                    .map(|b| {
                        let d = abelian::preceq_abelian(a, b).unwrap();
                        assert_ne!(d.verdict, Verdict::Unknown, "{a} vs {b}");
                        d.verdict == Verdict::True
                    })
                    .collect()
            })
            .collect();
        (cat, rel)
    })
}

#[test]
fn abelian_order_is_a_preorder_on_catalog() {
    let (cat, rel) = catalog_matrix();
    let n = cat.len();
    for i in 0..n {
        assert!(rel[i][i], "{} not reflexive", cat[i]);
        for j in 0..n {
            if !rel[i][j] {
                continue;
            }
            for k in 0..n {
                if rel[j][k] {
                    assert!(rel[i][k], "{} ⊰ {} ⊰ {}", cat[i], cat[j], cat[k]);
                }
            }
        }
    }
}

#[test]
fn successors_linear_iff_torsion_free() {
    // the catalog stops at rank 2, so a rank-2 group only sees its own rank
    let (cat, rel) = catalog_matrix();
    for (i, a) in cat.iter().enumerate() {
        let succ: Vec<usize> = (0..cat.len()).filter(|&j| rel[i][j]).collect();
        let linear = succ.iter().all(|&x| succ.iter().all(|&y| rel[x][y] || rel[y][x]));
        if a.is_torsion_free() {
            assert!(linear, "{a}");
        } else if a.rank == 1 {
            assert!(!linear, "{a}: successors {}", succ.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_preserves_order(i in 0usize..70, j in 0usize..70, p in 0usize..5, q in 0usize..5) {
        prop_assume!(p != q);
        let (cat, rel) = catalog_matrix();
        let primes = [2u64, 3, 5, 7, 11];
        let mut sigma: BTreeMap<u64, u64> = primes.iter().map(|&x| (x, x)).collect();
        sigma.insert(primes[p], primes[q]);
        sigma.insert(primes[q], primes[p]);
        let (i, j) = (i % cat.len(), j % cat.len());
        let sa = abelian::sigma_action(&sigma, &cat[i]).unwrap();
        let sb = abelian::sigma_action(&sigma, &cat[j]).unwrap();
        let after = abelian::preceq_abelian(&sa, &sb).unwrap().verdict == Verdict::True;
        prop_assert_eq!(rel[i][j], after);
    }

    #[test]
    fn sentence_witnesses_refalsify(idx in 0usize..4) {
        let groups = ["(Z)x(F2)", "N2_2", "(Z/2)wr(Z)", "BS(1,2)"];
        let mg = MarkedGroup::standard(parse_group(groups[idx]).unwrap());
        let s = parse_sentence(COMMUTATIVE_TRANSITIVITY).unwrap();
        if let SentenceVerdict::Witness { tuple } = evaluate_sentence_on_ball(&mg, &s, 2, &BallOptions::default()).unwrap() {
            let t: Vec<Element> = tuple.iter().map(|w| mg.evaluate(w).unwrap()).collect();
            prop_assert!(!s.holds_at(&mg, &t).unwrap());
        }
    }
}

#[test]
fn abelian_witnesses_cover_catalog_sample() {
    let (cat, rel) = catalog_matrix();
    let o = BallOptions::default();
    let mut checked = 0;
    for i in 0..cat.len() {
        for j in 0..cat.len() {
            if rel[i][j] && i != j && (i * 71 + j) % 7 == 0 {
                let w = abelian::epi_witness(&cat[i], &cat[j], 3).unwrap();
                let v = marked_groups::witness::verify(&w, 3, &o).unwrap();
                assert!(v.agree, "{} ⊰ {}", cat[i], cat[j]);
                checked += 1;
            }
        }
    }
    assert!(checked >= 10, "{checked}");
}

#[test]
fn balls_truncate_and_counts_submultiply() {
    let o = BallOptions::default();
    for d in ["Z^2", "F2", "N2_2", "Grig", "BS(1,2)", "(Z)wr(Z)", "Hall(free)", "(Z/3)wrXGrig"] {
        let mg = MarkedGroup::standard(parse_group(d).unwrap());
        let big = ball(&mg, 4, &o).unwrap();
        assert_eq!(big.to_json(), ball(&mg, 4, &o).unwrap().to_json(), "{d} repeat");
        for r in 0..4 {
            assert_eq!(big.truncate(r).to_json(), ball(&mg, r, &o).unwrap().to_json(), "{d} truncated to {r}");
        }
        let nu = big.counts();
        for a in 0..nu.len() {
            for b in 0..nu.len() - a {
                assert!(nu[a + b] <= nu[a] * nu[b], "{d}: ν({}) > ν({a})ν({b})", a + b);
            }
        }
        assert!(nu.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn agreement_is_monotone_in_radius() {
    let o = BallOptions::default();
    for (x, y) in [("Z^2", "(Z)x(Z/5)"), ("N2_2/5", "N2_2/7"), ("F2", "BS(1,2)"), ("(Z)wr(Z)", "F2")] {
        let a = ball(&MarkedGroup::standard(parse_group(x).unwrap()), 4, &o).unwrap();
        let b = ball(&MarkedGroup::standard(parse_group(y).unwrap()), 4, &o).unwrap();
        let agree: Vec<bool> = (0..=4).map(|r| balls_agree(&a.truncate(r), &b.truncate(r)).unwrap()).collect();
        assert!(agree.windows(2).all(|w| w[0] || !w[1]), "{x} vs {y}: {agree:?}");
    }
}

#[test]
fn threads_do_not_change_balls() {
    let mg = MarkedGroup::standard(parse_group("(Z/2)wrXGrig").unwrap());
    let one = ball(&mg, 4, &BallOptions::with_threads(1)).unwrap().to_json();
    let many = ball(&mg, 4, &BallOptions::with_threads(4)).unwrap().to_json();
    assert_eq!(one, many);
}
