//! Acceptance criteria, one PASS/FAIL line each. Exit status 1 if any fails.

mod common;

use common::*;
use marked_groups::abelian::{self, AbelianNF, Verdict};
use marked_groups::ball::{ball, balls_agree, girth, growth, BallOptions, Girth};
use marked_groups::group::grig::{eval_word, to_abcd, word_is_trivial, Portrait};
use marked_groups::identity::abert::{distinctive_tuple, girth_triple, no_short_relations, REPAIR_RADIUS};
use marked_groups::identity::nilpotent::verbal_subgroup;
use marked_groups::identity::sentence::{evaluate_sentence_on_ball, parse_sentence, SentenceVerdict, COMMUTATIVE_TRANSITIVITY, N22_SENTENCE};
use marked_groups::identity::smallcancel::verify_small_cancellation;
use marked_groups::identity::{falsify_identity, merge_identities, shortlex_words, Search};
use marked_groups::int::int;
use marked_groups::witness::{self, parse_params};
use marked_groups::{growth as alpha, parse_group, parse_word, GroupModel, MarkedGroup, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn std_marked(s: &str) -> MarkedGroup {
    MarkedGroup::standard(parse_group(s).unwrap())
}

fn c1_growth() -> Check {
    let t = Instant::now();
    let o = BallOptions::default();
    let z2 = growth(&std_marked("Z^2"), 10, &o).map_err(e)?;
    for r in 0..=10u64 {
        ensure(z2.counts[r as usize] == 2 * r * r + 2 * r + 1, format!("Z^2 at r={r}: {}", z2.counts[r as usize]))?;
    }
    let f2 = growth(&std_marked("F2"), 8, &o).map_err(e)?;
    for r in 0..=8u32 {
        ensure(f2.counts[r as usize] == 2 * 3u64.pow(r) - 1, format!("F2 at r={r}: {}", f2.counts[r as usize]))?;
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(10), format!("took {dt:?}"))?;
    Ok(format!("Z^2 r≤10, F2 r≤8 exact in {:.2}s", dt.as_secs_f64()))
}

fn c2_girth() -> Check {
    let o = BallOptions::default();
    let mut literal_counterexamples = Vec::new();
    let mut checked = 0;
    for g in ["Z^2", "N2_2", "(Z)wr(Z)", "Grig", "BS(1,2)"] {
        let mg = std_marked(g);
        let gi = match girth(&mg, 4, &o).map_err(e)? {
            Girth::Value(v) => v,
            Girth::Exceeds(v) => v + 1,
        };
        for r in 0..=4u32 {
            let free = ball(&std_marked(&format!("F{}", mg.arity())), r, &o).map_err(e)?;
            let agree = balls_agree(&ball(&mg, r, &o).map_err(e)?, &free).map_err(e)?;
            ensure(agree == (gi > 2 * r + 1), format!("{g} R={r}: girth {gi}, agree {agree}"))?;
            if agree != (gi > 2 * r) {
                literal_counterexamples.push(format!("{g} R={r} girth {gi}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} cases: agree ⟺ girth ≥ 2R+2; the form 'girth > 2R' fails on odd girth 2R+1: [{}]",
        literal_counterexamples.join(", ")
    ))
}

fn c3_witnesses() -> Check {
    let o = BallOptions::default();
    let cases = [
        ("zm_in_zn", "m=1,n=2", 5),
        ("abelian_step", "k=2,l=3", 4),
        ("free_mn", "m=2,n=3", 3),
        ("lamplighter_metab", "n=4", 2),
        ("bs_to_wreath", "p=2,i=4", 2),
        ("any_to_direct", "", 2),
        ("grig_wreath", "", 2),
        ("nil_relfree", "k=2,N=3", 4),
        ("hall_colouring", "", 2),
    ];
    let mut slowest = (0.0f64, "");
    for (case, params, r) in cases {
        let t = Instant::now();
        let w = witness::build(case, &parse_params(params).map_err(e)?, r, &o).map_err(|x| format!("{case}: {x}"))?;
        let v = witness::verify(&w, w.check_radius, &o).map_err(|x| format!("{case}: {x}"))?;
        let dt = t.elapsed().as_secs_f64();
        ensure(v.agree, format!("{case} R={r} disagrees at {:?}", v.first_divergence))?;
        ensure(dt < 120.0, format!("{case} took {dt:.1}s"))?;
        if case == "nil_relfree" {
            ensure(w.check_radius == 2, format!("nil_relfree checked at {}", w.check_radius))?;
        }
        if dt > slowest.0 {
            slowest = (dt, case);
        }
    }
    Ok(format!("9 cases agree; slowest {} {:.1}s", slowest.1, slowest.0))
}

fn grig_letters(w: &[i32]) -> Word {
    word(w)
}

fn c4_grigorchuk() -> Check {
    for s in ["a a", "b b", "c c", "d d", "b c d"] {
        let letters: Vec<i32> = s.split(' ').map(|c| "abcd".find(c).unwrap() as i32 + 1).collect();
        let w = grig_letters(&letters);
        ensure(eval_word(&w).is_one() && word_is_trivial(&to_abcd(&w)), format!("{s} ≠ 1"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut equal_pairs = 0;
    for i in 0..1000 {
        let u = random_grig(&mut rng, 20);
        let v = if i % 4 == 0 {
            // a conjugated copy gives equal pairs often enough
            let mut v = u.clone();
            v.extend([2, 3, 4]);
            v
        } else {
            random_grig(&mut rng, 20)
        };
        let by_portrait = eval_word(&grig_letters(&u)) == eval_word(&grig_letters(&v));
        let mut uv: Vec<u8> = to_abcd(&grig_letters(&u));
        uv.extend(to_abcd(&grig_letters(&v)).iter().rev());
        let by_contraction = word_is_trivial(&uv);
        ensure(by_portrait == by_contraction, format!("disagree on {u:?} vs {v:?}"))?;
        equal_pairs += by_portrait as usize;
    }
    let nu1 = growth(&std_marked("Grig"), 1, &BallOptions::default()).map_err(e)?.counts[1];
    ensure(nu1 == 5, format!("ν(1) = {nu1}"))?;
    let mut orders = Vec::new();
    for (x, y) in [(1, 2), (1, 3), (1, 4)] {
        let g = eval_word(&word(&[x, y]));
        let mut p = g.clone();
        let mut n = 1u32;
        while !p.is_one() {
            p = p.mul(&g);
            n += 1;
            ensure(n <= 64, "order search ran past 64")?;
        }
        let pow: Vec<u8> = (0..n).flat_map(|_| [x as u8 - 1, y as u8 - 1]).collect();
        let shorter: Vec<u8> = (0..n - 1).flat_map(|_| [x as u8 - 1, y as u8 - 1]).collect();
        ensure(word_is_trivial(&pow) && !word_is_trivial(&shorter), format!("contraction disagrees on order {n}"))?;
        ensure(n.is_power_of_two(), format!("order {n} not a power of two"))?;
        orders.push(n);
    }
    Ok(format!("1000 pairs agree ({equal_pairs} equal); ν(1)=5; ord(ab,ac,ad) = {orders:?}"))
}

fn portrait_of(g: &[u8]) -> Portrait {
    g.iter().fold(Portrait::one(), |acc, &l| acc.mul(&Portrait::generator(l as usize)))
}

fn portrait_word(w: &Word, tuple: &[Vec<u8>]) -> Portrait {
    w.letters.iter().fold(Portrait::one(), |acc, &l| {
        let p = portrait_of(&tuple[l.unsigned_abs() as usize - 1]);
        // every element of the tuple is inverted by reversing its word
        let p = if l > 0 { p } else { portrait_of(&tuple[l.unsigned_abs() as usize - 1].iter().rev().copied().collect::<Vec<_>>()) };
        acc.mul(&p)
    })
}

fn spans_by_portraits(tuple: &[Vec<u8>]) -> bool {
    let vecs: Vec<[u8; 3]> = tuple.iter().map(|g| portrait_of(g).abelianization()).collect();
    let mut seen: BTreeSet<[u8; 3]> = BTreeSet::new();
    seen.insert([0, 0, 0]);
    for v in &vecs {
        let cur: Vec<[u8; 3]> = seen.iter().copied().collect();
        for c in cur {
            seen.insert([c[0] ^ v[0], c[1] ^ v[1], c[2] ^ v[2]]);
        }
    }
    seen.len() == 8
}

fn c5_abert() -> Check {
    let t = Instant::now();
    let o = BallOptions::default();
    let words: Vec<Word> = shortlex_words(2, 4).into_iter().filter(|w| !w.is_empty()).collect();
    let mut repairs = 0;
    for w in &words {
        let d = distinctive_tuple(w, 3, REPAIR_RADIUS, &o).map_err(|x| format!("{w:?}: {x}"))?;
        let tuple: Vec<Vec<u8>> = d.tuple.iter().map(|g| g.word.clone()).collect();
        ensure(spans_by_portraits(&tuple), format!("{w:?}: tuple does not generate"))?;
        ensure(!portrait_word(w, &tuple).is_one(), format!("{w:?}: w(tuple) = 1"))?;
        repairs += d.repairs;
    }
    let tri = girth_triple(4, &o).map_err(e)?;
    let tuple: Vec<Vec<u8>> = tri.tuple.iter().map(|g| g.word.clone()).collect();
    ensure(spans_by_portraits(&tuple), "girth triple does not generate")?;
    ensure(no_short_relations(&tuple, 5), "girth triple has a relation of length ≤ 5")?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(600), format!("took {dt:?}"))?;
    let names: Vec<String> = tri.tuple.iter().map(|g| g.render()).collect();
    Ok(format!("{} words ({repairs} repairs); girth ≥ 6 triple {names:?}; {:.1}s", words.len(), dt.as_secs_f64()))
}

fn split(g: &AbelianNF) -> (usize, Vec<u64>) {
    (g.rank, g.factors.clone())
}

fn c6_abelian() -> Check {
    let cat = abelian::catalog();
    let mut pairs = 0;
    let mut holds = 0;
    for a in &cat {
        for b in &cat {
            let d = abelian::preceq_abelian(a, b).map_err(e)?;
            ensure(d.verdict != Verdict::Unknown, format!("unknown on {a} vs {b}"))?;
            let (ra, ta) = split(a);
            let (rb, tb) = split(b);
            let oracle = oracle_preceq(ra, &ta, rb, &tb);
            ensure((d.verdict == Verdict::True) == oracle, format!("{a} ⊰ {b}: library {:?}, oracle {oracle}", d.verdict))?;
            pairs += 1;
            holds += oracle as usize;
        }
    }
    let q: Vec<AbelianNF> = ["Z/6 x Z", "Z/35 x Z", "Z/10 x Z", "Z/21 x Z"].iter().map(|s| AbelianNF::parse(s).unwrap()).collect();
    ensure(q[0].product(&q[1]) == q[2].product(&q[3]), "A×B ≇ C×D")?;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                ensure(abelian::preceq_abelian(&q[i], &q[j]).map_err(e)?.verdict == Verdict::False, format!("quartet {i} ⊰ {j}"))?;
            }
        }
    }
    let subsets: Vec<BTreeSet<usize>> = (0..8u32).map(|m| (1..=3).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect();
    let fam = abelian::poset_from_subsets(&[2, 3, 5], &subsets).map_err(e)?;
    for (i, u) in subsets.iter().enumerate() {
        for (j, v) in subsets.iter().enumerate() {
            let p = abelian::preceq_abelian(&fam[i], &fam[j]).map_err(e)?.verdict == Verdict::True;
            ensure(p == v.is_subset(u), format!("A_{u:?} vs A_{v:?}"))?;
        }
    }
    Ok(format!("{pairs} catalog pairs agree with brute force ({holds} true, 0 unknown); quartet incomparable; 64 subset pairs"))
}

fn c7_sigma() -> Check {
    let cat = abelian::catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let primes = [2u64, 3, 5, 7, 11];
    let mut checked = 0;
    for _ in 0..5 {
        let mut two: Vec<u64> = primes.choose_multiple(&mut rng, 2).copied().collect();
        two.sort();
        let mut sigma: std::collections::BTreeMap<u64, u64> = primes.iter().map(|&p| (p, p)).collect();
        sigma.insert(two[0], two[1]);
        sigma.insert(two[1], two[0]);
        for _ in 0..20 {
            let a = &cat[rng.gen_range(0..cat.len())];
            let b = &cat[rng.gen_range(0..cat.len())];
            let before = abelian::preceq_abelian(a, b).map_err(e)?.verdict;
            let sa = abelian::sigma_action(&sigma, a).map_err(e)?;
            let sb = abelian::sigma_action(&sigma, b).map_err(e)?;
            let after = abelian::preceq_abelian(&sa, &sb).map_err(e)?.verdict;
            ensure(before == after, format!("{a} vs {b} under {}↔{}", two[0], two[1]))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pair/transposition combinations invariant"))
}

fn c8_alpha() -> Check {
    let t = Instant::now();
    let a = alpha::solve_alpha(1e-9).map_err(e)?;
    let dt = t.elapsed();
    ensure((a.alpha - 0.7674).abs() <= 1e-4, format!("α = {}", a.alpha))?;
    ensure(alpha::alpha_residual(a.lo) < 0.0 && alpha::alpha_residual(a.hi) > 0.0, "no sign change on the bracket")?;
    ensure(dt < Duration::from_secs(1), format!("took {dt:?}"))?;
    Ok(format!("α = {:.8} in [{:.10}, {:.10}]", a.alpha, a.lo, a.hi))
}

fn c9_sentences() -> Check {
    let o = BallOptions::default();
    let ct = parse_sentence(COMMUTATIVE_TRANSITIVITY).map_err(e)?;
    let holds = |g: &str, s, r| evaluate_sentence_on_ball(&std_marked(g), s, r, &o).map_err(e);
    ensure(matches!(holds("F2", &ct, 2)?, SentenceVerdict::HoldsOnBall { .. }), "fails on F2")?;
    ensure(matches!(holds("(Z)x(F2)", &ct, 2)?, SentenceVerdict::Witness { .. }), "holds on Z×F2")?;
    let n22 = parse_sentence(N22_SENTENCE).map_err(e)?;
    let h = std_marked("(N2_2)x(N2_2)");
    let gens = h.elements.clone();
    // a, z generate the first factor, b, c the second
    let tuple = [gens[0].clone(), gens[2].clone(), gens[3].clone(), gens[1].clone()];
    ensure(!n22.holds_at(&h, &tuple).map_err(e)?, "the (a,b,c,z) tuple does not falsify")?;
    ensure(matches!(holds("N2_2", &n22, 2)?, SentenceVerdict::HoldsOnBall { .. }), "fails on N2_2")?;
    Ok("commutative transitivity: F2 holds, Z×F2 falsified; N22 sentence: falsified on N22×N22, holds on N22".into())
}

fn c10_identity_lab() -> Check {
    let o = BallOptions::default();
    let w = parse_word("[x,y]^3", 2).map_err(e)?;
    let none = falsify_identity(&GroupModel::nil(2, 3), &w, 3, &o).map_err(e)?;
    ensure(matches!(none, Search::NoneFound { .. }), "falsified in N(2,3)")?;
    let some = falsify_identity(&GroupModel::nil(2, 5), &w, 3, &o).map_err(e)?;
    ensure(matches!(some, Search::Found { .. }), "not falsified in N(2,5)")?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let groups = [GroupModel::nil(2, 3), GroupModel::Grigorchuk, parse_group("(Z/2)wr(Z)").unwrap()];
    let mut vanishing = 0;
    for i in 0..1000 {
        let model = &groups[i % groups.len()];
        let ws: Vec<Word> = (0..2)
            .map(|_| {
                let len = rng.gen_range(1..5);
                word(&random_reduced(&mut rng, 2, len))
            })
            .filter(|w| !w.is_empty())
            .collect();
        let m = merge_identities(&ws).map_err(e)?;
        let gens = MarkedGroup::standard(model.clone()).elements;
        let tuple: Vec<_> = (0..2)
            .map(|_| {
                let len = rng.gen_range(0..4);
                let g = random_reduced(&mut rng, gens.len(), len);
                model.eval_word(&word(&g), &gens).unwrap()
            })
            .collect();
        let any = ws.iter().any(|w| model.is_identity(&model.eval_word(w, &tuple).unwrap()));
        if any {
            vanishing += 1;
            ensure(model.is_identity(&model.eval_word(&m, &tuple).unwrap()), format!("merge of {ws:?} survives"))?;
        }
    }
    let mut sc_checked = 0;
    for _ in 0..1000 {
        let count = rng.gen_range(1..5);
        let budget = 200 / count;
        let words: Vec<Vec<i32>> = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=budget.min(60));
                random_reduced(&mut rng, 2, len)
            })
            .collect();
        let ws: Vec<Word> = words.iter().map(|w| word(w)).collect();
        if ws.iter().any(|w| w.cyclically_reduced().is_empty()) {
            continue;
        }
        let sc = verify_small_cancellation(&ws, 1, 6);
        let brute = brute_max_piece(&words);
        let min_len = ws.iter().map(|w| w.cyclically_reduced().len()).min().unwrap();
        ensure(sc.max_piece == brute && sc.ok == (6 * brute < min_len), format!("pieces differ on {words:?}"))?;
        sc_checked += 1;
    }
    Ok(format!("[x,y]^3: none in N(2,3) r≤3, found in N(2,5); merge held on {vanishing} vanishing evaluations; {sc_checked} piece checks"))
}

fn c11_verbal() -> Check {
    let o = BallOptions::default();
    let w = parse_word("[x,y]", 2).map_err(e)?;
    let mut desc = String::from("N2_2/5");
    for n in 1..=3 {
        let v = verbal_subgroup(&parse_group(&desc).unwrap(), std::slice::from_ref(&w), 1, &o).map_err(e)?;
        ensure(v.free_rank == 0 && v.invariant_factors == vec![int(5); n], format!("n={n}: {v:?}"))?;
        desc = format!("({desc})x(N2_2/5)");
    }
    Ok("V([x,y]) = (Z/5)^n for n = 1, 2, 3".into())
}

fn c12_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_mgroups");
    let dir = std::env::temp_dir().join(format!("mgroups-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(e)?;
    let n = std::thread::available_parallelism().map(|x| x.get()).unwrap_or(2).max(2).to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["ball", "Grig", "-R", "5"],
        vec!["witness", "grig_wreath", "-R", "2"],
        vec!["witness", "abelian_step", "--k", "2", "--l", "3", "-R", "4"],
        vec!["hall", "-R", "2"],
        vec!["discriminate", "identity", "--group", "N2_2/3", "--words", "[x,y]^3", "-R", "2"],
        vec!["distinctive", "--girth", "-R", "4"],
        vec!["order-abelian", "--catalog", "--format", "csv"],
        vec!["nueg", "--lamp", "Z/2", "--radii", "1,2", "--format", "csv"],
    ];
    for (ci, args) in commands.iter().enumerate() {
        let mut outs = Vec::new();
        for (run, threads) in ["1", n.as_str(), n.as_str()].iter().enumerate() {
            let file = dir.join(format!("out-{ci}-{run}"));
            let mut full: Vec<&str> = args.clone();
            let fstr = file.to_str().unwrap().to_string();
            full.extend(["--threads", threads, "--omit-timings", "-o", &fstr]);
            if !args.contains(&"--format") {
                full.extend(["--format", "json"]);
            }
            let out = Command::new(bin).args(&full).output().map_err(e)?;
            ensure(out.status.code() == Some(0), format!("{args:?} exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
            outs.push((out.stdout, std::fs::read(&file).map_err(e)?));
        }
        ensure(outs.windows(2).all(|w| w[0] == w[1]), format!("{args:?} differs across runs"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands byte-identical over threads 1, {n}, {n}", commands.len()))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Check)> = vec![
        (1, "exact growth", c1_growth),
        (2, "girth-ball equivalence", c2_girth),
        (3, "witness suite", c3_witnesses),
        (4, "Grigorchuk word problem", c4_grigorchuk),
        (5, "distinctive tuples and girth triple", c5_abert),
        (6, "abelian order", c6_abelian),
        (7, "sigma action", c7_sigma),
        (8, "alpha root", c8_alpha),
        (9, "sentences", c9_sentences),
        (10, "identity lab", c10_identity_lab),
        (11, "verbal subgroups", c11_verbal),
        (12, "determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {n:>2} {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
