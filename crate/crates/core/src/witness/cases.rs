//! Explicit generating-set families S_R, one constructor per case.

use super::{Params, Witness};
use crate::ball::{explore, BallOptions};
use crate::error::{Error, Result};
use crate::group::grig::Portrait;
use crate::group::{GroupModel, MarkedGroup, Order};
use crate::identity::nilpotent::discriminating_tuple;
use crate::identity::smallcancel::small_cancellation_words;
use crate::int::{to_i64, Int};
use crate::word::{Expr, Word};
use serde_json::json;
use std::collections::{HashMap, VecDeque};

fn gens(range: std::ops::Range<usize>) -> Vec<Expr> {
    range.map(Expr::Gen).collect()
}

fn conj(by: &Expr, e: Expr) -> Expr {
    // by · e · by^-1
    Expr::Prod(vec![by.clone(), e, Expr::inv(by.clone())])
}

fn params(pairs: &[(&str, serde_json::Value)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// First element of norm exactly n in the standard BFS order of `model`.
pub fn element_of_norm(model: &GroupModel, n: u32, opts: &BallOptions) -> Result<Word> {
    let b = explore(&MarkedGroup::standard(model.clone()), n, opts)?;
    b.cert
        .states
        .iter()
        .position(|s| s.norm == n)
        .map(|i| b.word_of(i))
        .ok_or_else(|| Error::Param(format!("{} has no element of norm {n}", model.descriptor())))
}

fn orders(model: &GroupModel) -> Result<Vec<i64>> {
    model
        .generators()
        .iter()
        .map(|g| match model.order(g, 100_000) {
            Order::Finite(n) => Ok(to_i64(&n)),
            Order::Infinite => Ok(0),
            Order::Unknown => Err(Error::Unsupported(format!("order of a generator of {}", model.descriptor()))),
        })
        .collect()
}

/// Z^m marked {e1..em, M e1, M^2 e1, ...} with M = 2R+1, against Z^n.
pub fn zm_in_zn(m: usize, n: usize, r: u32) -> Result<Witness> {
    if m == 0 || m > n {
        return Err(Error::Param(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}")));
    }
    let mult = Int::from(2 * r as u64 + 1);
    let mut marking = gens(0..m);
    let mut p = Int::from(1);
    for _ in m..n {
        p *= &mult;
        marking.push(Expr::pow(Expr::Gen(0), p.clone()));
    }
    let source = MarkedGroup::new(GroupModel::abelian(&vec![0; m]), marking, None)?;
    let target = MarkedGroup::standard(GroupModel::abelian(&vec![0; n]));
    Ok(Witness::new(
        "zm_in_zn",
        params(&[("m", json!(m)), ("n", json!(n)), ("multiplier", json!(mult.to_string()))]),
        r,
        source,
        target,
    ))
}

/// Z/(kℓ) ⊕ Z marked {ℓe1, e2, e1 + c·e2}, against Z/k ⊕ Z^2.
pub fn abelian_step(k: i64, l: i64, r: u32) -> Result<Witness> {
    if k < 1 || l < 1 {
        return Err(Error::Param("need k, ℓ ≥ 1".into()));
    }
    let c: i64 = if l >= 2 { r as i64 } else { 2 * r as i64 + 1 };
    let marking = vec![
        Expr::pow(Expr::Gen(0), l),
        Expr::Gen(1),
        Expr::Prod(vec![Expr::Gen(0), Expr::pow(Expr::Gen(1), c)]),
    ];
    let source = MarkedGroup::new(GroupModel::abelian(&[k * l, 0]), marking, None)?;
    let target = MarkedGroup::standard(GroupModel::abelian(&[k, 0, 0]));
    Ok(Witness::new("abelian_step", params(&[("k", json!(k)), ("l", json!(l)), ("c", json!(c))]), r, source, target))
}

/// F_m marked {x1..xm} ∪ C'(1/6) words of length ≥ 2R+1, against F_n.
pub fn free_mn(m: usize, n: usize, r: u32) -> Result<Witness> {
    if m > n || m == 0 {
        return Err(Error::Param(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}")));
    }
    if m == 1 && n > 1 {
        return Err(Error::Param("small cancellation words need m ≥ 2".into()));
    }
    let words = small_cancellation_words(m.max(2), n - m, 2 * r as usize + 1)?;
    let mut marking = gens(0..m);
    let lens: Vec<usize> = words.iter().map(|w| w.len()).collect();
    marking.extend(words.iter().map(Expr::from_word));
    let source = MarkedGroup::new(GroupModel::Free(m), marking, None)?;
    let target = MarkedGroup::standard(GroupModel::Free(n));
    Ok(Witness::new("free_mn", params(&[("m", json!(m)), ("n", json!(n)), ("word_lengths", json!(lens))]), r, source, target))
}

/// G * F_m marked {g_i w_i(T)} ∪ T, against F_{k+m}.
pub fn free_pad(g: &GroupModel, m: usize, r: u32) -> Result<Witness> {
    if m < 2 {
        return Err(Error::Param("free_pad needs m ≥ 2".into()));
    }
    let k = g.num_gens();
    let words = small_cancellation_words(m, k, 2 * r as usize + 1)?;
    let model = GroupModel::free_prod(g.clone(), GroupModel::Free(m));
    let mut marking: Vec<Expr> =
        (0..k).map(|i| Expr::Prod(vec![Expr::Gen(i), Expr::from_word(&words[i]).shift(k)])).collect();
    marking.extend(gens(k..k + m));
    // g_i = s_i · w_i(T)^-1, T itself is marked
    let mut cert: Vec<Expr> =
        (0..k).map(|i| Expr::Prod(vec![Expr::Gen(i), Expr::inv(Expr::from_word(&words[i]).shift(k))])).collect();
    cert.extend(gens(k..k + m));
    let source = MarkedGroup::new(model, marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::Free(k + m));
    Ok(Witness::new("free_pad", params(&[("G", json!(g.descriptor())), ("m", json!(m))]), r, source, target))
}

/// (A*B) ≀ C with the B-lamps moved to x, ‖x‖ = R+1, against (A×B) ≀ C.
pub fn wreath_split(a: &GroupModel, b: &GroupModel, c: &GroupModel, r: u32, opts: &BallOptions) -> Result<Witness> {
    let (na, nb, nc) = (a.num_gens(), b.num_gens(), c.num_gens());
    let x = element_of_norm(c, r + 1, opts)?;
    let xe = Expr::from_word(&x).shift(na + nb);
    let model = GroupModel::wreath(GroupModel::free_prod(a.clone(), b.clone()), c.clone());
    let mut marking = gens(0..na);
    marking.extend((na..na + nb).map(|i| conj(&xe, Expr::Gen(i))));
    marking.extend(gens(na + nb..na + nb + nc));
    // in marking indices the base generators sit at the same positions
    let mut cert = gens(0..na);
    cert.extend((na..na + nb).map(|i| conj(&Expr::inv(xe.clone()), Expr::Gen(i))));
    cert.extend(gens(na + nb..na + nb + nc));
    let source = MarkedGroup::new(model, marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::wreath(GroupModel::direct(a.clone(), b.clone()), c.clone()));
    Ok(Witness::new(
        "wreath_split",
        params(&[
            ("A", json!(a.descriptor())),
            ("B", json!(b.descriptor())),
            ("C", json!(c.descriptor())),
            ("x", json!(x.render(&c.gen_names()))),
        ]),
        r,
        source,
        target,
    ))
}

/// A ≀ H with a_i supported at x_i, ‖x_i‖ = (R+1)(i-1), against (C_{e_1}×…×C_{e_k}) ≀ H.
pub fn any_to_direct(lamp: &GroupModel, base: &GroupModel, r: u32, opts: &BallOptions) -> Result<Witness> {
    let k = lamp.num_gens();
    let nb = base.num_gens();
    let ords = orders(lamp)?;
    let mut positions = Vec::new();
    for i in 0..k {
        positions.push(element_of_norm(base, (r + 1) * i as u32, opts)?);
    }
    let pos_exprs: Vec<Expr> = positions.iter().map(|w| Expr::from_word(w).shift(k)).collect();
    let mut marking: Vec<Expr> = (0..k).map(|i| conj(&pos_exprs[i], Expr::Gen(i))).collect();
    marking.extend(gens(k..k + nb));
    let mut cert: Vec<Expr> = (0..k).map(|i| conj(&Expr::inv(pos_exprs[i].clone()), Expr::Gen(i))).collect();
    cert.extend(gens(k..k + nb));
    let source = MarkedGroup::new(GroupModel::wreath(lamp.clone(), base.clone()), marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::wreath(GroupModel::abelian(&ords), base.clone()));
    let names = base.gen_names();
    Ok(Witness::new(
        "any_to_direct",
        params(&[
            ("lamp", json!(lamp.descriptor())),
            ("base", json!(base.descriptor())),
            ("orders", json!(ords)),
            ("positions", json!(positions.iter().map(|w| w.render(&names)).collect::<Vec<_>>())),
        ]),
        r,
        source,
        target,
    ))
}

/// Rooted Schreier ball of radius r around a point of the orbit of 0^∞, in canonical BFS form.
pub fn schreier_ball(point: &[u8], r: u32) -> Vec<(u32, [Option<u32>; 4])> {
    let gens: Vec<Portrait> = (0..4).map(Portrait::generator).collect();
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut pts = vec![point.to_vec()];
    let mut out = vec![(0u32, [None; 4])];
    index.insert(point.to_vec(), 0);
    let mut i = 0;
    while i < pts.len() {
        let d = out[i].0;
        for (l, g) in gens.iter().enumerate() {
            let q = g.act_point(&pts[i]);
            let t = match index.get(&q) {
                Some(&t) => Some(t),
                None if d < r => {
                    let t = pts.len() as u32;
                    index.insert(q.clone(), t);
                    pts.push(q);
                    out.push((d + 1, [None; 4]));
                    Some(t)
                }
                None => None,
            };
            out[i].1[l] = t;
        }
        i += 1;
    }
    out
}

/// Shortest word u over a,b,c,d (shortlex) with 0^∞ · u = target, and its length.
pub fn orbit_word(target: &[u8], limit: usize) -> Option<Vec<u8>> {
    let gens: Vec<Portrait> = (0..4).map(Portrait::generator).collect();
    let mut seen: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    seen.insert(Vec::new(), Vec::new());
    let mut queue = VecDeque::from([Vec::<u8>::new()]);
    while let Some(p) = queue.pop_front() {
        let w = seen[&p].clone();
        if p == target {
            return Some(w);
        }
        if w.len() >= limit {
            continue;
        }
        for (l, g) in gens.iter().enumerate() {
            let q = g.act_point(&p);
            if !seen.contains_key(&q) {
                let mut w2 = w.clone();
                w2.push(l as u8);
                seen.insert(q.clone(), w2);
                queue.push_back(q);
            }
        }
    }
    None
}

fn schreier_distance(p: &[u8], q: &[u8], limit: u32) -> Option<u32> {
    let gens: Vec<Portrait> = (0..4).map(Portrait::generator).collect();
    let mut seen: HashMap<Vec<u8>, u32> = HashMap::new();
    seen.insert(p.to_vec(), 0);
    let mut queue = VecDeque::from([p.to_vec()]);
    while let Some(x) = queue.pop_front() {
        let d = seen[&x];
        if x == q {
            return Some(d);
        }
        if d >= limit {
            continue;
        }
        for g in &gens {
            let y = g.act_point(&x);
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    None
}

pub const GRIG_WORD_EXTRA: usize = 8;

/// Points x_i = v_i 0^∞ with |v_i| = 2⌊log₂R⌋ (grown if needed), R-balls isomorphic to that of 0^∞,
/// pairwise Schreier distance > R.
pub fn grig_points(k: usize, r: u32) -> Result<Vec<Vec<u8>>> {
    let base_len = if r >= 2 { 2 * (31 - r.leading_zeros()) as usize } else { 2 };
    let root = schreier_ball(&[], r);
    for len in base_len..=base_len + GRIG_WORD_EXTRA {
        let mut chosen: Vec<Vec<u8>> = vec![Vec::new()];
        for idx in 0..(1u64 << len) {
            if chosen.len() == k {
                break;
            }
            let v: Vec<u8> = (0..len).map(|j| (idx >> (len - 1 - j) & 1) as u8).collect();
            let mut p = v.clone();
            while p.last() == Some(&0) {
                p.pop();
            }
            if chosen.contains(&p) || schreier_ball(&p, r) != root {
                continue;
            }
            if chosen.iter().all(|q| schreier_distance(q, &p, r).is_none()) {
                chosen.push(p);
            }
        }
        if chosen.len() == k {
            return Ok(chosen);
        }
    }
    Err(Error::Budget(format!("no {k} separated points with words of length ≤ {}", base_len + GRIG_WORD_EXTRA)))
}

/// G ≀_X Grig with a_i supported at x_i, against B ≀_X Grig, B = C_{e_1}×…×C_{e_k}.
pub fn grig_wreath(lamp: &GroupModel, r: u32) -> Result<Witness> {
    let k = lamp.num_gens();
    let ords = orders(lamp)?;
    let points = grig_points(k, r)?;
    let model = GroupModel::PermWreathGrig(Box::new(lamp.clone()));
    let mut marking = Vec::new();
    let mut cert = Vec::new();
    for (i, p) in points.iter().enumerate() {
        // u^-1 ℓ u carries the lamp from 0^∞ to 0^∞·u
        let u = orbit_word(p, 64).ok_or_else(|| Error::Budget("orbit word".into()))?;
        let ue = Expr::Prod(u.iter().map(|&l| Expr::Gen(k + l as usize)).collect());
        marking.push(conj(&Expr::inv(ue.clone()), Expr::Gen(i)));
        cert.push(conj(&ue, Expr::Gen(i)));
    }
    marking.extend(gens(k..k + 4));
    cert.extend(gens(k..k + 4));
    let source = MarkedGroup::new(model, marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::PermWreathGrig(Box::new(GroupModel::abelian(&ords))));
    let render = |p: &Vec<u8>| p.iter().map(|b| (b'0' + b) as char).collect::<String>() + "0^inf";
    Ok(Witness::new(
        "grig_wreath",
        params(&[
            ("lamp", json!(lamp.descriptor())),
            ("orders", json!(ords)),
            ("points", json!(points.iter().map(render).collect::<Vec<_>>())),
        ]),
        r,
        source,
        target,
    ))
}

/// Z ≀ Z marked {t, t^n a}, against the free metabelian group on 2 generators.
pub fn lamplighter_metab(n: i64, r: u32) -> Result<Witness> {
    let model = GroupModel::wreath(GroupModel::abelian(&[0]), GroupModel::abelian(&[0]));
    let marking = vec![Expr::Gen(1), Expr::Prod(vec![Expr::pow(Expr::Gen(1), n), Expr::Gen(0)])];
    let cert = vec![Expr::Prod(vec![Expr::pow(Expr::Gen(0), -n), Expr::Gen(1)]), Expr::Gen(0)];
    let source = MarkedGroup::new(model, marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::FreeMetabelian(2));
    Ok(Witness::new("lamplighter_metab", params(&[("n", json!(n))]), r, source, target))
}

/// BS(1,p) marked {a, t^(i²+1), t^i}, against Z ≀ Z^2.
pub fn bs_to_wreath(p: i64, i: i64, r: u32) -> Result<Witness> {
    if p < 2 || i < 1 {
        return Err(Error::Param("need p ≥ 2 and i ≥ 1".into()));
    }
    let n = i * i + 1;
    let marking = vec![Expr::Gen(0), Expr::pow(Expr::Gen(1), n), Expr::pow(Expr::Gen(1), i)];
    // t = t^(i²+1) (t^i)^(-i)
    let cert = vec![Expr::Gen(0), Expr::Prod(vec![Expr::Gen(1), Expr::pow(Expr::Gen(2), -i)])];
    let source = MarkedGroup::new(GroupModel::BaumslagSolitar(Int::from(p)), marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::wreath(GroupModel::abelian(&[0]), GroupModel::abelian(&[0, 0])));
    Ok(Witness::new("bs_to_wreath", params(&[("p", json!(p)), ("i", json!(i)), ("n", json!(n))]), r, source, target))
}

/// N_{2,k} marked by a discriminating N-tuple, against N_{2,N}; balls agree at ⌊R/2⌋.
pub fn nil_relfree(k: usize, n: usize, r: u32, opts: &BallOptions) -> Result<Witness> {
    let t = discriminating_tuple(k, n, r, 1, opts)?;
    let source = MarkedGroup::new(GroupModel::nil(k, 0), t.marking.clone(), None)?;
    let target = MarkedGroup::standard(GroupModel::nil(n, 0));
    let exps: Vec<Vec<String>> = t.exponents.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
    let mut w = Witness::new(
        "nil_relfree",
        params(&[("k", json!(k)), ("N", json!(n)), ("speed", json!(t.speed)), ("exponents", json!(exps))]),
        r,
        source,
        target,
    );
    w.check_radius = t.ball_radius;
    Ok(w)
}

/// G ≀ H marked U = {w, w^{h_1} g_1^h, …} ∪ T, against F_{k+1} * H. G must be free of rank ≥ 2.
/// Built with L = 2R+1 so that no relation of length ≤ L appears outside H.
pub fn akhmedov_free(lamp: &GroupModel, base: &GroupModel, r: u32, opts: &BallOptions) -> Result<Witness> {
    let GroupModel::Free(k) = lamp else {
        return Err(Error::Unsupported("akhmedov_free takes a free lamp group of rank ≥ 2".into()));
    };
    let k = *k;
    if k < 2 {
        return Err(Error::Param("lamp group needs rank ≥ 2".into()));
    }
    let nb = base.num_gens();
    let l = 2 * r + 1;
    let big = (k as u32 + 1) * l;
    let ball_b = explore(&MarkedGroup::standard(base.clone()), big, opts)?;
    let shift = |w: &Word| Expr::from_word(w).shift(k);
    // w(b_j) = x^j y x^-j over the BFS enumeration b_0, b_1, … of the ball B
    let mut w_parts = Vec::new();
    for j in 0..ball_b.elements.len() {
        let val = Expr::Prod(vec![Expr::pow(Expr::Gen(0), j as i64), Expr::Gen(1), Expr::pow(Expr::Gen(0), -(j as i64))]);
        w_parts.push(conj(&shift(&ball_b.word_of(j)), val));
    }
    let w = Expr::Prod(w_parts);
    let h = element_of_norm(base, big + 1, opts)?;
    let he = shift(&h);
    let mut marking = vec![w.clone()];
    let mut his = Vec::new();
    for i in 1..=k {
        let hi = element_of_norm(base, l * i as u32, opts)?;
        let hie = shift(&hi);
        // w^{h_i} g_i^h with x^y = y^-1 x y
        marking.push(Expr::Prod(vec![conj(&Expr::inv(hie.clone()), w.clone()), conj(&Expr::inv(he.clone()), Expr::Gen(i - 1))]));
        his.push(hi);
    }
    marking.extend(gens(k..k + nb));
    // certificate over marking indices: base gens sit at k+1.., and g_i = h (w^{h_i})^-1 u_i h^-1
    let in_marking = |w: &Word| Expr::from_word(w).shift(k + 1);
    let hm = in_marking(&h);
    let mut cert = Vec::new();
    for (i, hi) in his.iter().enumerate() {
        let him = in_marking(hi);
        let w_hi = conj(&Expr::inv(him), Expr::Gen(0));
        cert.push(conj(&hm, Expr::Prod(vec![Expr::inv(w_hi), Expr::Gen(i + 1)])));
    }
    cert.extend(gens(k + 1..k + 1 + nb));
    let source = MarkedGroup::new(GroupModel::wreath(lamp.clone(), base.clone()), marking, Some(&cert))?;
    let target = MarkedGroup::standard(GroupModel::free_prod(GroupModel::Free(k + 1), base.clone()));
    let names = base.gen_names();
    Ok(Witness::new(
        "akhmedov_free",
        params(&[
            ("G", json!(lamp.descriptor())),
            ("H", json!(base.descriptor())),
            ("L", json!(l)),
            ("ball_size", json!(ball_b.elements.len())),
            ("h", json!(h.render(&names))),
            ("h_i", json!(his.iter().map(|w| w.render(&names)).collect::<Vec<_>>())),
        ]),
        r,
        source,
        target,
    ))
}

/// The trivial self-witness.
pub fn identity(model: &GroupModel, r: u32) -> Witness {
    let mg = MarkedGroup::standard(model.clone());
    Witness::new("identity", params(&[("G", json!(model.descriptor()))]), r, mg.clone(), mg)
}
