//! Fast-growing generating sets of Z^d, discriminating tuples in N_{2,k}, and central verbal subgroups.

use crate::ball::{ball, balls_agree, explore, BallOptions};
use crate::error::{Error, Result};
use crate::group::{Element, GroupModel, MarkedGroup};
use crate::int::{is_prime, Int};
use crate::linalg::{det, generates_full_lattice, subgroup_structure, Matrix};
use crate::word::{Expr, Word};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

pub const PRIME_SEARCH_CAP: usize = 1_000_000;

/// Values grow at speed C under the increasing ordering: x1 ≥ C and x_{i+1} ≥ x_i^C.
pub fn speed_check(values: &[Int], c: u32) -> bool {
    let mut v = values.to_vec();
    v.sort();
    if v.first().is_some_and(|x| !x.is_positive()) {
        return false;
    }
    if let Some(first) = v.first() {
        if *first < Int::from(c) {
            return false;
        }
    }
    v.windows(2).all(|w| w[1] >= Pow::pow(&w[0], c))
}

struct Speed {
    c: u32,
    last: Option<Int>,
}

impl Speed {
    /// Least admissible next value: ≥ C first, then > last and ≥ last^C.
    fn bound(&self) -> Int {
        match &self.last {
            None => Int::from(self.c),
            Some(x) => Pow::pow(x, self.c).max(x + 1),
        }
    }

    fn take(&mut self, v: Int) -> Int {
        self.last = Some(v.clone());
        v
    }
}

fn search<F: FnMut(&Int) -> bool>(from: Int, mut ok: F, what: &str) -> Result<Int> {
    let mut v = from;
    for _ in 0..PRIME_SEARCH_CAP {
        if ok(&v) {
            return Ok(v);
        }
        v += 1;
    }
    Err(Error::Budget(format!("{what}: no value within {PRIME_SEARCH_CAP} steps")))
}

fn minor(a: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

/// e vectors of Z^d growing at speed C and generating Z^d. Upper-left corner determinants
/// of the first d rows are distinct primes (or 1 for the first corner when C = 1).
pub fn rapid_matrix(d: usize, e: usize, c: u32) -> Result<Vec<Vec<Int>>> {
    if d == 0 || c == 0 {
        return Err(Error::Param("rapid_matrix needs d ≥ 1 and C ≥ 1".into()));
    }
    if e < d + 1 {
        return Err(Error::Param(format!("need at least d+1 = {} vectors", d + 1)));
    }
    let mut sp = Speed { c, last: None };
    let mut a: Matrix = vec![vec![Int::zero(); d]; d];
    let x11 = search(sp.bound(), |q| q.is_one() || is_prime(q), "first corner")?;
    a[0][0] = sp.take(x11);
    let mut primes: Vec<Int> = vec![a[0][0].clone()];
    for n in 1..d {
        // row n
        for j in 0..n - 1 {
            let v = sp.bound();
            a[n][j] = sp.take(v);
        }
        let p_prev = primes[n - 1].clone();
        let rows: Vec<usize> = (0..n - 1).chain(std::iter::once(n)).collect();
        let cols: Vec<usize> = (0..n).collect();
        let v = search(
            sp.bound(),
            |v| {
                let mut t = a.clone();
                t[n][n - 1] = v.clone();
                det(&minor(&t, &rows, &cols)).gcd(&p_prev).is_one()
            },
            "row completion",
        )?;
        a[n][n - 1] = sp.take(v);
        // column n
        for i in 0..n - 1 {
            let v = sp.bound();
            a[i][n] = sp.take(v);
        }
        let all: Vec<usize> = (0..=n).collect();
        let v = search(
            sp.bound(),
            |v| {
                let mut t = a.clone();
                t[n - 1][n] = v.clone();
                t[n][n] = Int::zero();
                det(&minor(&t, &all, &all)).gcd(&p_prev).is_one()
            },
            "column completion",
        )?;
        a[n - 1][n] = sp.take(v);
        let v = search(
            sp.bound(),
            |v| {
                let mut t = a.clone();
                t[n][n] = v.clone();
                let p = det(&minor(&t, &all, &all));
                p.is_positive() && is_prime(&p) && !primes.contains(&p)
            },
            "prime corner",
        )?;
        a[n][n] = sp.take(v);
        primes.push(det(&minor(&a, &all, &all)));
    }
    let mut rows = a;
    for extra in 0..e - d {
        let mut r = Vec::with_capacity(d);
        for _ in 0..d - 1 {
            let v = sp.bound();
            r.push(sp.take(v));
        }
        let last = if extra == 0 {
            search(
                sp.bound(),
                |v| {
                    let mut t = rows.clone();
                    let mut rr = r.clone();
                    rr.push(v.clone());
                    t.push(rr);
                    generates_full_lattice(&t, d)
                },
                "extra generator",
            )?
        } else {
            sp.bound()
        };
        r.push(sp.take(last));
        rows.push(r);
    }
    debug_assert!(generates_full_lattice(&rows, d));
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct DiscriminatingTuple {
    pub exponents: Vec<Vec<Int>>,
    pub speed: u32,
    pub marking: Vec<Expr>,
    pub ball_radius: u32,
}

pub const SPEED_CAP: u32 = 64;

/// An N-tuple of N_{2,k} whose radius-⌊R/2⌋ ball equals that of N_{2,N}; the speed doubles from C0.
pub fn discriminating_tuple(k: usize, n: usize, r: u32, c0: u32, opts: &BallOptions) -> Result<DiscriminatingTuple> {
    if n <= k {
        return Err(Error::Param(format!("need N > k, got N = {n}, k = {k}")));
    }
    if k == 0 || c0 == 0 {
        return Err(Error::Param("need k ≥ 1 and C0 ≥ 1".into()));
    }
    let radius = r / 2;
    let target = ball(&MarkedGroup::standard(GroupModel::nil(n, 0)), radius, opts)?;
    let mut c = c0;
    loop {
        let exps = rapid_matrix(k, n, c)?;
        let marking: Vec<Expr> = exps
            .iter()
            .map(|row| Expr::Prod(row.iter().enumerate().map(|(j, x)| Expr::pow(Expr::Gen(j), x.clone())).collect()))
            .collect();
        let mg = MarkedGroup::new(GroupModel::nil(k, 0), marking.clone(), None)?;
        if balls_agree(&ball(&mg, radius, opts)?, &target)? {
            return Ok(DiscriminatingTuple { exponents: exps, speed: c, marking, ball_radius: radius });
        }
        if c >= SPEED_CAP {
            return Err(Error::Budget(format!("speed cap {SPEED_CAP} reached")));
        }
        c *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbalSubgroup {
    /// None when infinite
    pub order: Option<Int>,
    pub free_rank: usize,
    pub invariant_factors: Vec<Int>,
    pub stable: bool,
    pub values: usize,
}

fn central_layout(model: &GroupModel) -> Result<Vec<Int>> {
    match model {
        GroupModel::NilC2 { rank, modulus } => Ok(vec![modulus.clone(); rank * rank.saturating_sub(1) / 2]),
        GroupModel::Direct(a, b) => {
            let mut v = central_layout(a)?;
            v.extend(central_layout(b)?);
            Ok(v)
        }
        other => Err(Error::Unsupported(format!("verbal subgroups of {} (class-2 models only)", other.descriptor()))),
    }
}

fn central_coords(e: &Element, out: &mut Vec<Int>) -> bool {
    match e {
        Element::Nil { x, c } => {
            out.extend(c.iter().cloned());
            x.iter().all(|v| v.is_zero())
        }
        Element::Pair(a, b) => central_coords(a, out) & central_coords(b, out),
        _ => false,
    }
}

fn verbal_at(model: &GroupModel, words: &[Word], bound: u32, opts: &BallOptions) -> Result<(usize, Vec<Int>, usize)> {
    let moduli = central_layout(model)?;
    let b = explore(&MarkedGroup::standard(model.clone()), bound, opts)?;
    let mut gens: Vec<Vec<Int>> = Vec::new();
    let n = b.elements.len();
    for w in words {
        let m = w.arity().max(1);
        let total = n.checked_pow(m as u32).ok_or_else(|| Error::Budget("tuple count".into()))?;
        for idx in 0..total {
            let mut t = idx;
            let tuple: Vec<Element> = (0..m)
                .map(|_| {
                    let e = b.elements[t % n].clone();
                    t /= n;
                    e
                })
                .collect();
            let v = model.eval_word(w, &tuple)?;
            let mut coords = Vec::with_capacity(moduli.len());
            if !central_coords(&v, &mut coords) {
                return Err(Error::Unsupported("verbal value outside the central layer".into()));
            }
            if coords.iter().any(|x| !x.is_zero()) {
                gens.push(coords);
            }
        }
    }
    gens.sort();
    gens.dedup();
    let values = gens.len();
    if gens.is_empty() {
        return Ok((0, Vec::new(), 0));
    }
    let (free, tors) = subgroup_structure(&gens, &moduli);
    Ok((free, tors, values))
}

/// Subgroup of the centre generated by the values of `words` on ball-`bound` tuples, rechecked at bound+1.
pub fn verbal_subgroup(model: &GroupModel, words: &[Word], bound: u32, opts: &BallOptions) -> Result<VerbalSubgroup> {
    let (free, tors, values) = verbal_at(model, words, bound, opts)?;
    let (free2, tors2, _) = verbal_at(model, words, bound + 1, opts)?;
    let order = if free > 0 { None } else { Some(tors.iter().fold(Int::one(), |a, x| a * x)) };
    Ok(VerbalSubgroup { order, free_rank: free, invariant_factors: tors.clone(), stable: free == free2 && tors == tors2, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::int;

    #[test]
    fn rapid_small() {
        assert_eq!(rapid_matrix(1, 2, 1).unwrap(), vec![vec![int(1)], vec![int(2)]]);
        assert_eq!(rapid_matrix(1, 2, 5).unwrap(), vec![vec![int(5)], vec![int(3126)]]);
    }

    #[test]
    fn rapid_d2() {
        let m = rapid_matrix(2, 3, 2).unwrap();
        let flat: Vec<Int> = m.iter().flatten().cloned().collect();
        assert!(speed_check(&flat, 2));
        assert!(generates_full_lattice(&m, 2));
        assert!(is_prime(&m[0][0]));
        let d = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        assert!(is_prime(&d) && d != m[0][0]);
    }

    #[test]
    fn speed() {
        assert!(speed_check(&[int(5), int(3126)], 5));
        assert!(!speed_check(&[int(5), int(3000)], 5));
        assert!(!speed_check(&[int(4)], 5));
    }

    #[test]
    fn discriminating_needs_more_generators() {
        assert!(matches!(discriminating_tuple(2, 2, 4, 2, &BallOptions::default()), Err(Error::Param(_))));
    }

    #[test]
    fn verbal_nil() {
        let w = Word::new([-1, -2, 1, 2]);
        let o = BallOptions::default();
        let v = verbal_subgroup(&GroupModel::nil(2, 0), &[w.clone()], 1, &o).unwrap();
        assert_eq!((v.order, v.free_rank), (None, 1));
        let v = verbal_subgroup(&GroupModel::nil(2, 5), &[w], 1, &o).unwrap();
        assert_eq!(v.order, Some(int(5)));
        assert!(v.stable);
    }
}
