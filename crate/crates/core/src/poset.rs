//! Prime colourings, separating SL2(Z) matrices, Hall quotients H_φ and their witnesses.

use crate::ball::BallOptions;
use crate::error::{Error, Result};
use crate::group::hall::{positive, LogStep, PrimeColouring};
use crate::group::{GroupModel, MarkedGroup};
use crate::witness::{verify, Params, Witness};
use crate::word::Expr;
use serde_json::json;
use std::collections::BTreeSet;
use std::sync::Arc;

pub type Mat2 = [[i64; 2]; 2];

/// A finite colouring θ on {-R..R}^2 ∩ (Z^2)_+, as (m, n, value) triples; unlisted points are 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    pub radius: i64,
    pub values: Vec<(i64, i64, u64)>,
}

impl Theta {
    pub fn new(radius: i64, values: Vec<(i64, i64, u64)>) -> Theta {
        Theta { radius, values }
    }

    /// θ ≡ v on every positive point of the box.
    pub fn constant(radius: i64, v: u64) -> Theta {
        Theta { radius, values: box_points(radius).into_iter().map(|(m, n)| (m, n, v)).collect() }
    }

    pub fn value(&self, m: i64, n: i64) -> u64 {
        let (m, n) = if positive(m, n) { (m, n) } else { (-m, -n) };
        self.values.iter().find(|&&(a, b, _)| a == m && b == n).map(|t| t.2).unwrap_or(1)
    }
}

/// Positive-cone points of {-R..R}^2, lexicographic.
pub fn box_points(r: i64) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for m in 0..=r {
        for n in -r..=r {
            if positive(m, n) {
                v.push((m, n));
            }
        }
    }
    v
}

pub fn apply(mat: &Mat2, z: (i64, i64)) -> (i64, i64) {
    (mat[0][0] * z.0 + mat[0][1] * z.1, mat[1][0] * z.0 + mat[1][1] * z.1)
}

fn checked(x: Option<i64>) -> Result<i64> {
    x.ok_or_else(|| Error::Budget("matrix entries exceed 64 bits".into()))
}

/// M = ((S+1)(S+R+1)+1, S+1; S+R+1, 1): det 1 and M({-R..R}^2) ∩ {-S..S}^2 = {0}.
pub fn sl2_separating_matrix(s: i64, r: i64) -> Result<Mat2> {
    let c = checked((s + 1).checked_add(r))?;
    let a = checked(checked((s + 1).checked_mul(c))?.checked_add(1))?;
    Ok([[a, s + 1], [c, 1]])
}

/// max |coordinate| of M over the box {-R..R}^2 (attained at a corner).
fn image_extent(mat: &Mat2, r: i64) -> Result<i64> {
    let row = |i: usize| -> Result<i64> {
        let sum = checked(mat[i][0].checked_abs().zip(mat[i][1].checked_abs()).and_then(|(x, y)| x.checked_add(y)))?;
        checked(sum.checked_mul(r))
    };
    Ok(row(0)?.max(row(1)?))
}

/// Extent of every point already bound by the log or by assignments.
pub fn bound_extent(phi: &PrimeColouring) -> Result<i64> {
    let mut s = phi.assignments.keys().map(|&(m, n)| m.abs().max(n.abs())).max().unwrap_or(0);
    for step in &phi.log {
        let r = step.theta.iter().map(|&(m, n, _)| m.abs().max(n.abs())).max().unwrap_or(1).max(1);
        s = s.max(image_extent(&step.matrix, r)?);
    }
    Ok(s)
}

fn in_gamma2(m: &Mat2) -> bool {
    m[0][0] % 2 != 0 && m[0][1] % 2 == 0 && m[1][0] % 2 == 0 && m[1][1] % 2 != 0
}

/// Realise θ at a fresh separating matrix; `in_gamma` decides membership in Γ(2).
pub fn extend(phi: &mut PrimeColouring, theta: &Theta, in_gamma: bool) -> Result<Mat2> {
    let mut s = bound_extent(phi)?;
    let mut r = theta.radius.max(1);
    // Γ(2) needs S odd and R even; outside Γ(2) take S even
    if in_gamma {
        if s % 2 == 0 {
            s += 1;
        }
        if r % 2 == 1 {
            r += 1;
        }
    } else if s % 2 == 1 {
        s += 1;
    }
    let mat = sl2_separating_matrix(s, r)?;
    debug_assert_eq!(in_gamma2(&mat), in_gamma);
    let mut full = Vec::new();
    for (m, n) in box_points(r) {
        let v = theta.value(m, n);
        let (p, q) = apply(&mat, (m, n));
        phi.set(p, q, v);
        if v != 1 {
            full.push((m, n, v));
        }
    }
    // the recorded θ keeps the enlarged radius through its box marker at (r, r)
    if !full.iter().any(|&(m, n, _)| m.abs().max(n.abs()) == r) {
        full.push((r, r, 1));
    }
    phi.log.push(LogStep { matrix: mat, theta: full });
    Ok(mat)
}

/// Step-by-step construction over θ_1..θ_s; step j uses a Γ(2) matrix iff j ∈ seed.
pub fn universal_colouring(primes: &[u64], thetas: &[Theta], seed: &BTreeSet<usize>) -> Result<PrimeColouring> {
    if primes.len() < 2 {
        return Err(Error::Param("need at least two primes".into()));
    }
    for t in thetas {
        if let Some(&(_, _, v)) = t.values.iter().find(|x| x.2 != 1 && !primes.contains(&x.2)) {
            return Err(Error::Param(format!("θ takes value {v} outside I")));
        }
    }
    let mut phi = PrimeColouring::default();
    for (j, t) in thetas.iter().enumerate() {
        extend(&mut phi, t, seed.contains(&(j + 1)))?;
    }
    Ok(phi)
}

/// Re-run a colouring's log from scratch.
pub fn replay(phi: &PrimeColouring) -> PrimeColouring {
    let mut out = PrimeColouring { default: phi.default, ..PrimeColouring::default() };
    for step in &phi.log {
        let r = step.theta.iter().map(|&(m, n, _)| m.abs().max(n.abs())).max().unwrap_or(1).max(1);
        let theta = Theta::new(r, step.theta.clone());
        for (m, n) in box_points(r) {
            let (p, q) = apply(&step.matrix, (m, n));
            out.set(p, q, theta.value(m, n));
        }
        out.log.push(step.clone());
    }
    out
}

/// The finite truncation used for an I-universal colouring: one step θ ≡ p on {-1..1}^2 per prime.
pub fn universal_seed(primes: &[u64]) -> Result<PrimeColouring> {
    let thetas: Vec<Theta> = primes.iter().map(|&p| Theta::constant(1, p)).collect();
    universal_colouring(primes, &thetas, &BTreeSet::new())
}

pub fn hall_quotient(phi: &PrimeColouring) -> GroupModel {
    GroupModel::Hall(Arc::new(phi.clone()))
}

/// Marking {x^a y^c, x^b y^d, a}: the columns of M, so that lamp positions move by z ↦ M z.
pub fn hall_marking(mat: &Mat2) -> Vec<Expr> {
    let t = |p: i64, q: i64| Expr::Prod(vec![Expr::pow(Expr::Gen(0), p), Expr::pow(Expr::Gen(1), q)]);
    vec![t(mat[0][0], mat[1][0]), t(mat[0][1], mat[1][1]), Expr::Gen(2)]
}

fn restricted_primes(psi: &PrimeColouring, r: i64) -> BTreeSet<u64> {
    box_points(r).into_iter().map(|(m, n)| psi.value(m, n)).filter(|&v| v > 1).collect()
}

/// H_φ marked by a matrix M with φ∘M = ψ on {-2R..2R}^2, against (H_ψ, {x,y,a}).
/// M is taken from φ's log when possible, otherwise φ is extended by a fresh separating step.
pub fn hall_witness(phi: &PrimeColouring, psi: &PrimeColouring, r: u32) -> Result<Witness> {
    if phi.default != 1 || psi.default != 1 {
        return Err(Error::Unsupported("colourings must be finitely supported".into()));
    }
    let span = 2 * r as i64;
    let have: BTreeSet<u64> = phi.primes().into_iter().collect();
    if let Some(p) = restricted_primes(psi, span).iter().find(|p| !have.contains(p)) {
        return Err(Error::Param(format!("ψ uses the prime {p}, which is not a torsion prime of H_φ")));
    }
    let agrees = |f: &PrimeColouring, mat: &Mat2| {
        box_points(span).into_iter().all(|z| {
            let (p, q) = apply(mat, z);
            f.value(p, q) == psi.value(z.0, z.1)
        })
    };
    let identity: Mat2 = [[1, 0], [0, 1]];
    let mut source_phi = phi.clone();
    let (mat, how) = if agrees(phi, &identity) {
        (identity, "identity")
    } else if let Some(step) = phi.log.iter().find(|s| agrees(phi, &s.matrix)) {
        (step.matrix, "log")
    } else {
        let theta = Theta::new(span, box_points(span).into_iter().map(|(m, n)| (m, n, psi.value(m, n))).filter(|t| t.2 != 1).collect());
        (extend(&mut source_phi, &theta, false)?, "fresh")
    };
    let source = MarkedGroup::new(hall_quotient(&source_phi), hall_marking(&mat), None)?;
    let target = MarkedGroup::standard(hall_quotient(psi));
    let mut params = Params::new();
    params.insert("matrix".into(), json!(mat));
    params.insert("matrix_from".into(), json!(how));
    params.insert("phi_primes".into(), json!(source_phi.primes()));
    params.insert("psi".into(), psi.to_json());
    Ok(Witness::new("hall_colouring", params, r, source, target))
}

/// φ universal for {2,3} and ψ((1,0)) = 3, else 1.
pub fn hall_colouring_witness(r: u32, _opts: &BallOptions) -> Result<Witness> {
    let phi = universal_seed(&[2, 3])?;
    let psi = PrimeColouring::single(1, 0, 3);
    hall_witness(&phi, &psi, r)
}

/// Positive-cone points ordered by max-norm, then lexicographically.
fn cone_points(count: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut r = 1;
    while out.len() < count {
        for p in box_points(r) {
            if p.0.abs().max(p.1.abs()) == r && out.len() < count {
                out.push(p);
            }
        }
        r += 1;
    }
    out
}

/// A colouring that uses each prime once, at distinct small points.
pub fn spread_colouring(primes: &[u64]) -> PrimeColouring {
    let mut c = PrimeColouring::default();
    for (p, (m, n)) in primes.iter().zip(cone_points(primes.len())) {
        c.set(m, n, *p);
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetVerdict {
    Witness { radius: u32 },
    Blocked { prime: u64 },
    Failed { reason: String },
}

impl PosetVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PosetVerdict::Witness { .. })
    }
}

pub const POSET_RADIUS: u32 = 2;

/// verdict[i][j]: H_{X_i} ⊰ H_{X_j}, by witness at radius 2 or the torsion-prime obstruction.
pub fn realize_finite_poset(subsets: &[Vec<u64>], opts: &BallOptions) -> Result<Vec<Vec<PosetVerdict>>> {
    let sets: Vec<Vec<u64>> = subsets
        .iter()
        .map(|x| {
            if x.iter().any(|p| *p == 2 || *p == 3 || !crate::int::is_prime_u64(*p)) {
                return Err(Error::Param("subsets must consist of primes other than 2 and 3".into()));
            }
            let mut v: Vec<u64> = [2, 3].iter().chain(x.iter()).copied().collect();
            v.sort();
            v.dedup();
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let phis: Vec<PrimeColouring> = sets.iter().map(|s| universal_seed(s)).collect::<Result<_>>()?;
    let psis: Vec<PrimeColouring> = sets.iter().map(|s| spread_colouring(s)).collect();
    let mut out = Vec::new();
    for phi in &phis {
        let mut row = Vec::new();
        for psi in &psis {
            let v = match hall_witness(phi, psi, POSET_RADIUS) {
                Ok(w) => {
                    let res = verify(&w, POSET_RADIUS, opts)?;
                    if res.agree {
                        PosetVerdict::Witness { radius: POSET_RADIUS }
                    } else {
                        PosetVerdict::Failed { reason: format!("balls diverge at {:?}", res.first_divergence) }
                    }
                }
                Err(Error::Param(_)) => {
                    let have = phi.primes();
                    let p = psi.primes().into_iter().find(|p| !have.contains(p)).unwrap_or(0);
                    PosetVerdict::Blocked { prime: p }
                }
                Err(e) => return Err(e),
            };
            row.push(v);
        }
        out.push(row);
    }
    Ok(out)
}
