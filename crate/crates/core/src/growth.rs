//! The α constant and the non-uniform growth signature of wreath products
//! over the Grigorchuk orbit.

use crate::ball::{ball, balls_agree, BallOptions};
use crate::error::{Error, Result};
use crate::group::{GroupModel, MarkedGroup};
use crate::witness::cases::grig_wreath;
use rayon::prelude::*;
use std::fmt::Write;

/// 2^{3−3/α} + 2^{2−2/α} + 2^{1−1/α} − 2
pub fn alpha_residual(a: f64) -> f64 {
    let t = 1.0 - 1.0 / a;
    (3.0 * t).exp2() + (2.0 * t).exp2() + t.exp2() - 2.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaRoot {
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
    pub residual_lo: f64,
    pub residual_hi: f64,
    pub steps: u32,
}

impl AlphaRoot {
    pub fn bound(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

/// Bisection on [1/2, 1]; the residual is increasing there and changes sign.
pub fn solve_alpha(tolerance: f64) -> Result<AlphaRoot> {
    if !(tolerance > 0.0) {
        return Err(Error::Param("tolerance must be positive".into()));
    }
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    let mut steps = 0;
    while (hi - lo) / 2.0 > tolerance && steps < 200 {
        let mid = (lo + hi) / 2.0;
        if alpha_residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    let (rl, rh) = (alpha_residual(lo), alpha_residual(hi));
    debug_assert!(rl < 0.0 && rh >= 0.0);
    Ok(AlphaRoot { alpha: (lo + hi) / 2.0, lo, hi, residual_lo: rl, residual_hi: rh, steps })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NuegRow {
    pub radius: u32,
    pub nu_witness: u64,
    pub nu_std: u64,
    pub agree: bool,
    pub marking: Vec<String>,
}

impl NuegRow {
    pub fn rate_witness(&self) -> f64 {
        (self.nu_witness as f64).powf(1.0 / self.radius.max(1) as f64)
    }

    pub fn rate_std(&self) -> f64 {
        (self.nu_std as f64).powf(1.0 / self.radius.max(1) as f64)
    }
}

/// For each R: the wreath witness marking, its agreement with the abelian-lamp
/// target, and ν at R for the witness and the standard marking.
pub fn nueg_signature(lamp: &GroupModel, radii: &[u32], opts: &BallOptions) -> Result<Vec<NuegRow>> {
    radii
        .par_iter()
        .map(|&r| {
            let w = grig_wreath(lamp, r)?;
            let src = ball(&w.source, r, opts)?;
            let tgt = ball(&w.target, r, opts)?;
            let agree = balls_agree(&src, &tgt)?;
            let std = ball(&MarkedGroup::standard((*w.source.model).clone()), r, opts)?;
            Ok(NuegRow {
                radius: r,
                nu_witness: *src.counts().last().unwrap(),
                nu_std: *std.counts().last().unwrap(),
                agree,
                marking: w.source.marking_text(),
            })
        })
        .collect()
}

pub fn nueg_csv(rows: &[NuegRow]) -> String {
    let mut s = String::from("R,nu_witness,nu_std,rate_witness,rate_std,agree\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{:.6},{:.6},{}", r.radius, r.nu_witness, r.nu_std, r.rate_witness(), r.rate_std(), r.agree);
    }
    s
}
