//! C'(λ) small cancellation: exact maximal piece length and a word factory.

use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallCancellation {
    pub ok: bool,
    pub max_piece: usize,
    pub min_len: usize,
}

/// Every rotation of every word and of its inverse, as explicit sequences.
/// Equal sequences at distinct positions are kept apart.
fn rotations(words: &[Word]) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for w in words {
        let c = w.cyclically_reduced();
        for base in [c.clone(), c.inverse()] {
            let n = base.len();
            for r in 0..n {
                out.push(base.letters[r..].iter().chain(&base.letters[..r]).copied().collect());
            }
        }
    }
    out
}

fn lcp(a: &[i32], b: &[i32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// A common prefix of two distinct positions; it cannot cover a whole relator.
fn capped(a: &[i32], b: &[i32]) -> usize {
    lcp(a, b).min(a.len().min(b.len()).saturating_sub(1))
}

fn verdict(words: &[Word], max_piece: usize, num: usize, den: usize) -> SmallCancellation {
    let min_len = words.iter().map(|w| w.cyclically_reduced().len()).min().unwrap_or(0);
    // piece < λ·|r| for the shortest relator
    let ok = min_len > 0 && max_piece * den < num * min_len;
    SmallCancellation { ok, max_piece, min_len }
}

/// Exact check of C'(num/den) over all pairs of rotations, by sorting.
pub fn verify_small_cancellation(words: &[Word], num: usize, den: usize) -> SmallCancellation {
    let mut rots = rotations(words);
    rots.sort();
    let mut best = 0usize;
    for i in 0..rots.len() {
        for j in i + 1..rots.len() {
            // lcp with later entries is non-increasing in sorted order
            let raw = lcp(&rots[i], &rots[j]);
            if raw <= best {
                break;
            }
            best = best.max(capped(&rots[i], &rots[j]));
        }
    }
    verdict(words, best, num, den)
}

/// Quadratic reference computation over all pairs of rotations.
pub fn verify_small_cancellation_brute(words: &[Word], num: usize, den: usize) -> SmallCancellation {
    let rots = rotations(words);
    let mut best = 0;
    for i in 0..rots.len() {
        for j in 0..rots.len() {
            if i != j {
                best = best.max(capped(&rots[i], &rots[j]));
            }
        }
    }
    verdict(words, best, num, den)
}

/// x y^a x y^(a+1) ... x y^(a+s-1)
pub fn staircase(a: usize, s: usize) -> Word {
    let mut l = Vec::new();
    for i in a..a + s {
        l.push(1);
        l.extend(std::iter::repeat(2).take(i));
    }
    Word::new(l)
}

pub const FACTORY_MAX_STEPS: usize = 400;

/// `count` words over x1,x2 of length ≥ min_len whose symmetrized set is C'(1/6).
/// Word j is a staircase over the exponent block [1 + j·s, (j+1)·s]; s grows until the check passes.
pub fn small_cancellation_words(rank: usize, count: usize, min_len: usize) -> Result<Vec<Word>> {
    if rank < 2 {
        return Err(Error::Param("small cancellation words need rank ≥ 2".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    for s in 1..=FACTORY_MAX_STEPS {
        let words: Vec<Word> = (0..count).map(|j| staircase(1 + j * s, s)).collect();
        if words.iter().any(|w| w.len() < min_len) {
            continue;
        }
        if verify_small_cancellation(&words, 1, 6).ok {
            return Ok(words);
        }
    }
    Err(Error::Budget(format!("no C'(1/6) staircase family with s ≤ {FACTORY_MAX_STEPS}")))
}
