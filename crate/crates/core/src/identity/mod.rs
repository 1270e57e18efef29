//! Identities, almost-identities and universal sentences.

pub mod abert;
pub mod nilpotent;
pub mod sentence;
pub mod smallcancel;

use crate::ball::{explore, BallOptions};
use crate::error::{Error, Result};
use crate::group::free::stallings;
use crate::group::generation::{generation_test, Verdict};
use crate::group::{Element, GroupModel, MarkedGroup};
use crate::word::{shortlex_cmp, Word};
use num_integer::Integer;
use rayon::prelude::*;

/// w = root^exponent with root not a proper power (exponent > 0).
pub fn primitive_root(w: &Word) -> (Word, i64) {
    let (u, c) = w.cyclic_split();
    let n = c.len();
    if n == 0 {
        return (Word::empty(), 1);
    }
    let period = (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| c.letters[i] == c.letters[i - p])).unwrap();
    let r0 = Word { letters: c.letters[..period].to_vec() };
    (u.mul(&r0).mul(&u.inverse()), (n / period) as i64)
}

/// One nontrivial word vanishing wherever any input vanishes.
pub fn merge_identities(ws: &[Word]) -> Result<Word> {
    let first = ws.first().ok_or_else(|| Error::Param("empty word list".into()))?;
    if ws.iter().any(|w| w.is_empty()) {
        return Err(Error::Param("words must be nontrivial".into()));
    }
    let mut v = first.clone();
    for w in &ws[1..] {
        v = if Word::commutator(&v, w).is_empty() {
            common_power(&v, w)
        } else {
            Word::commutator(&v, w)
        };
    }
    Ok(v)
}

/// For commuting u, v: the shortest nontrivial common power.
fn common_power(u: &Word, v: &Word) -> Word {
    let (r, a) = primitive_root(u);
    let (s, b) = primitive_root(v);
    // commuting words have equal roots up to inversion
    let b = if r == s { b } else { -b };
    debug_assert!(r == s || r == s.inverse());
    let l = a.lcm(&b);
    r.pow(l)
}

fn decode(mut idx: usize, n: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    /// tuple as words in the standard marking, found at this radius
    Found { tuple: Vec<Word>, radius: u32 },
    NoneFound { radius: u32, tuples: u64 },
}

pub const TUPLE_CAP: u64 = 50_000_000;

fn tuple_search<F>(model: &GroupModel, m: usize, max_radius: u32, opts: &BallOptions, pred: F) -> Result<Search>
where
    F: Fn(&[Element]) -> bool + Sync,
{
    let mg = MarkedGroup::standard(model.clone());
    let b = explore(&mg, max_radius, opts)?;
    let mut checked = 0u64;
    for r in 0..=max_radius {
        let n = b.cert.states.iter().filter(|s| s.norm <= r).count();
        let inner = b.cert.states.iter().filter(|s| s.norm < r).count();
        let total = n.checked_pow(m as u32).ok_or_else(|| Error::Budget("tuple count overflow".into()))?;
        if checked + total as u64 > TUPLE_CAP {
            return Err(Error::Budget(format!("more than {TUPLE_CAP} tuples by radius {r}")));
        }
        let hit = (0..total).into_par_iter().find_first(|&idx| {
            let t = decode(idx, n, m);
            if r > 0 && t.iter().all(|&i| i < inner) {
                return false;
            }
            let elems: Vec<Element> = t.iter().map(|&i| b.elements[i].clone()).collect();
            pred(&elems)
        });
        checked += total as u64;
        if let Some(idx) = hit {
            let tuple = decode(idx, n, m).into_iter().map(|i| b.word_of(i)).collect();
            return Ok(Search::Found { tuple, radius: r });
        }
    }
    Ok(Search::NoneFound { radius: max_radius, tuples: checked })
}

/// Search tuples of growing radius with w(tuple) ≠ 1.
pub fn falsify_identity(model: &GroupModel, w: &Word, max_radius: u32, opts: &BallOptions) -> Result<Search> {
    let m = w.arity().max(1);
    tuple_search(model, m, max_radius, opts, |t| !model.is_identity(&model.eval_word(w, t).expect("arity")))
}

/// Search generating k-tuples of growing radius with w(tuple) ≠ 1.
pub fn falsify_almost_identity(model: &GroupModel, w: &Word, k: usize, max_radius: u32, opts: &BallOptions) -> Result<Search> {
    if w.arity() > k {
        return Err(Error::Arity(format!("word of arity {} for {k}-tuples", w.arity())));
    }
    tuple_search(model, k, max_radius, opts, |t| {
        !model.is_identity(&model.eval_word(w, t).expect("arity")) && matches!(generation_test(model, t, None), Verdict::Proven(_))
    })
}

pub const CONJUGATOR_SEARCH_LEN: usize = 6;

/// u = v(w^a, w^(a^2), ..., w^(a^m)) with <w, a> free of rank 2, a the shortlex-least such word.
pub fn wreath_almost_identity(v: &Word, w: &Word, k: usize) -> Result<(Word, Word)> {
    if v.is_empty() || w.is_empty() {
        return Err(Error::Param("words must be nontrivial".into()));
    }
    if k < 2 {
        return Err(Error::Param("no rank-2 free subgroup in F1".into()));
    }
    if w.arity() > k {
        return Err(Error::Arity(format!("w has arity {} > {k}", w.arity())));
    }
    let a = shortlex_words(k, CONJUGATOR_SEARCH_LEN)
        .into_iter()
        .find(|a| !a.is_empty() && free_rank(&[w.clone(), a.clone()]) == 2)
        .ok_or_else(|| Error::Budget(format!("no conjugator of length ≤ {CONJUGATOR_SEARCH_LEN}")))?;
    let m = v.arity().max(1);
    let subs: Vec<Word> = (1..=m as i64).map(|i| w.conjugate(&a.pow(i))).collect();
    let u = v.substitute(&subs);
    if u.is_empty() {
        return Err(Error::Param("substituted word reduces to the identity".into()));
    }
    Ok((u, a))
}

/// Rank of the subgroup of a free group generated by the words.
pub fn free_rank(words: &[Word]) -> usize {
    let (nv, edges) = stallings(words);
    (edges.len() + 1).saturating_sub(nv)
}

/// All reduced words of length ≤ l over k letters, in shortlex order.
pub fn shortlex_words(k: usize, l: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..l {
        let mut next = Vec::new();
        for w in &layer {
            for j in 0..2 * k {
                let letter = crate::word::label_letter(j, k);
                if w.letters.last() == Some(&-letter) {
                    continue;
                }
                let mut x = w.clone();
                x.letters.push(letter);
                next.push(x);
            }
        }
        next.sort_by(|a, b| shortlex_cmp(a, b, k));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
