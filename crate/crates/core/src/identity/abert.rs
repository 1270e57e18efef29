//! Distinctive tuples in the Grigorchuk group and generating triples of large girth.

use crate::ball::{ball, balls_agree, explore, BallOptions};
use crate::error::{Error, Result};
use crate::group::grig::{letter_abelianization, reduce_abcd, word_is_trivial, Portrait};
use crate::group::{Element, GroupModel, MarkedGroup};
use crate::identity::shortlex_words;
use crate::word::{Expr, Word};

pub const REPAIR_RADIUS: u32 = 14;

#[derive(Clone, Debug)]
pub struct GrigElem {
    /// letters 0..3 for a..d
    pub word: Vec<u8>,
    pub portrait: Portrait,
}

impl GrigElem {
    fn from_letters(w: Vec<u8>) -> GrigElem {
        let word = reduce_abcd(&w);
        let portrait = word.iter().fold(Portrait::one(), |acc, &l| acc.mul(&Portrait::generator(l as usize)));
        GrigElem { word, portrait }
    }

    pub fn render(&self) -> String {
        if self.word.is_empty() {
            return "1".into();
        }
        self.word.iter().map(|&l| (b'a' + l) as char).collect()
    }

    pub fn expr(&self) -> Expr {
        if self.word.is_empty() {
            return Expr::One;
        }
        Expr::Prod(self.word.iter().map(|&l| Expr::Gen(l as usize)).collect())
    }
}

fn concat(x: &[u8], y: &[u8]) -> Vec<u8> {
    x.iter().chain(y).copied().collect()
}

/// Inverse of a word in involutions is its reversal.
fn reverse(x: &[u8]) -> Vec<u8> {
    x.iter().rev().copied().collect()
}

/// Grigorchuk ball elements other than 1, in BFS order, with their BFS words.
pub fn grig_ball(radius: u32, opts: &BallOptions) -> Result<Vec<GrigElem>> {
    let b = explore(&MarkedGroup::standard(GroupModel::Grigorchuk), radius, opts)?;
    Ok((1..b.elements.len())
        .map(|i| {
            let word: Vec<u8> = b.word_of(i).letters.iter().map(|&l| (l.unsigned_abs() - 1) as u8).collect();
            let Element::Grig(p) = &b.elements[i] else { unreachable!() };
            GrigElem { word, portrait: p.clone() }
        })
        .collect())
}

/// Orbit points p_n = p_0 · w_n(tuple), with p_0 = 0^∞.
pub fn orbit_points(tuple: &[Portrait], w: &Word, upto: usize) -> Vec<Vec<u8>> {
    let mut pts = vec![Vec::new()];
    for &l in &w.letters[..upto] {
        let g = &tuple[l.unsigned_abs() as usize - 1];
        let g = if l > 0 { g.clone() } else { g.inv() };
        let next = g.act_point(pts.last().unwrap());
        pts.push(next);
    }
    pts
}

fn all_distinct(pts: &[Vec<u8>]) -> bool {
    let mut s = pts.to_vec();
    s.sort();
    s.windows(2).all(|w| w[0] != w[1])
}

fn f2_rank(vs: &[[u8; 3]]) -> usize {
    let mut rows: Vec<u8> = vs.iter().map(|v| v[0] | (v[1] << 1) | (v[2] << 2)).collect();
    let mut rank = 0;
    for bit in 0..3 {
        if let Some(i) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(rank, i);
            for j in 0..rows.len() {
                if j != rank && rows[j] >> bit & 1 == 1 {
                    rows[j] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Tuple spans the abelianization (Z/2)^3, computed from letters alone.
pub fn spans_abelianization(words: &[Vec<u8>]) -> bool {
    f2_rank(&words.iter().map(|w| letter_abelianization(w)).collect::<Vec<_>>()) == 3
}

#[derive(Clone, Debug)]
pub struct Distinctive {
    pub tuple: Vec<GrigElem>,
    pub points: Vec<Vec<u8>>,
    pub repairs: usize,
}

/// Generating k-tuple (k ≥ 3) whose orbit points along w are pairwise distinct.
/// Repairs replace g_j by c·g_j (or g_j·c) with c a commutator-subgroup element fixing Y.
pub fn distinctive_tuple(w: &Word, k: usize, radius: u32, opts: &BallOptions) -> Result<Distinctive> {
    if w.is_empty() {
        return Err(Error::Param("word must be nontrivial".into()));
    }
    if k < 3 {
        return Err(Error::Param("the Grigorchuk group needs 3 generators".into()));
    }
    if w.arity() > k {
        return Err(Error::Arity(format!("word of arity {} for a {k}-tuple", w.arity())));
    }
    let mut tuple: Vec<GrigElem> = (0..k).map(|i| GrigElem::from_letters(if i < 3 { vec![i as u8] } else { vec![] })).collect();
    let mut cands: Option<Vec<GrigElem>> = None;
    let mut repairs = 0;
    let ell = w.len();
    for n in 1..=ell {
        let ports: Vec<Portrait> = tuple.iter().map(|g| g.portrait.clone()).collect();
        let pts = orbit_points(&ports, w, n);
        if all_distinct(&pts) {
            continue;
        }
        let v = &w.letters;
        let vn = v[n - 1];
        // Y = {p_i : i ≤ n-2, v_{i+1} = v_n} ∪ {p_i : 1 ≤ i ≤ n-1, v_i = v_n^-1}
        let mut y: Vec<&Vec<u8>> = Vec::new();
        for i in 0..n.saturating_sub(1) {
            if v[i] == vn {
                y.push(&pts[i]);
            }
        }
        for i in 1..n {
            if v[i - 1] == -vn {
                y.push(&pts[i]);
            }
        }
        if cands.is_none() {
            let all = grig_ball(radius, opts)?;
            cands = Some(all.into_iter().filter(|g| g.portrait.abelianization() == [0, 0, 0]).collect());
        }
        let j = vn.unsigned_abs() as usize - 1;
        let mut fixed = None;
        for c in cands.as_ref().unwrap() {
            if !y.iter().all(|p| &c.portrait.act_point(p) == *p) {
                continue;
            }
            let g = &tuple[j];
            let repaired = if vn > 0 {
                GrigElem::from_letters(concat(&c.word, &g.word))
            } else {
                GrigElem::from_letters(concat(&g.word, &c.word))
            };
            let mut ports2 = ports.clone();
            ports2[j] = repaired.portrait.clone();
            if all_distinct(&orbit_points(&ports2, w, n)) {
                fixed = Some(repaired);
                break;
            }
        }
        match fixed {
            Some(g) => {
                tuple[j] = g;
                repairs += 1;
            }
            None => {
                return Err(Error::Budget(format!(
                    "no repair element within radius {radius} at prefix {n} of {ell}"
                )))
            }
        }
    }
    let ports: Vec<Portrait> = tuple.iter().map(|g| g.portrait.clone()).collect();
    let points = orbit_points(&ports, w, ell);
    let words: Vec<Vec<u8>> = tuple.iter().map(|g| g.word.clone()).collect();
    if !all_distinct(&points) || !spans_abelianization(&words) {
        return Err(Error::Budget("distinctive tuple failed its final check".into()));
    }
    Ok(Distinctive { tuple, points, repairs })
}

/// w(tuple) ≠ 1 by word contraction, independent of portraits.
pub fn word_nontrivial_on(w: &Word, tuple: &[Vec<u8>]) -> bool {
    let mut letters = Vec::new();
    for &l in &w.letters {
        let g = &tuple[l.unsigned_abs() as usize - 1];
        if l > 0 {
            letters.extend_from_slice(g);
        } else {
            letters.extend(reverse(g));
        }
    }
    !word_is_trivial(&letters)
}

#[derive(Clone, Debug)]
pub struct GirthTriple {
    pub tuple: Vec<GrigElem>,
    pub candidates: usize,
}

/// A generating triple of Grigorchuk elements with no relation of length ≤ 5 (girth ≥ 6).
pub fn girth_triple(radius: u32, opts: &BallOptions) -> Result<GirthTriple> {
    let cands = grig_ball(radius, opts)?;
    let f2 = ball(&MarkedGroup::standard(GroupModel::Free(2)), 2, opts)?;
    let f3 = ball(&MarkedGroup::standard(GroupModel::Free(3)), 2, opts)?;
    let order_ge_8: Vec<&GrigElem> = cands
        .iter()
        .filter(|g| {
            let g2 = g.portrait.mul(&g.portrait);
            !g2.mul(&g2).is_one()
        })
        .collect();
    let marked = |gs: &[&GrigElem]| MarkedGroup::unchecked(GroupModel::Grigorchuk, gs.iter().map(|g| g.expr()).collect());
    for g1 in &order_ge_8 {
        for g2 in &order_ge_8 {
            if g1.word == g2.word {
                continue;
            }
            if !balls_agree(&ball(&marked(&[g1, g2])?, 2, opts)?, &f2)? {
                continue;
            }
            for g3 in &order_ge_8 {
                if g3.word == g1.word || g3.word == g2.word {
                    continue;
                }
                if !spans_abelianization(&[g1.word.clone(), g2.word.clone(), g3.word.clone()]) {
                    continue;
                }
                if balls_agree(&ball(&marked(&[g1, g2, g3])?, 2, opts)?, &f3)? {
                    return Ok(GirthTriple { tuple: vec![(*g1).clone(), (*g2).clone(), (*g3).clone()], candidates: cands.len() });
                }
            }
        }
    }
    Err(Error::Budget(format!("no girth-6 triple among Grigorchuk elements of length ≤ {radius}")))
}

/// Independent check: every nontrivial reduced word of length ≤ l in the triple is nontrivial by contraction.
pub fn no_short_relations(tuple: &[Vec<u8>], l: usize) -> bool {
    shortlex_words(tuple.len(), l).iter().filter(|w| !w.is_empty()).all(|w| word_nontrivial_on(w, tuple))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    #[test]
    fn single_letter() {
        let d = distinctive_tuple(&parse_word("x", 3).unwrap(), 3, REPAIR_RADIUS, &BallOptions::default()).unwrap();
        assert_eq!(d.repairs, 0);
        assert_eq!(d.tuple[0].render(), "a");
    }

    #[test]
    fn commutator_word() {
        let w = parse_word("[x,y]", 3).unwrap();
        let d = distinctive_tuple(&w, 3, REPAIR_RADIUS, &BallOptions::default()).unwrap();
        let words: Vec<Vec<u8>> = d.tuple.iter().map(|g| g.word.clone()).collect();
        assert!(word_nontrivial_on(&w, &words));
        assert!(spans_abelianization(&words));
    }

    #[test]
    fn power_word() {
        let w = parse_word("(x y)^4", 3).unwrap();
        let d = distinctive_tuple(&w, 3, REPAIR_RADIUS, &BallOptions::default()).unwrap();
        let words: Vec<Vec<u8>> = d.tuple.iter().map(|g| g.word.clone()).collect();
        assert!(word_nontrivial_on(&w, &words));
    }

    #[test]
    fn letter_abelianization_matches_portraits() {
        for g in grig_ball(4, &BallOptions::default()).unwrap() {
            assert_eq!(letter_abelianization(&g.word), g.portrait.abelianization());
        }
    }

    #[test]
    fn girth_six_triple() {
        let g = girth_triple(4, &BallOptions::default()).unwrap();
        let names: Vec<String> = g.tuple.iter().map(|x| x.render()).collect();
        assert_eq!(names, ["ab", "abac", "adab"]);
        let words: Vec<Vec<u8>> = g.tuple.iter().map(|x| x.word.clone()).collect();
        assert!(no_short_relations(&words, 5));
        assert!(spans_abelianization(&words));
    }
}
