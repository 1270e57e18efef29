//! Convergence witnesses: a marking S_R of a source group whose radius-R ball equals the target's.

pub mod cases;

use crate::ball::{explore, first_divergence, BallOptions};
use crate::error::{Error, Result};
use crate::group::parse::parse_group;
use crate::group::{GroupModel, MarkedGroup};
use crate::word::{Expr, Word};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub type Params = BTreeMap<String, Value>;

#[derive(Clone, Debug)]
pub struct Witness {
    pub case: String,
    pub params: Params,
    /// construction parameter R
    pub radius: u32,
    pub source: MarkedGroup,
    pub target: MarkedGroup,
    /// radius at which the construction guarantees agreement
    pub check_radius: u32,
}

impl Witness {
    pub fn new(case: &str, params: Params, radius: u32, source: MarkedGroup, target: MarkedGroup) -> Witness {
        Witness { case: case.into(), params, radius, source, target, check_radius: radius }
    }

    pub fn describe(&self) -> Value {
        json!({
            "case": self.case,
            "params": self.params,
            "R": self.radius,
            "check_radius": self.check_radius,
            "source": {"group": self.source.model.descriptor(), "marking": self.source.marking_text()},
            "target": {"group": self.target.model.descriptor(), "marking": self.target.marking_text()},
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub radius: u32,
    pub agree: bool,
    pub first_divergence: Option<u32>,
    pub states_explored: usize,
}

/// Compare the radius-r balls of source and target.
pub fn verify(w: &Witness, r: u32, opts: &BallOptions) -> Result<Verification> {
    if w.source.arity() != w.target.arity() {
        return Err(Error::Arity(format!("markings of sizes {} and {}", w.source.arity(), w.target.arity())));
    }
    let a = explore(&w.source, r, opts)?;
    let b = explore(&w.target, r, opts)?;
    let fd = first_divergence(&a.cert, &b.cert);
    Ok(Verification {
        radius: r,
        agree: fd.is_none(),
        first_divergence: fd,
        states_explored: a.cert.states.len() + b.cert.states.len(),
    })
}

/// {case, params, R, agree, first_divergence, states_explored, millis}
pub fn report(w: &Witness, v: &Verification, millis: Option<u128>) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("case".into(), json!(w.case));
    m.insert("params".into(), json!(w.params));
    m.insert("R".into(), json!(v.radius));
    m.insert("agree".into(), json!(v.agree));
    m.insert("first_divergence".into(), json!(v.first_divergence));
    m.insert("states_explored".into(), json!(v.states_explored));
    if let Some(ms) = millis {
        m.insert("millis".into(), json!(ms as u64));
    }
    Value::Object(m)
}

/// Replace the target marking by words T′ over it and rebuild the source marking the same way.
/// The guaranteed radius drops to ⌊R/k⌋ with k the longest word.
pub fn transport(w: &Witness, t_prime: &[Word]) -> Result<Witness> {
    let k = w.target.arity();
    if let Some(bad) = t_prime.iter().find(|t| t.arity() > k) {
        return Err(Error::Arity(format!("word of arity {} over a marking of size {k}", bad.arity())));
    }
    let exprs: Vec<Expr> = t_prime.iter().map(Expr::from_word).collect();
    let tgt_marking: Vec<Expr> = exprs.iter().map(|e| e.substitute(&w.target.marking)).collect();
    let src_marking: Vec<Expr> = exprs.iter().map(|e| e.substitute(&w.source.marking)).collect();
    let target = MarkedGroup::new((*w.target.model).clone(), tgt_marking, None)?;
    let source = MarkedGroup::unchecked((*w.source.model).clone(), src_marking)?;
    let longest = t_prime.iter().map(|t| t.len()).max().unwrap_or(1).max(1);
    let mut params = w.params.clone();
    params.insert("transport".into(), json!(t_prime.iter().map(|t| t.render(&w.target.model.gen_names())).collect::<Vec<_>>()));
    if t_prime.iter().enumerate().all(|(i, t)| *t == Word::gen(i + 1)) && t_prime.len() == k {
        return Ok(w.clone());
    }
    Ok(Witness {
        case: w.case.clone(),
        params,
        radius: w.radius,
        source,
        target,
        check_radius: w.check_radius / longest as u32,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combinator {
    Direct,
    Free,
    Wreath,
}

impl Combinator {
    pub fn parse(s: &str) -> Result<Combinator> {
        match s {
            "direct" => Ok(Combinator::Direct),
            "free" => Ok(Combinator::Free),
            "wreath" => Ok(Combinator::Wreath),
            _ => Err(Error::Param(format!("unknown combinator {s}"))),
        }
    }

    fn apply(self, a: &GroupModel, b: &GroupModel) -> GroupModel {
        match self {
            Combinator::Direct => GroupModel::direct(a.clone(), b.clone()),
            Combinator::Free => GroupModel::free_prod(a.clone(), b.clone()),
            Combinator::Wreath => GroupModel::wreath(a.clone(), b.clone()),
        }
    }
}

fn combine(kind: Combinator, a: &MarkedGroup, b: &MarkedGroup) -> Result<MarkedGroup> {
    let n1 = a.model.num_gens();
    let model = kind.apply(&a.model, &b.model);
    let marking: Vec<Expr> = a.marking.iter().cloned().chain(b.marking.iter().map(|e| e.shift(n1))).collect();
    MarkedGroup::unchecked(model, marking)
}

/// Disjoint-union marking of the combined sources against the combined targets.
pub fn compose(w1: &Witness, w2: &Witness, kind: Combinator) -> Result<Witness> {
    let source = combine(kind, &w1.source, &w2.source)?;
    let target = combine(kind, &w1.target, &w2.target)?;
    let mut params = Params::new();
    params.insert("left".into(), json!({"case": w1.case, "params": w1.params}));
    params.insert("right".into(), json!({"case": w2.case, "params": w2.params}));
    params.insert("kind".into(), json!(format!("{kind:?}").to_lowercase()));
    Ok(Witness {
        case: "compose".into(),
        params,
        radius: w1.radius.min(w2.radius),
        source,
        target,
        check_radius: w1.check_radius.min(w2.check_radius),
    })
}

/// Chain G ⊰ H (factory) with H ⊰ K (w2): the first family is taken at R·L, with L the longest
/// word of w2's source marking, and w2's marking is pushed through it.
pub fn diagonal(first: &dyn Fn(u32) -> Result<Witness>, w2: &Witness) -> Result<Witness> {
    let longest = w2
        .source
        .marking
        .iter()
        .map(|e| e.length().to_u32().unwrap_or(u32::MAX))
        .max()
        .unwrap_or(1)
        .max(1);
    let r = w2.check_radius;
    let w1 = first(r.saturating_mul(longest))?;
    if *w1.target.model != *w2.source.model || w1.target.marking != MarkedGroup::standard((*w1.target.model).clone()).marking {
        return Err(Error::Param("the first witness must target the second source's group in its standard marking".into()));
    }
    let marking: Vec<Expr> = w2.source.marking.iter().map(|e| e.substitute(&w1.source.marking)).collect();
    let source = MarkedGroup::unchecked((*w1.source.model).clone(), marking)?;
    let mut params = Params::new();
    params.insert("first".into(), json!({"case": w1.case, "params": w1.params, "R": w1.radius}));
    params.insert("second".into(), json!({"case": w2.case, "params": w2.params, "R": w2.radius}));
    Ok(Witness { case: "diagonal".into(), params, radius: r, source, target: w2.target.clone(), check_radius: r })
}

/// Relators of the target (words over its marking) of length ≤ 2R that fail on the source marking.
pub fn quotient_violations(w: &Witness, relators: &[Word], r: u32) -> Result<Vec<Word>> {
    let mut bad = Vec::new();
    for rel in relators.iter().filter(|x| x.len() <= 2 * r as usize) {
        let t = w.target.evaluate(rel)?;
        if !w.target.model.is_identity(&t) {
            return Err(Error::Param(format!("{rel:?} is not a relator of the target")));
        }
        if !w.source.model.is_identity(&w.source.evaluate(rel)?) {
            bad.push(rel.clone());
        }
    }
    Ok(bad)
}

/// Known relators of length ≤ l: Z^n commutators, class-2 nilpotent commutators,
/// and for Z ≀ Z^2 = ⟨a,x,y⟩ the relators [x,y] and [a, a^(x^i y^j)].
pub fn standard_relators(model: &GroupModel, l: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    match model {
        GroupModel::FinAbelian(f) if f.iter().all(|x| x == &num_bigint::BigInt::from(0)) => {
            for i in 1..=f.len() {
                for j in i + 1..=f.len() {
                    out.push(Word::commutator(&Word::gen(i), &Word::gen(j)));
                }
            }
        }
        GroupModel::NilC2 { rank, .. } => {
            for i in 1..=*rank {
                for j in i + 1..=*rank {
                    let c = Word::commutator(&Word::gen(i), &Word::gen(j));
                    for m in 1..=*rank {
                        out.push(Word::commutator(&c, &Word::gen(m)));
                    }
                }
            }
        }
        GroupModel::Wreath(lamp, base) if **lamp == GroupModel::abelian(&[0]) && **base == GroupModel::abelian(&[0, 0]) => {
            let (a, x, y) = (Word::gen(1), Word::gen(2), Word::gen(3));
            out.push(Word::commutator(&x, &y));
            let span = l as i64;
            for i in -span..=span {
                for j in -span..=span {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    let g = x.pow(i).mul(&y.pow(j));
                    out.push(Word::commutator(&a, &a.conjugate(&g)));
                }
            }
        }
        _ => return Err(Error::Unsupported(format!("no relator list for {}", model.descriptor()))),
    }
    out.retain(|w| w.len() <= l);
    Ok(out)
}

pub const CASES: &[&str] = &[
    "zm_in_zn",
    "abelian_step",
    "free_mn",
    "free_pad",
    "wreath_split",
    "any_to_direct",
    "grig_wreath",
    "lamplighter_metab",
    "bs_to_wreath",
    "nil_relfree",
    "akhmedov_free",
    "hall_colouring",
    "identity",
    "abelian_epi",
];

fn int_param(p: &Params, key: &str, default: i64) -> Result<i64> {
    match p.get(key) {
        None => Ok(default),
        Some(Value::Number(n)) => n.as_i64().ok_or_else(|| Error::Param(format!("{key} must be an integer"))),
        Some(Value::String(s)) => s.trim().parse().map_err(|_| Error::Param(format!("{key} must be an integer"))),
        Some(_) => Err(Error::Param(format!("{key} must be an integer"))),
    }
}

fn group_param(p: &Params, key: &str, default: &str) -> Result<GroupModel> {
    match p.get(key) {
        None => parse_group(default),
        Some(Value::String(s)) => parse_group(s),
        Some(_) => Err(Error::Param(format!("{key} must be a group descriptor"))),
    }
}

fn nonneg(p: &Params, key: &str, default: i64) -> Result<usize> {
    let v = int_param(p, key, default)?;
    usize::try_from(v).map_err(|_| Error::Param(format!("{key} must be ≥ 0")))
}

/// Parse "k=2,l=3,G=F2" into parameters; values stay strings until a case reads them.
pub fn parse_params(text: &str) -> Result<Params> {
    let mut p = Params::new();
    for part in crate::group::split_top_level(text) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Param(format!("expected key=value, got {part}")))?;
        p.insert(k.trim().to_string(), Value::String(v.trim().to_string()));
    }
    Ok(p)
}

/// Build a registered case at construction parameter R.
pub fn build(case: &str, p: &Params, r: u32, opts: &BallOptions) -> Result<Witness> {
    match case {
        "zm_in_zn" => cases::zm_in_zn(nonneg(p, "m", 1)?, nonneg(p, "n", 2)?, r),
        "abelian_step" => cases::abelian_step(int_param(p, "k", 2)?, int_param(p, "l", 3)?, r),
        "free_mn" => cases::free_mn(nonneg(p, "m", 2)?, nonneg(p, "n", 3)?, r),
        "free_pad" => cases::free_pad(&group_param(p, "G", "Z/2")?, nonneg(p, "m", 2)?, r),
        "wreath_split" => cases::wreath_split(
            &group_param(p, "A", "Z/2")?,
            &group_param(p, "B", "Z/3")?,
            &group_param(p, "C", "Z")?,
            r,
            opts,
        ),
        "any_to_direct" => {
            cases::any_to_direct(&group_param(p, "lamp", "(Z/2)*(Z/3)")?, &group_param(p, "base", "Z")?, r, opts)
        }
        "grig_wreath" => cases::grig_wreath(&group_param(p, "lamp", "(Z/2)*(Z/3)")?, r),
        "lamplighter_metab" => cases::lamplighter_metab(int_param(p, "n", 4)?, r),
        "bs_to_wreath" => cases::bs_to_wreath(int_param(p, "p", 2)?, int_param(p, "i", 4)?, r),
        "nil_relfree" => cases::nil_relfree(nonneg(p, "k", 2)?, nonneg(p, "N", 3)?, r, opts),
        "akhmedov_free" => cases::akhmedov_free(&group_param(p, "G", "F2")?, &group_param(p, "H", "Z")?, r, opts),
        "hall_colouring" => crate::poset::hall_colouring_witness(r, opts),
        "identity" => Ok(cases::identity(&group_param(p, "G", "Z")?, r)),
        "abelian_epi" => {
            let g = |key: &str, default: &str| match p.get(key) {
                None => crate::abelian::AbelianNF::parse(default),
                Some(Value::String(s)) => crate::abelian::AbelianNF::parse(s),
                Some(_) => Err(Error::Param(format!("{key} must be a group descriptor"))),
            };
            crate::abelian::epi_witness(&g("A", "Z x Z/6")?, &g("B", "Z^2 x Z/2")?, r)
        }
        _ => Err(Error::Param(format!("unknown case {case}; known: {}", CASES.join(", ")))),
    }
}

/// Integer-valued parameter as i64, for reports.
pub fn param_i64(w: &Witness, key: &str) -> Option<i64> {
    w.params.get(key).and_then(|v| v.as_i64().or_else(|| v.as_str().and_then(|s| s.parse().ok())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn opts() -> BallOptions {
        BallOptions::default()
    }

    #[test]
    fn abelian_step_example() {
        let w = cases::abelian_step(2, 3, 4).unwrap();
        assert_eq!(w.source.marking_text(), ["e1^3", "e2", "e1 e2^4"]);
        assert_eq!(w.target.model.descriptor(), "Z/2 x Z x Z");
        assert!(verify(&w, 4, &opts()).unwrap().agree);
        let beyond = verify(&w, 8, &opts()).unwrap();
        assert!(!beyond.agree);
        assert_eq!(beyond.first_divergence, Some(8));
    }

    #[test]
    fn zm_in_zn_cases() {
        let w = cases::zm_in_zn(1, 2, 5).unwrap();
        assert_eq!(w.source.marking_text(), ["e1", "e1^11"]);
        assert!(verify(&w, 5, &opts()).unwrap().agree);
        // the multiplier R itself is too small
        let lit = MarkedGroup::parse(GroupModel::abelian(&[0]), "e1, e1^5").unwrap();
        let lw = Witness::new("zm_in_zn", Params::new(), 5, lit, w.target.clone());
        assert!(!verify(&lw, 5, &opts()).unwrap().agree);
    }

    #[test]
    fn bs_example_marking() {
        let w = cases::bs_to_wreath(2, 4, 2).unwrap();
        assert_eq!(w.source.marking_text(), ["a", "t^17", "t^4"]);
        assert!(verify(&w, 2, &opts()).unwrap().agree);
    }

    #[test]
    fn transport_examples() {
        let w = cases::zm_in_zn(1, 2, 4).unwrap();
        let t = vec![parse_word("x y", 2).unwrap(), parse_word("y", 2).unwrap()];
        let tw = transport(&w, &t).unwrap();
        assert_eq!(tw.check_radius, 2);
        assert!(verify(&tw, 2, &opts()).unwrap().agree);
        let same = transport(&w, &[Word::gen(1), Word::gen(2)]).unwrap();
        assert_eq!(same.source.marking, w.source.marking);
        assert!(matches!(transport(&w, &[Word::gen(1)]), Err(Error::Generation(_))));
    }

    #[test]
    fn composed_direct() {
        let a = cases::zm_in_zn(1, 2, 3).unwrap();
        let b = cases::zm_in_zn(1, 2, 2).unwrap();
        let c = compose(&a, &b, Combinator::Direct).unwrap();
        assert_eq!(c.check_radius, 2);
        assert_eq!(c.target.model.num_gens(), 4);
        assert!(verify(&c, 2, &opts()).unwrap().agree);
    }

    #[test]
    fn diagonal_abelian_chain() {
        // Z ⊰ Z^2 ⊰ Z^3
        let second = cases::zm_in_zn(2, 3, 2).unwrap();
        let d = diagonal(&|r| cases::zm_in_zn(1, 2, r), &second).unwrap();
        assert_eq!(d.source.model.descriptor(), "Z");
        assert!(verify(&d, 2, &opts()).unwrap().agree);
    }

    #[test]
    fn quotient_sanity_z3() {
        let w = cases::zm_in_zn(1, 3, 3).unwrap();
        let rels = standard_relators(&w.target.model, 6).unwrap();
        assert_eq!(rels.len(), 3);
        assert!(quotient_violations(&w, &rels, 3).unwrap().is_empty());
    }

    #[test]
    fn unknown_case() {
        assert!(matches!(build("nope", &Params::new(), 1, &opts()), Err(Error::Param(_))));
        assert!(matches!(cases::free_mn(3, 2, 1), Err(Error::Param(_))));
    }
}
