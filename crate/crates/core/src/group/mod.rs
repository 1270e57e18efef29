//! Concrete group models with exact arithmetic and canonical serialization.

pub mod bs;
pub mod free;
pub mod generation;
pub mod grig;
pub mod hall;
pub mod metab;
pub mod parse;

use crate::error::{Error, Result};
use crate::int::{lcm, reduce, write_int, Int};
use crate::word::{Expr, Word};
use bs::BsElem;
use grig::Portrait;
use hall::{HallElem, PrimeColouring};
use metab::FmElem;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Ab(Vec<Int>),
    Free(Word),
    Nil { x: Vec<Int>, c: Vec<Int> },
    Grig(Portrait),
    Bs(BsElem),
    Fm(FmElem),
    Hall(HallElem),
    Pair(Box<Element>, Box<Element>),
    FreeProd(Vec<(u8, Element)>),
    /// base-element key → (base element, lamp value)
    Wreath { lamps: BTreeMap<Vec<u8>, (Element, Element)>, head: Box<Element> },
    /// point of the orbit of 0^∞ (trailing zeros stripped) → lamp value
    PermWreath { lamps: BTreeMap<Vec<u8>, Element>, head: Portrait },
}

impl Element {
    pub fn write_key(&self, out: &mut Vec<u8>) {
        match self {
            Element::Ab(v) => {
                out.push(1);
                v.iter().for_each(|x| write_int(out, x));
            }
            Element::Free(w) => {
                out.push(2);
                out.extend_from_slice(&(w.len() as u32).to_le_bytes());
                for l in &w.letters {
                    out.extend_from_slice(&l.to_le_bytes());
                }
            }
            Element::Nil { x, c } => {
                out.push(3);
                x.iter().chain(c.iter()).for_each(|v| write_int(out, v));
            }
            Element::Grig(p) => {
                out.push(4);
                p.write_key(out);
            }
            Element::Bs(b) => {
                out.push(5);
                b.write_key(out);
            }
            Element::Fm(f) => {
                out.push(6);
                f.write_key(out);
            }
            Element::Hall(h) => {
                out.push(7);
                h.write_key(out);
            }
            Element::Pair(a, b) => {
                out.push(8);
                a.write_key(out);
                b.write_key(out);
            }
            Element::FreeProd(s) => {
                out.push(9);
                out.extend_from_slice(&(s.len() as u32).to_le_bytes());
                for (side, e) in s {
                    out.push(*side);
                    e.write_key(out);
                }
            }
            Element::Wreath { lamps, head } => {
                out.push(10);
                out.extend_from_slice(&(lamps.len() as u32).to_le_bytes());
                for (k, (_, v)) in lamps {
                    out.extend_from_slice(&(k.len() as u32).to_le_bytes());
                    out.extend_from_slice(k);
                    v.write_key(out);
                }
                head.write_key(out);
            }
            Element::PermWreath { lamps, head } => {
                out.push(11);
                out.extend_from_slice(&(lamps.len() as u32).to_le_bytes());
                for (k, v) in lamps {
                    out.extend_from_slice(&(k.len() as u32).to_le_bytes());
                    out.extend_from_slice(k);
                    v.write_key(out);
                }
                head.write_key(out);
            }
        }
    }

    /// Canonical byte serialization; equal elements give equal bytes.
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_key(&mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupModel {
    FinAbelian(Vec<Int>),
    Free(usize),
    NilC2 { rank: usize, modulus: Int },
    Grigorchuk,
    BaumslagSolitar(Int),
    FreeMetabelian(usize),
    Hall(Arc<PrimeColouring>),
    Direct(Box<GroupModel>, Box<GroupModel>),
    FreeProd(Box<GroupModel>, Box<GroupModel>),
    Wreath(Box<GroupModel>, Box<GroupModel>),
    PermWreathGrig(Box<GroupModel>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(Int),
    Infinite,
    Unknown,
}

pub fn pair_index(i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

fn letter_names(k: usize) -> Vec<String> {
    if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

fn rename(names: Vec<String>, prefix: &str) -> Vec<String> {
    if names.len() == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=names.len()).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn has_duplicates(v: &[String]) -> bool {
    let mut s = v.to_vec();
    s.sort();
    s.windows(2).any(|w| w[0] == w[1])
}

impl GroupModel {
    pub fn nil(rank: usize, modulus: i64) -> GroupModel {
        GroupModel::NilC2 { rank, modulus: Int::from(modulus) }
    }

    pub fn abelian(factors: &[i64]) -> GroupModel {
        GroupModel::FinAbelian(factors.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn direct(a: GroupModel, b: GroupModel) -> GroupModel {
        GroupModel::Direct(Box::new(a), Box::new(b))
    }

    pub fn free_prod(a: GroupModel, b: GroupModel) -> GroupModel {
        GroupModel::FreeProd(Box::new(a), Box::new(b))
    }

    pub fn wreath(lamp: GroupModel, base: GroupModel) -> GroupModel {
        GroupModel::Wreath(Box::new(lamp), Box::new(base))
    }

    pub fn num_gens(&self) -> usize {
        match self {
            GroupModel::FinAbelian(f) => f.len(),
            GroupModel::Free(k) | GroupModel::FreeMetabelian(k) => *k,
            GroupModel::NilC2 { rank, .. } => *rank,
            GroupModel::Grigorchuk => 4,
            GroupModel::BaumslagSolitar(_) => 2,
            GroupModel::Hall(_) => 3,
            GroupModel::Direct(a, b) | GroupModel::FreeProd(a, b) | GroupModel::Wreath(a, b) => {
                a.num_gens() + b.num_gens()
            }
            GroupModel::PermWreathGrig(l) => l.num_gens() + 4,
        }
    }

    pub fn gen_names(&self) -> Vec<String> {
        match self {
            GroupModel::FinAbelian(f) => (1..=f.len()).map(|i| format!("e{i}")).collect(),
            GroupModel::Free(k) | GroupModel::FreeMetabelian(k) => letter_names(*k),
            GroupModel::NilC2 { rank, .. } => letter_names(*rank),
            GroupModel::Grigorchuk => ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect(),
            GroupModel::BaumslagSolitar(_) => vec!["a".into(), "t".into()],
            GroupModel::Hall(_) => vec!["x".into(), "y".into(), "a".into()],
            GroupModel::Direct(a, b) | GroupModel::FreeProd(a, b) => {
                let v: Vec<String> = a.gen_names().into_iter().chain(b.gen_names()).collect();
                if has_duplicates(&v) {
                    (1..=v.len()).map(|i| format!("g{i}")).collect()
                } else {
                    v
                }
            }
            GroupModel::Wreath(l, b) => {
                let v: Vec<String> = l.gen_names().into_iter().chain(b.gen_names()).collect();
                if has_duplicates(&v) {
                    let v2: Vec<String> =
                        rename(l.gen_names(), "a").into_iter().chain(rename(b.gen_names(), "t")).collect();
                    if has_duplicates(&v2) {
                        (1..=v.len()).map(|i| format!("g{i}")).collect()
                    } else {
                        v2
                    }
                } else {
                    v
                }
            }
            GroupModel::PermWreathGrig(l) => {
                let grig = GroupModel::Grigorchuk.gen_names();
                let mut lamp = l.gen_names();
                if lamp.iter().any(|n| grig.contains(n)) || has_duplicates(&lamp) {
                    lamp = rename(lamp, "l");
                }
                lamp.into_iter().chain(grig).collect()
            }
        }
    }

    /// Resolve a generator name (model names, g1..gk, and x1..xk for letter-named models).
    pub fn resolve_name(&self, s: &str) -> Option<usize> {
        let names = self.gen_names();
        if let Some(i) = crate::word::name_resolver(&names)(s) {
            return Some(i);
        }
        if let GroupModel::Free(k) | GroupModel::FreeMetabelian(k) | GroupModel::NilC2 { rank: k, .. } = self {
            if let Some(r) = s.strip_prefix('x') {
                if let Ok(i) = r.parse::<usize>() {
                    if i >= 1 && i <= *k {
                        return Some(i - 1);
                    }
                }
            }
        }
        None
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr> {
        let e = crate::word::parse_expr(text, &|s| self.resolve_name(s))?;
        if e.arity() > self.num_gens() {
            return Err(Error::Arity(format!("expression uses generator beyond {}", self.num_gens())));
        }
        Ok(e)
    }

    pub fn descriptor(&self) -> String {
        match self {
            GroupModel::FinAbelian(f) => {
                if f.is_empty() {
                    return "1".into();
                }
                let rank = f.iter().filter(|x| x.is_zero()).count();
                let mut parts = Vec::new();
                if rank == 1 {
                    parts.push("Z".to_string());
                } else if rank > 1 {
                    parts.push(format!("Z^{rank}"));
                }
                for x in f.iter().filter(|x| !x.is_zero()) {
                    parts.push(format!("Z/{x}"));
                }
                if f.iter().take_while(|x| x.is_zero()).count() != rank {
                    // order matters for markings: list factors literally
                    return f
                        .iter()
                        .map(|x| if x.is_zero() { "Z".to_string() } else { format!("Z/{x}") })
                        .collect::<Vec<_>>()
                        .join(" x ");
                }
                parts.join(" x ")
            }
            GroupModel::Free(k) => format!("F{k}"),
            GroupModel::NilC2 { rank, modulus } => {
                if modulus.is_zero() {
                    format!("N2_{rank}")
                } else {
                    format!("N2_{rank}/{modulus}")
                }
            }
            GroupModel::Grigorchuk => "Grig".into(),
            GroupModel::BaumslagSolitar(p) => format!("BS(1,{p})"),
            GroupModel::FreeMetabelian(k) => format!("FM{k}"),
            GroupModel::Hall(_) => "Hall(colouring)".into(),
            GroupModel::Direct(a, b) => format!("({}) x ({})", a.descriptor(), b.descriptor()),
            GroupModel::FreeProd(a, b) => format!("({}) * ({})", a.descriptor(), b.descriptor()),
            GroupModel::Wreath(a, b) => format!("({}) wr ({})", a.descriptor(), b.descriptor()),
            GroupModel::PermWreathGrig(a) => format!("({}) wrXGrig", a.descriptor()),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupModel::FinAbelian(f) => Element::Ab(vec![Int::zero(); f.len()]),
            GroupModel::Free(_) => Element::Free(Word::empty()),
            GroupModel::NilC2 { rank, .. } => {
                Element::Nil { x: vec![Int::zero(); *rank], c: vec![Int::zero(); rank * rank.saturating_sub(1) / 2] }
            }
            GroupModel::Grigorchuk => Element::Grig(Portrait::one()),
            GroupModel::BaumslagSolitar(_) => Element::Bs(BsElem::identity()),
            GroupModel::FreeMetabelian(k) => Element::Fm(FmElem::identity(*k)),
            GroupModel::Hall(_) => Element::Hall(HallElem::identity()),
            GroupModel::Direct(a, b) => Element::Pair(Box::new(a.identity()), Box::new(b.identity())),
            GroupModel::FreeProd(..) => Element::FreeProd(Vec::new()),
            GroupModel::Wreath(_, b) => Element::Wreath { lamps: BTreeMap::new(), head: Box::new(b.identity()) },
            GroupModel::PermWreathGrig(_) => Element::PermWreath { lamps: BTreeMap::new(), head: Portrait::one() },
        }
    }

    /// The built-in generators, in default marking order.
    pub fn generators(&self) -> Vec<Element> {
        match self {
            GroupModel::FinAbelian(f) => (0..f.len())
                .map(|i| {
                    let mut v = vec![Int::zero(); f.len()];
                    v[i] = reduce(&Int::one(), &f[i]);
                    Element::Ab(v)
                })
                .collect(),
            GroupModel::Free(k) => (1..=*k).map(|i| Element::Free(Word::gen(i))).collect(),
            GroupModel::NilC2 { rank, .. } => (0..*rank)
                .map(|i| {
                    let Element::Nil { mut x, c } = self.identity() else { unreachable!() };
                    x[i] = Int::one();
                    Element::Nil { x, c }
                })
                .collect(),
            GroupModel::Grigorchuk => (0..4).map(|i| Element::Grig(Portrait::generator(i))).collect(),
            GroupModel::BaumslagSolitar(_) => vec![Element::Bs(BsElem::gen_a()), Element::Bs(BsElem::gen_t())],
            GroupModel::FreeMetabelian(k) => (0..*k).map(|i| Element::Fm(FmElem::generator(*k, i))).collect(),
            GroupModel::Hall(_) => vec![
                Element::Hall(HallElem::gen_x()),
                Element::Hall(HallElem::gen_y()),
                Element::Hall(HallElem::gen_a()),
            ],
            GroupModel::Direct(a, b) => {
                let ia = a.identity();
                let ib = b.identity();
                a.generators()
                    .into_iter()
                    .map(|g| Element::Pair(Box::new(g), Box::new(ib.clone())))
                    .chain(b.generators().into_iter().map(|g| Element::Pair(Box::new(ia.clone()), Box::new(g))))
                    .collect()
            }
            GroupModel::FreeProd(a, b) => a
                .generators()
                .into_iter()
                .map(|g| self.syllable(0, g))
                .chain(b.generators().into_iter().map(|g| self.syllable(1, g)))
                .collect(),
            GroupModel::Wreath(l, b) => {
                let e = b.identity();
                let lamps = l.generators().into_iter().map(|g| self.lamp_at(&e, g));
                let heads = b
                    .generators()
                    .into_iter()
                    .map(|g| Element::Wreath { lamps: BTreeMap::new(), head: Box::new(g) });
                lamps.chain(heads).collect()
            }
            GroupModel::PermWreathGrig(l) => {
                let lamps = l.generators().into_iter().map(|g| self.perm_lamp_at(&[], g));
                let heads = (0..4).map(|i| Element::PermWreath { lamps: BTreeMap::new(), head: Portrait::generator(i) });
                lamps.chain(heads).collect()
            }
        }
    }

    fn syllable(&self, side: u8, g: Element) -> Element {
        let GroupModel::FreeProd(a, b) = self else { unreachable!() };
        let m = if side == 0 { a } else { b };
        if m.is_identity(&g) {
            Element::FreeProd(Vec::new())
        } else {
            Element::FreeProd(vec![(side, g)])
        }
    }

    /// Embed a factor element into a free product.
    pub fn free_factor_elem(&self, side: u8, g: Element) -> Element {
        self.syllable(side, g)
    }

    /// Wreath element with a single lamp value at base element `pos`.
    pub fn lamp_at(&self, pos: &Element, v: Element) -> Element {
        let GroupModel::Wreath(l, b) = self else { panic!("lamp_at on non-wreath model") };
        let mut lamps = BTreeMap::new();
        if !l.is_identity(&v) {
            lamps.insert(pos.key(), (pos.clone(), v));
        }
        Element::Wreath { lamps, head: Box::new(b.identity()) }
    }

    /// PermWreathGrig element with a single lamp value at a point.
    pub fn perm_lamp_at(&self, point: &[u8], v: Element) -> Element {
        let GroupModel::PermWreathGrig(l) = self else { panic!("perm_lamp_at on non-wreath model") };
        let mut p = point.to_vec();
        while p.last() == Some(&0) {
            p.pop();
        }
        let mut lamps = BTreeMap::new();
        if !l.is_identity(&v) {
            lamps.insert(p, v);
        }
        Element::PermWreath { lamps, head: Portrait::one() }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        match e {
            Element::Ab(v) => v.iter().all(|x| x.is_zero()),
            Element::Free(w) => w.is_empty(),
            Element::Nil { x, c } => x.iter().chain(c.iter()).all(|v| v.is_zero()),
            Element::Grig(p) => p.is_one(),
            Element::Bs(b) => b.is_identity(),
            Element::Fm(f) => f.is_identity(),
            Element::Hall(h) => h.is_identity(),
            Element::Pair(a, b) => {
                let GroupModel::Direct(ma, mb) = self else { panic!("{}", mismatch(self)) };
                ma.is_identity(a) && mb.is_identity(b)
            }
            Element::FreeProd(s) => s.is_empty(),
            Element::Wreath { lamps, head } => {
                let GroupModel::Wreath(_, b) = self else { panic!("{}", mismatch(self)) };
                lamps.is_empty() && b.is_identity(head)
            }
            Element::PermWreath { lamps, head } => lamps.is_empty() && head.is_one(),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (GroupModel::FinAbelian(f), Element::Ab(x), Element::Ab(y)) => {
                Element::Ab(x.iter().zip(y).zip(f).map(|((u, v), n)| reduce(&(u + v), n)).collect())
            }
            (GroupModel::Free(_), Element::Free(x), Element::Free(y)) => Element::Free(x.mul(y)),
            (GroupModel::NilC2 { rank, modulus }, Element::Nil { x: a, c }, Element::Nil { x: b, c: d }) => {
                let k = *rank;
                let x: Vec<Int> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                let mut cc: Vec<Int> = c.iter().zip(d).map(|(u, v)| u + v).collect();
                for i in 0..k {
                    if b[i].is_zero() {
                        continue;
                    }
                    for j in i + 1..k {
                        if !a[j].is_zero() {
                            cc[pair_index(i, j, k)] -= &a[j] * &b[i];
                        }
                    }
                }
                for v in cc.iter_mut() {
                    *v = reduce(v, modulus);
                }
                Element::Nil { x, c: cc }
            }
            (GroupModel::Grigorchuk, Element::Grig(g), Element::Grig(h)) => Element::Grig(g.mul(h)),
            (GroupModel::BaumslagSolitar(p), Element::Bs(g), Element::Bs(h)) => Element::Bs(g.mul(h, p)),
            (GroupModel::FreeMetabelian(_), Element::Fm(g), Element::Fm(h)) => Element::Fm(g.mul(h)),
            (GroupModel::Hall(phi), Element::Hall(g), Element::Hall(h)) => Element::Hall(g.mul(h, phi)),
            (GroupModel::Direct(ma, mb), Element::Pair(a1, b1), Element::Pair(a2, b2)) => {
                Element::Pair(Box::new(ma.mul(a1, a2)), Box::new(mb.mul(b1, b2)))
            }
            (GroupModel::FreeProd(ma, mb), Element::FreeProd(s), Element::FreeProd(t)) => {
                let mut out = s.clone();
                for (side, e) in t {
                    push_syllable(&mut out, *side, e.clone(), ma, mb);
                }
                Element::FreeProd(out)
            }
            (GroupModel::Wreath(ml, mb), Element::Wreath { lamps: f, head: g }, Element::Wreath { lamps: f2, head: g2 }) => {
                // (f,g)(f',g') = (f · g·f', g g')
                let mut lamps = f.clone();
                for (pos, v) in f2.values() {
                    let np = mb.mul(g, pos);
                    let key = np.key();
                    let nv = match lamps.get(&key) {
                        Some((_, old)) => ml.mul(old, v),
                        None => v.clone(),
                    };
                    if ml.is_identity(&nv) {
                        lamps.remove(&key);
                    } else {
                        lamps.insert(key, (np, nv));
                    }
                }
                Element::Wreath { lamps, head: Box::new(mb.mul(g, g2)) }
            }
            (
                GroupModel::PermWreathGrig(ml),
                Element::PermWreath { lamps: f, head: g },
                Element::PermWreath { lamps: f2, head: g2 },
            ) => {
                // (f,γ)(f',γ') = (f · γf', γγ') with (γf')(x) = f'(xγ)
                let mut lamps = f.clone();
                let ginv = g.inv();
                for (y, v) in f2 {
                    let x = ginv.act_point(y);
                    let nv = match lamps.get(&x) {
                        Some(old) => ml.mul(old, v),
                        None => v.clone(),
                    };
                    if ml.is_identity(&nv) {
                        lamps.remove(&x);
                    } else {
                        lamps.insert(x, nv);
                    }
                }
                Element::PermWreath { lamps, head: g.mul(g2) }
            }
            _ => panic!("{}", mismatch(self)),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupModel::FinAbelian(f), Element::Ab(x)) => {
                Element::Ab(x.iter().zip(f).map(|(u, n)| reduce(&-u, n)).collect())
            }
            (GroupModel::Free(_), Element::Free(w)) => Element::Free(w.inverse()),
            (GroupModel::NilC2 { rank, modulus }, Element::Nil { x, c }) => {
                let k = *rank;
                let mut cc: Vec<Int> = c.iter().map(|v| -v).collect();
                for i in 0..k {
                    for j in i + 1..k {
                        if !x[i].is_zero() && !x[j].is_zero() {
                            cc[pair_index(i, j, k)] -= &x[i] * &x[j];
                        }
                    }
                }
                for v in cc.iter_mut() {
                    *v = reduce(v, modulus);
                }
                Element::Nil { x: x.iter().map(|v| -v).collect(), c: cc }
            }
            (GroupModel::Grigorchuk, Element::Grig(g)) => Element::Grig(g.inv()),
            (GroupModel::BaumslagSolitar(p), Element::Bs(g)) => Element::Bs(g.inv(p)),
            (GroupModel::FreeMetabelian(_), Element::Fm(g)) => Element::Fm(g.inv()),
            (GroupModel::Hall(phi), Element::Hall(g)) => Element::Hall(g.inv(phi)),
            (GroupModel::Direct(ma, mb), Element::Pair(x, y)) => Element::Pair(Box::new(ma.inv(x)), Box::new(mb.inv(y))),
            (GroupModel::FreeProd(ma, mb), Element::FreeProd(s)) => Element::FreeProd(
                s.iter()
                    .rev()
                    .map(|(side, e)| (*side, if *side == 0 { ma.inv(e) } else { mb.inv(e) }))
                    .collect(),
            ),
            (GroupModel::Wreath(ml, mb), Element::Wreath { lamps, head }) => {
                // (f,g)^-1 = (g^-1 · f^-1, g^-1)
                let gi = mb.inv(head);
                let mut out = BTreeMap::new();
                for (pos, v) in lamps.values() {
                    let np = mb.mul(&gi, pos);
                    out.insert(np.key(), (np, ml.inv(v)));
                }
                Element::Wreath { lamps: out, head: Box::new(gi) }
            }
            (GroupModel::PermWreathGrig(ml), Element::PermWreath { lamps, head }) => {
                // f''(y) = f(y γ^-1)^-1, supported on supp(f)·γ
                let mut out = BTreeMap::new();
                for (x, v) in lamps {
                    out.insert(head.act_point(x), ml.inv(v));
                }
                Element::PermWreath { lamps: out, head: head.inv() }
            }
            _ => panic!("{}", mismatch(self)),
        }
    }

    /// Checked multiplication: payload/model mismatch is an error instead of a panic.
    pub fn try_mul(&self, a: &Element, b: &Element) -> Result<Element> {
        if !self.owns(a) || !self.owns(b) {
            return Err(Error::Mismatch(self.descriptor()));
        }
        Ok(self.mul(a, b))
    }

    /// Shallow payload/model compatibility check.
    pub fn owns(&self, e: &Element) -> bool {
        match (self, e) {
            (GroupModel::FinAbelian(f), Element::Ab(v)) => f.len() == v.len(),
            (GroupModel::Free(_), Element::Free(_)) => true,
            (GroupModel::NilC2 { rank, .. }, Element::Nil { x, .. }) => x.len() == *rank,
            (GroupModel::Grigorchuk, Element::Grig(_)) => true,
            (GroupModel::BaumslagSolitar(_), Element::Bs(_)) => true,
            (GroupModel::FreeMetabelian(k), Element::Fm(f)) => f.ab.len() == *k,
            (GroupModel::Hall(_), Element::Hall(_)) => true,
            (GroupModel::Direct(a, b), Element::Pair(x, y)) => a.owns(x) && b.owns(y),
            (GroupModel::FreeProd(..), Element::FreeProd(_)) => true,
            (GroupModel::Wreath(_, b), Element::Wreath { head, .. }) => b.owns(head),
            (GroupModel::PermWreathGrig(_), Element::PermWreath { .. }) => true,
            _ => false,
        }
    }

    pub fn pow(&self, e: &Element, n: &Int) -> Element {
        let base = if n.is_negative() { self.inv(e) } else { e.clone() };
        let mut n = n.abs();
        let mut acc = self.identity();
        let mut sq = base;
        while !n.is_zero() {
            if n.is_odd() {
                acc = self.mul(&acc, &sq);
            }
            n >>= 1;
            if !n.is_zero() {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    pub fn eval_word(&self, w: &Word, gens: &[Element]) -> Result<Element> {
        if w.arity() > gens.len() {
            return Err(Error::Arity(format!("word of arity {} on {} generators", w.arity(), gens.len())));
        }
        let invs: Vec<Element> = gens.iter().map(|g| self.inv(g)).collect();
        let mut acc = self.identity();
        for &l in &w.letters {
            let i = l.unsigned_abs() as usize - 1;
            acc = self.mul(&acc, if l > 0 { &gens[i] } else { &invs[i] });
        }
        Ok(acc)
    }

    pub fn eval_expr(&self, e: &Expr, gens: &[Element]) -> Result<Element> {
        Ok(match e {
            Expr::One => self.identity(),
            Expr::Gen(i) => gens
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Arity(format!("generator {} of {}", i + 1, gens.len())))?,
            Expr::Prod(v) => {
                let mut acc = self.identity();
                for x in v {
                    acc = self.mul(&acc, &self.eval_expr(x, gens)?);
                }
                acc
            }
            Expr::Pow(x, n) => self.pow(&self.eval_expr(x, gens)?, n),
            Expr::Inv(x) => self.inv(&self.eval_expr(x, gens)?),
            Expr::Comm(a, b) => {
                let a = self.eval_expr(a, gens)?;
                let b = self.eval_expr(b, gens)?;
                let ai = self.inv(&a);
                let bi = self.inv(&b);
                self.mul(&self.mul(&ai, &bi), &self.mul(&a, &b))
            }
        })
    }

    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }

    /// Element order; powering fallback capped at `cap`.
    pub fn order(&self, e: &Element, cap: u64) -> Order {
        if self.is_identity(e) {
            return Order::Finite(Int::one());
        }
        match (self, e) {
            (GroupModel::FinAbelian(f), Element::Ab(v)) => {
                let mut o = Int::one();
                for (x, n) in v.iter().zip(f) {
                    if x.is_zero() {
                        continue;
                    }
                    if n.is_zero() {
                        return Order::Infinite;
                    }
                    o = lcm(&o, &(n / x.gcd(n)));
                }
                Order::Finite(o)
            }
            (GroupModel::Free(_), _) | (GroupModel::FreeMetabelian(_), _) | (GroupModel::BaumslagSolitar(_), _) => {
                Order::Infinite
            }
            (GroupModel::NilC2 { modulus, .. }, Element::Nil { x, c }) => {
                if x.iter().any(|v| !v.is_zero()) || modulus.is_zero() {
                    return Order::Infinite;
                }
                let mut o = Int::one();
                for v in c.iter().filter(|v| !v.is_zero()) {
                    o = lcm(&o, &(modulus / v.gcd(modulus)));
                }
                Order::Finite(o)
            }
            (GroupModel::Grigorchuk, Element::Grig(g)) => {
                let mut p = g.clone();
                let mut o = Int::one();
                while o < Int::from(cap) {
                    p = p.mul(&p);
                    o *= 2;
                    if p.is_one() {
                        return Order::Finite(o);
                    }
                }
                Order::Unknown
            }
            (GroupModel::Hall(phi), Element::Hall(h)) => {
                if !h.head.0.is_zero() || !h.head.1.is_zero() || !h.apart.is_empty() {
                    return Order::Infinite;
                }
                let mut o = Int::one();
                for v in h.central.keys() {
                    match phi.modulus(v) {
                        0 => return Order::Infinite,
                        m => o = lcm(&o, &Int::from(m)),
                    }
                }
                Order::Finite(o)
            }
            (GroupModel::Direct(ma, mb), Element::Pair(a, b)) => match (ma.order(a, cap), mb.order(b, cap)) {
                (Order::Infinite, _) | (_, Order::Infinite) => Order::Infinite,
                (Order::Finite(x), Order::Finite(y)) => Order::Finite(lcm(&x, &y)),
                _ => Order::Unknown,
            },
            (GroupModel::Wreath(_, mb), Element::Wreath { head, .. }) if !matches!(mb.order(head, cap), Order::Finite(_)) => {
                match mb.order(head, cap) {
                    Order::Infinite => Order::Infinite,
                    _ => Order::Unknown,
                }
            }
            _ => {
                let mut p = e.clone();
                for n in 2..=cap {
                    p = self.mul(&p, e);
                    if self.is_identity(&p) {
                        return Order::Finite(Int::from(n));
                    }
                }
                Order::Unknown
            }
        }
    }

    /// Abelian: every element commutes (decided per model, no search).
    pub fn is_abelian(&self) -> bool {
        match self {
            GroupModel::FinAbelian(_) => true,
            GroupModel::Free(k) | GroupModel::FreeMetabelian(k) => *k <= 1,
            GroupModel::NilC2 { rank, .. } => *rank <= 1,
            GroupModel::Direct(a, b) => a.is_abelian() && b.is_abelian(),
            _ => false,
        }
    }
}

fn mismatch(m: &GroupModel) -> String {
    format!("payload does not belong to model {}", m.descriptor())
}

fn push_syllable(out: &mut Vec<(u8, Element)>, side: u8, e: Element, ma: &GroupModel, mb: &GroupModel) {
    let m = if side == 0 { ma } else { mb };
    if let Some((s, last)) = out.last() {
        if *s == side {
            let merged = m.mul(last, &e);
            out.pop();
            if !m.is_identity(&merged) {
                out.push((side, merged));
            }
            return;
        }
    }
    if !m.is_identity(&e) {
        out.push((side, e));
    }
}

/// A group model with an ordered marking, kept both as expressions and as evaluated elements.
#[derive(Clone, Debug)]
pub struct MarkedGroup {
    pub model: Arc<GroupModel>,
    pub marking: Vec<Expr>,
    pub elements: Vec<Element>,
}

impl MarkedGroup {
    /// Evaluate a marking without running the generation test.
    pub fn unchecked(model: GroupModel, marking: Vec<Expr>) -> Result<MarkedGroup> {
        let model = Arc::new(model);
        let marking: Vec<Expr> = marking.iter().map(Expr::simplify).collect();
        let elements = marking.iter().map(|e| model.eval_expr(e, &model.generators())).collect::<Result<Vec<_>>>()?;
        Ok(MarkedGroup { model, marking, elements })
    }

    /// Evaluate a marking and require a positive generation verdict.
    pub fn new(model: GroupModel, marking: Vec<Expr>, certificate: Option<&[Expr]>) -> Result<MarkedGroup> {
        let mg = MarkedGroup::unchecked(model, marking)?;
        mg.require_generation(certificate)?;
        Ok(mg)
    }

    pub fn standard(model: GroupModel) -> MarkedGroup {
        let n = model.num_gens();
        MarkedGroup::unchecked(model, (0..n).map(Expr::Gen).collect()).expect("standard marking")
    }

    /// Parse comma-separated marking expressions over the model's generators.
    pub fn parse(model: GroupModel, gens: &str) -> Result<MarkedGroup> {
        let exprs = split_top_level(gens)
            .iter()
            .map(|s| model.parse_expr(s))
            .collect::<Result<Vec<_>>>()?;
        MarkedGroup::new(model, exprs, None)
    }

    pub fn arity(&self) -> usize {
        self.elements.len()
    }

    pub fn evaluate(&self, w: &Word) -> Result<Element> {
        self.model.eval_word(w, &self.elements)
    }

    pub fn require_generation(&self, certificate: Option<&[Expr]>) -> Result<String> {
        match generation::generation_test(&self.model, &self.elements, certificate) {
            generation::Verdict::Proven(m) => Ok(m),
            generation::Verdict::Refuted(m) => Err(Error::Generation(m)),
            generation::Verdict::Unknown(m) => Err(Error::Generation(format!("not established: {m}"))),
        }
    }

    pub fn marking_text(&self) -> Vec<String> {
        let names = self.model.gen_names();
        self.marking.iter().map(|e| e.render(&names)).collect()
    }
}

/// Split on commas that are not nested inside brackets.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nil_commutator_is_c12() {
        let m = GroupModel::nil(2, 0);
        let g = m.generators();
        let c = m.commutator(&g[0], &g[1]);
        assert_eq!(c, Element::Nil { x: vec![Int::zero(), Int::zero()], c: vec![Int::one()] });
    }

    #[test]
    fn abelian_inverse() {
        let m = GroupModel::abelian(&[0, 6]);
        let e = Element::Ab(vec![Int::from(3), Int::from(5)]);
        assert_eq!(m.inv(&e), Element::Ab(vec![Int::from(-3), Int::from(1)]));
    }

    #[test]
    fn free_inverse() {
        let m = GroupModel::Free(2);
        assert_eq!(m.inv(&Element::Free(Word::new([1, 2]))), Element::Free(Word::new([-2, -1])));
    }

    #[test]
    fn wreath_lamp_position_moves_left() {
        let m = GroupModel::wreath(GroupModel::abelian(&[0]), GroupModel::abelian(&[0]));
        let g = m.generators();
        let e = m.eval_expr(&m.parse_expr("t^3 a t^-3").unwrap(), &g).unwrap();
        let Element::Wreath { lamps, .. } = &e else { panic!() };
        let (pos, _) = lamps.values().next().unwrap();
        assert_eq!(pos, &Element::Ab(vec![Int::from(3)]));
    }

    #[test]
    fn mismatch_is_error() {
        let m = GroupModel::Free(2);
        assert!(m.try_mul(&Element::Ab(vec![]), &m.identity()).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(GroupModel::wreath(GroupModel::abelian(&[0]), GroupModel::abelian(&[0, 0])).gen_names(), ["a", "t1", "t2"]);
        assert_eq!(GroupModel::direct(GroupModel::nil(2, 0), GroupModel::nil(2, 0)).gen_names(), ["g1", "g2", "g3", "g4"]);
    }
}
