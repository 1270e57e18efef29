//! Grigorchuk group: portraits over the nucleus {1,a,b,c,d}, right action on binary words.

use crate::word::Word;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nuc {
    One,
    A,
    B,
    C,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PNode {
    pub swap: bool,
    pub kids: [Portrait; 2],
}

/// Finite tree normal form; a node never matches a nucleus pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Portrait {
    Leaf(Nuc),
    Node(Arc<PNode>),
}

use Portrait::Leaf;

impl Nuc {
    fn expand(self) -> (bool, Portrait, Portrait) {
        match self {
            Nuc::One => (false, Leaf(Nuc::One), Leaf(Nuc::One)),
            Nuc::A => (true, Leaf(Nuc::One), Leaf(Nuc::One)),
            Nuc::B => (false, Leaf(Nuc::A), Leaf(Nuc::C)),
            Nuc::C => (false, Leaf(Nuc::A), Leaf(Nuc::D)),
            Nuc::D => (false, Leaf(Nuc::One), Leaf(Nuc::B)),
        }
    }

    pub fn from_index(i: usize) -> Nuc {
        [Nuc::A, Nuc::B, Nuc::C, Nuc::D][i]
    }
}

impl Portrait {
    pub fn one() -> Portrait {
        Leaf(Nuc::One)
    }

    pub fn generator(i: usize) -> Portrait {
        Leaf(Nuc::from_index(i))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Leaf(Nuc::One))
    }

    pub fn parts(&self) -> (bool, Portrait, Portrait) {
        match self {
            Leaf(n) => n.expand(),
            Portrait::Node(p) => (p.swap, p.kids[0].clone(), p.kids[1].clone()),
        }
    }

    pub fn swap(&self) -> bool {
        match self {
            Leaf(n) => *n == Nuc::A,
            Portrait::Node(p) => p.swap,
        }
    }

    pub fn section(&self, bit: u8) -> Portrait {
        let (_, l, r) = self.parts();
        if bit == 0 {
            l
        } else {
            r
        }
    }

    fn build(swap: bool, l: Portrait, r: Portrait) -> Portrait {
        let leaf = match (&l, &r) {
            (Leaf(x), Leaf(y)) => Some((*x, *y)),
            _ => None,
        };
        if let Some((x, y)) = leaf {
            let hit = match (swap, x, y) {
                (false, Nuc::One, Nuc::One) => Some(Nuc::One),
                (true, Nuc::One, Nuc::One) => Some(Nuc::A),
                (false, Nuc::A, Nuc::C) => Some(Nuc::B),
                (false, Nuc::A, Nuc::D) => Some(Nuc::C),
                (false, Nuc::One, Nuc::B) => Some(Nuc::D),
                _ => None,
            };
            if let Some(n) = hit {
                return Leaf(n);
            }
        }
        Portrait::Node(Arc::new(PNode { swap, kids: [l, r] }))
    }

    pub fn mul(&self, h: &Portrait) -> Portrait {
        if self.is_one() {
            return h.clone();
        }
        if h.is_one() {
            return self.clone();
        }
        if let (Leaf(x), Leaf(y)) = (self, h) {
            if let Some(n) = nucleus_product(*x, *y) {
                return Leaf(n);
            }
        }
        let (sg, g0, g1) = self.parts();
        let (sh, h0, h1) = h.parts();
        let hk = [h0, h1];
        // (gh)|x = g|x · h|_{x^g}
        let k0 = g0.mul(&hk[sg as usize]);
        let k1 = g1.mul(&hk[1 - sg as usize]);
        Portrait::build(sg ^ sh, k0, k1)
    }

    pub fn inv(&self) -> Portrait {
        match self {
            Leaf(n) => Leaf(*n),
            Portrait::Node(p) => {
                let s = p.swap as usize;
                // (g^-1)|y = (g|_{y^σ})^-1
                let k0 = p.kids[s].inv();
                let k1 = p.kids[1 - s].inv();
                Portrait::build(p.swap, k0, k1)
            }
        }
    }

    pub fn write_key(&self, out: &mut Vec<u8>) {
        match self {
            Leaf(n) => out.push(*n as u8),
            Portrait::Node(p) => {
                out.push(5 + p.swap as u8);
                p.kids[0].write_key(out);
                p.kids[1].write_key(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Leaf(_) => 0,
            Portrait::Node(p) => 1 + p.kids[0].depth().max(p.kids[1].depth()),
        }
    }

    /// Image of a finite binary word (the prefix cylinder), length preserved.
    pub fn apply(&self, point: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(point.len());
        let mut g = self.clone();
        for (i, &b) in point.iter().enumerate() {
            if g.is_one() {
                out.extend_from_slice(&point[i..]);
                return out;
            }
            let (s, l, r) = g.parts();
            out.push(b ^ s as u8);
            g = if b == 0 { l } else { r };
        }
        out
    }

    /// Action on a point of the orbit of 0^∞, given as a word modulo trailing zeros.
    pub fn act_point(&self, point: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        let mut g = self.clone();
        let mut i = 0;
        loop {
            if g.is_one() {
                if i < point.len() {
                    out.extend_from_slice(&point[i..]);
                }
                break;
            }
            let b = point.get(i).copied().unwrap_or(0);
            let (s, l, r) = g.parts();
            out.push(b ^ s as u8);
            g = if b == 0 { l } else { r };
            i += 1;
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// Sections at every vertex of level n, in lexicographic vertex order.
    pub fn level_sections(&self, n: usize) -> Vec<Portrait> {
        let mut cur = vec![self.clone()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for g in &cur {
                let (_, l, r) = g.parts();
                next.push(l);
                next.push(r);
            }
            cur = next;
        }
        cur
    }

    /// Image in the abelianization (Z/2)^3 with a↦(1,0,0), b↦(0,1,0), c↦(0,0,1), d↦(0,1,1).
    pub fn abelianization(&self) -> [u8; 3] {
        let parity = |n: usize| self.level_sections(n).iter().fold(0u8, |acc, g| acc ^ g.swap() as u8);
        let h0 = parity(0);
        let h1 = parity(1);
        let h2 = parity(2);
        [h0, h2, h1 ^ h2]
    }
}

fn nucleus_product(x: Nuc, y: Nuc) -> Option<Nuc> {
    use Nuc::*;
    Some(match (x, y) {
        (One, z) | (z, One) => z,
        (A, A) | (B, B) | (C, C) | (D, D) => One,
        (B, C) | (C, B) => D,
        (B, D) | (D, B) => C,
        (C, D) | (D, C) => B,
        _ => return None,
    })
}

/// Evaluate a word over a,b,c,d (letters ±1..±4) as a portrait.
pub fn eval_word(w: &Word) -> Portrait {
    w.letters.iter().fold(Portrait::one(), |acc, &l| acc.mul(&Portrait::generator(l.unsigned_abs() as usize - 1)))
}

/// Word problem by direct contraction: true iff the word over a,b,c,d is trivial.
pub fn word_is_trivial(w: &[u8]) -> bool {
    // letters 0..3 = a,b,c,d; all involutions
    let mut v: Vec<u8> = Vec::with_capacity(w.len());
    for &l in w {
        push_reduced(&mut v, l);
    }
    let acount = v.iter().filter(|&&l| l == 0).count();
    if acount % 2 == 1 {
        return false;
    }
    if v.is_empty() {
        return true;
    }
    if v.len() == 1 {
        return false;
    }
    let mut sec: [Vec<u8>; 2] = [Vec::new(), Vec::new()];
    let mut s = 0u8;
    for &l in &v {
        if l == 0 {
            s ^= 1;
            continue;
        }
        for x in 0..2u8 {
            let p = x ^ s;
            let part: Option<u8> = match (l, p) {
                (1, 0) | (2, 0) => Some(0),
                (1, 1) => Some(2),
                (2, 1) => Some(3),
                (3, 0) => None,
                (3, 1) => Some(1),
                _ => unreachable!(),
            };
            if let Some(q) = part {
                sec[x as usize].push(q);
            }
        }
    }
    word_is_trivial(&sec[0]) && word_is_trivial(&sec[1])
}

/// Reduce a word over a,b,c,d (letters 0..3) using involutions and bc = d.
pub fn reduce_abcd(w: &[u8]) -> Vec<u8> {
    let mut v = Vec::with_capacity(w.len());
    for &l in w {
        push_reduced(&mut v, l);
    }
    v
}

/// Image in (Z/2)^3 counted from letters: a, then b and d, then c and d.
pub fn letter_abelianization(w: &[u8]) -> [u8; 3] {
    let mut out = [0u8; 3];
    for &l in w {
        match l {
            0 => out[0] ^= 1,
            1 => out[1] ^= 1,
            2 => out[2] ^= 1,
            _ => {
                out[1] ^= 1;
                out[2] ^= 1;
            }
        }
    }
    out
}

fn push_reduced(v: &mut Vec<u8>, l: u8) {
    match v.last().copied() {
        Some(t) if t == l => {
            v.pop();
        }
        Some(t) if t != 0 && l != 0 => {
            v.pop();
            let third = 6 - t - l;
            push_reduced(v, third);
        }
        _ => v.push(l),
    }
}

/// Letters ±1..±4 to contraction letters 0..3.
pub fn to_abcd(w: &Word) -> Vec<u8> {
    w.letters.iter().map(|l| (l.unsigned_abs() - 1) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Portrait {
        s.chars().fold(Portrait::one(), |acc, c| acc.mul(&Portrait::generator("abcd".find(c).unwrap())))
    }

    #[test]
    fn involutions_and_klein() {
        for s in ["aa", "bb", "cc", "dd", "bcd"] {
            assert!(p(s).is_one(), "{s}");
        }
        assert!(!p("ab").is_one());
    }

    #[test]
    fn inverse_of_ab_is_ba() {
        assert_eq!(p("ab").inv(), p("ba"));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(p("a").apply(&[0, 1]), vec![1, 1]);
        assert_eq!(p("d").apply(&[0]), vec![0]);
        assert_eq!(p("b").apply(&[1, 0]), vec![1, 0]);
    }

    #[test]
    fn orbit_of_zero() {
        assert_eq!(p("a").act_point(&[]), vec![1]);
        assert_eq!(p("b").act_point(&[]), vec![0, 1]);
        assert_eq!(p("c").act_point(&[]), vec![0, 1]);
        assert_eq!(p("d").act_point(&[]), Vec::<u8>::new());
    }

    #[test]
    fn contraction_agrees_on_relations() {
        assert!(word_is_trivial(&[1, 2, 3]));
        assert!(word_is_trivial(&[0, 3, 0, 3, 0, 3, 0, 3]));
        assert!(!word_is_trivial(&[0, 3, 0, 3]));
    }

    #[test]
    fn abelianization_of_generators() {
        assert_eq!(p("a").abelianization(), [1, 0, 0]);
        assert_eq!(p("b").abelianization(), [0, 1, 0]);
        assert_eq!(p("c").abelianization(), [0, 0, 1]);
        assert_eq!(p("d").abelianization(), [0, 1, 1]);
        assert_eq!(p("abacab").abelianization(), [1, 0, 1]);
    }
}
