//! Free metabelian groups via the Magnus embedding: (abelianized vector, abelianized Fox derivatives).

use crate::int::Int;
use crate::word::Word;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse Laurent polynomial in k variables: exponent vector → nonzero coefficient.
pub type Laurent = BTreeMap<Vec<Int>, Int>;

pub fn shift(p: &Laurent, by: &[Int]) -> Laurent {
    p.iter()
        .map(|(m, c)| (m.iter().zip(by).map(|(a, b)| a + b).collect(), c.clone()))
        .collect()
}

pub fn add_into(acc: &mut Laurent, p: &Laurent, sign: i32) {
    for (m, c) in p {
        let e = acc.entry(m.clone()).or_insert_with(Int::zero);
        if sign > 0 {
            *e += c;
        } else {
            *e -= c;
        }
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FmElem {
    pub ab: Vec<Int>,
    pub fox: Vec<Laurent>,
}

impl FmElem {
    pub fn identity(k: usize) -> FmElem {
        FmElem { ab: vec![Int::zero(); k], fox: vec![Laurent::new(); k] }
    }

    pub fn generator(k: usize, i: usize) -> FmElem {
        let mut g = FmElem::identity(k);
        g.ab[i] = Int::one();
        g.fox[i].insert(vec![Int::zero(); k], Int::one());
        g
    }

    pub fn is_identity(&self) -> bool {
        self.ab.iter().all(|x| x.is_zero()) && self.fox.iter().all(|p| p.is_empty())
    }

    /// (a,p)(b,q) = (a+b, p + t^a q)
    pub fn mul(&self, o: &FmElem) -> FmElem {
        let ab = self.ab.iter().zip(&o.ab).map(|(a, b)| a + b).collect();
        let mut fox = self.fox.clone();
        for (f, q) in fox.iter_mut().zip(&o.fox) {
            add_into(f, &shift(q, &self.ab), 1);
        }
        FmElem { ab, fox }
    }

    /// (a,p)^-1 = (-a, -t^{-a} p)
    pub fn inv(&self) -> FmElem {
        let neg: Vec<Int> = self.ab.iter().map(|x| -x).collect();
        let fox = self
            .fox
            .iter()
            .map(|p| shift(p, &neg).into_iter().map(|(m, c)| (m, -c)).collect())
            .collect();
        FmElem { ab: neg, fox }
    }

    pub fn write_key(&self, out: &mut Vec<u8>) {
        use crate::int::write_int;
        for x in &self.ab {
            write_int(out, x);
        }
        for p in &self.fox {
            out.extend_from_slice(&(p.len() as u32).to_le_bytes());
            for (m, c) in p {
                for e in m {
                    write_int(out, e);
                }
                write_int(out, c);
            }
        }
    }
}

/// Abelianization vector and abelianized Fox derivatives of a word in rank k.
pub fn fox_derivatives(w: &Word, k: usize) -> (Vec<Int>, Vec<Laurent>) {
    let mut acc = FmElem::identity(k);
    for &l in &w.letters {
        let g = FmElem::generator(k, l.unsigned_abs() as usize - 1);
        acc = acc.mul(&if l > 0 { g } else { g.inv() });
    }
    (acc.ab, acc.fox)
}
