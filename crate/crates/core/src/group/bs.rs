//! BS(1,p) = Z[1/p] ⋊ Z with elements (q, m), q = num · p^exp.

use crate::int::{pow, to_u32, Int};
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BsElem {
    pub num: Int,
    pub exp: Int,
    pub m: Int,
}

fn norm_q(mut num: Int, mut exp: Int, p: &Int) -> (Int, Int) {
    if num.is_zero() {
        return (num, Int::zero());
    }
    loop {
        let (q, r) = num.div_rem(p);
        if !r.is_zero() {
            break;
        }
        num = q;
        exp += 1;
    }
    (num, exp)
}

fn add_q(a: (&Int, &Int), b: (Int, Int), p: &Int) -> (Int, Int) {
    if a.0.is_zero() {
        return norm_q(b.0, b.1, p);
    }
    if b.0.is_zero() {
        return (a.0.clone(), a.1.clone());
    }
    let e = a.1.clone().min(b.1.clone());
    let n = a.0 * pow(p, to_u32(&(a.1 - &e))) + b.0 * pow(p, to_u32(&(&b.1 - &e)));
    norm_q(n, e, p)
}

impl BsElem {
    pub fn identity() -> BsElem {
        BsElem { num: Int::zero(), exp: Int::zero(), m: Int::zero() }
    }

    pub fn gen_a() -> BsElem {
        BsElem { num: Int::one(), exp: Int::zero(), m: Int::zero() }
    }

    pub fn gen_t() -> BsElem {
        BsElem { num: Int::zero(), exp: Int::zero(), m: Int::one() }
    }

    pub fn is_identity(&self) -> bool {
        self.num.is_zero() && self.m.is_zero()
    }

    /// (q1,m1)(q2,m2) = (q1 + p^{-m1} q2, m1+m2)
    pub fn mul(&self, o: &BsElem, p: &Int) -> BsElem {
        let (num, exp) = add_q((&self.num, &self.exp), (o.num.clone(), &o.exp - &self.m), p);
        BsElem { num, exp, m: &self.m + &o.m }
    }

    /// (q,m)^-1 = (-p^m q, -m)
    pub fn inv(&self, _p: &Int) -> BsElem {
        if self.num.is_zero() {
            return BsElem { num: Int::zero(), exp: Int::zero(), m: -&self.m };
        }
        BsElem { num: -&self.num, exp: &self.exp + &self.m, m: -&self.m }
    }

    pub fn write_key(&self, out: &mut Vec<u8>) {
        use crate::int::write_int;
        write_int(out, &self.num);
        write_int(out, &self.exp);
        write_int(out, &self.m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relation() {
        let p = Int::from(2);
        let a = BsElem::gen_a();
        let t = BsElem::gen_t();
        let lhs = t.inv(&p).mul(&a, &p).mul(&t, &p);
        assert_eq!(lhs, a.mul(&a, &p));
    }

    #[test]
    fn inverse_law() {
        let p = Int::from(3);
        let g = BsElem { num: Int::from(5), exp: Int::from(-2), m: Int::from(4) };
        assert!(g.mul(&g.inv(&p), &p).is_identity());
        assert!(g.inv(&p).mul(&g, &p).is_identity());
    }
}
