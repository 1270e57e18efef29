//! Hall's group H(Z^2) modulo a prime colouring: t^z · ∏ a_p^{e_p} · central.

use crate::error::{Error, Result};
use crate::int::{reduce, Int};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub type Pt = (Int, Int);

/// One construction step: θ realised at M({-R..R}^2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogStep {
    pub matrix: [[i64; 2]; 2],
    pub theta: Vec<(i64, i64, u64)>,
}

/// Map (Z^2)_+ → {1} ∪ primes; `default` covers unassigned points (0 means no relation imposed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeColouring {
    pub default: u64,
    pub assignments: BTreeMap<(i64, i64), u64>,
    pub log: Vec<LogStep>,
}

impl Default for PrimeColouring {
    fn default() -> Self {
        PrimeColouring { default: 1, assignments: BTreeMap::new(), log: Vec::new() }
    }
}

/// Positive cone: m > 0, or m = 0 and n > 0.
pub fn positive(m: i64, n: i64) -> bool {
    m > 0 || (m == 0 && n > 0)
}

pub fn positive_big(p: &Pt) -> bool {
    p.0.is_positive() || (p.0.is_zero() && p.1.is_positive())
}

impl PrimeColouring {
    pub fn single(m: i64, n: i64, v: u64) -> PrimeColouring {
        let mut c = PrimeColouring::default();
        c.set(m, n, v);
        c
    }

    /// Assign at ±(m,n); the value is attached to the positive representative.
    pub fn set(&mut self, m: i64, n: i64, v: u64) {
        let (m, n) = if positive(m, n) { (m, n) } else { (-m, -n) };
        if v == self.default {
            self.assignments.remove(&(m, n));
        } else {
            self.assignments.insert((m, n), v);
        }
    }

    pub fn value(&self, m: i64, n: i64) -> u64 {
        let (m, n) = if positive(m, n) { (m, n) } else { (-m, -n) };
        *self.assignments.get(&(m, n)).unwrap_or(&self.default)
    }

    /// Modulus for central coordinate v ∈ (Z^2)_+.
    pub fn modulus(&self, v: &Pt) -> u64 {
        match (v.0.to_i64(), v.1.to_i64()) {
            (Some(m), Some(n)) => self.value(m, n),
            _ => self.default,
        }
    }

    /// Primes occurring as values (the torsion primes of H_φ).
    pub fn primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.assignments.values().copied().filter(|&x| x > 1).collect();
        if self.default > 1 {
            v.push(self.default);
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> Value {
        let assignments: Vec<Value> = self.assignments.iter().map(|(&(m, n), &v)| json!([m, n, v])).collect();
        let log: Vec<Value> = self
            .log
            .iter()
            .map(|s| {
                json!({
                    "matrix": [[s.matrix[0][0], s.matrix[0][1]], [s.matrix[1][0], s.matrix[1][1]]],
                    "theta": s.theta.iter().map(|&(m, n, v)| json!([m, n, v])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"default": self.default, "assignments": assignments, "log": log})
    }

    pub fn from_json(v: &Value) -> Result<PrimeColouring> {
        let bad = |m: &str| Error::Param(format!("colouring file: {m}"));
        let default = v.get("default").and_then(Value::as_u64).unwrap_or(1);
        let mut c = PrimeColouring { default, assignments: BTreeMap::new(), log: Vec::new() };
        let triple = |t: &Value| -> Result<(i64, i64, u64)> {
            let a = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("expected [m,n,value]"))?;
            let m = a[0].as_i64().ok_or_else(|| bad("m"))?;
            let n = a[1].as_i64().ok_or_else(|| bad("n"))?;
            let val = a[2].as_u64().ok_or_else(|| bad("value"))?;
            Ok((m, n, val))
        };
        for t in v.get("assignments").and_then(Value::as_array).cloned().unwrap_or_default() {
            let (m, n, val) = triple(&t)?;
            if val != 1 && !crate::int::is_prime_u64(val) {
                return Err(bad("values must be 1 or prime"));
            }
            if m == 0 && n == 0 {
                return Err(bad("origin is not in the positive cone"));
            }
            c.set(m, n, val);
        }
        for s in v.get("log").and_then(Value::as_array).cloned().unwrap_or_default() {
            let mm = s.get("matrix").and_then(Value::as_array).ok_or_else(|| bad("matrix"))?;
            let row = |r: &Value| -> Result<[i64; 2]> {
                let a = r.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("matrix row"))?;
                Ok([a[0].as_i64().ok_or_else(|| bad("entry"))?, a[1].as_i64().ok_or_else(|| bad("entry"))?])
            };
            if mm.len() != 2 {
                return Err(bad("matrix"));
            }
            let matrix = [row(&mm[0])?, row(&mm[1])?];
            let theta = s
                .get("theta")
                .and_then(Value::as_array)
                .cloned()
                .unwrap_or_default()
                .iter()
                .map(triple)
                .collect::<Result<Vec<_>>>()?;
            c.log.push(LogStep { matrix, theta });
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HallElem {
    pub head: Pt,
    pub apart: BTreeMap<Pt, Int>,
    pub central: BTreeMap<Pt, Int>,
}

fn zero_pt() -> Pt {
    (Int::zero(), Int::zero())
}

fn add_to(map: &mut BTreeMap<Pt, Int>, k: Pt, v: Int) {
    if v.is_zero() {
        return;
    }
    let e = map.entry(k.clone()).or_insert_with(Int::zero);
    *e += v;
    if e.is_zero() {
        map.remove(&k);
    }
}

impl HallElem {
    pub fn identity() -> HallElem {
        HallElem { head: zero_pt(), apart: BTreeMap::new(), central: BTreeMap::new() }
    }

    pub fn gen_x() -> HallElem {
        HallElem { head: (Int::from(1), Int::zero()), ..HallElem::identity() }
    }

    pub fn gen_y() -> HallElem {
        HallElem { head: (Int::zero(), Int::from(1)), ..HallElem::identity() }
    }

    pub fn gen_a() -> HallElem {
        let mut apart = BTreeMap::new();
        apart.insert(zero_pt(), Int::from(1));
        HallElem { apart, ..HallElem::identity() }
    }

    pub fn is_identity(&self) -> bool {
        self.head.0.is_zero() && self.head.1.is_zero() && self.apart.is_empty() && self.central.is_empty()
    }

    fn normalize(mut self, phi: &PrimeColouring) -> HallElem {
        let mut central = BTreeMap::new();
        for (v, c) in std::mem::take(&mut self.central) {
            let m = phi.modulus(&v);
            let r = match m {
                1 => continue,
                0 => c,
                p => reduce(&c, &Int::from(p)),
            };
            if !r.is_zero() {
                central.insert(v, r);
            }
        }
        self.central = central;
        self
    }

    pub fn mul(&self, o: &HallElem, phi: &PrimeColouring) -> HallElem {
        let w = &o.head;
        // (t^z n)(t^w m) = t^{z+w} (n shifted by w) m
        let shifted: Vec<(Pt, Int)> =
            self.apart.iter().map(|(p, e)| ((&p.0 + &w.0, &p.1 + &w.1), e.clone())).collect();
        let mut apart: BTreeMap<Pt, Int> = shifted.iter().cloned().collect();
        let mut central = self.central.clone();
        for (v, c) in &o.central {
            add_to(&mut central, v.clone(), c.clone());
        }
        // moving a_q (right) past a_p (left) with q < p contributes z_{p-q}^{-e_p e'_q}
        for (p, ep) in &shifted {
            for (q, eq) in &o.apart {
                if q < p {
                    let d = (&p.0 - &q.0, &p.1 - &q.1);
                    add_to(&mut central, d, -(ep * eq));
                }
            }
        }
        for (q, eq) in &o.apart {
            add_to(&mut apart, q.clone(), eq.clone());
        }
        HallElem { head: (&self.head.0 + &w.0, &self.head.1 + &w.1), apart, central }.normalize(phi)
    }

    pub fn inv(&self, phi: &PrimeColouring) -> HallElem {
        // n^{-1} = (-e, -f - Σ_{q<p} e_p e_q z_{p-q}), then shift by -z
        let mut central: BTreeMap<Pt, Int> = self.central.iter().map(|(v, c)| (v.clone(), -c)).collect();
        let items: Vec<(&Pt, &Int)> = self.apart.iter().collect();
        for (i, (q, eq)) in items.iter().enumerate() {
            for (p, ep) in items.iter().skip(i + 1) {
                let d = (&p.0 - &q.0, &p.1 - &q.1);
                add_to(&mut central, d, -(*ep * *eq));
            }
        }
        let z = &self.head;
        let apart = self.apart.iter().map(|(p, e)| ((&p.0 - &z.0, &p.1 - &z.1), -e)).collect();
        HallElem { head: (-&z.0, -&z.1), apart, central }.normalize(phi)
    }

    pub fn write_key(&self, out: &mut Vec<u8>) {
        use crate::int::write_int;
        write_int(out, &self.head.0);
        write_int(out, &self.head.1);
        for map in [&self.apart, &self.central] {
            out.extend_from_slice(&(map.len() as u32).to_le_bytes());
            for (p, e) in map {
                write_int(out, &p.0);
                write_int(out, &p.1);
                write_int(out, e);
            }
        }
    }
}
