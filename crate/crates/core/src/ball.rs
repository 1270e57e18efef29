//! Canonical marked balls by breadth-first search, and what can be read off them.

use crate::error::{Error, Result};
use crate::group::{Element, MarkedGroup};
use crate::word::{label_index, label_letter, shortlex_cmp, Word};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

pub const DEFAULT_MAX_STATES: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub norm: u32,
    pub next: Vec<Option<u32>>,
}

/// Radius-R ball; states in BFS discovery order under the label order g1..gk, g1^-1..gk^-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCertificate {
    pub radius: u32,
    pub arity: usize,
    pub states: Vec<State>,
}

#[derive(Clone)]
pub struct BallOptions {
    pub max_states: usize,
    pub pool: Option<Arc<rayon::ThreadPool>>,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { max_states: DEFAULT_MAX_STATES, pool: None }
    }
}

impl BallOptions {
    pub fn with_threads(threads: usize) -> BallOptions {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool");
        BallOptions { max_states: DEFAULT_MAX_STATES, pool: Some(Arc::new(pool)) }
    }

    pub fn cap(mut self, max_states: usize) -> BallOptions {
        self.max_states = max_states;
        self
    }
}

/// A ball together with its elements and BFS tree.
pub struct Ball {
    pub cert: BallCertificate,
    pub elements: Vec<Element>,
    /// (parent state, label) of the discovering edge
    pub parent: Vec<Option<(u32, u8)>>,
}

impl Ball {
    /// Word of the BFS-tree path to state i.
    pub fn word_of(&self, mut i: usize) -> Word {
        let k = self.cert.arity;
        let mut rev = Vec::new();
        while let Some((p, l)) = self.parent[i] {
            rev.push(label_letter(l as usize, k));
            i = p as usize;
        }
        rev.reverse();
        Word::new(rev)
    }
}

const PAR_THRESHOLD: usize = 32;

pub fn explore(mg: &MarkedGroup, radius: u32, opts: &BallOptions) -> Result<Ball> {
    let run = || explore_inner(mg, radius, opts.max_states);
    match &opts.pool {
        Some(p) => p.install(run),
        None => run(),
    }
}

fn explore_inner(mg: &MarkedGroup, radius: u32, cap: usize) -> Result<Ball> {
    let model = &*mg.model;
    let k = mg.arity();
    let mut labels: Vec<Element> = mg.elements.clone();
    labels.extend(mg.elements.iter().map(|e| model.inv(e)));
    let id = model.identity();
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    index.insert(id.key(), 0);
    let mut elements = vec![id];
    let mut states = vec![State { norm: 0, next: vec![None; 2 * k] }];
    let mut parent = vec![None];
    let mut lo = 0usize;
    for d in 0..=radius {
        let hi = elements.len();
        if lo == hi {
            break;
        }
        let expand = |i: usize| -> Vec<(Element, Vec<u8>)> {
            labels
                .iter()
                .map(|s| {
                    let e = model.mul(&elements[i], s);
                    let key = e.key();
                    (e, key)
                })
                .collect()
        };
        let products: Vec<Vec<(Element, Vec<u8>)>> = if hi - lo >= PAR_THRESHOLD {
            (lo..hi).into_par_iter().map(expand).collect()
        } else {
            (lo..hi).map(expand).collect()
        };
        for (off, prods) in products.into_iter().enumerate() {
            let i = lo + off;
            for (j, (e, key)) in prods.into_iter().enumerate() {
                let target = match index.get(&key) {
                    Some(&t) => Some(t),
                    None if d < radius => {
                        let t = elements.len() as u32;
                        if elements.len() >= cap {
                            return Err(Error::Overflow { cap });
                        }
                        index.insert(key, t);
                        elements.push(e);
                        states.push(State { norm: d + 1, next: vec![None; 2 * k] });
                        parent.push(Some((i as u32, j as u8)));
                        Some(t)
                    }
                    None => None,
                };
                states[i].next[j] = target;
            }
        }
        lo = hi;
    }
    Ok(Ball { cert: BallCertificate { radius, arity: k, states }, elements, parent })
}

pub fn ball(mg: &MarkedGroup, radius: u32, opts: &BallOptions) -> Result<BallCertificate> {
    Ok(explore(mg, radius, opts)?.cert)
}

impl BallCertificate {
    /// Canonical JSON: sorted keys, no whitespace.
    pub fn to_json(&self) -> String {
        let mut s = String::with_capacity(self.states.len() * (8 + 6 * self.arity));
        let _ = write!(s, "{{\"arity\":{},\"radius\":{},\"states\":[", self.arity, self.radius);
        for (i, st) in self.states.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str("{\"next\":[");
            for (j, n) in st.next.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                match n {
                    Some(t) => {
                        let _ = write!(s, "{t}");
                    }
                    None => s.push_str("null"),
                }
            }
            let _ = write!(s, "],\"norm\":{}}}", st.norm);
        }
        s.push_str("]}");
        s
    }

    pub fn from_json(text: &str) -> Result<BallCertificate> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let bad = || Error::Param("malformed certificate".into());
        let radius = v.get("radius").and_then(|x| x.as_u64()).ok_or_else(bad)? as u32;
        let arity = v.get("arity").and_then(|x| x.as_u64()).ok_or_else(bad)? as usize;
        let mut states = Vec::new();
        for st in v.get("states").and_then(|x| x.as_array()).ok_or_else(bad)? {
            let norm = st.get("norm").and_then(|x| x.as_u64()).ok_or_else(bad)? as u32;
            let next = st
                .get("next")
                .and_then(|x| x.as_array())
                .ok_or_else(bad)?
                .iter()
                .map(|n| n.as_u64().map(|t| t as u32))
                .collect();
            states.push(State { norm, next });
        }
        Ok(BallCertificate { radius, arity, states })
    }

    /// The induced ball of radius r ≤ R (a prefix in BFS order).
    pub fn truncate(&self, r: u32) -> BallCertificate {
        let n = self.states.iter().take_while(|s| s.norm <= r).count();
        let states = self.states[..n]
            .iter()
            .map(|s| State {
                norm: s.norm,
                next: s.next.iter().map(|t| t.filter(|&t| (t as usize) < n)).collect(),
            })
            .collect();
        BallCertificate { radius: r.min(self.radius), arity: self.arity, states }
    }

    /// ν(r) for r = 0..=R.
    pub fn counts(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.radius as usize + 1];
        for s in &self.states {
            c[s.norm as usize] += 1;
        }
        let mut acc = 0;
        for x in c.iter_mut() {
            acc += *x;
            *x = acc;
        }
        c
    }
}

pub fn balls_agree(a: &BallCertificate, b: &BallCertificate) -> Result<bool> {
    if a.radius != b.radius || a.arity != b.arity {
        return Err(Error::Param(format!(
            "certificates differ in radius/arity: ({}, {}) vs ({}, {})",
            a.radius, a.arity, b.radius, b.arity
        )));
    }
    Ok(a == b)
}

/// Least r ≤ R at which the truncated balls differ.
pub fn first_divergence(a: &BallCertificate, b: &BallCertificate) -> Option<u32> {
    let r = a.radius.min(b.radius);
    (0..=r).find(|&t| a.truncate(t) != b.truncate(t))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Girth {
    Value(u32),
    /// girth exceeds this bound
    Exceeds(u32),
}

/// Shortest relation among the marked generators, exact up to 2·Rmax+1.
pub fn girth(mg: &MarkedGroup, rmax: u32, opts: &BallOptions) -> Result<Girth> {
    let b = explore(mg, rmax, opts)?;
    Ok(girth_of_ball(&b))
}

pub fn girth_of_ball(b: &Ball) -> Girth {
    let k = b.cert.arity;
    let inv = |j: usize| if j < k { j + k } else { j - k };
    let mut best: Option<u32> = None;
    for (u, st) in b.cert.states.iter().enumerate() {
        for (j, t) in st.next.iter().enumerate() {
            let Some(v) = *t else { continue };
            let v = v as usize;
            let tree = b.parent[v] == Some((u as u32, j as u8)) || b.parent[u] == Some((v as u32, inv(j) as u8));
            if tree {
                continue;
            }
            let len = st.norm + b.cert.states[v].norm + 1;
            best = Some(best.map_or(len, |x: u32| x.min(len)));
        }
    }
    match best {
        Some(x) => Girth::Value(x),
        None => Girth::Exceeds(2 * b.cert.radius + 1),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTable {
    pub counts: Vec<u64>,
    pub rate_upper: Option<f64>,
}

impl GrowthTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,nu\n");
        for (r, c) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "{r},{c}");
        }
        s
    }

    pub fn rate_text(&self) -> String {
        match self.rate_upper {
            Some(x) => format!("{x:.6}"),
            None => "undefined".into(),
        }
    }
}

pub fn growth(mg: &MarkedGroup, radius: u32, opts: &BallOptions) -> Result<GrowthTable> {
    let c = ball(mg, radius, opts)?;
    Ok(growth_of(&c))
}

pub fn growth_of(c: &BallCertificate) -> GrowthTable {
    let counts = c.counts();
    let r = c.radius;
    let rate_upper = if r == 0 { None } else { Some((*counts.last().unwrap() as f64).powf(1.0 / r as f64)) };
    GrowthTable { counts, rate_upper }
}

/// Canonical representative of a cyclic word up to rotation and inversion.
pub fn cyclic_canonical(w: &Word, k: usize) -> Word {
    let mut best = w.clone();
    for base in [w.clone(), w.inverse()] {
        let n = base.len();
        for r in 0..n {
            let rot = Word { letters: base.letters[r..].iter().chain(&base.letters[..r]).copied().collect() };
            if shortlex_cmp(&rot, &best, k) == std::cmp::Ordering::Less {
                best = rot;
            }
        }
    }
    best
}

/// Cyclically reduced relations of length ≤ L, one per rotation/inversion class, in length-lex order.
pub fn relations_up_to(mg: &MarkedGroup, l: usize) -> Result<Vec<Word>> {
    let model = &*mg.model;
    let k = mg.arity();
    let mut labels: Vec<Element> = mg.elements.clone();
    labels.extend(mg.elements.iter().map(|e| model.inv(e)));
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<i32>, Element)> = vec![(Vec::new(), model.identity())];
    while let Some((w, e)) = stack.pop() {
        if w.len() == l {
            continue;
        }
        for j in (0..2 * k).rev() {
            let letter = label_letter(j, k);
            if w.last() == Some(&-letter) {
                continue;
            }
            let ne = model.mul(&e, &labels[j]);
            let mut nw = w.clone();
            nw.push(letter);
            if model.is_identity(&ne) && nw[0] != -letter {
                let word = Word { letters: nw.clone() };
                if cyclic_canonical(&word, k) == word {
                    out.push(word);
                }
            }
            stack.push((nw, ne));
        }
    }
    out.sort_by(|a, b| shortlex_cmp(a, b, k));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub agree: bool,
    pub nu_src: u64,
    pub nu_tgt: u64,
}

/// Ball agreement at R forces equal ball counts at R.
pub fn rate_upper_transfer(src: &MarkedGroup, tgt: &MarkedGroup, r: u32, opts: &BallOptions) -> Result<TransferReport> {
    let a = ball(src, r, opts)?;
    let b = ball(tgt, r, opts)?;
    let agree = balls_agree(&a, &b)?;
    Ok(TransferReport { agree, nu_src: *a.counts().last().unwrap(), nu_tgt: *b.counts().last().unwrap() })
}

pub fn label_of(letter: i32, k: usize) -> usize {
    label_index(letter, k)
}
