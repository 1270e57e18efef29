//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use marked_groups::Word;
use rand::Rng;
use std::collections::HashSet;

/// Finite abelian group ⊕ Z/m_i with elements as mixed-radix indices.
pub struct FinAb {
    pub mods: Vec<u64>,
    pub size: usize,
    add: Vec<u32>,
}

impl FinAb {
    pub fn new(mods: &[u64]) -> FinAb {
        let mods: Vec<u64> = mods.iter().copied().filter(|&m| m > 1).collect();
        let size = mods.iter().product::<u64>() as usize;
        let mut g = FinAb { mods, size, add: Vec::new() };
        let mut add = vec![0u32; size * size];
        for a in 0..size {
            let ca = g.coords(a);
            for b in 0..size {
                let cb = g.coords(b);
                let s: Vec<u64> = ca.iter().zip(&cb).zip(&g.mods).map(|((x, y), m)| (x + y) % m).collect();
                add[a * size + b] = g.index(&s) as u32;
            }
        }
        g.add = add;
        g
    }

    pub fn coords(&self, mut i: usize) -> Vec<u64> {
        self.mods
            .iter()
            .map(|&m| {
                let c = i as u64 % m;
                i /= m as usize;
                c
            })
            .collect()
    }

    pub fn index(&self, c: &[u64]) -> usize {
        let mut i = 0usize;
        for (x, m) in c.iter().zip(&self.mods).rev() {
            i = i * *m as usize + *x as usize;
        }
        i
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn mul(&self, a: usize, n: u64) -> usize {
        let mut acc = 0;
        for _ in 0..n {
            acc = self.add(acc, a);
        }
        acc
    }

    pub fn order(&self, a: usize) -> u64 {
        let mut n = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            n += 1;
        }
        n
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// #{x : n·x = 0}
    pub fn killed_by(&self, n: u64) -> usize {
        (0..self.size).filter(|&x| self.mul(x, n) == 0).count()
    }
}

/// All homomorphisms from ⊕ Z/src_j (given by generator images) into `g`.
fn for_each_hom(src: &[u64], g: &FinAb, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let cands: Vec<Vec<usize>> = src.iter().map(|&m| (0..g.size).filter(|&x| g.mul(x, m) == 0).collect()).collect();
    let mut cur = Vec::with_capacity(src.len());
    fn go(i: usize, cands: &[Vec<usize>], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == cands.len() {
            return f(cur);
        }
        for &c in &cands[i] {
            cur.push(c);
            if go(i + 1, cands, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, &cands, &mut cur, f)
}

/// Can `extra` further elements together with `base` generate all of g?
fn completes(g: &FinAb, base: &[usize], extra: usize) -> bool {
    let s = g.span(base);
    if s.iter().all(|&b| b) {
        return true;
    }
    if extra == 0 {
        return false;
    }
    (1..g.size).filter(|&t| !s[t]).any(|t| {
        let mut b = base.to_vec();
        b.push(t);
        completes(g, &b, extra - 1)
    })
}

/// Brute force: an epimorphism Z^b ⊕ T_B ↠ Z^a ⊕ T_A injective on T_B.
/// Up to automorphisms the free block is [I_a | 0], so it suffices to find an
/// injective T_B → T_A plus b − a elements generating the cokernel.
pub fn oracle_preceq(a_rank: usize, a_tors: &[u64], b_rank: usize, b_tors: &[u64]) -> bool {
    if a_rank > b_rank {
        return false;
    }
    let ta = FinAb::new(a_tors);
    let tb = FinAb::new(b_tors);
    if ta.size % tb.size != 0 {
        return false;
    }
    // an injection needs at least as many solutions of n·x = 0
    let e: u64 = tb.mods.iter().copied().max().unwrap_or(1);
    if (1..=e).any(|n| tb.killed_by(n) > ta.killed_by(n)) {
        return false;
    }
    let k = b_rank - a_rank;
    for_each_hom(&tb.mods, &ta, &mut |img| {
        let s = ta.span(img);
        s.iter().filter(|&&b| b).count() == tb.size && completes(&ta, img, k)
    })
}

/// Brute force: some homomorphism T_B → T_A is injective.
pub fn oracle_torsion_embeds(small: &[u64], big: &[u64]) -> bool {
    let ta = FinAb::new(big);
    let tb = FinAb::new(small);
    for_each_hom(&tb.mods, &ta, &mut |img| ta.span(img).iter().filter(|&&b| b).count() == tb.size)
}

/// Brute force: Z^b ⊕ T_B ↠ Z^a ⊕ T_A exists.
pub fn oracle_quotient(a_rank: usize, a_tors: &[u64], b_rank: usize, b_tors: &[u64]) -> bool {
    if a_rank > b_rank {
        return false;
    }
    let ta = FinAb::new(a_tors);
    let tb = FinAb::new(b_tors);
    let k = b_rank - a_rank;
    for_each_hom(&tb.mods, &ta, &mut |img| completes(&ta, img, k))
}

/// |ball of radius r in Z^n| by naive breadth-first search over coordinate vectors.
pub fn zn_ball_size(n: usize, r: u32) -> usize {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut frontier = vec![vec![0i64; n]];
    seen.insert(vec![0; n]);
    for _ in 0..r {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..n {
                for d in [-1, 1] {
                    let mut w = v.clone();
                    w[i] += d;
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    seen.len()
}

/// Number of freely reduced words of length ≤ r over k letters, by enumeration.
pub fn free_ball_size(k: usize, r: u32) -> usize {
    let mut layer: Vec<Vec<i32>> = vec![vec![]];
    let mut total = 1;
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &layer {
            for g in 1..=k as i32 {
                for l in [g, -g] {
                    if w.last() != Some(&-l) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
        }
        total += next.len();
        layer = next;
    }
    total
}

fn cyclic_reduce(w: &[i32]) -> Vec<i32> {
    let mut v = w.to_vec();
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.remove(0);
        v.pop();
    }
    v
}

/// Largest piece of the symmetrized set: longest common prefix of two
/// different (word, rotation, orientation) positions, shorter than both.
pub fn brute_max_piece(words: &[Vec<i32>]) -> usize {
    let mut rel: Vec<Vec<i32>> = Vec::new();
    for w in words {
        let c = cyclic_reduce(w);
        let inv: Vec<i32> = c.iter().rev().map(|l| -l).collect();
        for base in [c, inv] {
            for s in 0..base.len() {
                let mut r = base[s..].to_vec();
                r.extend_from_slice(&base[..s]);
                rel.push(r);
            }
        }
    }
    let mut best = 0;
    for i in 0..rel.len() {
        for j in 0..rel.len() {
            if i == j {
                continue;
            }
            let cap = rel[i].len().min(rel[j].len()) - 1;
            let mut l = 0;
            while l < cap && rel[i][l] == rel[j][l] {
                l += 1;
            }
            best = best.max(l);
        }
    }
    best
}

/// Random freely reduced word of length exactly `len` over k letters.
pub fn random_reduced(rng: &mut impl Rng, k: usize, len: usize) -> Vec<i32> {
    let mut w: Vec<i32> = Vec::with_capacity(len);
    while w.len() < len {
        let g = rng.gen_range(1..=k as i32);
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if w.last() != Some(&-l) {
            w.push(l);
        }
    }
    w
}

pub fn word(letters: &[i32]) -> Word {
    Word::new(letters.iter().copied())
}

/// Letters over a,b,c,d (1..4) with no immediate repetition, length ≤ len.
pub fn random_grig(rng: &mut impl Rng, len: usize) -> Vec<i32> {
    let n = rng.gen_range(0..=len);
    let mut w = Vec::with_capacity(n);
    for _ in 0..n {
        w.push(rng.gen_range(1..=4));
    }
    w
}
