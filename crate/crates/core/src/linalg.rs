//! Integer row reduction: Hermite and Smith forms over arbitrary precision integers.

use crate::int::Int;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<Int>>;

fn ncols(m: &Matrix) -> usize {
    m.first().map(|r| r.len()).unwrap_or(0)
}

/// Row Hermite normal form; zero rows dropped, pivots positive, entries above pivots reduced.
pub fn hnf(rows: &Matrix) -> Matrix {
    let mut m: Matrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let n = ncols(rows);
    let mut top = 0;
    for col in 0..n {
        if top >= m.len() {
            break;
        }
        loop {
            // smallest nonzero in column at or below top
            let mut best: Option<usize> = None;
            for r in top..m.len() {
                if !m[r][col].is_zero() && best.is_none_or(|b| m[r][col].abs() < m[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(top, b);
            let mut done = true;
            for r in top + 1..m.len() {
                if !m[r][col].is_zero() {
                    let q = m[r][col].div_floor(&m[top][col]);
                    let pivot = m[top].clone();
                    for (x, p) in m[r].iter_mut().zip(pivot.iter()) {
                        *x -= &q * p;
                    }
                    if !m[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if top < m.len() && !m[top][col].is_zero() {
            if m[top][col].is_negative() {
                for x in m[top].iter_mut() {
                    *x = -&*x;
                }
            }
            for r in 0..top {
                let q = m[r][col].div_floor(&m[top][col]);
                if !q.is_zero() {
                    let pivot = m[top].clone();
                    for (x, p) in m[r].iter_mut().zip(pivot.iter()) {
                        *x -= &q * p;
                    }
                }
            }
            top += 1;
        }
    }
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Integer coordinates of `v` in an HNF basis, if `v` lies in its span.
pub fn coords_in_basis(basis: &Matrix, v: &[Int]) -> Option<Vec<Int>> {
    let mut rest = v.to_vec();
    let mut out = vec![Int::zero(); basis.len()];
    for (i, row) in basis.iter().enumerate() {
        let col = row.iter().position(|x| !x.is_zero())?;
        // entries left of the pivot must already vanish
        if rest[..col].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return None;
        }
        for (x, p) in rest.iter_mut().zip(row.iter()) {
            *x -= &q * p;
        }
        out[i] = q;
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(out)
    } else {
        None
    }
}

/// Nonzero Smith invariant factors d1 | d2 | ... (their count is the rank).
pub fn smith(rows: &Matrix) -> Vec<Int> {
    let mut m: Matrix = rows.clone();
    let nr = m.len();
    let nc = ncols(&m);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // pivot: smallest nonzero in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(t) {
            for (c, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        m.swap(t, br);
        for row in m.iter_mut() {
            row.swap(t, bc);
        }
        let mut clean = true;
        for r in t + 1..nr {
            if !m[r][t].is_zero() {
                let q = m[r][t].div_floor(&m[t][t]);
                let pivot = m[t].clone();
                for (x, p) in m[r].iter_mut().zip(pivot.iter()) {
                    *x -= &q * p;
                }
                if !m[r][t].is_zero() {
                    clean = false;
                }
            }
        }
        for c in t + 1..nc {
            if !m[t][c].is_zero() {
                let q = m[t][c].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let p = row[t].clone();
                    row[c] -= &q * p;
                }
                if !m[t][c].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold any entry not divisible by the pivot into row t
        let mut fixed = true;
        'scan: for r in t + 1..nr {
            for c in t + 1..nc {
                if !(&m[r][c] % &m[t][t]).is_zero() {
                    let row = m[r].clone();
                    for (x, y) in m[t].iter_mut().zip(row.iter()) {
                        *x += y;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Smith form with transforms: P·M·Q = D. Returns (diagonal entries, P, Q, Q^-1).
pub fn smith_full(rows: &Matrix, nc: usize) -> (Vec<Int>, Matrix, Matrix, Matrix) {
    let nr = rows.len();
    let ident = |n: usize| -> Matrix {
        (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect()
    };
    let mut m = rows.clone();
    let mut p = ident(nr);
    let mut q = ident(nc);
    let mut qi = ident(nc);
    // column op: col c -= f * col t, mirrored on Q and (as a row op) on Q^-1
    let col_sub = |m: &mut Matrix, q: &mut Matrix, qi: &mut Matrix, c: usize, t: usize, f: &Int| {
        for row in m.iter_mut() {
            let v = &row[t] * f;
            row[c] -= v;
        }
        for row in q.iter_mut() {
            let v = &row[t] * f;
            row[c] -= v;
        }
        let rc = qi[c].clone();
        for (x, y) in qi[t].iter_mut().zip(rc.iter()) {
            *x += y * f;
        }
    };
    let col_swap = |m: &mut Matrix, q: &mut Matrix, qi: &mut Matrix, a: usize, b: usize| {
        for row in m.iter_mut().chain(q.iter_mut()) {
            row.swap(a, b);
        }
        qi.swap(a, b);
    };
    let row_sub = |m: &mut Matrix, p: &mut Matrix, r: usize, t: usize, f: &Int| {
        for mm in [&mut *m, &mut *p] {
            let pivot = mm[t].clone();
            for (x, y) in mm[r].iter_mut().zip(pivot.iter()) {
                *x -= y * f;
            }
        }
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(t) {
            for (c, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        m.swap(t, br);
        p.swap(t, br);
        col_swap(&mut m, &mut q, &mut qi, t, bc);
        let mut clean = true;
        for r in t + 1..nr {
            if !m[r][t].is_zero() {
                let f = m[r][t].div_floor(&m[t][t]);
                row_sub(&mut m, &mut p, r, t, &f);
                if !m[r][t].is_zero() {
                    clean = false;
                }
            }
        }
        for c in t + 1..nc {
            if !m[t][c].is_zero() {
                let f = m[t][c].div_floor(&m[t][t]);
                col_sub(&mut m, &mut q, &mut qi, c, t, &f);
                if !m[t][c].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        let mut fixed = true;
        'scan: for r in t + 1..nr {
            for c in t + 1..nc {
                if !(&m[r][c] % &m[t][t]).is_zero() {
                    row_sub(&mut m, &mut p, t, r, &-Int::one());
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut().chain(p[t].iter_mut()) {
                *x = -&*x;
            }
        }
        diag.push(m[t][t].clone());
        t += 1;
    }
    (diag, p, q, qi)
}

/// Product of integer matrices.
pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let nc = ncols(b);
    a.iter()
        .map(|row| (0..nc).map(|j| row.iter().zip(b.iter()).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}

/// Integer vectors v with v·F ∈ rowspace(L): a basis of that lattice (HNF rows).
pub fn preimage_lattice(f: &Matrix, l: &Matrix, n: usize) -> Matrix {
    let nb = f.len();
    let mut rows = Vec::new();
    for (i, r) in f.iter().enumerate() {
        let mut v = r.clone();
        v.extend((0..nb).map(|j| if i == j { Int::one() } else { Int::zero() }));
        rows.push(v);
    }
    for r in l {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(Int::zero(), nb));
        rows.push(v);
    }
    let h = hnf(&rows);
    let kernel: Matrix = h.iter().filter(|r| r[..n].iter().all(|x| x.is_zero())).map(|r| r[n..].to_vec()).collect();
    hnf(&kernel)
}

/// True iff the rows generate Z^n.
pub fn generates_full_lattice(rows: &Matrix, n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let d = smith(rows);
    d.len() == n && d.iter().all(|x| x.is_one())
}

/// Structure of the subgroup of ⊕ Z/n_j (n_j = 0 meaning Z) generated by `gens`:
/// (free rank, torsion invariant factors > 1).
pub fn subgroup_structure(gens: &[Vec<Int>], moduli: &[Int]) -> (usize, Vec<Int>) {
    let m = moduli.len();
    let mut rows: Matrix = gens.to_vec();
    let mut krows: Matrix = Vec::new();
    for (j, n) in moduli.iter().enumerate() {
        if !n.is_zero() {
            let mut r = vec![Int::zero(); m];
            r[j] = n.clone();
            krows.push(r);
        }
    }
    rows.extend(krows.iter().cloned());
    let basis = hnf(&rows);
    let x: Matrix = krows
        .iter()
        .map(|k| coords_in_basis(&basis, k).expect("relation lattice lies in span"))
        .collect();
    let d = if x.is_empty() { Vec::new() } else { smith(&x) };
    let free = basis.len() - d.len();
    (free, d.into_iter().filter(|v| !v.is_one()).collect())
}

pub fn det2(m: &[[Int; 2]; 2]) -> Int {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Determinant of a square matrix (fraction-free elimination).
pub fn det(m: &Matrix) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}
