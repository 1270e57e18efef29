//! Free group helpers: Stallings folding for the generation test.

use crate::word::Word;
use std::collections::BTreeMap;

/// Folded core graph of the subgroup generated by `words`, with basepoint 0.
/// Returns (vertex count, edges as (from, letter > 0, to)).
pub fn stallings(words: &[Word]) -> (usize, Vec<(usize, i32, usize)>) {
    let mut nv = 1usize;
    let mut edges: Vec<(usize, i32, usize)> = Vec::new();
    for w in words {
        if w.is_empty() {
            continue;
        }
        let mut cur = 0usize;
        let n = w.len();
        for (i, &l) in w.letters.iter().enumerate() {
            let next = if i + 1 == n {
                0
            } else {
                nv += 1;
                nv - 1
            };
            if l > 0 {
                edges.push((cur, l, next));
            } else {
                edges.push((next, -l, cur));
            }
            cur = next;
        }
    }
    // union-find folding
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    loop {
        let mut changed = false;
        let mut out_map: BTreeMap<(usize, i32), usize> = BTreeMap::new();
        let mut in_map: BTreeMap<(usize, i32), usize> = BTreeMap::new();
        for &(a, l, b) in &edges {
            let a = find(&mut parent, a);
            let b = find(&mut parent, b);
            if let Some(&t) = out_map.get(&(a, l)) {
                let t = find(&mut parent, t);
                if t != b {
                    let (lo, hi) = if t < b { (t, b) } else { (b, t) };
                    parent[hi] = lo;
                    changed = true;
                }
            } else {
                out_map.insert((a, l), b);
            }
            let b = find(&mut parent, b);
            if let Some(&s) = in_map.get(&(b, l)) {
                let s = find(&mut parent, s);
                let a = find(&mut parent, a);
                if s != a {
                    let (lo, hi) = if s < a { (s, a) } else { (a, s) };
                    parent[hi] = lo;
                    changed = true;
                }
            } else {
                in_map.insert((b, l), a);
            }
        }
        if !changed {
            break;
        }
    }
    let mut set = std::collections::BTreeSet::new();
    for &(a, l, b) in &edges {
        let a = find(&mut parent, a);
        let b = find(&mut parent, b);
        set.insert((a, l, b));
    }
    let verts: std::collections::BTreeSet<usize> =
        set.iter().flat_map(|&(a, _, b)| [a, b]).chain(std::iter::once(0)).collect();
    (verts.len(), set.into_iter().collect())
}

/// Subgroup generated by `words` is all of F_k.
pub fn generates_free(words: &[Word], k: usize) -> bool {
    let (nv, edges) = stallings(words);
    nv == 1 && (1..=k as i32).all(|l| edges.contains(&(0, l, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_and_nielsen() {
        assert!(generates_free(&[Word::new([1]), Word::new([2])], 2));
        assert!(generates_free(&[Word::new([1, 2]), Word::new([2])], 2));
        assert!(!generates_free(&[Word::new([1, 1]), Word::new([2])], 2));
        assert!(!generates_free(&[Word::new([1, 2, -1]), Word::new([2])], 2));
        assert!(generates_free(&[Word::new([1, 2, -1]), Word::new([1])], 2));
    }
}
