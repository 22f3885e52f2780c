//! Exhaustive enumeration of vectors and subspaces of GF(q)^n.
//!
//! Subspaces are produced exactly once each, as their unique reduced
//! row echelon basis: pick the pivot columns, then fill the free entries
//! (those right of a pivot and not in a pivot column) in counting order.

use crate::algebra::{Field, FieldElem};
use crate::linalg::Mat;

/// All vectors of GF(q)^n in counting order (base-q digits, index 0 first).
pub fn all_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
    let q = f.q() as u128;
    let total = q.checked_pow(n as u32).expect("vector space too large to sweep");
    (0..total).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = (i % q) as u64;
                i /= q;
                f.elem_from_index(d).unwrap()
            })
            .collect()
    })
}

/// All nonzero vectors.
pub fn nonzero_vectors(f: &Field, n: usize) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
    all_vectors(f, n).skip(1)
}

/// Every subspace of GF(q)^n of dimension k, each exactly once (as its RREF
/// basis).  `SubspaceIter::all` chains every dimension from 0 to n.
pub struct SubspaceIter {
    f: Field,
    n: usize,
    /// remaining pivot-column sets for the current dimension
    pivot_sets: Vec<Vec<usize>>,
    ps_idx: usize,
    /// positions of free entries for the current pivot set
    free: Vec<(usize, usize)>,
    fill: u128,
    fill_total: u128,
    dims: Vec<usize>,
    dim_idx: usize,
    done: bool,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl SubspaceIter {
    /// Subspaces of a single dimension k.
    pub fn of_dim(f: &Field, n: usize, k: usize) -> SubspaceIter {
        assert!(k <= n);
        let mut it = SubspaceIter {
            f: f.clone(),
            n,
            pivot_sets: Vec::new(),
            ps_idx: 0,
            free: Vec::new(),
            fill: 0,
            fill_total: 0,
            dims: vec![k],
            dim_idx: 0,
            done: false,
        };
        it.enter_dim();
        it
    }

    /// All subspaces, dimension 0 through n.
    pub fn all(f: &Field, n: usize) -> SubspaceIter {
        let mut it = SubspaceIter {
            f: f.clone(),
            n,
            pivot_sets: Vec::new(),
            ps_idx: 0,
            free: Vec::new(),
            fill: 0,
            fill_total: 0,
            dims: (0..=n).collect(),
            dim_idx: 0,
            done: false,
        };
        it.enter_dim();
        it
    }

    fn enter_dim(&mut self) {
        let k = self.dims[self.dim_idx];
        self.pivot_sets = combinations(self.n, k);
        self.ps_idx = 0;
        self.enter_pivot_set();
    }

    fn enter_pivot_set(&mut self) {
        let pivots = &self.pivot_sets[self.ps_idx];
        self.free.clear();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..self.n {
                if !pivots[i + 1..].contains(&j) {
                    self.free.push((i, j));
                }
            }
        }
        let q = self.f.q() as u128;
        self.fill_total = q
            .checked_pow(self.free.len() as u32)
            .expect("free-entry count too large to sweep");
        self.fill = 0;
    }

    fn advance(&mut self) {
        self.fill += 1;
        if self.fill < self.fill_total {
            return;
        }
        self.ps_idx += 1;
        if self.ps_idx < self.pivot_sets.len() {
            self.enter_pivot_set();
            return;
        }
        self.dim_idx += 1;
        if self.dim_idx < self.dims.len() {
            self.enter_dim();
            return;
        }
        self.done = true;
    }
}

impl Iterator for SubspaceIter {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        if self.done {
            return None;
        }
        let pivots = self.pivot_sets[self.ps_idx].clone();
        let k = pivots.len();
        let mut m = Mat::zero(k, self.n);
        for (i, &p) in pivots.iter().enumerate() {
            m[(i, p)] = self.f.one();
        }
        let q = self.f.q() as u128;
        let mut rest = self.fill;
        for &(i, j) in &self.free {
            let d = (rest % q) as u64;
            rest /= q;
            m[(i, j)] = self.f.elem_from_index(d).unwrap();
        }
        self.advance();
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn vector_sweep_covers_everything_once() {
        let f = Field::prime(5).unwrap();
        let all: Vec<_> = all_vectors(&f, 2).collect();
        assert_eq!(all.len(), 25);
        let set: HashSet<Vec<u8>> =
            all.iter().map(|v| v.iter().map(|e| e.0).collect()).collect();
        assert_eq!(set.len(), 25);
        assert_eq!(nonzero_vectors(&f, 2).count(), 24);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        let f = Field::prime(3).unwrap();
        // [3 choose 1]_3 = 13, [3 choose 2]_3 = 13
        assert_eq!(SubspaceIter::of_dim(&f, 3, 0).count(), 1);
        assert_eq!(SubspaceIter::of_dim(&f, 3, 1).count(), 13);
        assert_eq!(SubspaceIter::of_dim(&f, 3, 2).count(), 13);
        assert_eq!(SubspaceIter::of_dim(&f, 3, 3).count(), 1);
        assert_eq!(SubspaceIter::all(&f, 3).count(), 28);
        assert_eq!(SubspaceIter::all(&f, 2).count(), 6);
    }

    #[test]
    fn subspaces_are_distinct_rrefs_of_right_rank() {
        let f = Field::prime(3).unwrap();
        let mut seen = HashSet::new();
        for m in SubspaceIter::all(&f, 4) {
            let r = m.rows();
            assert_eq!(m.rank(&f), r);
            assert_eq!(m.row_space(&f).entries(), m.entries());
            let key: Vec<u8> = std::iter::once(r as u8)
                .chain(m.entries().iter().map(|e| e.0))
                .collect();
            assert!(seen.insert(key), "duplicate subspace emitted");
        }
        // 1 + 40 + 130 + 40 + 1
        assert_eq!(seen.len(), 212);
    }
}
