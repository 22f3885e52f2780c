//! Synthesis of a nondegenerate symmetric form preserved by a given matrix.
//!
//! The forms preserved by M make up the solution space of the linear system
//! M G M' = G restricted to symmetric G.  A nondegenerate solution exists
//! exactly when M is an isometry of *some* nondegenerate symmetric form,
//! which happens exactly when the elementary divisors of M are closed under
//! p -> p* with matching multiplicities.

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Basis of {G symmetric : M G M' = G}.
pub fn invariant_form_space(m: &Mat, f: &Field) -> Vec<Mat> {
    assert!(m.is_square());
    let n = m.rows();
    // variables: entries (a, b) with a <= b
    let vars: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let nv = vars.len();
    let mut c = Mat::zero(nv, n * n);
    for (v, &(a, b)) in vars.iter().enumerate() {
        let mut e = Mat::zero(n, n);
        e[(a, b)] = f.one();
        e[(b, a)] = f.one();
        let diff = m.mul(&e, f).mul(&m.transpose(), f).sub(&e, f);
        for i in 0..n {
            for j in 0..n {
                c[(v, i * n + j)] = diff[(i, j)];
            }
        }
    }
    let ker = c.left_kernel(f);
    (0..ker.rows())
        .map(|r| {
            let mut g = Mat::zero(n, n);
            for (v, &(a, b)) in vars.iter().enumerate() {
                if !f.is_zero(ker[(r, v)]) {
                    g[(a, b)] = ker[(r, v)];
                    g[(b, a)] = ker[(r, v)];
                }
            }
            g
        })
        .collect()
}

/// First nondegenerate member of the invariant-form space, scanning
/// coefficient vectors in counting order (deterministic).
pub fn invariant_form_for(m: &Mat, f: &Field) -> Result<Mat> {
    let basis = invariant_form_space(m, f);
    if basis.is_empty() {
        return Err(Error::NoInvariantForm);
    }
    let s = basis.len();
    let n = m.rows();
    let q = f.q() as u128;
    let total = q.checked_pow(s as u32).unwrap_or(u128::MAX);
    const SCAN_CAP: u128 = 2_000_000;
    let scan = total.min(SCAN_CAP);
    for idx in 1..scan {
        let mut g = Mat::zero(n, n);
        let mut rest = idx;
        for b in &basis {
            let coef = f.elem_from_index((rest % q) as u64).unwrap();
            rest /= q;
            if !f.is_zero(coef) {
                g = g.add(&b.scale(coef, f), f);
            }
        }
        if f.is_zero(g.det(f)) {
            continue;
        }
        debug_assert!(is_symmetric(&g));
        debug_assert!(m.mul(&g, f).mul(&m.transpose(), f).entries() == g.entries());
        return Ok(g);
    }
    if total <= SCAN_CAP {
        // the whole space was scanned: every invariant form is degenerate
        Err(Error::NoInvariantForm)
    } else {
        Err(Error::ExhaustedSolutionSpace)
    }
}

fn is_symmetric(g: &Mat) -> bool {
    (0..g.rows()).all(|i| (0..i).all(|j| g[(i, j)] == g[(j, i)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;

    fn comp(f: &Field, p: &Poly) -> Mat {
        let n = p.degree();
        let mut m = Mat::zero(n, n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = f.one();
        }
        for j in 0..n {
            m[(n - 1, j)] = f.neg(p.coeff(j));
        }
        m
    }

    #[test]
    fn rotation_block_gets_a_form() {
        let f = Field::prime(3).unwrap();
        let m = comp(&f, &Poly::from_ints(&f, &[1, 0, 1]));
        let g = invariant_form_for(&m, &f).unwrap();
        assert!(!f.is_zero(g.det(&f)));
        assert_eq!(m.mul(&g, &f).mul(&m.transpose(), &f).entries(), g.entries());
    }

    #[test]
    fn scaling_never_preserved() {
        // x -> 2x on a line over GF(5): 4 g = g forces g = 0
        let f = Field::prime(5).unwrap();
        let m = Mat::scalar(1, f.int(2));
        assert_eq!(invariant_form_for(&m, &f).unwrap_err(), Error::NoInvariantForm);
    }

    #[test]
    fn reciprocal_pair_carries_split_form() {
        // diag(2, 3) over GF(5), 3 = 1/2: only the antidiagonal survives
        let f = Field::prime(5).unwrap();
        let mut m = Mat::zero(2, 2);
        m[(0, 0)] = f.int(2);
        m[(1, 1)] = f.int(3);
        let g = invariant_form_for(&m, &f).unwrap();
        assert!(f.is_zero(g[(0, 0)]));
        assert!(f.is_zero(g[(1, 1)]));
        assert!(!f.is_zero(g[(0, 1)]));
        assert_eq!(g[(0, 1)], g[(1, 0)]);
    }

    #[test]
    fn conjugates_still_get_forms() {
        let f = Field::prime(3).unwrap();
        let m = comp(&f, &Poly::from_ints(&f, &[1, 0, 1]).pow(2, &f));
        let g = invariant_form_for(&m, &f).unwrap();
        assert!(!f.is_zero(g.det(&f)));
        // identity always preserved by everything symmetric; first scan hit
        // must be nondegenerate too
        let id = Mat::identity(3, &f);
        let gi = invariant_form_for(&id, &f).unwrap();
        assert!(!f.is_zero(gi.det(&f)));
    }
}
