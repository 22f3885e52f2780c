//! Kernel/image chains of r(M)^j, centralizers and intertwiners.
//!
//! For an invertible M and a polynomial r, the subspaces ker r(M)^j grow and
//! the row spaces of r(M)^j shrink until both stabilize at the same index.
//! The stable pair splits the space (Fitting decomposition), which the
//! decomposition and spinor-norm code both lean on.

use super::{EdProfile, Mat};
use crate::algebra::{Field, Poly};

/// The chains ker r(M)^j ("fix") and row space r(M)^j ("bahn"), j = 0..=depth,
/// where depth is the first index at which both stabilize.
pub struct SubspaceChain {
    fix: Vec<Mat>,
    bahn: Vec<Mat>,
}

impl SubspaceChain {
    pub fn new(m: &Mat, r: &Poly, f: &Field) -> SubspaceChain {
        assert!(m.is_square());
        let n = m.rows();
        let rm = m.eval_poly(r, f);
        let mut pw = Mat::identity(n, f);
        let mut fix = vec![Mat::zero(0, n)];
        let mut bahn = vec![Mat::identity(n, f)];
        loop {
            pw = pw.mul(&rm, f);
            let ker = pw.left_kernel(f);
            if ker.rows() == fix.last().unwrap().rows() {
                break;
            }
            bahn.push(pw.row_space(f));
            fix.push(ker);
        }
        SubspaceChain { fix, bahn }
    }

    /// First j with ker r(M)^j = ker r(M)^(j+1).
    pub fn depth(&self) -> usize {
        self.fix.len() - 1
    }

    /// Basis of ker r(M)^j; indices past the depth return the stable space.
    pub fn fix(&self, j: usize) -> &Mat {
        &self.fix[j.min(self.depth())]
    }

    /// Basis of the row space of r(M)^j, clamped like `fix`.
    pub fn bahn(&self, j: usize) -> &Mat {
        &self.bahn[j.min(self.depth())]
    }

    pub fn fix_inf(&self) -> &Mat {
        self.fix.last().unwrap()
    }

    pub fn bahn_inf(&self) -> &Mat {
        self.bahn.last().unwrap()
    }
}

/// dim V - dim ker (M^2 - 1)^inf: the dimension of the part of the space on
/// which M^2 - 1 is invertible.  Zero exactly when every elementary divisor
/// is a power of x - 1 or x + 1.
pub fn fitting_dim_phi_squared(m: &Mat, f: &Field) -> usize {
    let r = Poly::from_ints(f, &[-1, 0, 1]);
    let chain = SubspaceChain::new(m, &r, f);
    m.rows() - chain.fix_inf().rows()
}

/// Same quantity read off an elementary divisor profile.
pub fn fitting_dim_from_profile(prof: &EdProfile, f: &Field) -> usize {
    prof.dim - prof.pm_one_dim(f)
}

/// Basis (as matrices) of {X : X A = B X}.
pub fn intertwiner_basis(a: &Mat, b: &Mat, f: &Field) -> Vec<Mat> {
    assert!(a.is_square() && b.is_square());
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    // (XA - BX)_{ij} = sum_k X_{ik} A_{kj} - sum_k B_{ik} X_{kj}; flatten X
    // row-major into a row vector so the condition reads (vec X) C = 0
    let mut c = Mat::zero(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let out = i * n + j;
            for k in 0..n {
                let v = f.add(c[(i * n + k, out)], a[(k, j)]);
                c[(i * n + k, out)] = v;
                let w = f.sub(c[(k * n + j, out)], b[(i, k)]);
                c[(k * n + j, out)] = w;
            }
        }
    }
    let ker = c.left_kernel(f);
    (0..ker.rows())
        .map(|r| {
            Mat::from_fn(n, n, |i, j| ker[(r, i * n + j)])
        })
        .collect()
}

/// Basis of the centralizer algebra {X : X M = M X}.
pub fn centralizer_basis(m: &Mat, f: &Field) -> Vec<Mat> {
    intertwiner_basis(m, m, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::elementary_divisors;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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
    fn chain_of_unipotent_block() {
        let f = Field::prime(3).unwrap();
        let m = comp(&f, &Poly::x_minus(&f, f.one()).pow(3, &f));
        let r = Poly::x_minus(&f, f.one());
        let ch = SubspaceChain::new(&m, &r, &f);
        assert_eq!(ch.depth(), 3);
        assert_eq!(ch.fix(1).rows(), 1);
        assert_eq!(ch.fix(2).rows(), 2);
        assert_eq!(ch.fix_inf().rows(), 3);
        assert_eq!(ch.bahn(1).rows(), 2);
        assert_eq!(ch.bahn_inf().rows(), 0);
        // clamped access
        assert_eq!(ch.fix(9).rows(), 3);
        // each fix level is annihilated by r(M)^j
        let rm = m.eval_poly(&r, &f);
        for j in 1..=3 {
            let img = ch.fix(j).mul(&rm.pow(j, &f), &f);
            assert!(img.is_zero(&f));
        }
    }

    #[test]
    fn fitting_dim_matches_profile() {
        let f = Field::prime(3).unwrap();
        // (x-1)^2 block + companion of x^2+1: fitting part = the x^2+1 part
        let u = comp(&f, &Poly::x_minus(&f, f.one()).pow(2, &f));
        let c = comp(&f, &Poly::from_ints(&f, &[1, 0, 1]));
        let mut m = Mat::zero(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = u[(i, j)];
                m[(2 + i, 2 + j)] = c[(i, j)];
            }
        }
        assert_eq!(fitting_dim_phi_squared(&m, &f), 2);
        let prof = elementary_divisors(&m, &f).unwrap();
        assert_eq!(fitting_dim_from_profile(&prof, &f), 2);
        assert_eq!(fitting_dim_phi_squared(&Mat::identity(5, &f), &f), 0);
        let neg = Mat::identity(5, &f).neg(&f);
        assert_eq!(fitting_dim_phi_squared(&neg, &f), 0);
    }

    #[test]
    fn fitting_dim_agrees_on_random_matrices() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 150 {
            let m = Mat::from_fn(4, 4, |_, _| {
                f.elem_from_index(rng.gen_range(0..3)).unwrap()
            });
            if f.is_zero(m.det(&f)) {
                continue;
            }
            let prof = elementary_divisors(&m, &f).unwrap();
            assert_eq!(
                fitting_dim_phi_squared(&m, &f),
                fitting_dim_from_profile(&prof, &f)
            );
            done += 1;
        }
    }

    #[test]
    fn centralizer_of_identity_and_cyclic() {
        let f = Field::prime(3).unwrap();
        let basis = centralizer_basis(&Mat::identity(3, &f), &f);
        assert_eq!(basis.len(), 9);
        // cyclic matrix: centralizer = K[M], dimension = deg of min poly
        let m = comp(&f, &Poly::from_ints(&f, &[1, 0, 1]).pow(2, &f));
        let basis = centralizer_basis(&m, &f);
        assert_eq!(basis.len(), 4);
        for x in &basis {
            assert_eq!(x.mul(&m, &f).entries(), m.mul(x, &f).entries());
        }
    }

    #[test]
    fn intertwiner_dimension_matches_centralizer_for_conjugates() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut done = 0;
        while done < 40 {
            let m = Mat::from_fn(3, 3, |_, _| {
                f.elem_from_index(rng.gen_range(0..5)).unwrap()
            });
            let g = Mat::from_fn(3, 3, |_, _| {
                f.elem_from_index(rng.gen_range(0..5)).unwrap()
            });
            let Ok(ginv) = g.inverse(&f) else { continue };
            let b = ginv.mul(&m, &f).mul(&g, &f);
            let it = intertwiner_basis(&m, &b, &f);
            let cent = centralizer_basis(&m, &f);
            assert_eq!(it.len(), cent.len());
            for x in &it {
                assert_eq!(x.mul(&m, &f).entries(), b.mul(x, &f).entries());
            }
            done += 1;
        }
    }
}
