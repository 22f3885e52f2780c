//! Exact linear algebra over a [`Field`].
//!
//! Vectors are rows and maps act on the right (v -> vM), so the "kernel" of
//! M is the left null space {v : vM = 0} and the "image" is the row space.
//! Echelon bases are always fully reduced, which makes them canonical: two
//! subspaces are equal iff their bases are equal as matrices.

mod chains;
mod eddiv;

pub use chains::{
    centralizer_basis, fitting_dim_from_profile, fitting_dim_phi_squared, intertwiner_basis,
    SubspaceChain,
};
pub use eddiv::{elementary_divisors, min_poly, EdEntry, EdProfile};

/// Companion matrix of a monic polynomial: basis rows map to their successors
/// and the last row carries the negated coefficients.
pub fn companion(p: &Poly, f: &Field) -> Mat {
    assert!(p.is_monic() && p.degree() >= 1);
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

use crate::algebra::{Field, FieldElem, Poly};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| format!("{}", self[(i, j)].0)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = FieldElem;
    #[inline(always)]
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline(always)]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.a[i * self.cols + j]
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, a: vec![FieldElem(0); rows * cols] }
    }

    pub fn identity(n: usize, f: &Field) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = f.one();
        }
        m
    }

    pub fn scalar(n: usize, c: FieldElem) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// A single row vector as a 1 x n matrix.
    pub fn row(v: Vec<FieldElem>) -> Mat {
        let c = v.len();
        Mat { rows: 1, cols: c, a: v }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_slice(&self, i: usize) -> &[FieldElem] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<FieldElem> {
        self.row_slice(i).to_vec()
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.a
    }

    pub fn is_zero(&self, f: &Field) -> bool {
        self.a.iter().all(|&x| f.is_zero(x))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn add(&self, o: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let a = self.a.iter().zip(&o.a).map(|(&x, &y)| f.add(x, y)).collect();
        Mat { rows: self.rows, cols: self.cols, a }
    }

    pub fn sub(&self, o: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let a = self.a.iter().zip(&o.a).map(|(&x, &y)| f.sub(x, y)).collect();
        Mat { rows: self.rows, cols: self.cols, a }
    }

    pub fn neg(&self, f: &Field) -> Mat {
        Mat { rows: self.rows, cols: self.cols, a: self.a.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Mat {
        Mat { rows: self.rows, cols: self.cols, a: self.a.iter().map(|&x| f.mul(x, c)).collect() }
    }

    pub fn mul(&self, o: &Mat, f: &Field) -> Mat {
        assert_eq!(self.cols, o.rows, "inner dimensions");
        let mut out = Mat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if f.is_zero(aik) {
                    continue;
                }
                let orow = &o.a[k * o.cols..(k + 1) * o.cols];
                let dst = &mut out.a[i * o.cols..(i + 1) * o.cols];
                for (d, &okj) in dst.iter_mut().zip(orow) {
                    *d = f.add(*d, f.mul(aik, okj));
                }
            }
        }
        out
    }

    /// v -> vM for a single row vector.
    pub fn apply_row(&self, v: &[FieldElem], f: &Field) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![f.zero(); self.cols];
        for (k, &vk) in v.iter().enumerate() {
            if f.is_zero(vk) {
                continue;
            }
            let row = self.row_slice(k);
            for (d, &mkj) in out.iter_mut().zip(row) {
                *d = f.add(*d, f.mul(vk, mkj));
            }
        }
        out
    }

    pub fn pow(&self, mut e: usize, f: &Field) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Evaluate a polynomial at this matrix.
    pub fn eval_poly(&self, p: &Poly, f: &Field) -> Mat {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Mat::zero(n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self, f);
            for i in 0..n {
                acc[(i, i)] = f.add(acc[(i, i)], c);
            }
        }
        acc
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut a = self.a.clone();
        a.extend_from_slice(&o.a);
        Mat { rows: self.rows + o.rows, cols: self.cols, a }
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self, f: &Field) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m[(i, c)])) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let tmp = m[(r, j)];
                    m[(r, j)] = m[(pr, j)];
                    m[(pr, j)] = tmp;
                }
            }
            let inv = f.inv(m[(r, c)]);
            for j in 0..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i != r && !f.is_zero(m[(i, c)]) {
                    let factor = m[(i, c)];
                    for j in 0..m.cols {
                        let sub = f.mul(factor, m[(r, j)]);
                        m[(i, j)] = f.sub(m[(i, j)], sub);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space(&self, f: &Field) -> Mat {
        let (m, pivots) = self.rref(f);
        let r = pivots.len();
        Mat { rows: r, cols: m.cols, a: m.a[..r * m.cols].to_vec() }
    }

    /// Canonical basis of the left kernel {v : vM = 0}, as rows.
    pub fn left_kernel(&self, f: &Field) -> Mat {
        // right kernel of the transpose, transposed back to rows
        let t = self.transpose();
        let (r, pivots) = t.rref(f);
        let n = t.cols; // = self.rows
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zero(free.len(), n);
        for (bi, &fc) in free.iter().enumerate() {
            basis[(bi, fc)] = f.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                basis[(bi, pc)] = f.neg(r[(pi, fc)]);
            }
        }
        // canonicalize
        basis.row_space(f)
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !f.is_zero(m[(i, c)])) else {
                return f.zero();
            };
            if pr != c {
                det = f.neg(det);
                for j in 0..n {
                    let tmp = m[(c, j)];
                    m[(c, j)] = m[(pr, j)];
                    m[(pr, j)] = tmp;
                }
            }
            det = f.mul(det, m[(c, c)]);
            let inv = f.inv(m[(c, c)]);
            for i in c + 1..n {
                if !f.is_zero(m[(i, c)]) {
                    let factor = f.mul(m[(i, c)], inv);
                    for j in c..n {
                        let sub = f.mul(factor, m[(c, j)]);
                        m[(i, j)] = f.sub(m[(i, j)], sub);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        // row-reduce [self | I]
        let mut m = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(i, j)];
            }
            m[(i, n + i)] = f.one();
        }
        let (r, pivots) = m.rref(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut out = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)];
            }
        }
        Ok(out)
    }

    /// Solve X * self = rhs for X (each row of rhs independently); None when
    /// some row is not in the row space.
    pub fn solve_left(&self, rhs: &Mat, f: &Field) -> Option<Mat> {
        assert_eq!(self.cols, rhs.cols);
        // transpose: self' X' = rhs', column by column; reduce [self' | rhs']
        let st = self.transpose();
        let rt = rhs.transpose();
        let mut m = Mat::zero(st.rows, st.cols + rt.cols);
        for i in 0..st.rows {
            for j in 0..st.cols {
                m[(i, j)] = st[(i, j)];
            }
            for j in 0..rt.cols {
                m[(i, st.cols + j)] = rt[(i, j)];
            }
        }
        let (r, pivots) = m.rref(f);
        // consistency: no pivot may fall in the rhs block
        if pivots.iter().any(|&c| c >= st.cols) {
            return None;
        }
        let mut x = Mat::zero(rhs.rows, self.rows);
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..rt.cols {
                x[(j, pc)] = r[(pi, st.cols + j)];
            }
        }
        Some(x)
    }

    /// Check vM = 0 for all rows v of `basis` — i.e. basis rows lie in the
    /// left kernel.
    pub fn annihilated_by(&self, basis: &Mat, f: &Field) -> bool {
        basis.mul(self, f).is_zero(f)
    }

    /// Pack the entries base-q into a u128 key; requires q^(rows*cols) to
    /// fit, which callers guarantee via the enumeration caps.
    pub fn pack(&self, f: &Field) -> u128 {
        let q = f.q() as u128;
        let mut key: u128 = 0;
        for &e in self.a.iter().rev() {
            key = key.checked_mul(q).expect("packed matrix exceeds 128 bits");
            key = key.checked_add(e.0 as u128).expect("packed matrix exceeds 128 bits");
        }
        key
    }

    pub fn unpack(key: u128, rows: usize, cols: usize, f: &Field) -> Mat {
        let q = f.q() as u128;
        let mut m = Mat::zero(rows, cols);
        let mut k = key;
        for idx in 0..rows * cols {
            m.a[idx] = FieldElem((k % q) as u8);
            k /= q;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_mat(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Mat {
        Mat::from_fn(n, n, |_, _| f.elem_from_index(rng.gen_range(0..f.q())).unwrap())
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        while found < 50 {
            let m = rand_mat(&f, 4, &mut rng);
            match m.inverse(&f) {
                Ok(inv) => {
                    assert_eq!(m.mul(&inv, &f), Mat::identity(4, &f));
                    assert_eq!(inv.mul(&m, &f), Mat::identity(4, &f));
                    assert!(!f.is_zero(m.det(&f)));
                    found += 1;
                }
                Err(Error::Singular) => assert!(f.is_zero(m.det(&f))),
                Err(e) => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn det_multiplicative() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let a = rand_mat(&f, 3, &mut rng);
            let b = rand_mat(&f, 3, &mut rng);
            assert_eq!(a.mul(&b, &f).det(&f), f.mul(a.det(&f), b.det(&f)));
        }
    }

    #[test]
    fn kernel_and_row_space_dimensions() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let m = rand_mat(&f, 5, &mut rng);
            let k = m.left_kernel(&f);
            let r = m.row_space(&f);
            assert_eq!(k.rows() + r.rows(), 5, "rank-nullity");
            assert!(m.annihilated_by(&k, &f));
            // canonical: row space of the kernel basis is itself
            assert_eq!(k.row_space(&f), k);
        }
    }

    #[test]
    fn solve_left_consistency() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let m = rand_mat(&f, 4, &mut rng);
            let x = rand_mat(&f, 4, &mut rng);
            let rhs = x.mul(&m, &f);
            let sol = m.solve_left(&rhs, &f).expect("consistent by construction");
            assert_eq!(sol.mul(&m, &f), rhs);
        }
    }

    #[test]
    fn eval_poly_cayley_hamilton_smoke() {
        // companion matrix of x^2+1 over GF(3) squares to -1
        let f = Field::prime(3).unwrap();
        let c = Mat::from_rows(vec![
            vec![f.zero(), f.one()],
            vec![f.minus_one(), f.zero()],
        ]);
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        assert!(c.eval_poly(&p, &f).is_zero(&f));
        assert_eq!(c.pow(2, &f), Mat::scalar(2, f.minus_one()));
    }

    #[test]
    fn pack_unpack_roundtrip() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = rand_mat(&f, 5, &mut rng);
            assert_eq!(Mat::unpack(m.pack(&f), 5, 5, &f), m);
        }
    }
}
