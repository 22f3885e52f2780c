//! Nondegenerate symmetric bilinear spaces over GF(q), q odd.
//!
//! Vectors are rows; the form of a space with Gram matrix G is
//! f(u, v) = u G v'.  Discriminants are square classes of Gram determinants,
//! with no sign normalization: two spaces of equal dimension are isometric
//! exactly when their discriminants agree, and an even-dimensional space is
//! hyperbolic exactly when its discriminant is the class of (-1)^(dim/2).

mod enumerate;
mod invariant_form;

pub use enumerate::{all_vectors, nonzero_vectors, SubspaceIter};
pub use invariant_form::invariant_form_for;

use crate::algebra::{Field, FieldElem, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// A nondegenerate symmetric bilinear space.
#[derive(Clone, Debug)]
pub struct BilinearSpace {
    field: Field,
    gram: Mat,
}

/// A subspace, kept as a canonical (reduced row echelon) basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: Mat,
}

impl BilinearSpace {
    pub fn new(field: Field, gram: Mat) -> Result<BilinearSpace> {
        if !gram.is_square() {
            return Err(Error::Degenerate);
        }
        for i in 0..gram.rows() {
            for j in 0..i {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(Error::Degenerate);
                }
            }
        }
        if field.is_zero(gram.det(&field)) {
            return Err(Error::Degenerate);
        }
        Ok(BilinearSpace { field, gram })
    }

    /// Diagonal form diag(d_1, ..., d_n).
    pub fn diagonal(field: Field, ds: &[i64]) -> Result<BilinearSpace> {
        let n = ds.len();
        let mut g = Mat::zero(n, n);
        for (i, &d) in ds.iter().enumerate() {
            g[(i, i)] = field.int(d);
        }
        BilinearSpace::new(field, g)
    }

    /// Hyperbolic space of dimension 2m: Gram antidiag(I_m, I_m).
    pub fn hyperbolic(field: Field, m: usize) -> BilinearSpace {
        let mut g = Mat::zero(2 * m, 2 * m);
        for i in 0..m {
            g[(i, m + i)] = field.one();
            g[(m + i, i)] = field.one();
        }
        BilinearSpace { field, gram: g }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// f(u, v) = u G v'.
    pub fn form(&self, u: &[FieldElem], v: &[FieldElem]) -> FieldElem {
        let f = &self.field;
        let gv = self.gram.apply_row(v, f); // v G' = v G (G symmetric)
        let mut acc = f.zero();
        for (a, b) in u.iter().zip(gv.iter()) {
            acc = f.add(acc, f.mul(*a, *b));
        }
        acc
    }

    pub fn norm(&self, u: &[FieldElem]) -> FieldElem {
        self.form(u, u)
    }

    /// Gram matrix U G U' of a set of row vectors.
    pub fn gram_of(&self, u: &Mat) -> Mat {
        u.mul(&self.gram, &self.field).mul(&u.transpose(), &self.field)
    }

    /// Square class of det G.
    pub fn disc(&self) -> SquareClass {
        self.field.square_class(self.gram.det(&self.field)).unwrap()
    }

    /// Square class of the Gram determinant of a subspace with nondegenerate
    /// restriction.
    pub fn disc_of(&self, u: &Mat) -> Result<SquareClass> {
        let d = self.gram_of(u).det(&self.field);
        self.field.square_class(d).map_err(|_| Error::DegenerateSubspace)
    }

    /// Witt index, by the classification of forms over finite fields: an
    /// odd-dimensional space has index (n-1)/2; an even-dimensional one has
    /// index n/2 when disc = class((-1)^(n/2)) and n/2 - 1 otherwise.
    pub fn witt_index(&self) -> usize {
        let n = self.dim();
        if n % 2 == 1 {
            return n / 2;
        }
        let m = n / 2;
        let target = self.field.class_of_minus_one().pow_sign(m);
        if self.disc() == target {
            m
        } else {
            m - 1
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.dim() % 2 == 0 && self.witt_index() == self.dim() / 2
    }

    /// {v : f(v, u) = 0 for all rows u of U}, canonical basis.
    pub fn orthogonal_complement(&self, u: &Mat) -> Mat {
        // v G U' = 0
        let m = self.gram.mul(&u.transpose(), &self.field);
        m.left_kernel(&self.field)
    }

    /// U intersect U^perp.
    pub fn radical_of(&self, u: &Mat) -> Mat {
        let comp = self.orthogonal_complement(u);
        intersect_rows(&u.row_space(&self.field), &comp, &self.field)
    }

    pub fn is_totally_isotropic(&self, u: &Mat) -> bool {
        self.gram_of(u).is_zero(&self.field)
    }

    /// Some vector of nonzero norm in the row space of U, if one exists.
    /// Checks the basis rows and their pairwise sums; if all of those are
    /// isotropic then (char != 2) the whole row space is totally isotropic.
    pub fn anisotropic_in(&self, u: &Mat) -> Option<Vec<FieldElem>> {
        let f = &self.field;
        for i in 0..u.rows() {
            let v = u.row_vec(i);
            if !f.is_zero(self.norm(&v)) {
                return Some(v);
            }
        }
        for i in 0..u.rows() {
            for j in i + 1..u.rows() {
                let v: Vec<FieldElem> = u
                    .row_slice(i)
                    .iter()
                    .zip(u.row_slice(j).iter())
                    .map(|(a, b)| f.add(*a, *b))
                    .collect();
                if !f.is_zero(self.norm(&v)) {
                    return Some(v);
                }
            }
        }
        None
    }

    /// Orthogonal basis of the row space of U with the form values, assuming
    /// the restriction of the form to U is nondegenerate.
    pub fn diagonalize_subspace(&self, u: &Mat) -> Result<(Mat, Vec<FieldElem>)> {
        let f = &self.field;
        let n = self.dim();
        let mut current = u.row_space(f);
        let mut out: Vec<Vec<FieldElem>> = Vec::new();
        let mut ds = Vec::new();
        while current.rows() > 0 {
            let Some(v) = self.anisotropic_in(&current) else {
                return Err(Error::DegenerateSubspace);
            };
            let dv = self.norm(&v);
            // project the current basis into v^perp and re-extract a basis
            let mut proj = Mat::zero(current.rows(), n);
            for i in 0..current.rows() {
                let r = current.row_vec(i);
                let c = f.div(self.form(&r, &v), dv);
                for j in 0..n {
                    proj[(i, j)] = f.sub(r[j], f.mul(c, v[j]));
                }
            }
            let next = proj.row_space(f);
            if next.rows() != current.rows() - 1 {
                return Err(Error::DegenerateSubspace);
            }
            out.push(v);
            ds.push(dv);
            current = next;
        }
        Ok((Mat::from_rows(out), ds))
    }

    pub fn diagonalize(&self) -> (Mat, Vec<FieldElem>) {
        let id = Mat::identity(self.dim(), &self.field);
        self.diagonalize_subspace(&id).unwrap()
    }

    /// Hyperbolic pairs (v_i, w_i) with f(v_i,v_i) = f(w_i,w_i) = 0 and
    /// f(v_i,w_j) = [i = j], all pairs orthogonal to each other and to the
    /// returned anisotropic kernel.  The number of pairs equals the Witt
    /// index; the construction cross-checks the closed form.
    pub fn witt_decomposition(&self) -> (Vec<(Vec<FieldElem>, Vec<FieldElem>)>, Mat) {
        let f = &self.field;
        let mut current = Mat::identity(self.dim(), f);
        let mut pairs = Vec::new();
        loop {
            let Some(v) = self.isotropic_in(&current) else {
                break;
            };
            // complete v to a hyperbolic pair inside the current subspace
            let mut w = None;
            for i in 0..current.rows() {
                let r = current.row_vec(i);
                if !f.is_zero(self.form(&v, &r)) {
                    w = Some(r);
                    break;
                }
            }
            let mut w = w.expect("nondegenerate restriction pairs every vector");
            let c = f.inv(self.form(&v, &w));
            for x in w.iter_mut() {
                *x = f.mul(*x, c);
            }
            // kill the norm of w: w -> w - (f(w,w)/2) v
            let half = f.div(self.norm(&w), f.int(2));
            let w: Vec<FieldElem> = w
                .iter()
                .zip(v.iter())
                .map(|(a, b)| f.sub(*a, f.mul(half, *b)))
                .collect();
            // restrict to the complement of <v, w> inside the current space
            let pairm = Mat::from_rows(vec![v.clone(), w.clone()]);
            let m = current
                .mul(&self.gram, f)
                .mul(&pairm.transpose(), f);
            let coeffs = m.left_kernel(f);
            current = coeffs.mul(&current, f).row_space(f);
            pairs.push((v, w));
        }
        (pairs, current)
    }

    /// A nonzero isotropic vector in the row space of U (nondegenerate
    /// restriction assumed), or None when the restriction is anisotropic.
    pub fn isotropic_in(&self, u: &Mat) -> Option<Vec<FieldElem>> {
        let f = &self.field;
        let k = u.rows();
        if k == 0 {
            return None;
        }
        let (basis, ds) = self.diagonalize_subspace(u).ok()?;
        let combine = |cs: &[FieldElem]| -> Vec<FieldElem> {
            let mut v = vec![f.zero(); self.dim()];
            for (c, i) in cs.iter().zip(0..) {
                for j in 0..self.dim() {
                    v[j] = f.add(v[j], f.mul(*c, basis[(i, j)]));
                }
            }
            v
        };
        if k == 1 {
            return None;
        }
        if k == 2 {
            // c1^2 d1 + c2^2 d2 = 0 solvable iff -d1/d2 is a square
            let t = f.neg(f.div(ds[0], ds[1]));
            let s = f.sqrt(t)?;
            return Some(combine(&[f.one(), s]));
        }
        // dim >= 3: d1 x^2 + d2 y^2 + d3 z^2 = 0 always has a nonzero
        // solution; sweep (x, y) and read z off the square-root table
        for xi in 0..f.q() {
            for yi in 0..f.q() {
                let x = f.elem_from_index(xi).unwrap();
                let y = f.elem_from_index(yi).unwrap();
                if f.is_zero(x) && f.is_zero(y) {
                    continue;
                }
                let s = f.add(
                    f.mul(ds[0], f.mul(x, x)),
                    f.mul(ds[1], f.mul(y, y)),
                );
                let t = f.neg(f.div(s, ds[2]));
                if let Some(z) = f.sqrt(t) {
                    let mut cs = vec![f.zero(); k];
                    cs[0] = x;
                    cs[1] = y;
                    cs[2] = z;
                    return Some(combine(&cs));
                }
            }
        }
        unreachable!("ternary forms over finite fields are isotropic")
    }

    /// The induced space on U/W for W inside the radical of (U, f|U): picks
    /// transversal rows of U spanning a complement of W and returns the space
    /// they carry together with those rows.
    pub fn induced_on_quotient(&self, u: &Mat, w: &Mat) -> Result<(BilinearSpace, Mat)> {
        let f = &self.field;
        let uspan = u.row_space(f);
        let wspan = w.row_space(f);
        // W must lie in U and pair to zero with all of U
        if uspan.solve_left_contains(&wspan, f).is_none() {
            return Err(Error::NotNested);
        }
        if !wspan.mul(&self.gram, f).mul(&uspan.transpose(), f).is_zero(f) {
            return Err(Error::NotNested);
        }
        // greedy transversal: rows of U independent modulo W
        let mut picked: Vec<Vec<FieldElem>> = Vec::new();
        for i in 0..uspan.rows() {
            let mut stack: Vec<Vec<FieldElem>> =
                (0..wspan.rows()).map(|r| wspan.row_vec(r)).collect();
            stack.extend(picked.iter().cloned());
            stack.push(uspan.row_vec(i));
            let m = Mat::from_rows(stack);
            if m.rank(f) == wspan.rows() + picked.len() + 1 {
                picked.push(uspan.row_vec(i));
            }
        }
        let t = Mat::from_rows(picked);
        let space = BilinearSpace::new(f.clone(), self.gram_of(&t))
            .map_err(|_| Error::DescentFails)?;
        Ok((space, t))
    }
}

impl Mat {
    /// Some(X) with X * self = other if every row of `other` lies in the row
    /// space of `self`.
    fn solve_left_contains(&self, other: &Mat, f: &Field) -> Option<Mat> {
        if other.rows() == 0 {
            return Some(Mat::zero(0, self.rows()));
        }
        self.solve_left(other, f)
    }
}

/// Intersection of two row spaces (Zassenhaus: row-reduce [A A; B 0] and
/// collect right halves of rows whose left half vanished).
pub fn intersect_rows(a: &Mat, b: &Mat, f: &Field) -> Mat {
    let n = a.cols();
    assert_eq!(n, b.cols());
    let mut z = Mat::zero(a.rows() + b.rows(), 2 * n);
    for i in 0..a.rows() {
        for j in 0..n {
            z[(i, j)] = a[(i, j)];
            z[(i, n + j)] = a[(i, j)];
        }
    }
    for i in 0..b.rows() {
        for j in 0..n {
            z[(a.rows() + i, j)] = b[(i, j)];
        }
    }
    let (r, _) = z.rref(f);
    let mut rows = Vec::new();
    for i in 0..r.rows() {
        let left_zero = (0..n).all(|j| f.is_zero(r[(i, j)]));
        let right_nonzero = (n..2 * n).any(|j| !f.is_zero(r[(i, j)]));
        if left_zero && right_nonzero {
            rows.push((n..2 * n).map(|j| r[(i, j)]).collect::<Vec<_>>());
        }
    }
    if rows.is_empty() {
        Mat::zero(0, n)
    } else {
        Mat::from_rows(rows).row_space(f)
    }
}

/// Sum of two row spaces.
pub fn sum_rows(a: &Mat, b: &Mat, f: &Field) -> Mat {
    a.vstack(b).row_space(f)
}

impl Subspace {
    pub fn new(rows: Mat, f: &Field) -> Subspace {
        Subspace { basis: rows.row_space(f) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn contains(&self, v: &[FieldElem], f: &Field) -> bool {
        if self.basis.rows() == 0 {
            return v.iter().all(|&x| f.is_zero(x));
        }
        self.basis.solve_left(&Mat::row(v.to_vec()), f).is_some()
    }

    pub fn sum(&self, other: &Subspace, f: &Field) -> Subspace {
        Subspace { basis: sum_rows(&self.basis, &other.basis, f) }
    }

    pub fn intersect(&self, other: &Subspace, f: &Field) -> Subspace {
        Subspace { basis: intersect_rows(&self.basis, &other.basis, f) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u64, diag: &[i64]) -> BilinearSpace {
        BilinearSpace::diagonal(Field::prime(p).unwrap(), diag).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_grams() {
        let f = Field::prime(3).unwrap();
        let mut g = Mat::zero(2, 2);
        g[(0, 1)] = f.one();
        assert_eq!(
            BilinearSpace::new(f.clone(), g.clone()).unwrap_err(),
            Error::Degenerate
        );
        g[(1, 0)] = f.one();
        // antidiag(1,1) is fine
        assert!(BilinearSpace::new(f.clone(), g).is_ok());
        assert_eq!(
            BilinearSpace::new(f.clone(), Mat::zero(2, 2)).unwrap_err(),
            Error::Degenerate
        );
    }

    #[test]
    fn hyperbolic_plane_over_gf3() {
        let s = BilinearSpace::hyperbolic(Field::prime(3).unwrap(), 1);
        // det = -1, a nonsquare mod 3
        assert_eq!(s.disc(), SquareClass::NonSquare);
        assert!(s.is_hyperbolic());
        assert_eq!(s.witt_index(), 1);
    }

    #[test]
    fn witt_index_closed_form_examples() {
        assert_eq!(space(3, &[1, 1, 1]).witt_index(), 1);
        assert_eq!(space(3, &[1, 1]).witt_index(), 0); // x^2+y^2 anisotropic mod 3
        assert_eq!(space(3, &[1, -1]).witt_index(), 1);
        assert_eq!(space(5, &[1, 1]).witt_index(), 1); // -1 is a square mod 5
        assert_eq!(space(3, &[1, 1, 1, 1]).witt_index(), 2); // disc 1 = (-1)^2
        assert_eq!(space(3, &[1, 1, 1, 2]).witt_index(), 1);
    }

    #[test]
    fn witt_decomposition_matches_closed_form() {
        for (p, diag) in [
            (3u64, vec![1i64, 1, 1]),
            (3, vec![1, 1]),
            (3, vec![1, -1]),
            (3, vec![1, 2, 2, 1]),
            (5, vec![1, 1, 1, 1]),
            (5, vec![1, 2, 3]),
            (7, vec![1, 1, 2, 2, 1]),
        ] {
            let s = space(p, &diag);
            let f = s.field().clone();
            let (pairs, kernel) = s.witt_decomposition();
            assert_eq!(pairs.len(), s.witt_index(), "p={p} diag={diag:?}");
            assert_eq!(kernel.rows() + 2 * pairs.len(), s.dim());
            for (v, w) in &pairs {
                assert!(f.is_zero(s.norm(v)));
                assert!(f.is_zero(s.norm(w)));
                assert_eq!(s.form(v, w), f.one());
            }
            // pairs mutually orthogonal and orthogonal to the kernel
            for i in 0..pairs.len() {
                for j in 0..pairs.len() {
                    if i == j {
                        continue;
                    }
                    assert!(f.is_zero(s.form(&pairs[i].0, &pairs[j].0)));
                    assert!(f.is_zero(s.form(&pairs[i].0, &pairs[j].1)));
                    assert!(f.is_zero(s.form(&pairs[i].1, &pairs[j].1)));
                }
                for r in 0..kernel.rows() {
                    assert!(f.is_zero(s.form(&pairs[i].0, &kernel.row_vec(r))));
                    assert!(f.is_zero(s.form(&pairs[i].1, &kernel.row_vec(r))));
                }
            }
            // kernel is anisotropic: scan every vector in its span
            let kdim = kernel.rows() as u32;
            for idx in 1..f.q().pow(kdim) {
                let mut v = vec![f.zero(); s.dim()];
                let mut rest = idx;
                for r in 0..kernel.rows() {
                    let c = f.elem_from_index(rest % f.q()).unwrap();
                    rest /= f.q();
                    for j in 0..s.dim() {
                        v[j] = f.add(v[j], f.mul(c, kernel[(r, j)]));
                    }
                }
                assert!(!f.is_zero(s.norm(&v)));
            }
        }
    }

    #[test]
    fn diagonalize_recovers_disc() {
        let f = Field::prime(3).unwrap();
        let s = BilinearSpace::hyperbolic(f.clone(), 2);
        let (basis, ds) = s.diagonalize();
        assert_eq!(basis.rows(), 4);
        let mut prod = f.one();
        for d in &ds {
            assert!(!f.is_zero(*d));
            prod = f.mul(prod, *d);
        }
        assert_eq!(f.square_class(prod).unwrap(), s.disc());
        // basis rows really are orthogonal
        for i in 0..4 {
            for j in 0..4 {
                let got = s.form(&basis.row_vec(i), &basis.row_vec(j));
                if i == j {
                    assert_eq!(got, ds[i]);
                } else {
                    assert!(f.is_zero(got));
                }
            }
        }
    }

    #[test]
    fn complement_and_radical() {
        let s = space(3, &[1, 1, 1]);
        let f = s.field().clone();
        let u = Mat::row(vec![f.one(), f.zero(), f.zero()]);
        let c = s.orthogonal_complement(&u);
        assert_eq!(c.rows(), 2);
        assert!(s.radical_of(&u).rows() == 0);
        // isotropic line in the hyperbolic plane is its own radical
        let h = BilinearSpace::hyperbolic(f.clone(), 1);
        let v = Mat::row(vec![f.one(), f.zero()]);
        assert_eq!(h.radical_of(&v).rows(), 1);
        assert!(h.is_totally_isotropic(&v));
    }

    #[test]
    fn quotient_form_on_degenerate_subspace() {
        // pairs (e1,e3),(e2,e4); U = <e1,e2,e4> has radical <e1> and the
        // quotient carries the hyperbolic plane spanned by e2, e4
        let f = Field::prime(3).unwrap();
        let h = BilinearSpace::hyperbolic(f.clone(), 2);
        let u = Mat::from_rows(vec![
            vec![f.one(), f.zero(), f.zero(), f.zero()],
            vec![f.zero(), f.one(), f.zero(), f.zero()],
            vec![f.zero(), f.zero(), f.zero(), f.one()],
        ]);
        let rad = h.radical_of(&u);
        assert_eq!(rad.rows(), 1); // <e1>
        let (qspace, trans) = h.induced_on_quotient(&u, &rad).unwrap();
        assert_eq!(qspace.dim(), 2);
        assert_eq!(trans.rows(), 2);
        assert!(qspace.is_hyperbolic());
        // W not inside U is rejected
        let w = Mat::row(vec![f.zero(), f.zero(), f.one(), f.zero()]);
        assert!(h.induced_on_quotient(&u, &w).is_err());
    }

    #[test]
    fn zassenhaus_sum_and_intersection() {
        let f = Field::prime(5).unwrap();
        let a = Subspace::new(
            Mat::from_rows(vec![
                vec![f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.zero()],
            ]),
            &f,
        );
        let b = Subspace::new(
            Mat::from_rows(vec![
                vec![f.zero(), f.one(), f.one()],
            ]),
            &f,
        );
        assert_eq!(a.sum(&b, &f).dim(), 3);
        assert_eq!(a.intersect(&b, &f).dim(), 0);
        let c = Subspace::new(
            Mat::from_rows(vec![
                vec![f.one(), f.one(), f.zero()],
                vec![f.zero(), f.zero(), f.one()],
            ]),
            &f,
        );
        let i = a.intersect(&c, &f);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[f.one(), f.one(), f.zero()], &f));
        assert!(a.contains(&[f.int(2), f.int(3), f.zero()], &f));
        assert!(!a.contains(&[f.zero(), f.zero(), f.one()], &f));
    }

    #[test]
    fn anisotropic_search_covers_sums() {
        // two isotropic basis vectors whose sum is anisotropic
        let f = Field::prime(3).unwrap();
        let h = BilinearSpace::hyperbolic(f.clone(), 1);
        let u = Mat::identity(2, &f);
        let v = h.anisotropic_in(&u).unwrap();
        assert!(!f.is_zero(h.norm(&v)));
        // totally isotropic line yields nothing
        let line = Mat::row(vec![f.one(), f.zero()]);
        assert!(h.anisotropic_in(&line).is_none());
    }
}
