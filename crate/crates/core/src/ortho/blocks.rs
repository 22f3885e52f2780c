//! Constructors for the orthogonally indecomposable isometries.
//!
//! Over GF(q), q odd, an orthogonally indecomposable isometry is one of:
//!
//! * a pair (x - e)^m + (x - e)^m with m even, e = +-1, carried by a split
//!   form ("paired" blocks; a single even unipotent block never supports a
//!   nondegenerate symmetric form);
//! * a single (x - e)^(2t+1), whose form can have either discriminant;
//! * a single p^d for p irreducible selfreciprocal of even degree, whose
//!   form is unique up to isometry;
//! * a pair r^d + (r*)^d for r irreducible and not selfreciprocal, carried
//!   by a split form pairing the two halves.

use crate::algebra::{Field, Poly, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{companion, Mat};
use crate::space::{invariant_form_for, BilinearSpace};

/// A recipe for one indecomposable block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BlockSpec {
    /// (x - eps)^m twice on a split 2m-dimensional space, m even.
    Paired { eps: i8, m: usize },
    /// (x - eps)^(2t+1) on a (2t+1)-dimensional space of given discriminant.
    OddUnipotent { eps: i8, t: usize, disc: SquareClass },
    /// p^d for p irreducible selfreciprocal of even degree.
    SelfDual { p: Poly, d: usize },
    /// r^d + (r*)^d for r irreducible, not selfreciprocal.
    DualPair { r: Poly, d: usize },
}

impl BlockSpec {
    pub fn dim(&self, _f: &Field) -> usize {
        match self {
            BlockSpec::Paired { m, .. } => 2 * m,
            BlockSpec::OddUnipotent { t, .. } => 2 * t + 1,
            BlockSpec::SelfDual { p, d } => p.degree() * d,
            BlockSpec::DualPair { r, d } => 2 * r.degree() * d,
        }
    }
}

fn sign_elem(f: &Field, eps: i8) -> Result<crate::algebra::FieldElem> {
    match eps {
        1 => Ok(f.one()),
        -1 => Ok(f.minus_one()),
        _ => Err(Error::BadSpec(format!("eps must be +-1, got {eps}"))),
    }
}

/// Build the space and isometry described by a spec.
pub fn build_block(f: &Field, spec: &BlockSpec) -> Result<(BilinearSpace, Mat)> {
    let (space, mat) = match spec {
        BlockSpec::Paired { eps, m } => paired(f, *eps, *m)?,
        BlockSpec::OddUnipotent { eps, t, disc } => odd_unipotent(f, *eps, *t, *disc)?,
        BlockSpec::SelfDual { p, d } => self_dual(f, p, *d)?,
        BlockSpec::DualPair { r, d } => dual_pair(f, r, *d)?,
    };
    debug_assert!(super::is_isometry(&space, &mat));
    Ok((space, mat))
}

/// J + (J')^-1 for the Jordan block J = eps + shift, on antidiag(I, I).
fn paired(f: &Field, eps: i8, m: usize) -> Result<(BilinearSpace, Mat)> {
    let e = sign_elem(f, eps)?;
    if m == 0 || m % 2 != 0 {
        return Err(Error::BadSpec(format!(
            "paired unipotent blocks need even m >= 2, got {m}"
        )));
    }
    let mut j = Mat::zero(m, m);
    for i in 0..m {
        j[(i, i)] = e;
        if i + 1 < m {
            j[(i, i + 1)] = f.one();
        }
    }
    split_pair(f, &j)
}

/// diag(A, (A')^-1) on antidiag(I, I) for any invertible A.
fn split_pair(f: &Field, a: &Mat) -> Result<(BilinearSpace, Mat)> {
    let k = a.rows();
    let binv = a.inverse(f)?.transpose();
    let mut phi = Mat::zero(2 * k, 2 * k);
    let mut g = Mat::zero(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            phi[(i, j)] = a[(i, j)];
            phi[(k + i, k + j)] = binv[(i, j)];
        }
        g[(i, k + i)] = f.one();
        g[(k + i, i)] = f.one();
    }
    Ok((BilinearSpace::new(f.clone(), g)?, phi))
}

/// Cayley transform of the shift, negated for eps = -1, on the alternating
/// antidiagonal form scaled to hit the requested discriminant.
fn odd_unipotent(f: &Field, eps: i8, t: usize, disc: SquareClass) -> Result<(BilinearSpace, Mat)> {
    let e = sign_elem(f, eps)?;
    let n = 2 * t + 1;
    let c = match disc {
        SquareClass::Square => f.one(),
        SquareClass::NonSquare => f.nonsquare(),
    };
    let mut g = Mat::zero(n, n);
    for i in 0..n {
        let v = if i % 2 == 0 { c } else { f.neg(c) };
        g[(i, 2 * t - i)] = v;
    }
    let mut nil = Mat::zero(n, n);
    for i in 0..n - 1 {
        nil[(i, i + 1)] = f.one();
    }
    // N is skew-adjoint for g, so (1+N)(1-N)^-1 is an isometry; it is
    // unipotent with a single Jordan block because N is cyclic
    let id = Mat::identity(n, f);
    let phi = id.add(&nil, f).mul(&id.sub(&nil, f).inverse(f)?, f);
    let phi = phi.scale(e, f);
    let space = BilinearSpace::new(f.clone(), g)?;
    debug_assert_eq!(space.disc(), disc);
    Ok((space, phi))
}

fn self_dual(f: &Field, p: &Poly, d: usize) -> Result<(BilinearSpace, Mat)> {
    if d == 0 {
        return Err(Error::BadSpec("exponent must be >= 1".into()));
    }
    if !crate::algebra::is_irreducible(f, p) {
        return Err(Error::BadSpec(format!("{p:?} is not irreducible")));
    }
    if p.degree() < 2 {
        return Err(Error::BadSpec(
            "blocks for x - 1 and x + 1 are the unipotent kinds".into(),
        ));
    }
    if !p.is_selfreciprocal(f) {
        return Err(Error::BadSpec(format!(
            "{p:?} is not selfreciprocal; build the paired kind instead"
        )));
    }
    let m = companion(&p.pow(d, f), f);
    let g = invariant_form_for(&m, f)?;
    Ok((BilinearSpace::new(f.clone(), g)?, m))
}

fn dual_pair(f: &Field, r: &Poly, d: usize) -> Result<(BilinearSpace, Mat)> {
    if d == 0 {
        return Err(Error::BadSpec("exponent must be >= 1".into()));
    }
    if !crate::algebra::is_irreducible(f, r) {
        return Err(Error::BadSpec(format!("{r:?} is not irreducible")));
    }
    if r.is_selfreciprocal(f) {
        return Err(Error::BadSpec(format!(
            "{r:?} is selfreciprocal; build the single-block kind instead"
        )));
    }
    let a = companion(&r.pow(d, f), f);
    split_pair(f, &a)
}

/// Orthogonal direct sum: block-diagonal Gram and action.
pub fn direct_sum(f: &Field, parts: &[(BilinearSpace, Mat)]) -> (BilinearSpace, Mat) {
    let n: usize = parts.iter().map(|(s, _)| s.dim()).sum();
    let mut g = Mat::zero(n, n);
    let mut m = Mat::zero(n, n);
    let mut off = 0;
    for (s, a) in parts {
        let k = s.dim();
        for i in 0..k {
            for j in 0..k {
                g[(off + i, off + j)] = s.gram()[(i, j)];
                m[(off + i, off + j)] = a[(i, j)];
            }
        }
        off += k;
    }
    (BilinearSpace::new(f.clone(), g).expect("sum of nondegenerate parts"), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::elementary_divisors;

    #[test]
    fn odd_unipotent_profile_and_disc() {
        let f = Field::prime(3).unwrap();
        for (t, disc) in [
            (0usize, SquareClass::Square),
            (0, SquareClass::NonSquare),
            (1, SquareClass::Square),
            (1, SquareClass::NonSquare),
            (2, SquareClass::Square),
        ] {
            let (s, m) =
                build_block(&f, &BlockSpec::OddUnipotent { eps: 1, t, disc }).unwrap();
            assert_eq!(s.dim(), 2 * t + 1);
            assert_eq!(s.disc(), disc);
            let prof = elementary_divisors(&m, &f).unwrap();
            assert_eq!(prof.entries.len(), 1);
            assert_eq!(prof.entries[0].poly, Poly::x_minus(&f, f.one()));
            assert_eq!(prof.entries[0].exp, 2 * t + 1);
            assert_eq!(prof.entries[0].mult, 1);
        }
        // eps = -1 flips the divisor to (x+1)^(2t+1)
        let (_, m) = build_block(
            &f,
            &BlockSpec::OddUnipotent { eps: -1, t: 1, disc: SquareClass::Square },
        )
        .unwrap();
        let prof = elementary_divisors(&m, &f).unwrap();
        assert_eq!(prof.entries[0].poly, Poly::x_minus(&f, f.minus_one()));
        assert_eq!(prof.entries[0].exp, 3);
    }

    #[test]
    fn paired_block_is_hyperbolic_with_doubled_divisor() {
        let f = Field::prime(3).unwrap();
        let (s, m) = build_block(&f, &BlockSpec::Paired { eps: 1, m: 2 }).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.is_hyperbolic());
        let prof = elementary_divisors(&m, &f).unwrap();
        assert_eq!(prof.entries.len(), 1);
        assert_eq!(prof.entries[0].exp, 2);
        assert_eq!(prof.entries[0].mult, 2);
        assert!(build_block(&f, &BlockSpec::Paired { eps: 1, m: 3 }).is_err());
        assert!(build_block(&f, &BlockSpec::Paired { eps: 2, m: 2 }).is_err());
    }

    #[test]
    fn self_dual_rotation_block() {
        let f = Field::prime(3).unwrap();
        let p = Poly::from_ints(&f, &[1, 0, 1]);
        let (s, m) = build_block(&f, &BlockSpec::SelfDual { p: p.clone(), d: 1 }).unwrap();
        assert_eq!(s.dim(), 2);
        // phi^2 = -1
        let sq = m.mul(&m, s.field());
        assert_eq!(sq.entries(), Mat::identity(2, s.field()).neg(s.field()).entries());
        // rejects reducible, linear, and non-selfreciprocal inputs
        let xm1 = Poly::x_minus(&f, f.one());
        assert!(build_block(&f, &BlockSpec::SelfDual { p: xm1, d: 1 }).is_err());
        let red = Poly::from_ints(&f, &[2, 0, 1]); // x^2 - 1
        assert!(build_block(&f, &BlockSpec::SelfDual { p: red, d: 1 }).is_err());
        // x^2 + 2 over GF(5): irreducible (3 is a nonsquare) but its
        // reciprocal is x^2 + 3
        let f5 = Field::prime(5).unwrap();
        let nsr = Poly::from_ints(&f5, &[2, 0, 1]);
        assert!(crate::algebra::is_irreducible(&f5, &nsr));
        assert!(!nsr.is_selfreciprocal(&f5));
        assert!(build_block(&f5, &BlockSpec::SelfDual { p: nsr, d: 1 }).is_err());
    }

    #[test]
    fn dual_pair_of_eigenvalues_two_and_a_half() {
        let f = Field::prime(5).unwrap();
        let r = Poly::x_minus(&f, f.int(2));
        let (s, m) = build_block(&f, &BlockSpec::DualPair { r: r.clone(), d: 1 }).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(m[(0, 0)], f.int(2));
        assert_eq!(m[(1, 1)], f.int(3)); // 1/2 = 3 mod 5
        assert!(s.is_hyperbolic());
        let prof = elementary_divisors(&m, &f).unwrap();
        assert_eq!(prof.entries.len(), 2);
        // x^2 + x + 1 is irreducible and selfreciprocal over GF(5): rejected
        let p = Poly::from_ints(&f, &[1, 1, 1]);
        assert!(crate::algebra::is_irreducible(&f, &p));
        assert!(p.is_selfreciprocal(&f));
        assert!(build_block(&f, &BlockSpec::DualPair { r: p, d: 1 }).is_err());
    }

    #[test]
    fn direct_sums_stack_blocks() {
        let f = Field::prime(3).unwrap();
        let a = build_block(
            &f,
            &BlockSpec::OddUnipotent { eps: 1, t: 1, disc: SquareClass::Square },
        )
        .unwrap();
        let b = build_block(
            &f,
            &BlockSpec::OddUnipotent { eps: -1, t: 0, disc: SquareClass::NonSquare },
        )
        .unwrap();
        let (s, m) = direct_sum(&f, &[a, b]);
        assert_eq!(s.dim(), 4);
        assert!(super::super::is_isometry(&s, &m));
        assert_eq!(s.disc(), SquareClass::NonSquare);
        let prof = elementary_divisors(&m, &f).unwrap();
        assert_eq!(prof.entries.len(), 2);
    }
}
