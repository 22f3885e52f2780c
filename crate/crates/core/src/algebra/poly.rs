//! Dense univariate polynomials over a [`Field`], constant term first.
//! The zero polynomial has an empty coefficient vector; nonzero polynomials
//! never carry trailing zero coefficients.

use super::{Field, FieldElem};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    cs: Vec<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .cs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 != 0)
            .map(|(i, c)| match i {
                0 => format!("{}", c.0),
                1 if c.0 == 1 => "x".into(),
                1 => format!("{}x", c.0),
                _ if c.0 == 1 => format!("x^{}", i),
                _ => format!("{}x^{}", c.0, i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { cs: vec![] }
    }

    pub fn one(f: &Field) -> Poly {
        Poly { cs: vec![f.one()] }
    }

    /// x itself.
    pub fn x(f: &Field) -> Poly {
        Poly { cs: vec![f.zero(), f.one()] }
    }

    /// x - a.
    pub fn x_minus(f: &Field, a: FieldElem) -> Poly {
        Poly::from_coeffs(f, vec![f.neg(a), f.one()])
    }

    pub fn constant(f: &Field, a: FieldElem) -> Poly {
        Poly::from_coeffs(f, vec![a])
    }

    /// Build from a coefficient vector, constant first; trailing zeros are
    /// trimmed.
    pub fn from_coeffs(f: &Field, mut cs: Vec<FieldElem>) -> Poly {
        while let Some(&last) = cs.last() {
            if f.is_zero(last) {
                cs.pop();
            } else {
                break;
            }
        }
        Poly { cs }
    }

    /// Build from integer coefficients over the prime subfield.
    pub fn from_ints(f: &Field, cs: &[i64]) -> Poly {
        Poly::from_coeffs(f, cs.iter().map(|&c| f.int(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.cs
    }

    pub fn is_zero(&self) -> bool {
        self.cs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.cs.len() == 1 && self.cs[0].0 == 1
    }

    /// Degree; the zero polynomial is given degree 0 by convention, so check
    /// [`Poly::is_zero`] first where it matters.
    pub fn degree(&self) -> usize {
        self.cs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> FieldElem {
        *self.cs.last().expect("lead of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.cs.get(i).copied().unwrap_or(FieldElem(0))
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lead().0 == 1
    }

    pub fn eval(&self, f: &Field, a: FieldElem) -> FieldElem {
        let mut acc = f.zero();
        for &c in self.cs.iter().rev() {
            acc = f.add(f.mul(acc, a), c);
        }
        acc
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.cs.len().max(other.cs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(f, out)
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.cs.len().max(other.cs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(f, out)
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly { cs: self.cs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![f.zero(); self.cs.len() + other.cs.len() - 1];
        for (i, &a) in self.cs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, &b) in other.cs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, out)
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Poly {
        Poly::from_coeffs(f, self.cs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(f.inv(self.lead()), f)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divmod(&self, div: &Poly, f: &Field) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.degree() < div.degree() || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let dlead_inv = f.inv(div.lead());
        let mut rem = self.cs.clone();
        let qdeg = self.degree() - div.degree();
        let mut quot = vec![f.zero(); qdeg + 1];
        for shift in (0..=qdeg).rev() {
            let top = rem[shift + div.degree()];
            if f.is_zero(top) {
                continue;
            }
            let c = f.mul(top, dlead_inv);
            quot[shift] = c;
            for (j, &dj) in div.cs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, dj));
            }
        }
        (Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem))
    }

    pub fn rem(&self, div: &Poly, f: &Field) -> Poly {
        self.divmod(div, f).1
    }

    pub fn divides(&self, other: &Poly, f: &Field) -> bool {
        other.rem(self, f).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn lcm(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other, f);
        self.mul(other, f).divmod(&g, f).0.monic(f)
    }

    pub fn pow(&self, mut e: usize, f: &Field) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Modular exponentiation: self^e mod m.
    pub fn pow_mod(&self, mut e: u128, m: &Poly, f: &Field) -> Poly {
        let mut base = self.rem(m, f);
        let mut acc = Poly::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f);
            }
            base = base.mul(&base, f).rem(m, f);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        if self.cs.len() <= 1 {
            return Poly::zero();
        }
        let out: Vec<FieldElem> =
            self.cs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.int(i as i64), c)).collect();
        Poly::from_coeffs(f, out)
    }

    /// The reciprocal polynomial r*(x) = r(0)^{-1} x^deg(r) r(1/x): reverse
    /// the coefficients and normalize to monic.  Defined for monic r with
    /// r(0) != 0.
    pub fn reciprocal(&self, f: &Field) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.is_zero(self.cs[0]) {
            return Err(Error::ZeroConstantTerm);
        }
        let mut rev: Vec<FieldElem> = self.cs.iter().rev().copied().collect();
        let c = f.inv(self.cs[0]);
        for a in rev.iter_mut() {
            *a = f.mul(*a, c);
        }
        Ok(Poly::from_coeffs(f, rev))
    }

    pub fn is_selfreciprocal(&self, f: &Field) -> bool {
        match self.reciprocal(f) {
            Ok(r) => r == *self,
            Err(_) => false,
        }
    }

    /// Substitute -x for x: p(x) -> p(-x).  Maps (x-1)-primary data to
    /// (x+1)-primary data and back.
    pub fn compose_neg_x(&self, f: &Field) -> Poly {
        let mut out = self.cs.clone();
        for (i, c) in out.iter_mut().enumerate() {
            if i % 2 == 1 {
                *c = f.neg(*c);
            }
        }
        Poly::from_coeffs(f, out)
    }
}
