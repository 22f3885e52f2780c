//! Arithmetic of GF(p^k) for odd p, square classes, and the polynomial ring
//! K[x].
//!
//! Field elements are stored as table indices: the element with power-basis
//! coefficients (c_0, ..., c_{k-1}) over GF(p) has index sum c_i p^i, so
//! indices run over 0..q.  All arithmetic goes through precomputed tables,
//! which keeps the inner loops of the group enumerations branch-free.  The
//! supported q are capped (default 81), so the tables stay tiny.

mod factor;
mod poly;

pub use factor::{is_irreducible, poly_factor, smallest_irreducible};
pub use poly::Poly;

use crate::error::{Error, Result};
use std::fmt;

/// An element of a finite field, as an index into the field's tables.
/// Only meaningful together with the [`Field`] that produced it.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u8);

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The square class of a nonzero field element: the quotient K*/(K*)^2 has
/// order two for every finite field of odd characteristic.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl SquareClass {
    pub fn mul(self, other: SquareClass) -> SquareClass {
        if self == other { SquareClass::Square } else { SquareClass::NonSquare }
    }

    pub fn is_square(self) -> bool {
        self == SquareClass::Square
    }

    /// The class of c^e for an element c of this class.
    pub fn pow_sign(self, e: usize) -> SquareClass {
        if e % 2 == 0 { SquareClass::Square } else { self }
    }
}

impl std::ops::Mul for SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: SquareClass) -> SquareClass {
        SquareClass::mul(self, rhs)
    }
}

/// GF(p^k) with all arithmetic precomputed.
///
/// For k > 1 the field is K = GF(p)[y]/(m(y)) for a monic irreducible
/// modulus m of degree k, and elements are written in the power basis
/// 1, y, ..., y^{k-1}.  When no modulus is supplied the lexicographically
/// smallest monic irreducible of degree k is used (smallest when the
/// non-leading coefficient vector is read as a base-p integer), e.g.
/// y^2 + 1 for GF(9).
#[derive(Clone)]
pub struct Field {
    p: u64,
    k: usize,
    q: u64,
    /// Modulus coefficients over GF(p), constant first, length k+1, monic.
    /// For k = 1 this is [0, 1] (the polynomial y).
    modulus: Vec<u64>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// sqrt[a] = some b with b^2 = a, or 255 if a is not a square.
    sqrt: Vec<u8>,
    square: Vec<bool>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{} = {}; mod {:?})", self.p, self.k, self.q, self.modulus)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Prime field GF(p), p an odd prime.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// GF(p^k).  `modulus`, when given, lists the k+1 coefficients of a monic
    /// irreducible polynomial over GF(p), constant term first.
    pub fn new(p: u64, k: usize, modulus: Option<&[u64]>) -> Result<Field> {
        Field::with_cap(p, k, modulus, crate::Caps::default().max_q)
    }

    pub fn with_cap(p: u64, k: usize, modulus: Option<&[u64]>, max_q: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if k == 0 {
            return Err(Error::BadModulus);
        }
        let q = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(p)).ok_or(Error::FieldTooLarge(u64::MAX, max_q))?;
        if q > max_q {
            return Err(Error::FieldTooLarge(q, max_q));
        }
        if q > 255 {
            // element indices are u8
            return Err(Error::FieldTooLarge(q, 255));
        }
        let modulus: Vec<u64> = match modulus {
            Some(m) => {
                if m.len() != k + 1 || m[k] % p != 1 {
                    return Err(Error::BadModulus);
                }
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if k > 1 && !prime_poly_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
            None => {
                if k == 1 {
                    vec![0, 1]
                } else {
                    smallest_prime_irreducible(p, k)
                }
            }
        };

        let qi = q as usize;
        let mut f = Field {
            p,
            k,
            q,
            modulus,
            add: vec![0; qi * qi],
            mul: vec![0; qi * qi],
            neg: vec![0; qi],
            inv: vec![0; qi],
            sqrt: vec![255; qi],
            square: vec![false; qi],
        };
        f.build_tables();
        Ok(f)
    }

    fn build_tables(&mut self) {
        let qi = self.q as usize;
        for a in 0..qi {
            let ca = self.index_to_coeffs(a as u64);
            for b in 0..qi {
                let cb = self.index_to_coeffs(b as u64);
                // addition: coefficientwise
                let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
                self.add[a * qi + b] = self.coeffs_to_index(&sum) as u8;
                // multiplication: polynomial product reduced mod modulus
                let prod = self.reduce_poly(&poly_mul_mod_p(&ca, &cb, self.p));
                self.mul[a * qi + b] = self.coeffs_to_index(&prod) as u8;
            }
            let negc: Vec<u64> = ca.iter().map(|x| (self.p - x) % self.p).collect();
            self.neg[a] = self.coeffs_to_index(&negc) as u8;
        }
        // inverses by scanning (q is tiny); squares by marking
        for a in 1..qi {
            for b in 1..qi {
                if self.mul[a * qi + b] == 1 {
                    self.inv[a] = b as u8;
                }
            }
        }
        for b in 0..qi {
            let sq = self.mul[b * qi + b] as usize;
            self.square[sq] = true;
            if self.sqrt[sq] == 255 {
                self.sqrt[sq] = b as u8;
            }
        }
    }

    fn index_to_coeffs(&self, mut i: u64) -> Vec<u64> {
        let mut c = vec![0u64; self.k];
        for slot in c.iter_mut() {
            *slot = i % self.p;
            i /= self.p;
        }
        c
    }

    fn coeffs_to_index(&self, c: &[u64]) -> u64 {
        let mut i = 0u64;
        for &ci in c.iter().rev() {
            i = i * self.p + (ci % self.p);
        }
        i
    }

    /// Reduce a GF(p)-coefficient polynomial modulo the field modulus,
    /// returning exactly k coefficients.
    fn reduce_poly(&self, cs: &[u64]) -> Vec<u64> {
        let p = self.p;
        let k = self.k;
        let mut r: Vec<u64> = cs.to_vec();
        while r.len() > k {
            let d = r.len() - 1;
            let lead = r[d] % p;
            if lead != 0 {
                // subtract lead * x^(d-k) * modulus
                for j in 0..=k {
                    let idx = d - k + j;
                    let sub = (lead * self.modulus[j]) % p;
                    r[idx] = (r[idx] + p * p - sub) % p;
                }
            }
            r.pop();
        }
        r.resize(k, 0);
        r
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Modulus coefficients, constant first, length k+1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }
    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }
    pub fn minus_one(&self) -> FieldElem {
        self.neg(self.one())
    }

    /// The image of the integer n under the canonical map Z -> K.
    pub fn int(&self, n: i64) -> FieldElem {
        let m = n.rem_euclid(self.p as i64) as u64;
        FieldElem(m as u8)
    }

    /// Element from power-basis coefficients (length k, entries reduced mod p).
    pub fn from_coeffs(&self, c: &[u64]) -> Result<FieldElem> {
        if c.len() != self.k {
            return Err(Error::Invalid(format!(
                "element needs {} coefficients, got {}",
                self.k,
                c.len()
            )));
        }
        let c: Vec<u64> = c.iter().map(|x| x % self.p).collect();
        Ok(FieldElem(self.coeffs_to_index(&c) as u8))
    }

    /// Power-basis coefficients of an element, constant first, length k.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        self.index_to_coeffs(a.0 as u64)
    }

    pub fn elem_from_index(&self, i: u64) -> Result<FieldElem> {
        if i < self.q {
            Ok(FieldElem(i as u8))
        } else {
            Err(Error::Invalid(format!("element index {} out of range for q = {}", i, self.q)))
        }
    }

    /// All elements of the field in index order.
    pub fn elems(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(|i| FieldElem(i as u8))
    }

    #[inline(always)]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }
    #[inline(always)]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }
    #[inline(always)]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }
    #[inline(always)]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero (callers check).
    #[inline(always)]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a.0 != 0, "inverse of zero");
        FieldElem(self.inv[a.0 as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: FieldElem) -> bool {
        a.0 == 0
    }

    /// The square class of a nonzero element.
    pub fn square_class(&self, a: FieldElem) -> Result<SquareClass> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(if self.square[a.0 as usize] { SquareClass::Square } else { SquareClass::NonSquare })
    }

    /// Like [`Field::square_class`] but panics on zero; for internal use on
    /// values already known to be nonzero.
    pub fn class_of(&self, a: FieldElem) -> SquareClass {
        self.square_class(a).expect("nonzero")
    }

    /// The square class of -1: Square exactly when q = 1 mod 4.
    pub fn class_of_minus_one(&self) -> SquareClass {
        self.class_of(self.minus_one())
    }

    /// A square root of `a` if one exists.
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        let s = self.sqrt[a.0 as usize];
        if s == 255 { None } else { Some(FieldElem(s)) }
    }

    /// The smallest nonsquare in index order.
    pub fn nonsquare(&self) -> FieldElem {
        self.elems()
            .find(|&a| a.0 != 0 && !self.square[a.0 as usize])
            .expect("odd q has a nonsquare")
    }

    /// An element with the given square class: 1 or the canonical nonsquare.
    pub fn rep_of_class(&self, c: SquareClass) -> FieldElem {
        match c {
            SquareClass::Square => self.one(),
            SquareClass::NonSquare => self.nonsquare(),
        }
    }

    /// q mod 4; the two branches of the classification.
    pub fn q_mod4(&self) -> u64 {
        self.q % 4
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }
}

/// Plain GF(p)[y] product of coefficient vectors (no reduction).
fn poly_mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Irreducibility over GF(p) by trial evaluation of gcd(x^(p^d) - x, m):
/// for the tiny degrees used for moduli (k <= 5) plain trial division by all
/// monic polynomials of degree <= k/2 is simplest and fast enough.
fn prime_poly_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if m[0] == 0 {
        return false; // divisible by y
    }
    // trial division by monic polynomials of degree 1..=k/2
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for t in 0..count {
            // divisor y^d + c_{d-1} y^{d-1} + ... + c_0, coefficients from t
            let mut div = Vec::with_capacity(d + 1);
            let mut tt = t;
            for _ in 0..d {
                div.push(tt % p);
                tt /= p;
            }
            div.push(1);
            if prime_poly_divides(&div, m, p) {
                return false;
            }
        }
    }
    true
}

fn prime_poly_divides(div: &[u64], m: &[u64], p: u64) -> bool {
    // remainder of m by monic div over GF(p)
    let mut r: Vec<u64> = m.to_vec();
    let d = div.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for j in 0..=d {
                let sub = (lead * div[j]) % p;
                r[shift + j] = (r[shift + j] + p * p - sub) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c % p == 0)
}

/// The monic irreducible of degree k over GF(p) whose non-leading coefficient
/// vector, read as a base-p integer (constant term least significant), is
/// smallest.  GF(9) gets y^2 + 1.
fn smallest_prime_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for t in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut tt = t;
        for _ in 0..k {
            m.push(tt % p);
            tt /= p;
        }
        m.push(1);
        if prime_poly_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducibles of every degree exist over GF(p)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_tables() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.q(), 3);
        let two = f.int(2);
        assert_eq!(f.add(two, two), f.one());
        assert_eq!(f.mul(two, two), f.one());
        assert_eq!(f.neg(f.one()), two);
        assert_eq!(f.inv(two), two);
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(Field::prime(2).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(Field::prime(9).unwrap_err(), Error::NonPrime(9));
        assert_eq!(Field::prime(1).unwrap_err(), Error::NonPrime(1));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(Field::with_cap(3, 5, None, 81), Err(Error::FieldTooLarge(243, 81))));
        assert!(Field::with_cap(3, 4, None, 81).is_ok());
    }

    #[test]
    fn gf9_default_modulus_is_y2_plus_1() {
        let f = Field::new(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // y * y = -1
        let y = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(y, y), f.minus_one());
        // multiplicative order of y is 4: y^2 = -1, y^4 = 1
        assert_eq!(f.pow(y, 4), f.one());
        assert_ne!(f.pow(y, 2), f.one());
    }

    #[test]
    fn gf9_field_axioms_exhaustive() {
        let f = Field::new(3, 2, None).unwrap();
        for a in f.elems() {
            for b in f.elems() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elems() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                }
            }
            if !f.is_zero(a) {
                assert_eq!(f.mul(a, f.inv(a)), f.one());
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // y^2 - 1 = (y-1)(y+1)
        assert_eq!(Field::new(3, 2, Some(&[2, 0, 1])).unwrap_err(), Error::ReducibleModulus);
    }

    #[test]
    fn square_classes_partition_evenly() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1), (3, 3), (5, 2), (3, 4), (11, 1)] {
            let f = Field::new(p, k, None).unwrap();
            let squares =
                f.elems().filter(|&a| !f.is_zero(a) && f.class_of(a).is_square()).count() as u64;
            assert_eq!(squares, (f.q() - 1) / 2, "squares in GF({}^{})", p, k);
            // multiplicativity, exhaustively
            for a in f.elems() {
                for b in f.elems() {
                    if f.is_zero(a) || f.is_zero(b) {
                        continue;
                    }
                    assert_eq!(f.class_of(f.mul(a, b)), f.class_of(a) * f.class_of(b));
                }
            }
        }
    }

    #[test]
    fn minus_one_class_tracks_q_mod_4() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = Field::new(p, k, None).unwrap();
            let expect =
                if f.q() % 4 == 1 { SquareClass::Square } else { SquareClass::NonSquare };
            assert_eq!(f.class_of_minus_one(), expect, "q = {}", f.q());
        }
    }

    #[test]
    fn square_class_of_zero_is_an_error() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.square_class(f.zero()).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn sqrt_roundtrip() {
        for (p, k) in [(3, 1), (5, 1), (3, 2), (7, 1)] {
            let f = Field::new(p, k, None).unwrap();
            for a in f.elems() {
                match f.sqrt(a) {
                    Some(s) => assert_eq!(f.mul(s, s), a),
                    None => assert!(!f.is_zero(a) && !f.class_of(a).is_square()),
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive_and_fixes_prime_field() {
        let f = Field::new(3, 2, None).unwrap();
        for a in f.elems() {
            for b in f.elems() {
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            }
        }
        assert_eq!(f.frobenius(f.int(2)), f.int(2));
    }
}
