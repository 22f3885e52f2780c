//! Elementary divisors of an invertible matrix via the Smith normal form of
//! xI - M over K[x], and an independent Krylov-style minimal polynomial used
//! to cross-check it.

use super::Mat;
use crate::algebra::{poly_factor, Field, Poly};
use crate::error::{Error, Result};

/// One elementary divisor p^e occurring `mult` times.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdEntry {
    /// Monic irreducible.
    pub poly: Poly,
    /// Exponent e >= 1.
    pub exp: usize,
    /// Multiplicity (number of invariant factors containing p^e exactly).
    pub mult: usize,
}

/// The multiset of elementary divisors of a matrix, sorted by
/// (deg p, coefficients of p, exponent).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdProfile {
    pub entries: Vec<EdEntry>,
    pub dim: usize,
}

impl EdProfile {
    /// Sum of mult * e * deg p; must equal the dimension.
    pub fn total_degree(&self) -> usize {
        self.entries.iter().map(|e| e.mult * e.exp * e.poly.degree()).sum()
    }

    /// The minimal polynomial: product of p^(max exp) over distinct p.
    pub fn min_poly(&self, f: &Field) -> Poly {
        let mut m = Poly::one(f);
        let mut i = 0;
        while i < self.entries.len() {
            let p = &self.entries[i].poly;
            let maxe = self
                .entries
                .iter()
                .filter(|e| &e.poly == p)
                .map(|e| e.exp)
                .max()
                .unwrap();
            m = m.mul(&p.pow(maxe, f), f);
            // skip all entries with this p
            let mut j = i;
            while j < self.entries.len() && self.entries[j].poly == self.entries[i].poly {
                j += 1;
            }
            i = j;
        }
        m
    }

    /// Multiplicity of the exact elementary divisor p^e.
    pub fn mult_of(&self, p: &Poly, e: usize) -> usize {
        self.entries
            .iter()
            .filter(|en| en.poly == *p && en.exp == e)
            .map(|en| en.mult)
            .sum()
    }

    /// True when mult(p, e) = mult(p*, e) for all entries; equivalently the
    /// invariant factors are selfreciprocal.  Every isometry satisfies this.
    pub fn is_reciprocal_closed(&self, f: &Field) -> bool {
        self.entries.iter().all(|en| match en.poly.reciprocal(f) {
            Ok(star) => self.mult_of(&star, en.exp) == en.mult,
            Err(_) => false,
        })
    }

    /// Entries with p = x - 1 or p = x + 1.
    pub fn pm_one_entries(&self, f: &Field) -> Vec<&EdEntry> {
        let xm1 = Poly::x_minus(f, f.one());
        let xp1 = Poly::x_minus(f, f.minus_one());
        self.entries.iter().filter(|en| en.poly == xm1 || en.poly == xp1).collect()
    }

    /// Does some (x +- 1)^d with d odd occur?
    pub fn has_odd_pm_one(&self, f: &Field) -> bool {
        self.pm_one_entries(f).iter().any(|en| en.exp % 2 == 1)
    }

    /// Does some p^d with p != x +- 1 and d odd occur?
    pub fn has_odd_non_pm_one(&self, f: &Field) -> bool {
        let xm1 = Poly::x_minus(f, f.one());
        let xp1 = Poly::x_minus(f, f.minus_one());
        self.entries
            .iter()
            .any(|en| en.poly != xm1 && en.poly != xp1 && en.exp % 2 == 1)
    }

    /// Dimension of the (x-1)- and (x+1)-primary parts combined.
    pub fn pm_one_dim(&self, f: &Field) -> usize {
        self.pm_one_entries(f).iter().map(|en| en.mult * en.exp).sum()
    }
}

/// Elementary divisors of an invertible matrix.
pub fn elementary_divisors(m: &Mat, f: &Field) -> Result<EdProfile> {
    assert!(m.is_square());
    let n = m.rows();
    if f.is_zero(m.det(f)) {
        return Err(Error::Singular);
    }
    // xI - M as a polynomial matrix
    let mut pm: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::x_minus(f, m[(i, j)])
                    } else {
                        Poly::constant(f, f.neg(m[(i, j)]))
                    }
                })
                .collect()
        })
        .collect();
    let diag = smith_diagonal(&mut pm, f);
    let mut entries: Vec<EdEntry> = Vec::new();
    for d in diag {
        if d.degree() == 0 {
            continue;
        }
        for (p, e) in poly_factor(f, &d)? {
            if let Some(en) =
                entries.iter_mut().find(|en| en.poly == p && en.exp == e)
            {
                en.mult += 1;
            } else {
                entries.push(EdEntry { poly: p, exp: e, mult: 1 });
            }
        }
    }
    entries.sort_by(|a, b| {
        a.poly
            .degree()
            .cmp(&b.poly.degree())
            .then_with(|| a.poly.coeffs().cmp(b.poly.coeffs()))
            .then_with(|| a.exp.cmp(&b.exp))
    });
    let profile = EdProfile { entries, dim: n };
    debug_assert_eq!(profile.total_degree(), n);
    Ok(profile)
}

/// Diagonal of the Smith normal form of a square polynomial matrix, monic
/// entries, each dividing the next.
fn smith_diagonal(a: &mut Vec<Vec<Poly>>, f: &Field) -> Vec<Poly> {
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // find the entry of minimal degree in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].degree() < a[bi][bj].degree()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                diag.push(Poly::zero());
                break;
            };
            if bi != t {
                a.swap(t, bi);
            }
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
            }
            // clear the pivot row and column by division with remainder
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, _r) = a[i][t].divmod(&a[t][t], f);
                for j in t..n {
                    let sub = q.mul(&a[t][j], f);
                    a[i][j] = a[i][j].sub(&sub, f);
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, _r) = a[t][j].divmod(&a[t][t], f);
                for i in t..n {
                    let sub = q.mul(&a[i][t], f);
                    a[i][j] = a[i][j].sub(&sub, f);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot divides its row and column; make it divide the rest of
            // the block by folding any bad row in and repeating
            let mut bad = None;
            'scan: for i in t + 1..n {
                for j in t + 1..n {
                    if !a[i][j].rem(&a[t][t], f).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = bad {
                // row_t += row_i; reintroduces off-diagonal terms of smaller
                // eventual pivot degree
                for j in t..n {
                    a[t][j] = a[t][j].add(&a[i][j].clone(), f);
                }
                continue;
            }
            diag.push(a[t][t].monic(f));
            break;
        }
    }
    diag
}

/// Minimal polynomial by iterated Krylov spaces: the lcm over standard basis
/// vectors of the annihilator of the cyclic subspace each generates.
pub fn min_poly(m: &Mat, f: &Field) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut acc = Poly::one(f);
    for s in 0..n {
        // build rows e_s, e_s M, ... until dependence; solve for the relation
        let mut v = vec![f.zero(); n];
        v[s] = f.one();
        let mut rows: Vec<Vec<_>> = vec![v.clone()];
        loop {
            v = m.apply_row(&v, f);
            let stack = Mat::from_rows(rows.clone());
            if let Some(sol) = stack.solve_left(&Mat::row(v.clone()), f) {
                // v = sum c_i e_s M^i, so the local annihilator is
                // x^len - sum c_i x^i
                let len = rows.len();
                let mut cs = vec![f.zero(); len + 1];
                for (i, c) in sol.row_slice(0).iter().enumerate() {
                    cs[i] = f.neg(*c);
                }
                cs[len] = f.one();
                acc = acc.lcm(&Poly::from_coeffs(f, cs), f);
                break;
            }
            rows.push(v.clone());
        }
        if acc.degree() == n {
            break;
        }
    }
    acc
}
