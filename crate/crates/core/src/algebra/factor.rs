//! Irreducible factorization over GF(q), q odd: squarefree reduction,
//! distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting.
//! The equal-degree stage draws its trial polynomials from a ChaCha stream
//! seeded from the input, so factorizations are deterministic functions of
//! the polynomial.

use super::{Field, Poly};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Factor a nonzero polynomial into monic irreducibles with multiplicities.
/// Factors are returned sorted by (degree, coefficient vector); the product
/// of p^e over the output times the input's leading coefficient recovers the
/// input.
pub fn poly_factor(f: &Field, poly: &Poly) -> Result<Vec<(Poly, usize)>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let target = poly.monic(f);
    if target.degree() == 0 {
        return Ok(vec![]);
    }
    let mut irreducibles = distinct_irreducible_factors(f, &target);
    irreducibles.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    irreducibles.dedup();
    let mut out = Vec::with_capacity(irreducibles.len());
    let mut rest = target.clone();
    for p in irreducibles {
        let mut e = 0;
        loop {
            let (q, r) = rest.divmod(&p, f);
            if r.is_zero() {
                rest = q;
                e += 1;
            } else {
                break;
            }
        }
        debug_assert!(e > 0);
        out.push((p, e));
    }
    debug_assert!(rest.is_one(), "all factors extracted");
    debug_assert_eq!(
        out.iter().map(|(p, e)| p.degree() * e).sum::<usize>(),
        target.degree()
    );
    Ok(out)
}

/// The set of distinct monic irreducible factors (no multiplicities).
fn distinct_irreducible_factors(f: &Field, poly: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut work = poly.monic(f);
    loop {
        if work.degree() == 0 {
            return out;
        }
        let d = work.derivative(f);
        if d.is_zero() {
            // work = g(x^p); take the p-th root coefficientwise and recurse
            work = pth_root(f, &work);
            continue;
        }
        let sqfree = work.divmod(&work.gcd(&d, f), f).0.monic(f);
        let mut found = split_squarefree(f, &sqfree);
        // remove every found factor completely, leaving a p-th power
        for p in &found {
            loop {
                let (q, r) = work.divmod(p, f);
                if r.is_zero() {
                    work = q;
                } else {
                    break;
                }
            }
        }
        out.append(&mut found);
    }
}

/// p-th root of a polynomial all of whose exponents are multiples of p.
/// In GF(p^k) the p-th root of a coefficient c is c^(p^(k-1)).
fn pth_root(f: &Field, poly: &Poly) -> Poly {
    let p = f.p() as usize;
    let root_exp = f.q() / f.p(); // p^(k-1)
    let mut cs = Vec::with_capacity(poly.degree() / p + 1);
    for i in (0..=poly.degree()).step_by(p) {
        cs.push(f.pow(poly.coeff(i), root_exp));
    }
    for (i, &c) in poly.coeffs().iter().enumerate() {
        debug_assert!(i % p == 0 || f.is_zero(c), "derivative was zero");
    }
    Poly::from_coeffs(f, cs)
}

/// Factor a squarefree monic polynomial into irreducibles.
fn split_squarefree(f: &Field, sqfree: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut rest = sqfree.clone();
    // distinct-degree: h = x^(q^d) mod rest accumulates over d
    let x = Poly::x(f);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree() > 0 {
        d += 1;
        if rest.degree() < 2 * d {
            // what remains is irreducible
            out.push(rest.monic(f));
            break;
        }
        h = frobenius_power(f, &h, &rest);
        let g = h.sub(&x, f).gcd(&rest, f);
        if g.degree() > 0 {
            equal_degree_split(f, &g, d, &mut out);
            rest = rest.divmod(&g, f).0;
            h = h.rem(&rest, f);
        }
    }
    out
}

/// h -> h^q mod m, by repeated p-th powering.
fn frobenius_power(f: &Field, h: &Poly, m: &Poly) -> Poly {
    let mut acc = h.clone();
    for _ in 0..f.k() {
        acc = acc.pow_mod(f.p() as u128, m, f);
    }
    acc
}

/// Cantor-Zassenhaus: split a product of distinct irreducibles, all of
/// degree d, into the individual factors.
fn equal_degree_split(f: &Field, prod: &Poly, d: usize, out: &mut Vec<Poly>) {
    if prod.degree() == d {
        out.push(prod.monic(f));
        return;
    }
    let mut rng = rng_for(f, prod);
    // (q^d - 1) / 2
    let mut e: u128 = 1;
    for _ in 0..d {
        e *= f.q() as u128;
    }
    e = (e - 1) / 2;
    loop {
        let deg = prod.degree() - 1;
        let cs: Vec<_> =
            (0..=deg).map(|_| f.elem_from_index(rng.gen_range(0..f.q())).unwrap()).collect();
        let a = Poly::from_coeffs(f, cs);
        if a.is_zero() {
            continue;
        }
        let g0 = a.gcd(prod, f);
        if g0.degree() > 0 && g0.degree() < prod.degree() {
            equal_degree_split(f, &g0, d, out);
            equal_degree_split(f, &prod.divmod(&g0, f).0, d, out);
            return;
        }
        let b = a.pow_mod(e, prod, f);
        let g = b.sub(&Poly::one(f), f).gcd(prod, f);
        if g.degree() > 0 && g.degree() < prod.degree() {
            equal_degree_split(f, &g, d, out);
            equal_degree_split(f, &prod.divmod(&g, f).0, d, out);
            return;
        }
    }
}

/// Deterministic stream seeded from the field and the polynomial.
fn rng_for(f: &Field, poly: &Poly) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0x100000001b3);
    };
    eat(f.p());
    eat(f.k() as u64);
    for &c in f.modulus() {
        eat(c);
    }
    for &c in poly.coeffs() {
        eat(c.0 as u64);
    }
    seed[..8].copy_from_slice(&h.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// Irreducibility test via the factor machinery (inputs here are tiny).
pub fn is_irreducible(f: &Field, poly: &Poly) -> bool {
    if poly.is_zero() || poly.degree() == 0 {
        return false;
    }
    match poly_factor(f, poly) {
        Ok(fs) => fs.len() == 1 && fs[0].1 == 1,
        Err(_) => false,
    }
}

/// The monic irreducible of degree d whose non-leading coefficient vector,
/// read as a base-q integer (constant term least significant), is smallest.
pub fn smallest_irreducible(f: &Field, d: usize) -> Poly {
    assert!(d >= 1);
    let mut count: u64 = 1;
    for _ in 0..d {
        count = count.saturating_mul(f.q());
    }
    for t in 0..count {
        let mut cs = Vec::with_capacity(d + 1);
        let mut tt = t;
        for _ in 0..d {
            cs.push(f.elem_from_index(tt % f.q()).unwrap());
            tt /= f.q();
        }
        cs.push(f.one());
        let cand = Poly::from_coeffs(f, cs);
        if is_irreducible(f, &cand) {
            return cand;
        }
    }
    unreachable!("irreducibles of every degree exist")
}
