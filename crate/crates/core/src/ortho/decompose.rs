//! Orthogonal decomposition of an isometry into indecomposable summands.
//!
//! The space splits first into the primary components of the isometry
//! (grouping each irreducible with its reciprocal, since those two primary
//! parts pair with each other and with nothing else).  Each component is then
//! peeled greedily from the largest elementary divisor down:
//!
//! * an odd unipotent top block (x - e)^(2t+1) always admits a generator u
//!   whose cyclic space is nondegenerate, found through an anisotropic vector
//!   in the image of (psi - 1)^t;
//! * an even unipotent top block never carries a form alone and is split off
//!   as a nondegenerate pair of two cyclic spaces;
//! * p-primary parts for selfreciprocal p of even degree peel one cyclic
//!   space at a time;
//! * {r, r*}-primary parts peel a pair of cyclic halves, each totally
//!   isotropic, whose mutual pairing is nondegenerate.
//!
//! Every candidate search runs over a deterministic pool (basis vectors,
//! pairwise sums, then seeded pseudorandom combinations), so decompositions
//! are reproducible.  The result is re-verified from scratch before being
//! returned: summand orthogonality, nondegeneracy, the elementary divisor
//! multiset, and the discriminant product must all match, else the call
//! reports an internal failure rather than returning a wrong answer.

use crate::algebra::{Field, FieldElem, Poly, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{elementary_divisors, EdProfile, Mat};
use crate::space::BilinearSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Structural kind of an indecomposable summand.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum TypeTag {
    /// (x - e)^m twice, m even, on a split form.
    Paired,
    /// A single (x - e)^(2t+1).
    OddUnipotent,
    /// A single p^d, p irreducible selfreciprocal of even degree.
    SelfDual,
    /// r^d + (r*)^d for r irreducible, not selfreciprocal.
    DualPair,
}

/// One orthogonally indecomposable piece of an isometry.
#[derive(Clone, Debug)]
pub struct Summand {
    /// Rows embedding the summand into the ambient space.
    pub rows: Mat,
    /// The restricted form on those rows.
    pub space: BilinearSpace,
    /// The restricted action, in the coordinates of `rows`.
    pub action: Mat,
    pub tag: TypeTag,
    /// For `DualPair` the smaller of r, r* in coefficient order.
    pub poly: Poly,
    pub exp: usize,
    pub disc: SquareClass,
}

/// The discriminant data the classification needs: for each (e, odd d) the
/// number of summands (x - e)^d and the discriminant of their span.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OddPiece {
    pub eps: i8,
    pub size: usize,
    pub mult: usize,
    pub disc: SquareClass,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TypeSummary {
    /// Sorted by (eps, size).
    pub pieces: Vec<OddPiece>,
}

impl TypeSummary {
    pub fn from_summands(f: &Field, zs: &[Summand]) -> TypeSummary {
        let xm1 = Poly::x_minus(f, f.one());
        let mut pieces: Vec<OddPiece> = Vec::new();
        for z in zs {
            if z.tag != TypeTag::OddUnipotent {
                continue;
            }
            let eps: i8 = if z.poly == xm1 { 1 } else { -1 };
            if let Some(p) =
                pieces.iter_mut().find(|p| p.eps == eps && p.size == z.exp)
            {
                p.mult += 1;
                p.disc = p.disc * z.disc;
            } else {
                pieces.push(OddPiece { eps, size: z.exp, mult: 1, disc: z.disc });
            }
        }
        pieces.sort_by_key(|p| (p.eps, p.size));
        TypeSummary { pieces }
    }

    /// Total count of odd (x - e)-divisors.
    pub fn total_mult(&self) -> usize {
        self.pieces.iter().map(|p| p.mult).sum()
    }
}

struct Piece {
    rows: Mat,
    tag: TypeTag,
    poly: Poly,
    exp: usize,
}

/// Split an isometry into orthogonally indecomposable summands.
pub fn orthogonal_decompose(s: &BilinearSpace, m: &Mat) -> Result<Vec<Summand>> {
    let f = s.field();
    if !super::is_isometry(s, m) {
        return Err(Error::NotAnIsometry);
    }
    let profile = elementary_divisors(m, f)?;
    let mut pieces: Vec<Piece> = Vec::new();
    for group in primary_groups(&profile, f)? {
        let ann = group.annihilator(f);
        let u = m.eval_poly(&ann, f).left_kernel(f);
        let (us, ua) = restrict(s, m, &u)?;
        let local = match &group {
            Group::Unipotent { eps, .. } => split_unipotent(&us, &ua, *eps)?,
            Group::SelfDual { p, .. } => split_selfdual(&us, &ua, p)?,
            Group::DualPair { r, rs, .. } => split_dualpair(&us, &ua, r, rs)?,
        };
        for piece in local {
            pieces.push(Piece { rows: piece.rows.mul(&u, f), ..piece });
        }
    }
    let mut out = Vec::with_capacity(pieces.len());
    for p in pieces {
        let (space, action) = restrict(s, m, &p.rows)?;
        let disc = space.disc();
        out.push(Summand {
            rows: p.rows,
            space,
            action,
            tag: p.tag,
            poly: p.poly,
            exp: p.exp,
            disc,
        });
    }
    out.sort_by(|a, b| {
        a.poly
            .degree()
            .cmp(&b.poly.degree())
            .then_with(|| a.poly.coeffs().cmp(b.poly.coeffs()))
            .then_with(|| a.exp.cmp(&b.exp))
            .then_with(|| a.tag.cmp(&b.tag))
    });
    post_verify(s, m, &profile, &out)?;
    Ok(out)
}

enum Group {
    Unipotent { eps: i8, exp: usize },
    SelfDual { p: Poly, exp: usize },
    DualPair { r: Poly, rs: Poly, exp: usize, exp_star: usize },
}

impl Group {
    fn annihilator(&self, f: &Field) -> Poly {
        match self {
            Group::Unipotent { eps, exp } => {
                let e = if *eps == 1 { f.one() } else { f.minus_one() };
                Poly::x_minus(f, e).pow(*exp, f)
            }
            Group::SelfDual { p, exp } => p.pow(*exp, f),
            Group::DualPair { r, rs, exp, exp_star } => {
                r.pow(*exp, f).mul(&rs.pow(*exp_star, f), f)
            }
        }
    }
}

fn primary_groups(profile: &EdProfile, f: &Field) -> Result<Vec<Group>> {
    let mut distinct: Vec<(Poly, usize)> = Vec::new();
    for en in &profile.entries {
        if let Some(d) = distinct.iter_mut().find(|d| d.0 == en.poly) {
            d.1 = d.1.max(en.exp);
        } else {
            distinct.push((en.poly.clone(), en.exp));
        }
    }
    let xm1 = Poly::x_minus(f, f.one());
    let xp1 = Poly::x_minus(f, f.minus_one());
    let mut used = vec![false; distinct.len()];
    let mut out = Vec::new();
    for i in 0..distinct.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (p, e) = distinct[i].clone();
        if p == xm1 {
            out.push(Group::Unipotent { eps: 1, exp: e });
        } else if p == xp1 {
            out.push(Group::Unipotent { eps: -1, exp: e });
        } else {
            let star = p.reciprocal(f)?;
            if star == p {
                out.push(Group::SelfDual { p, exp: e });
            } else {
                let j = distinct
                    .iter()
                    .position(|(q, _)| *q == star)
                    .ok_or_else(|| {
                        Error::Internal(
                            "isometry profile not closed under reciprocals".into(),
                        )
                    })?;
                used[j] = true;
                let (rs, es) = distinct[j].clone();
                out.push(Group::DualPair { r: p, rs, exp: e, exp_star: es });
            }
        }
    }
    Ok(out)
}

/// Restrict both form and action to an invariant row space.
fn restrict(s: &BilinearSpace, m: &Mat, rows: &Mat) -> Result<(BilinearSpace, Mat)> {
    let f = s.field();
    let action = rows
        .solve_left(&rows.mul(m, f), f)
        .ok_or_else(|| Error::Internal("subspace is not invariant".into()))?;
    let space = BilinearSpace::new(f.clone(), s.gram_of(rows))
        .map_err(|_| Error::InternalDecompositionFailure)?;
    Ok((space, action))
}

/// Deterministic candidate vectors spanning attempts inside a row space:
/// basis rows, their pairwise sums, then seeded pseudorandom combinations.
fn pool_in(basis: &Mat, f: &Field, extra: usize) -> Vec<Vec<FieldElem>> {
    let k = basis.rows();
    let n = basis.cols();
    let mut out = Vec::new();
    for i in 0..k {
        out.push(basis.row_vec(i));
    }
    for i in 0..k {
        for j in i + 1..k {
            let v: Vec<FieldElem> = basis
                .row_slice(i)
                .iter()
                .zip(basis.row_slice(j).iter())
                .map(|(a, b)| f.add(*a, *b))
                .collect();
            out.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xD05EED ^ ((k as u64) << 32) ^ n as u64);
    for _ in 0..extra {
        let mut v = vec![f.zero(); n];
        let mut nonzero = false;
        for r in 0..k {
            let c = f.elem_from_index(rng.gen_range(0..f.q())).unwrap();
            if !f.is_zero(c) {
                nonzero = true;
                for j in 0..n {
                    v[j] = f.add(v[j], f.mul(c, basis[(r, j)]));
                }
            }
        }
        if nonzero {
            out.push(v);
        }
    }
    out
}

/// Rows u, uB, uB^2, ..., uB^(len-1).
fn krylov_rows(u: &[FieldElem], b: &Mat, len: usize, f: &Field) -> Mat {
    let mut rows = Vec::with_capacity(len);
    let mut v = u.to_vec();
    for _ in 0..len {
        rows.push(v.clone());
        v = b.apply_row(&v, f);
    }
    Mat::from_rows(rows)
}

fn nilpotency_index(nil: &Mat, f: &Field) -> usize {
    let mut d = 1;
    let mut pw = nil.clone();
    while !pw.is_zero(f) {
        pw = pw.mul(nil, f);
        d += 1;
    }
    d
}

/// Peel one indecomposable off the top of a +-unipotent isometry and recurse.
fn split_unipotent(s: &BilinearSpace, a: &Mat, eps: i8) -> Result<Vec<Piece>> {
    let f = s.field();
    let n = s.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let e = if eps == 1 { f.one() } else { f.minus_one() };
    let psi = a.scale(e, f);
    let nil = psi.sub(&Mat::identity(n, f), f);
    let d = nilpotency_index(&nil, f);
    let poly = Poly::x_minus(f, e);
    let (z, tag) = if d % 2 == 1 {
        let t = (d - 1) / 2;
        let nt = nil.pow(t, f);
        let bahn = nt.row_space(f);
        let b = s.anisotropic_in(&bahn).ok_or(Error::InternalDecompositionFailure)?;
        let u = nt
            .solve_left(&Mat::row(b), f)
            .ok_or(Error::InternalDecompositionFailure)?
            .row_vec(0);
        // the cyclic space of u has antitriangular Gram with nonzero
        // antidiagonal, hence is nondegenerate of full size d
        (krylov_rows(&u, &nil, d, f), TypeTag::OddUnipotent)
    } else {
        let nd1 = nil.pow(d - 1, f);
        let pool = pool_in(&Mat::identity(n, f), f, 64);
        let full: Vec<&Vec<FieldElem>> = pool
            .iter()
            .filter(|v| !nd1.apply_row(v, f).iter().all(|&x| f.is_zero(x)))
            .collect();
        let mut found = None;
        'outer: for u1 in &full {
            for u2 in &full {
                let z = krylov_rows(u1, &nil, d, f).vstack(&krylov_rows(u2, &nil, d, f));
                if z.rank(f) == 2 * d && !f.is_zero(s.gram_of(&z).det(f)) {
                    found = Some(z);
                    break 'outer;
                }
            }
        }
        (found.ok_or(Error::InternalDecompositionFailure)?, TypeTag::Paired)
    };
    if f.is_zero(s.gram_of(&z).det(f)) {
        return Err(Error::InternalDecompositionFailure);
    }
    let comp = s.orthogonal_complement(&z);
    let (cs, ca) = restrict(s, a, &comp)?;
    let rest = split_unipotent(&cs, &ca, eps)?;
    let mut out = vec![Piece { rows: z, tag, poly, exp: d }];
    for r in rest {
        out.push(Piece { rows: r.rows.mul(&comp, f), ..r });
    }
    Ok(out)
}

/// Peel maximal cyclic spaces off a p-primary part, p selfreciprocal of even
/// degree.
fn split_selfdual(s: &BilinearSpace, a: &Mat, p: &Poly) -> Result<Vec<Piece>> {
    let f = s.field();
    let n = s.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let prof = elementary_divisors(a, f)?;
    let e = prof
        .entries
        .iter()
        .filter(|en| en.poly == *p)
        .map(|en| en.exp)
        .max()
        .ok_or(Error::InternalDecompositionFailure)?;
    let dim_z = e * p.degree();
    let top = a.eval_poly(p, f).pow(e - 1, f);
    let pool = pool_in(&Mat::identity(n, f), f, 64);
    let mut found = None;
    for u in &pool {
        if top.apply_row(u, f).iter().all(|&x| f.is_zero(x)) {
            continue;
        }
        let z = krylov_rows(u, a, dim_z, f);
        if z.rank(f) == dim_z && !f.is_zero(s.gram_of(&z).det(f)) {
            found = Some(z);
            break;
        }
    }
    let z = found.ok_or(Error::InternalDecompositionFailure)?;
    let comp = s.orthogonal_complement(&z);
    let (cs, ca) = restrict(s, a, &comp)?;
    let rest = split_selfdual(&cs, &ca, p)?;
    let mut out = vec![Piece { rows: z, tag: TypeTag::SelfDual, poly: p.clone(), exp: e }];
    for r in rest {
        out.push(Piece { rows: r.rows.mul(&comp, f), ..r });
    }
    Ok(out)
}

/// Peel totally isotropic cyclic halves with nondegenerate mutual pairing off
/// an {r, r*}-primary part.
fn split_dualpair(s: &BilinearSpace, a: &Mat, r: &Poly, rs: &Poly) -> Result<Vec<Piece>> {
    let f = s.field();
    let n = s.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let prof = elementary_divisors(a, f)?;
    let er = prof
        .entries
        .iter()
        .filter(|en| en.poly == *r)
        .map(|en| en.exp)
        .max()
        .ok_or(Error::InternalDecompositionFailure)?;
    let ers = prof
        .entries
        .iter()
        .filter(|en| en.poly == *rs)
        .map(|en| en.exp)
        .max()
        .ok_or(Error::InternalDecompositionFailure)?;
    if er != ers {
        return Err(Error::Internal("reciprocal halves have unequal heights".into()));
    }
    let dim_half = er * r.degree();
    let ra = a.eval_poly(r, f);
    let rsa = a.eval_poly(rs, f);
    let r_part = ra.pow(er, f).left_kernel(f);
    let rs_part = rsa.pow(er, f).left_kernel(f);
    let r_top = ra.pow(er - 1, f);
    let rs_top = rsa.pow(er - 1, f);
    let r_cands: Vec<Vec<FieldElem>> = pool_in(&r_part, f, 32)
        .into_iter()
        .filter(|v| !r_top.apply_row(v, f).iter().all(|&x| f.is_zero(x)))
        .collect();
    let rs_cands: Vec<Vec<FieldElem>> = pool_in(&rs_part, f, 32)
        .into_iter()
        .filter(|v| !rs_top.apply_row(v, f).iter().all(|&x| f.is_zero(x)))
        .collect();
    let mut found = None;
    'outer: for u in &r_cands {
        let zu = krylov_rows(u, a, dim_half, f);
        if zu.rank(f) != dim_half {
            continue;
        }
        for v in &rs_cands {
            let zv = krylov_rows(v, a, dim_half, f);
            if zv.rank(f) != dim_half {
                continue;
            }
            let z = zu.vstack(&zv);
            if z.rank(f) == 2 * dim_half && !f.is_zero(s.gram_of(&z).det(f)) {
                found = Some(z);
                break 'outer;
            }
        }
    }
    let z = found.ok_or(Error::InternalDecompositionFailure)?;
    let comp = s.orthogonal_complement(&z);
    let (cs, ca) = restrict(s, a, &comp)?;
    let rest = split_dualpair(&cs, &ca, r, rs)?;
    let poly = if r.coeffs() <= rs.coeffs() { r.clone() } else { rs.clone() };
    let mut out = vec![Piece { rows: z, tag: TypeTag::DualPair, poly, exp: er }];
    for rr in rest {
        out.push(Piece { rows: rr.rows.mul(&comp, f), ..rr });
    }
    Ok(out)
}

/// Claimed elementary divisors of one summand.
fn expected_divisors(z: &Summand, f: &Field) -> Result<Vec<(Poly, usize, usize)>> {
    Ok(match z.tag {
        TypeTag::OddUnipotent | TypeTag::SelfDual => vec![(z.poly.clone(), z.exp, 1)],
        TypeTag::Paired => vec![(z.poly.clone(), z.exp, 2)],
        TypeTag::DualPair => {
            let star = z.poly.reciprocal(f)?;
            vec![(z.poly.clone(), z.exp, 1), (star, z.exp, 1)]
        }
    })
}

fn post_verify(
    s: &BilinearSpace,
    m: &Mat,
    profile: &EdProfile,
    zs: &[Summand],
) -> Result<()> {
    let f = s.field();
    let n = s.dim();
    let fail = || Err(Error::InternalDecompositionFailure);
    if zs.iter().map(|z| z.space.dim()).sum::<usize>() != n {
        return fail();
    }
    // pairwise orthogonality
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let cross = zs[i].rows.mul(s.gram(), f).mul(&zs[j].rows.transpose(), f);
            if !cross.is_zero(f) {
                return fail();
            }
        }
    }
    // per-summand: invariant under m, real isometry with the claimed divisors
    let mut claimed: Vec<(Poly, usize, usize)> = Vec::new();
    for z in zs {
        if z.rows.mul(m, f).entries() != z.action.mul(&z.rows, f).entries() {
            return fail();
        }
        if !super::is_isometry(&z.space, &z.action) {
            return fail();
        }
        let got = elementary_divisors(&z.action, f)?;
        let want = expected_divisors(z, f)?;
        for (p, e, mult) in &want {
            if got.mult_of(p, *e) != *mult {
                return fail();
            }
            if let Some(c) = claimed.iter_mut().find(|c| c.0 == *p && c.1 == *e) {
                c.2 += mult;
            } else {
                claimed.push((p.clone(), *e, *mult));
            }
        }
        if got.total_degree() != z.space.dim() {
            return fail();
        }
    }
    // the union of claims is the global profile
    for en in &profile.entries {
        match claimed.iter().find(|c| c.0 == en.poly && c.1 == en.exp) {
            Some(c) if c.2 == en.mult => {}
            _ => return fail(),
        }
    }
    if claimed.len() != profile.entries.len() {
        return fail();
    }
    // discriminants multiply to the discriminant of the space
    let mut dp = SquareClass::Square;
    for z in zs {
        dp = dp * z.disc;
    }
    if dp != s.disc() {
        return fail();
    }
    Ok(())
}
