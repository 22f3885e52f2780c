//! Brute-force classification of single isometries.
//!
//! Two paths to the same flags: scan a fully enumerated group table, or scan
//! the reverser coset {alpha : alpha^-1 phi alpha = phi^-1} directly.  The
//! coset is the set of invertible isometric members of the linear space
//! {X : X phi^-1 = phi X}, whose dimension equals that of the centralizer
//! algebra, so it can be exhausted even when the ambient group cannot.

use rayon::prelude::*;

use crate::algebra::{Field, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{centralizer_basis, intertwiner_basis, Mat};
use crate::ortho::{is_isometry, spinor_norm};
use crate::space::BilinearSpace;
use crate::Caps;

use super::GroupTable;

/// How a certificate's flags were established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMethod {
    /// Scan of a complete group table.
    Exhaustive,
    /// Scan of the reverser coset Cent(phi) rho_0.
    CentralizerCoset,
}

/// Counts over the full set of reversers of phi in O(V).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReverserSummary {
    pub total: usize,
    pub in_so: usize,
    pub in_omega: usize,
    pub involutions: usize,
    pub involutions_in_so: usize,
    pub involutions_in_omega: usize,
}

/// Exact bireflectionality and reversibility flags for one isometry, with
/// the evidence they were read from.
#[derive(Clone, Debug)]
pub struct ElementCertificate {
    pub phi: Mat,
    /// Size of the conjugacy class the flags were computed for (exhaustive
    /// path only).
    pub class_size: Option<usize>,
    pub summary: ReverserSummary,
    pub biref_o: bool,
    pub biref_so: bool,
    pub biref_omega: bool,
    pub reversible_o: bool,
    pub reversible_so: bool,
    pub reversible_omega: bool,
    /// A reverser, preferring involutions, then Omega members, then SO.
    pub sample_reverser: Option<Mat>,
    /// Involutions (sigma, tau) with phi = sigma tau, built from the best
    /// reversing involution found.
    pub witness: Option<(Mat, Mat)>,
    pub method: CertMethod,
    /// True when the underlying enumeration ran to completion (it always
    /// does unless construction errored first; recorded for reports).
    pub complete: bool,
}

/// Accumulates reverser statistics in a deterministic scan order.
#[derive(Default)]
struct RevAcc {
    summary: ReverserSummary,
    best: Option<(u8, Mat)>,
    best_invol: Option<(u8, Mat)>,
}

impl RevAcc {
    fn add(&mut self, rho: &Mat, in_so: bool, in_omega: bool, invol: bool) {
        let s = &mut self.summary;
        s.total += 1;
        if in_so {
            s.in_so += 1;
        }
        if in_omega {
            s.in_omega += 1;
        }
        if invol {
            s.involutions += 1;
            if in_so {
                s.involutions_in_so += 1;
            }
            if in_omega {
                s.involutions_in_omega += 1;
            }
        }
        let score = (invol as u8) << 2 | (in_omega as u8) << 1 | in_so as u8;
        if self.best.as_ref().map_or(true, |(b, _)| score > *b) {
            self.best = Some((score, rho.clone()));
        }
        if invol {
            let iscore = (in_omega as u8) << 1 | in_so as u8;
            if self.best_invol.as_ref().map_or(true, |(b, _)| iscore > *b) {
                self.best_invol = Some((iscore, rho.clone()));
            }
        }
    }

    fn into_certificate(
        self,
        phi: Mat,
        f: &Field,
        class_size: Option<usize>,
        method: CertMethod,
    ) -> ElementCertificate {
        let s = self.summary;
        let witness = self.best_invol.as_ref().map(|(_, sigma)| {
            let tau = sigma.mul(&phi, f);
            debug_assert!(tau.mul(&tau, f).entries() == Mat::identity(phi.rows(), f).entries());
            (sigma.clone(), tau)
        });
        ElementCertificate {
            phi,
            class_size,
            summary: s,
            biref_o: s.involutions > 0,
            biref_so: s.involutions_in_so > 0,
            biref_omega: s.involutions_in_omega > 0,
            reversible_o: s.total > 0,
            reversible_so: s.in_so > 0,
            reversible_omega: s.in_omega > 0,
            sample_reverser: self.best.map(|(_, m)| m),
            witness,
            method,
            complete: true,
        }
    }
}

/// Classify every conjugacy class of a fully enumerated group by scanning
/// all of its elements for reversers.  `alpha` reverses `phi` exactly when
/// phi alpha = alpha phi^-1; an involution among the reversers is the same
/// thing as an involution sigma with (sigma phi)^2 = 1.
pub fn exhaustive_classify(t: &GroupTable) -> Vec<ElementCertificate> {
    let f = t.space().field();
    t.classes()
        .par_iter()
        .map(|cls| {
            let phi = t.element(cls.rep).clone();
            let phi_inv = t.element(t.inverse_of(cls.rep));
            let mut acc = RevAcc::default();
            for j in 0..t.order() {
                let alpha = t.element(j);
                if phi.mul(alpha, f).entries() == alpha.mul(phi_inv, f).entries() {
                    acc.add(alpha, t.in_so(j), t.in_omega(j), t.is_involution(j));
                }
            }
            acc.into_certificate(phi, f, Some(cls.size()), CertMethod::Exhaustive)
        })
        .collect()
}

// Hard ceiling on q^d scan sizes, independent of the dimension cap, so a
// large field cannot smuggle in an intractable enumeration.
const ENUM_BUDGET: u128 = 6_000_000;

pub(crate) fn check_enum_budget(q: u64, d: usize, caps: &Caps) -> Result<()> {
    if d > caps.max_cent_dim {
        return Err(Error::CentralizerTooLarge(d, caps.max_cent_dim));
    }
    let mut total: u128 = 1;
    for _ in 0..d {
        total = total.saturating_mul(q as u128);
    }
    if total > ENUM_BUDGET {
        let mut t: u128 = 1;
        let mut fit = 0usize;
        while t.saturating_mul(q as u128) <= ENUM_BUDGET {
            t *= q as u128;
            fit += 1;
        }
        return Err(Error::CentralizerTooLarge(d, fit));
    }
    Ok(())
}

/// Visit every K-linear combination of `basis` exactly once, starting with
/// the zero combination, updating the running sum incrementally as a
/// mixed-radix odometer steps through coefficient space.
pub(crate) fn scan_span(basis: &[Mat], f: &Field, mut visit: impl FnMut(&Mat)) {
    if basis.is_empty() {
        return;
    }
    let q = f.q();
    let d = basis.len();
    let rows = basis[0].rows();
    let cols = basis[0].cols();
    let mut cur = Mat::zero(rows, cols);
    let mut digits = vec![0u64; d];
    loop {
        visit(&cur);
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            let old = digits[i];
            let carried = old + 1 == q;
            digits[i] = if carried { 0 } else { old + 1 };
            let delta = f.sub(
                f.elem_from_index(digits[i]).unwrap(),
                f.elem_from_index(old).unwrap(),
            );
            for r in 0..rows {
                for c in 0..cols {
                    cur[(r, c)] = f.add(cur[(r, c)], f.mul(delta, basis[i][(r, c)]));
                }
            }
            if carried {
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Basis of the linear space {X : X phi^-1 = phi X}; its invertible members
/// are exactly the elements conjugating phi to phi^-1.
fn reverser_basis(phi: &Mat, f: &Field) -> Result<Vec<Mat>> {
    let phi_inv = phi.inverse(f)?;
    Ok(intertwiner_basis(&phi_inv, phi, f))
}

/// Classify one isometry by exhausting its reverser coset.
///
/// Requires Witt index >= 1 so that Omega membership can be read off
/// determinant and spinor norm; anisotropic planes are cheap to close out
/// with `closure` + `exhaustive_classify` instead.
pub fn element_certificate(
    s: &BilinearSpace,
    phi: &Mat,
    caps: &Caps,
) -> Result<ElementCertificate> {
    if !is_isometry(s, phi) {
        return Err(Error::NotAnIsometry);
    }
    if s.witt_index() == 0 {
        return Err(Error::AnisotropicSmallSpace);
    }
    let f = s.field();
    let n = s.dim();
    let d = centralizer_basis(phi, f).len();
    check_enum_budget(f.q(), d, caps)?;
    let rbasis = reverser_basis(phi, f)?;
    if rbasis.len() != d {
        return Err(Error::Internal(format!(
            "reverser space dimension {} differs from centralizer dimension {}",
            rbasis.len(),
            d
        )));
    }
    let id = Mat::identity(n, f);
    let g00 = s.gram()[(0, 0)];
    let mut acc = RevAcc::default();
    scan_span(&rbasis, f, |x| {
        // cheap necessary condition before the full isometry check
        if s.norm(x.row_slice(0)) != g00 {
            return;
        }
        if !is_isometry(s, x) {
            return;
        }
        let in_so = x.det(f) == f.one();
        let theta = spinor_norm(s, x).expect("isometry");
        let in_omega = in_so && theta == SquareClass::Square;
        let invol = x.mul(x, f).entries() == id.entries();
        acc.add(x, in_so, in_omega, invol);
    });
    if acc.summary.total == 0 {
        return Err(Error::Internal(
            "no reverser found, but every isometry is a product of two orthogonal involutions"
                .into(),
        ));
    }
    Ok(acc.into_certificate(phi.clone(), f, None, CertMethod::CentralizerCoset))
}

/// All involutions of O(V) reversing phi, by the same coset scan.
pub(crate) fn o_reversing_involutions(
    s: &BilinearSpace,
    phi: &Mat,
    caps: &Caps,
) -> Result<Vec<Mat>> {
    let f = s.field();
    let d = centralizer_basis(phi, f).len();
    check_enum_budget(f.q(), d, caps)?;
    let rbasis = reverser_basis(phi, f)?;
    check_enum_budget(f.q(), rbasis.len(), caps)?;
    let id = Mat::identity(s.dim(), f);
    let mut out = Vec::new();
    scan_span(&rbasis, f, |x| {
        if x.mul(x, f).entries() == id.entries() && is_isometry(s, x) {
            out.push(x.clone());
        }
    });
    Ok(out)
}

/// All involutions of GL(V) reversing phi (no form involved).
pub(crate) fn gl_reversing_involutions(phi: &Mat, f: &Field, caps: &Caps) -> Result<Vec<Mat>> {
    let d = centralizer_basis(phi, f).len();
    check_enum_budget(f.q(), d, caps)?;
    let rbasis = reverser_basis(phi, f)?;
    check_enum_budget(f.q(), rbasis.len(), caps)?;
    let id = Mat::identity(phi.rows(), f);
    let mut out = Vec::new();
    scan_span(&rbasis, f, |x| {
        if x.mul(x, f).entries() == id.entries() {
            out.push(x.clone());
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, SquareClass};
    use crate::oracle::closure;
    use crate::ortho::{build_block, direct_sum, BlockSpec};

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn scan_span_visits_every_combination_once() {
        let f = gf(3);
        let basis: Vec<Mat> = (0..3)
            .map(|k| Mat::from_fn(2, 2, |i, j| if 2 * i + j == k { f.one() } else { f.zero() }))
            .collect();
        let mut keys = std::collections::HashSet::new();
        let mut count = 0usize;
        scan_span(&basis, &f, |m| {
            keys.insert(m.pack(&f));
            count += 1;
        });
        assert_eq!(count, 27);
        assert_eq!(keys.len(), 27);
    }

    #[test]
    fn identity_is_classified_all_true_by_both_paths() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f.clone(), &[1, 1, 1]).unwrap();
        let t = closure(&s, &caps).unwrap();
        let certs = exhaustive_classify(&t);
        let id_cert = certs
            .iter()
            .find(|c| c.phi.entries() == Mat::identity(3, &f).entries())
            .unwrap();
        assert!(id_cert.biref_o && id_cert.biref_so && id_cert.biref_omega);
        assert!(id_cert.reversible_o && id_cert.reversible_so && id_cert.reversible_omega);
        // every element reverses the identity
        assert_eq!(id_cert.summary.total, 48);
        assert_eq!(id_cert.class_size, Some(1));

        let direct = element_certificate(&s, &Mat::identity(3, &f), &caps).unwrap();
        assert_eq!(direct.method, CertMethod::CentralizerCoset);
        assert_eq!(direct.summary, id_cert.summary);
        assert!(direct.biref_omega && direct.reversible_omega);
        let (sig, tau) = direct.witness.as_ref().unwrap();
        assert_eq!(sig.mul(tau, &f).entries(), Mat::identity(3, &f).entries());
    }

    #[test]
    fn negative_one_on_a_square_disc_space_is_bireflectional_in_omega() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f.clone(), &[1, 1, 1, 1]).unwrap();
        let t = closure(&s, &caps).unwrap();
        let neg = Mat::scalar(4, f.minus_one());
        let idx = t.index_of(&neg).unwrap();
        assert!(t.in_omega(idx));
        let cert = &exhaustive_classify(&t)[t.class_of(idx)];
        assert!(cert.biref_omega);
        assert_eq!(cert.class_size, Some(1));
    }

    #[test]
    fn order_four_rotation_on_the_anisotropic_plane_splits_o_from_so() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f.clone(), &[1, 1]).unwrap();
        let t = closure(&s, &caps).unwrap();
        let neg = Mat::scalar(2, f.minus_one());
        let rot = (0..t.order())
            .find(|&i| {
                let m = t.element(i);
                m.mul(m, &f).entries() == neg.entries()
            })
            .expect("an order-4 rotation exists");
        let cert = &exhaustive_classify(&t)[t.class_of(rot)];
        assert!(cert.biref_o);
        assert!(!cert.biref_so);
        assert!(cert.reversible_o);
    }

    #[test]
    fn fixed_plane_next_to_an_even_block_is_reversible_but_not_bireflectional_in_omega() {
        let f = gf(3);
        let caps = Caps::default();
        let plane = BilinearSpace::diagonal(f.clone(), &[1, 1]).unwrap();
        let fixed = (plane, Mat::identity(2, &f));
        let paired = build_block(&f, &BlockSpec::Paired { eps: -1, m: 2 }).unwrap();
        let (s, phi) = direct_sum(&f, &[fixed, paired]);
        let cert = element_certificate(&s, &phi, &caps).unwrap();
        assert!(cert.reversible_omega);
        assert!(!cert.biref_omega);
        assert!(cert.biref_o);
        assert!(cert.biref_so);
        // agreement with the decision procedures
        let v = crate::classify::classify(&s, &phi).unwrap();
        assert_eq!(v.in_omega, Some(true));
        assert_eq!(v.r_profile, Some(true));
        assert_eq!(v.biref_so, Some(true));
        assert_eq!(v.biref_omega, Some(false));
        assert_eq!(v.reversible_omega, Some(true));
    }

    #[test]
    fn centralizer_cap_is_enforced() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f.clone(), &[1, 1, 1, 1, 1, 1]).unwrap();
        // identity: centralizer is the full matrix algebra, dimension 36
        match element_certificate(&s, &Mat::identity(6, &f), &caps) {
            Err(Error::CentralizerTooLarge(36, 12)) => {}
            other => panic!("expected CentralizerTooLarge, got {:?}", other.map(|c| c.method)),
        }
        // two unipotent summands in the same primary component: dimension 20
        let plane = BilinearSpace::diagonal(f.clone(), &[1, 1]).unwrap();
        let fixed = (plane, Mat::identity(2, &f));
        let paired = build_block(&f, &BlockSpec::Paired { eps: 1, m: 2 }).unwrap();
        let (s, phi) = direct_sum(&f, &[fixed, paired]);
        match element_certificate(&s, &phi, &caps) {
            Err(Error::CentralizerTooLarge(20, 12)) => {}
            other => panic!("expected CentralizerTooLarge, got {:?}", other.map(|c| c.method)),
        }
    }

    #[test]
    fn exhaustive_flags_agree_with_coset_certificates_on_a_small_group() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::hyperbolic(f.clone(), 1);
        let t = closure(&s, &caps).unwrap();
        for cert in exhaustive_classify(&t) {
            let direct = element_certificate(&s, &cert.phi, &caps).unwrap();
            assert_eq!(direct.summary, cert.summary, "phi = {:?}", cert.phi.entries());
            assert_eq!(direct.biref_omega, cert.biref_omega);
            assert_eq!(direct.reversible_omega, cert.reversible_omega);
        }
    }

    #[test]
    fn decision_procedures_match_the_exhaustive_oracle_in_dimension_three() {
        let f = gf(3);
        let caps = Caps::default();
        for ds in [[1i64, 1, 1], [1, 1, 2]] {
            let s = BilinearSpace::diagonal(f.clone(), &ds).unwrap();
            let t = closure(&s, &caps).unwrap();
            for cert in exhaustive_classify(&t) {
                let idx = t.index_of(&cert.phi).unwrap();
                let v = crate::classify::classify(&s, &cert.phi).unwrap();
                assert_eq!(v.in_omega, Some(t.in_omega(idx)), "disc {:?}", ds);
                if v.det == 1 {
                    assert_eq!(v.biref_so, Some(cert.biref_so), "disc {:?}", ds);
                }
                if v.in_omega == Some(true) {
                    assert_eq!(v.biref_omega, Some(cert.biref_omega), "disc {:?}", ds);
                    assert_eq!(
                        v.reversible_omega,
                        Some(cert.reversible_omega),
                        "disc {:?}",
                        ds
                    );
                }
            }
        }
    }

    #[test]
    fn spinor_norms_tracked_by_the_table_match_direct_computation() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f.clone(), &[1, 1, 2]).unwrap();
        let t = closure(&s, &caps).unwrap();
        for i in 0..t.order() {
            let m = t.element(i);
            let theta = spinor_norm(&s, m).unwrap();
            assert_eq!(t.has_trivial_spinor_norm(i), theta == SquareClass::Square);
            assert_eq!(t.in_so(i), m.det(&f) == f.one());
        }
    }
}
