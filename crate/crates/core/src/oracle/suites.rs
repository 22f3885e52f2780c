//! Named assertion families, each run over a constructed or sampled family
//! of instances with every individual check counted.  These freeze facts the
//! decision procedures rely on, checked here by direct enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, Poly, SquareClass};
use crate::error::{Error, Result};
use crate::linalg::{centralizer_basis, companion, elementary_divisors, Mat};
use crate::ortho::{build_block, spinor_norm, BlockSpec};
use crate::space::BilinearSpace;
use crate::Caps;

use super::certify::{check_enum_budget, gl_reversing_involutions, o_reversing_involutions, scan_span};

/// Seed and sample-count knobs for the sampled suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0xB1EF_1EC7, samples: 100 }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    /// (space, transformation) instances exercised.
    pub instances: usize,
    /// Individual assertions evaluated.
    pub checks: usize,
    pub violations: usize,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport {
            name: name.into(),
            instances: 0,
            checks: 0,
            violations: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.instances > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.notes.len() < 32 {
                self.notes.push(what());
            }
        }
    }
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "odd-unipotent-reverser-norms",
        "paired-block-reverser-norms",
        "square-divisor-centralizer-dets",
        "split-reverser-halves",
    ]
}

/// Run one registered suite.
pub fn property_suite(name: &str, opts: &SuiteOptions, caps: &Caps) -> Result<SuiteReport> {
    match name {
        "odd-unipotent-reverser-norms" => odd_unipotent_reverser_norms(caps),
        "paired-block-reverser-norms" => paired_block_reverser_norms(caps),
        "square-divisor-centralizer-dets" => square_divisor_centralizer_dets(opts, caps),
        "split-reverser-halves" => split_reverser_halves(opts, caps),
        other => Err(Error::UnknownSuite(other.into())),
    }
}

fn hyperbolic_rows(s: &BilinearSpace, rows: &Mat) -> bool {
    let basis = rows.row_space(s.field());
    if basis.rows() == 0 {
        return true;
    }
    match BilinearSpace::new(s.field().clone(), s.gram_of(&basis)) {
        Ok(sub) => sub.is_hyperbolic(),
        Err(_) => false,
    }
}

/// On a cyclic odd unipotent (or odd negative-unipotent) block, every
/// decomposition phi = sigma tau into orthogonal involutions has
/// dim Bahn(sigma) = dim Bahn(tau) in {m, m+1} (where dim V = 2m+1), one of
/// the pairs Bahn/Bahn or Fix/Fix hyperbolic, and
/// Theta(sigma) = Theta(tau) in {class((-1)^t), class((-1)^t) disc V} for
/// t = floor((m+1)/2).
fn odd_unipotent_reverser_norms(caps: &Caps) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("odd-unipotent-reverser-norms");
    let discs = [SquareClass::Square, SquareClass::NonSquare];
    for (p, ts) in [(3u64, &[1usize, 2, 3][..]), (5, &[1, 2][..])] {
        let f = Field::prime(p)?;
        for &t in ts {
            for eps in [1i8, -1] {
                for disc in discs {
                    let (s, mut phi) = build_block(&f, &BlockSpec::OddUnipotent { eps, t, disc })?;
                    if eps == -1 {
                        // same reversing involutions, but the dimension and
                        // norm claims are about decompositions of the
                        // unipotent -phi
                        phi = phi.neg(&f);
                    }
                    rep.instances += 1;
                    let m = t;
                    let tl = (m + 1) / 2;
                    let base = f.class_of_minus_one().pow_sign(tl);
                    let allowed = [base, base.mul(s.disc())];
                    let sigmas = o_reversing_involutions(&s, &phi, caps)?;
                    rep.check(!sigmas.is_empty(), || {
                        format!("q={} t={} eps={}: no reversing involution", p, t, eps)
                    });
                    let id = Mat::identity(s.dim(), &f);
                    for sigma in &sigmas {
                        let tau = sigma.mul(&phi, &f);
                        let bs = sigma.sub(&id, &f);
                        let bt = tau.sub(&id, &f);
                        let dim_bs = bs.rank(&f);
                        let dim_bt = bt.rank(&f);
                        rep.check(dim_bs == dim_bt && (dim_bs == m || dim_bs == m + 1), || {
                            format!(
                                "q={} t={} eps={}: moved-space dims {} and {} not in {{{}, {}}}",
                                p, t, eps, dim_bs, dim_bt, m, m + 1
                            )
                        });
                        let bahn_pair = hyperbolic_rows(&s, &bs) && hyperbolic_rows(&s, &bt);
                        let fix_pair = hyperbolic_rows(&s, &bs.left_kernel(&f))
                            && hyperbolic_rows(&s, &bt.left_kernel(&f));
                        rep.check(bahn_pair || fix_pair, || {
                            format!(
                                "q={} t={} eps={}: neither the moved nor the fixed spaces pair up hyperbolically",
                                p, t, eps
                            )
                        });
                        let th_s = spinor_norm(&s, sigma)?;
                        let th_t = spinor_norm(&s, &tau)?;
                        rep.check(th_s == th_t && allowed.contains(&th_s), || {
                            format!(
                                "q={} t={} eps={} disc={:?}: spinor norms {:?}/{:?} outside {:?}",
                                p, t, eps, disc, th_s, th_t, allowed
                            )
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// On a dim-4 block that is paired unipotent, a squared selfreciprocal
/// block, or an even dual pair, every reversing involution sigma has
/// dim Bahn = dim Fix = 2, both hyperbolic, and Theta(sigma) = class(-1).
fn paired_block_reverser_norms(caps: &Caps) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("paired-block-reverser-norms");
    let mut run = |f: &Field, spec: BlockSpec, label: &str| -> Result<()> {
        let (s, phi) = build_block(f, &spec)?;
        debug_assert_eq!(s.dim(), 4);
        rep.instances += 1;
        let expected = f.class_of_minus_one();
        let sigmas = o_reversing_involutions(&s, &phi, caps)?;
        rep.check(!sigmas.is_empty(), || format!("{}: no reversing involution", label));
        let id = Mat::identity(4, f);
        for sigma in &sigmas {
            let moved = sigma.sub(&id, f);
            let fixed = moved.left_kernel(f);
            rep.check(moved.rank(f) == 2 && fixed.rows() == 2, || {
                format!("{}: moved/fixed dims {}/{}", label, moved.rank(f), fixed.rows())
            });
            rep.check(hyperbolic_rows(&s, &moved) && hyperbolic_rows(&s, &fixed), || {
                format!("{}: moved or fixed space is not hyperbolic", label)
            });
            let th = spinor_norm(&s, sigma)?;
            rep.check(th == expected, || {
                format!("{}: spinor norm {:?}, expected {:?}", label, th, expected)
            });
        }
        Ok(())
    };
    let f3 = Field::prime(3)?;
    run(&f3, BlockSpec::Paired { eps: 1, m: 2 }, "q=3 paired +1")?;
    run(&f3, BlockSpec::Paired { eps: -1, m: 2 }, "q=3 paired -1")?;
    let p3 = Poly::from_ints(&f3, &[1, 0, 1]);
    run(&f3, BlockSpec::SelfDual { p: p3, d: 2 }, "q=3 selfdual squared")?;
    let f5 = Field::prime(5)?;
    run(&f5, BlockSpec::Paired { eps: 1, m: 2 }, "q=5 paired +1")?;
    run(&f5, BlockSpec::Paired { eps: -1, m: 2 }, "q=5 paired -1")?;
    let p5 = Poly::from_ints(&f5, &[1, 1, 1]);
    run(&f5, BlockSpec::SelfDual { p: p5, d: 2 }, "q=5 selfdual squared")?;
    let r5 = Poly::x_minus(&f5, f5.int(2));
    run(&f5, BlockSpec::DualPair { r: r5, d: 2 }, "q=5 dual pair squared")?;
    Ok(rep)
}

fn block_diag(parts: &[Mat]) -> Mat {
    let n: usize = parts.iter().map(|m| m.rows()).sum();
    let mut out = Mat::zero(n, n);
    let mut off = 0;
    for p in parts {
        for i in 0..p.rows() {
            for j in 0..p.rows() {
                out[(off + i, off + j)] = p[(i, j)];
            }
        }
        off += p.rows();
    }
    out
}

/// All elementary divisors of phi are squares (every exponent even) exactly
/// when every invertible member of the centralizer algebra has square
/// determinant.  Checked in both directions on curated and random matrices.
fn square_divisor_centralizer_dets(opts: &SuiteOptions, caps: &Caps) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("square-divisor-centralizer-dets");
    let f = Field::prime(3)?;
    let jordan = |blocks: &[(i64, usize)]| -> Mat {
        let parts: Vec<Mat> = blocks
            .iter()
            .map(|&(ev, k)| companion(&Poly::x_minus(&f, f.int(ev)).pow(k, &f), &f))
            .collect();
        block_diag(&parts)
    };
    let x2p1 = Poly::from_ints(&f, &[1, 0, 1]);
    let mut instances: Vec<(Mat, String)> = vec![
        (Mat::identity(1, &f), "identity dim 1".into()),
        (Mat::identity(2, &f), "identity dim 2".into()),
        (jordan(&[(1, 2)]), "one unipotent block of size 2".into()),
        (jordan(&[(1, 3)]), "one unipotent block of size 3".into()),
        (jordan(&[(1, 4)]), "one unipotent block of size 4".into()),
        (jordan(&[(1, 2), (1, 2)]), "two unipotent blocks of size 2".into()),
        (jordan(&[(1, 2), (1, 1)]), "unipotent blocks of sizes 2 and 1".into()),
        (jordan(&[(1, 3), (1, 1)]), "unipotent blocks of sizes 3 and 1".into()),
        (jordan(&[(1, 2), (-1, 2)]), "size-2 blocks at both unit eigenvalues".into()),
        (jordan(&[(1, 1), (-1, 1)]), "diag(1, -1)".into()),
        (companion(&x2p1, &f), "irreducible quadratic".into()),
        (companion(&x2p1.pow(2, &f), &f), "squared irreducible quadratic".into()),
        (companion(&Poly::from_ints(&f, &[2, 1, 1]), &f), "another irreducible quadratic".into()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut added = 0;
    while added < opts.samples {
        let n = 3 + (added % 2);
        let m = Mat::from_fn(n, n, |_, _| {
            f.elem_from_index(rng.gen_range(0..f.q())).unwrap()
        });
        if f.is_zero(m.det(&f)) {
            continue;
        }
        instances.push((m, format!("random invertible #{}", added)));
        added += 1;
    }
    for (m, label) in instances {
        let basis = centralizer_basis(&m, &f);
        if check_enum_budget(f.q(), basis.len(), caps).is_err() {
            rep.notes.push(format!("{}: skipped, centralizer dimension {}", label, basis.len()));
            continue;
        }
        rep.instances += 1;
        let prof = elementary_divisors(&m, &f)?;
        let all_square = prof.entries.iter().all(|e| e.exp % 2 == 0);
        let mut dets_square = true;
        scan_span(&basis, &f, |x| {
            if dets_square {
                let d = x.det(&f);
                if !f.is_zero(d) && f.square_class(d).unwrap() == SquareClass::NonSquare {
                    dets_square = false;
                }
            }
        });
        rep.check(all_square == dets_square, || {
            format!(
                "{}: divisors all squares = {}, centralizer dets all square = {}",
                label, all_square, dets_square
            )
        });
    }
    Ok(rep)
}

/// A reversible transformation of a 4-dimensional space with no odd
/// unit-eigenvalue elementary divisor is reversed only by involutions with
/// dim Fix = dim Neg = 2; sampled over invertible 4x4 matrices (no form).
fn split_reverser_halves(opts: &SuiteOptions, caps: &Caps) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("split-reverser-halves");
    let f = Field::prime(3)?;
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let id = Mat::identity(n, &f);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < opts.samples {
        attempts += 1;
        if attempts > opts.samples.saturating_mul(10_000).max(100_000) {
            return Err(Error::Internal(
                "sampling reversible matrices without odd unit-eigenvalue divisors stalled".into(),
            ));
        }
        let m = Mat::from_fn(n, n, |_, _| {
            f.elem_from_index(rng.gen_range(0..f.q())).unwrap()
        });
        if f.is_zero(m.det(&f)) {
            continue;
        }
        let prof = elementary_divisors(&m, &f)?;
        if !prof.is_reciprocal_closed(&f) || prof.has_odd_pm_one(&f) {
            continue;
        }
        if check_enum_budget(f.q(), centralizer_basis(&m, &f).len(), caps).is_err() {
            continue;
        }
        accepted += 1;
        rep.instances += 1;
        let sigmas = gl_reversing_involutions(&m, &f, caps)?;
        rep.check(!sigmas.is_empty(), || {
            format!("sample #{}: reversible but no reversing involution", accepted)
        });
        for sigma in &sigmas {
            let fix = n - sigma.sub(&id, &f).rank(&f);
            let neg = n - sigma.add(&id, &f).rank(&f);
            rep.check(fix == 2 && neg == 2, || {
                format!("sample #{}: fixed/negated dims {}/{}", accepted, fix, neg)
            });
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_suite_passes() {
        let caps = Caps::default();
        let opts = SuiteOptions { seed: 7, samples: 20 };
        for name in suite_names() {
            let rep = property_suite(name, &opts, &caps).unwrap();
            assert!(
                rep.passed(),
                "suite {} had {} violations out of {} checks: {:?}",
                rep.name,
                rep.violations,
                rep.checks,
                rep.notes
            );
            assert!(rep.checks > 0);
        }
    }

    #[test]
    fn unknown_suites_are_rejected_by_name() {
        let err = property_suite("no-such-suite", &SuiteOptions::default(), &Caps::default());
        match err {
            Err(Error::UnknownSuite(n)) => assert_eq!(n, "no-such-suite"),
            other => panic!("expected UnknownSuite, got {:?}", other.map(|r| r.name)),
        }
    }
}
