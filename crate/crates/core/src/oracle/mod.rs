//! Ground truth by enumeration.
//!
//! Small orthogonal groups are closed out completely from their reflections,
//! conjugacy classes and the commutator subgroup are computed from scratch,
//! and bireflectionality / reversibility are decided by brute force.  For
//! single elements of groups too large to enumerate, the reverser coset
//! Cent(phi) rho_0 is scanned instead (`element_certificate`).  Everything
//! here is deliberately independent of the decision procedures in `classify`,
//! so agreement between the two is evidence, not circularity.

mod certify;
mod suites;

pub use certify::{
    element_certificate, exhaustive_classify, CertMethod, ElementCertificate, ReverserSummary,
};
pub use suites::{property_suite, suite_names, SuiteOptions, SuiteReport};

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::SquareClass;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ortho::{reflection, spinor_norm};
use crate::space::BilinearSpace;
use crate::Caps;

/// |O(V)| from the standard order formulas, saturating at `u128::MAX`.
///
/// For dim V = 2m+1 the order is 2 q^(m^2) prod_{i=1..m} (q^(2i) - 1); for
/// dim V = 2m it is 2 q^(m(m-1)) (q^m - eps) prod_{i=1..m-1} (q^(2i) - 1),
/// where eps = +1 exactly when the Witt index is maximal, i.e. when
/// disc V = class((-1)^m).
pub fn orthogonal_group_order(s: &BilinearSpace) -> u128 {
    let q = s.field().q() as u128;
    let n = s.dim();
    let m = n / 2;
    let mul = |a: u128, b: u128| a.checked_mul(b).unwrap_or(u128::MAX);
    let pow = |e: u32| q.checked_pow(e).unwrap_or(u128::MAX);
    let mut o;
    if n % 2 == 1 {
        o = mul(2, pow((m * m) as u32));
        for i in 1..=m {
            o = mul(o, pow(2 * i as u32) - 1);
        }
    } else {
        let plus = s.disc() == s.field().class_of_minus_one().pow_sign(m);
        let qm = pow(m as u32);
        o = mul(2, pow((m * (m - 1)) as u32));
        o = mul(o, if plus { qm - 1 } else { qm + 1 });
        for i in 1..m {
            o = mul(o, pow(2 * i as u32) - 1);
        }
    }
    o
}

/// One conjugacy class: `rep` is the smallest element index in the class
/// (indices follow breadth-first discovery order, so this is deterministic).
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub rep: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A fully enumerated orthogonal group.
///
/// Elements are stored in discovery order (identity first) and addressed by
/// index.  Per-element data: determinant sign, spinor norm, involution flag,
/// inverse index, conjugacy class.  Omega is carried twice: as the commutator
/// subgroup computed by closure, and as {det = 1, trivial spinor norm}; the
/// constructor insists the two agree whenever the Witt index is >= 1.
/// `in_omega` reports the commutator-closure version, which is the defining
/// one and stays meaningful on anisotropic planes.
pub struct GroupTable {
    space: BilinearSpace,
    elements: Vec<Mat>,
    index: HashMap<u128, usize>,
    generators: Vec<usize>,
    inverse: Vec<usize>,
    det_one: Vec<bool>,
    theta_square: Vec<bool>,
    involution: Vec<bool>,
    omega_commutator: Vec<bool>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl GroupTable {
    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(&m.pack(self.space.field())).copied()
    }

    /// Indices of the generating reflections, in vector-enumeration order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn is_involution(&self, i: usize) -> bool {
        self.involution[i]
    }

    pub fn in_so(&self, i: usize) -> bool {
        self.det_one[i]
    }

    pub fn has_trivial_spinor_norm(&self, i: usize) -> bool {
        self.theta_square[i]
    }

    /// Membership in the commutator subgroup.
    pub fn in_omega(&self, i: usize) -> bool {
        self.omega_commutator[i]
    }

    pub fn so_order(&self) -> usize {
        self.det_one.iter().filter(|&&b| b).count()
    }

    pub fn omega_order(&self) -> usize {
        self.omega_commutator.iter().filter(|&&b| b).count()
    }

    /// True when the commutator subgroup equals {det = 1, trivial spinor
    /// norm} as a set.  Guaranteed by construction for Witt index >= 1;
    /// informative on anisotropic planes.
    pub fn omega_two_ways_agree(&self) -> bool {
        (0..self.order()).all(|i| self.omega_commutator[i] == (self.det_one[i] && self.theta_square[i]))
    }
}

/// Every reflection of the space, deduplicated, in the order the defining
/// vectors appear under odometer enumeration of F^n.
fn all_reflections(s: &BilinearSpace) -> Vec<Mat> {
    let f = s.field();
    let n = s.dim();
    let q = f.q();
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    let mut digits = vec![0u64; n];
    'outer: loop {
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            digits[i] += 1;
            if digits[i] == q {
                digits[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        let v: Vec<_> = digits.iter().map(|&d| f.elem_from_index(d).unwrap()).collect();
        if f.is_zero(s.norm(&v)) {
            continue;
        }
        let r = reflection(s, &v).expect("anisotropic vector");
        let key = r.pack(f);
        if seen.insert(key, ()).is_none() {
            out.push(r);
        }
    }
    out
}

// Frontier chunk size for the parallel breadth-first passes; bounds the
// number of in-flight products so peak memory stays small.
const CHUNK: usize = 2048;

/// Enumerate O(V) from all reflections by breadth-first closure, then attach
/// per-element data, conjugacy classes, and the commutator subgroup.
pub fn closure(s: &BilinearSpace, caps: &Caps) -> Result<GroupTable> {
    let predicted = orthogonal_group_order(s);
    if predicted > caps.max_group as u128 {
        return Err(Error::GroupTooLarge(
            predicted.min(u64::MAX as u128) as u64,
            caps.max_group,
        ));
    }
    let f = s.field();
    let n = s.dim();
    let gen_mats = all_reflections(s);

    let mut elements = vec![Mat::identity(n, f)];
    let mut index = HashMap::new();
    index.insert(elements[0].pack(f), 0usize);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chunk in frontier.chunks(CHUNK) {
            let batches: Vec<Vec<(u128, Mat)>> = chunk
                .par_iter()
                .map(|&i| {
                    let x = &elements[i];
                    gen_mats
                        .iter()
                        .map(|g| {
                            let z = x.mul(g, f);
                            (z.pack(f), z)
                        })
                        .collect()
                })
                .collect();
            for batch in batches {
                for (key, z) in batch {
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                        e.insert(elements.len());
                        next.push(elements.len());
                        elements.push(z);
                    }
                }
            }
        }
        frontier = next;
    }
    let order = elements.len();
    if order as u128 != predicted {
        return Err(Error::Internal(format!(
            "closure found {} elements but the order formula gives {}",
            order, predicted
        )));
    }

    let generators: Vec<usize> = gen_mats.iter().map(|g| index[&g.pack(f)]).collect();

    let id = Mat::identity(n, f);
    let data: Vec<(bool, bool, bool, u128)> = elements
        .par_iter()
        .map(|m| {
            let det_one = m.det(f) == f.one();
            let theta = spinor_norm(s, m).expect("closure members are isometries");
            let invol = m.mul(m, f).entries() == id.entries();
            let inv_key = m.inverse(f).expect("group members are invertible").pack(f);
            (det_one, theta == SquareClass::Square, invol, inv_key)
        })
        .collect();
    let det_one: Vec<bool> = data.iter().map(|d| d.0).collect();
    let theta_square: Vec<bool> = data.iter().map(|d| d.1).collect();
    let involution: Vec<bool> = data.iter().map(|d| d.2).collect();
    let inverse: Vec<usize> = data.iter().map(|d| index[&d.3]).collect();

    if 2 * det_one.iter().filter(|&&b| b).count() != order {
        return Err(Error::Internal("SO does not have index 2".into()));
    }

    let (classes, class_of) = conjugacy_classes(&elements, &index, &generators, &inverse, f);

    let omega_commutator =
        commutator_closure(&elements, &index, &generators, &inverse, f);
    if s.witt_index() >= 1 {
        for i in 0..order {
            if omega_commutator[i] != (det_one[i] && theta_square[i]) {
                return Err(Error::Internal(
                    "commutator closure disagrees with {det 1, trivial spinor norm}".into(),
                ));
            }
        }
    }

    Ok(GroupTable {
        space: s.clone(),
        elements,
        index,
        generators,
        inverse,
        det_one,
        theta_square,
        involution,
        omega_commutator,
        classes,
        class_of,
    })
}

fn conjugacy_classes(
    elements: &[Mat],
    index: &HashMap<u128, usize>,
    generators: &[usize],
    inverse: &[usize],
    f: &crate::algebra::Field,
) -> (Vec<ConjugacyClass>, Vec<usize>) {
    let order = elements.len();
    let gen_pairs: Vec<(&Mat, &Mat)> = generators
        .iter()
        .map(|&g| (&elements[g], &elements[inverse[g]]))
        .collect();
    let mut class_of = vec![usize::MAX; order];
    let mut classes = Vec::new();
    for start in 0..order {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        class_of[start] = cid;
        let mut members = vec![start];
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for chunk in frontier.chunks(CHUNK) {
                let keys: Vec<Vec<u128>> = chunk
                    .par_iter()
                    .map(|&x| {
                        let xm = &elements[x];
                        gen_pairs
                            .iter()
                            .map(|(g, ginv)| ginv.mul(xm, f).mul(g, f).pack(f))
                            .collect()
                    })
                    .collect();
                for batch in keys {
                    for key in batch {
                        let j = index[&key];
                        if class_of[j] == usize::MAX {
                            class_of[j] = cid;
                            members.push(j);
                            next.push(j);
                        }
                    }
                }
            }
            frontier = next;
        }
        members.sort_unstable();
        classes.push(ConjugacyClass { rep: start, members });
    }
    (classes, class_of)
}

/// The commutator subgroup as a membership vector: pairwise commutators of
/// the generators, multiplicative closure, then normal closure under
/// conjugation by the generators.
fn commutator_closure(
    elements: &[Mat],
    index: &HashMap<u128, usize>,
    generators: &[usize],
    inverse: &[usize],
    f: &crate::algebra::Field,
) -> Vec<bool> {
    let order = elements.len();
    let mut members = vec![false; order];
    members[0] = true;
    let mut list = vec![0usize];
    // generators that actually enlarged the subgroup; each strictly at least
    // doubles it, so this list stays short
    let mut hgens: Vec<usize> = Vec::new();

    let mut grow = |cand: usize, members: &mut Vec<bool>, list: &mut Vec<usize>, hgens: &mut Vec<usize>| {
        if members[cand] {
            return;
        }
        hgens.push(cand);
        let mut work: Vec<usize> = Vec::new();
        let seeds: Vec<usize> = list.clone();
        for x in seeds {
            let z = index[&elements[x].mul(&elements[cand], f).pack(f)];
            if !members[z] {
                members[z] = true;
                list.push(z);
                work.push(z);
            }
        }
        while let Some(x) = work.pop() {
            for &g in hgens.iter() {
                let z = index[&elements[x].mul(&elements[g], f).pack(f)];
                if !members[z] {
                    members[z] = true;
                    list.push(z);
                    work.push(z);
                }
            }
        }
    };

    for &a in generators {
        for &b in generators {
            // [a, b] = a^-1 b^-1 a b
            let c = elements[inverse[a]]
                .mul(&elements[inverse[b]], f)
                .mul(&elements[a], f)
                .mul(&elements[b], f);
            grow(index[&c.pack(f)], &mut members, &mut list, &mut hgens);
        }
    }

    // normal closure: conjugates of members by group generators must stay in
    loop {
        let snapshot: Vec<usize> = list.clone();
        let mut escaped: Vec<usize> = Vec::new();
        for chunk in snapshot.chunks(CHUNK) {
            let found: Vec<Vec<usize>> = chunk
                .par_iter()
                .map(|&h| {
                    let hm = &elements[h];
                    generators
                        .iter()
                        .filter_map(|&g| {
                            let z = index
                                [&elements[inverse[g]].mul(hm, f).mul(&elements[g], f).pack(f)];
                            if members[z] { None } else { Some(z) }
                        })
                        .collect()
                })
                .collect();
            for batch in found {
                escaped.extend(batch);
            }
        }
        if escaped.is_empty() {
            break;
        }
        for z in escaped {
            grow(z, &mut members, &mut list, &mut hgens);
        }
    }
    members
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn order_formulas_match_known_values() {
        let f = gf(3);
        let cases: Vec<(BilinearSpace, u128)> = vec![
            (BilinearSpace::diagonal(f.clone(), &[1]).unwrap(), 2),
            (BilinearSpace::hyperbolic(f.clone(), 1), 4),
            (BilinearSpace::diagonal(f.clone(), &[1, 1]).unwrap(), 8),
            (BilinearSpace::diagonal(f.clone(), &[1, 1, 1]).unwrap(), 48),
            (BilinearSpace::hyperbolic(f.clone(), 2), 1152),
            (BilinearSpace::diagonal(f.clone(), &[1, 1, 1, 2]).unwrap(), 1440),
            (BilinearSpace::diagonal(f.clone(), &[1, 1, 1, 1, 1]).unwrap(), 103680),
        ];
        for (s, want) in cases {
            assert_eq!(orthogonal_group_order(&s), want, "dim {}", s.dim());
        }
        let f5 = gf(5);
        let s = BilinearSpace::hyperbolic(f5.clone(), 2);
        assert_eq!(orthogonal_group_order(&s), 28800);
        let s = BilinearSpace::diagonal(f5, &[1, 1, 1, 2]).unwrap();
        assert_eq!(orthogonal_group_order(&s), 31200);
    }

    #[test]
    fn closure_counts_match_the_formulas() {
        let f = gf(3);
        let caps = Caps::default();
        let t = closure(&BilinearSpace::diagonal(f.clone(), &[1]).unwrap(), &caps).unwrap();
        assert_eq!(t.order(), 2);
        let t = closure(&BilinearSpace::diagonal(f.clone(), &[1, 1, 1]).unwrap(), &caps).unwrap();
        assert_eq!(t.order(), 48);
        assert_eq!(t.so_order(), 24);
        let t = closure(&BilinearSpace::hyperbolic(f, 2), &caps).unwrap();
        assert_eq!(t.order(), 1152);
        assert_eq!(t.so_order(), 576);
        assert_eq!(t.omega_order(), 288);
    }

    #[test]
    fn commutator_subgroups_of_small_groups() {
        let f = gf(3);
        let caps = Caps::default();
        // dim 1: abelian, trivial commutator subgroup
        let t = closure(&BilinearSpace::diagonal(f.clone(), &[1]).unwrap(), &caps).unwrap();
        assert_eq!(t.omega_order(), 1);
        // split plane: SO = {+-1} with a nonsquare spinor norm on -1
        let t = closure(&BilinearSpace::hyperbolic(f.clone(), 1), &caps).unwrap();
        assert_eq!(t.omega_order(), 1);
        assert!(t.omega_two_ways_agree());
        // dim 3: the alternating group on 4 letters
        let t = closure(&BilinearSpace::diagonal(f, &[1, 1, 1]).unwrap(), &caps).unwrap();
        assert_eq!(t.omega_order(), 12);
        assert!(t.omega_two_ways_agree());
    }

    #[test]
    fn classes_partition_the_group_and_reps_are_minimal() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f.clone(), &[1, 1, 1]).unwrap();
        let t = closure(&s, &caps).unwrap();
        let mut seen = vec![false; t.order()];
        for (cid, cls) in t.classes().iter().enumerate() {
            assert_eq!(cls.rep, cls.members[0]);
            for &m in &cls.members {
                assert!(!seen[m]);
                seen[m] = true;
                assert_eq!(t.class_of(m), cid);
            }
        }
        assert!(seen.iter().all(|&b| b));
        // spot check: conjugating a member by a generator stays in its class
        let g = t.element(t.generators()[0]).clone();
        let ginv = g.inverse(&f).unwrap();
        for cls in t.classes().iter().take(5) {
            let x = t.element(cls.rep);
            let z = ginv.mul(x, &f).mul(&g, &f);
            let j = t.index_of(&z).unwrap();
            assert_eq!(t.class_of(j), t.class_of(cls.rep));
        }
    }

    #[test]
    fn cap_rejects_groups_that_are_too_large() {
        let f = gf(3);
        let s = BilinearSpace::diagonal(f, &[1, 1, 1, 1, 1]).unwrap();
        let caps = Caps { max_group: 1000, ..Caps::default() };
        match closure(&s, &caps) {
            Err(Error::GroupTooLarge(est, cap)) => {
                assert_eq!(est, 103680);
                assert_eq!(cap, 1000);
            }
            other => panic!("expected GroupTooLarge, got {:?}", other.map(|t| t.order())),
        }
    }

    #[test]
    fn anisotropic_plane_has_dihedral_group_of_order_eight() {
        let f = gf(3);
        let caps = Caps::default();
        let s = BilinearSpace::diagonal(f, &[1, 1]).unwrap();
        let t = closure(&s, &caps).unwrap();
        assert_eq!(t.order(), 8);
        assert_eq!(t.so_order(), 4);
        // the commutator subgroup of the dihedral group of order 8 is {+-1}
        assert_eq!(t.omega_order(), 2);
    }
}
