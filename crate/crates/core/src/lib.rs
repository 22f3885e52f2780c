//! Exact decision procedures for bireflectionality and reversibility of
//! isometries of nondegenerate symmetric bilinear spaces over finite fields
//! of odd characteristic.
//!
//! An element g of a group G is *bireflectional* in G if it is a product of
//! two involutions of G, and *reversible* if it is conjugate to its inverse
//! within G.  For the full orthogonal group O(V) of a nondegenerate symmetric
//! bilinear space over GF(q), q odd, every element is bireflectional; for the
//! special orthogonal group SO(V) and the kernel Omega(V) of the spinor norm
//! the answer depends on the elementary divisor structure of the isometry,
//! the discriminant data of its orthogonally indecomposable summands, and the
//! congruence class of q mod 4.
//!
//! The crate is split into
//!
//! * [`algebra`]: arithmetic of GF(p^k) and of its polynomial ring, square
//!   classes, irreducible factorization, reciprocal polynomials;
//! * [`linalg`]: exact matrix algebra, elementary divisors via Smith normal
//!   form over K[x], kernel/image chains, centralizer and intertwiner
//!   solution spaces;
//! * [`space`]: bilinear spaces, discriminants, Witt index, induced forms on
//!   subquotients, synthesis of invariant forms;
//! * [`ortho`]: reflections, involutions, spinor norms, block constructors
//!   for the orthogonally indecomposable types, and the full orthogonal
//!   decomposition of an isometry;
//! * [`classify`]: the decision predicates for bireflectionality and
//!   reversibility in SO(V) and Omega(V), plus the analogous SL(n,q)
//!   predicates;
//! * [`oracle`]: brute-force certification machinery (exhaustive group
//!   enumeration, conjugacy classes, commutator subgroups, reverser-coset
//!   certificates, and named property suites).
//!
//! Everything is exact; no floating point is used anywhere.  All randomized
//! searches take explicit seeds and are reproducible.

pub mod algebra;
pub mod classify;
// staged: json lands below as it builds
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod ortho;
pub mod space;

pub use algebra::{Field, FieldElem, Poly, SquareClass};
pub use classify::{NCounts, SlReading, Verdict};
pub use error::{Error, Result};
pub use linalg::{EdEntry, EdProfile, Mat, SubspaceChain};
pub use oracle::{ElementCertificate, GroupTable, SuiteReport};
pub use ortho::{BlockSpec, Isometry, Summand, TypeSummary, TypeTag};
pub use space::{BilinearSpace, Subspace};

/// Enumeration and search caps.  Everything in this crate is designed for
/// desk-scale certification; the caps keep runaway inputs from looking like
/// hangs.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Largest permitted field size q = p^k.
    pub max_q: u64,
    /// Largest permitted space dimension.
    pub max_dim: usize,
    /// Largest group order the oracle will enumerate.
    pub max_group: u64,
    /// Largest solution-space dimension (over K) the certificate machinery
    /// will exhaust; the enumeration touches q^dim matrices.
    pub max_cent_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_q: 81, max_dim: 12, max_group: 2_000_000, max_cent_dim: 12 }
    }
}
