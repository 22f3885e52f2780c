//! Crate-wide error type.  Validation failures are ordinary errors; the
//! `Internal*` variants signal a broken invariant and are always bugs.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus is not irreducible over the prime field")]
    ReducibleModulus,
    #[error("modulus must be monic of degree k with k >= 1")]
    BadModulus,
    #[error("field size {0} exceeds the configured cap {1}")]
    FieldTooLarge(u64, u64),
    #[error("dimension {0} exceeds the configured cap {1}")]
    DimensionTooLarge(usize, usize),
    #[error("zero has no square class")]
    ZeroElement,
    #[error("the zero polynomial cannot be factored")]
    ZeroPolynomial,
    #[error("reciprocal of a polynomial with zero constant term")]
    ZeroConstantTerm,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Gram matrix is degenerate or not symmetric")]
    Degenerate,
    #[error("subspaces are not nested as required (need W <= U <= W-perp)")]
    NotNested,
    #[error("induced form on the subquotient is degenerate")]
    DescentFails,
    #[error("matrix has no invariant nondegenerate symmetric form (an invariant factor is not selfreciprocal)")]
    NoInvariantForm,
    #[error("exhausted the solution space without finding a nondegenerate member")]
    ExhaustedSolutionSpace,
    #[error("vector is isotropic where an anisotropic vector is required")]
    IsotropicVector,
    #[error("matrix does not preserve the form")]
    NotAnIsometry,
    #[error("Omega membership is decided by commutator closure only on anisotropic spaces of dimension <= 2")]
    AnisotropicSmallSpace,
    #[error("subspace is degenerate")]
    DegenerateSubspace,
    #[error("bad block specification: {0}")]
    BadSpec(String),
    #[error("orthogonal decomposition failed post-verification; this is a bug")]
    InternalDecompositionFailure,
    #[error("isometry is not in Omega(V)")]
    NotInOmega,
    #[error("operation requires q = {0} mod 4")]
    WrongFieldBranch(u64),
    #[error("isometry has determinant -1")]
    NotSpecial,
    #[error("matrix does not reverse the target")]
    NotAReversal,
    #[error("eta squared is not -1")]
    EtaSquareNotMinusOne,
    #[error("matrix is not in SL (determinant is not 1)")]
    NotSL,
    #[error("matrix is not conjugate to its inverse in GL (elementary divisors not closed under reciprocal)")]
    NotReversibleInGL,
    #[error("dimension is not 2 mod 4")]
    WrongDimensionClass,
    #[error("group order {0} exceeds the enumeration cap {1}")]
    GroupTooLarge(u64, u64),
    #[error("centralizer solution space of dimension {0} exceeds the cap {1}")]
    CentralizerTooLarge(usize, usize),
    #[error("unknown property suite: {0}")]
    UnknownSuite(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}; this is a bug")]
    Internal(String),
}
