use thiserror::Error;

/// Errors shared by all modules. Validation routines that report structural
/// violations (complex axioms, refinement axioms) return those as data
/// instead; `Error` is reserved for conditions that abort a computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// 64-bit integer overflow. Arithmetic is checked everywhere; overflow
    /// aborts the operation instead of wrapping.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has no left inverse on the given sublattice")]
    NoLeftInverse,

    #[error("no integer solution")]
    NoIntegerSolution,

    #[error("sublattice basis columns are linearly dependent")]
    DependentBasis,

    #[error("selector does not identify a face of the monoid")]
    NotAFace,

    #[error("unexpected torsion in lattice quotient")]
    TorsionQuotient,

    #[error("ray lies outside the support of the complex")]
    RayOutsideSupport,

    #[error("point violates monoid relation {relation}: lhs={lhs}, rhs={rhs}")]
    RelationViolation {
        relation: String,
        lhs: f64,
        rhs: f64,
    },

    #[error("coordinate {index} is negative")]
    NegativeCoordinate { index: usize },

    #[error("coordinate {index} is not strictly positive")]
    NonPositiveCoordinate { index: usize },

    #[error("homomorphism does not map the monoid into the target monoid")]
    NotAMonoidHom,

    #[error("map is not interior: image lands in the proper face {face}")]
    NonInterior { face: String },

    #[error("exponent matrix violates relation {relation}")]
    ExponentRelationViolation { relation: String },

    #[error("negative exponent on sharp coordinate at ({row},{col})")]
    NegativeExponent { row: usize, col: usize },

    #[error("map does not factor through the refinement")]
    FactorizationFailed,

    #[error("element is not a nonnegative combination of the generators")]
    NotInMonoid,

    #[error("{0}")]
    InvalidComplex(String),

    #[error("{0}")]
    InvalidRefinement(String),

    #[error("resolution did not terminate within {cap} subdivisions")]
    IterationCapExceeded { cap: usize },
}
