use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank {rank} out of range for family {family}")]
    RankOutOfRange { family: String, rank: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("group exceeds cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("coefficient domain mismatch ({left} vs {right})")]
    DomainMismatch { left: &'static str, right: &'static str },
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("form is not invariant under the group")]
    NotInvariant,
    #[error("form is not in the subalgebra generated by the chosen invariants")]
    NoSolution,
    #[error("no canonical basic invariants for family {0}")]
    NoCanonicalInvariants(String),
    #[error("no invariant forms of degree {0}")]
    NoFormsAtDegree(u32),
    #[error("Jacobian factorization failed: residual has {terms} terms")]
    FactorizationFailed { terms: usize },
    #[error("locus mismatch: {0}")]
    LocusMismatch(String),
    #[error("minor factorization not established for family {0}")]
    MinorFactorizationUnknown(String),
    #[error("flat has dimension zero")]
    DegenerateFlat,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("base point is not general")]
    NotGeneral,
    #[error("basic invariant {index} vanishes at the base point")]
    DegenerateBasePoint { index: usize },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("special point search failed: {0}")]
    SearchFailed(String),
    #[error("form is not of the shape A(g) + g_(j+1) B(g)")]
    NotInSparseForm,
    #[error("form is not linear in the last invariant")]
    LinearityViolated,
    #[error("parse error: {0}")]
    Parse(String),
}
