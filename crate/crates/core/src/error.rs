//! Error types shared across the crate.

use thiserror::Error;

/// Failures of exact circle-value arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("modulus {0} exceeds the hard arithmetic ceiling")]
    ModulusOverflow(u64),
    #[error("modulus {modulus} exceeds the configured limit {limit}")]
    ModulusLimit { modulus: u64, limit: u64 },
}

/// Violations found while validating raw groupoid tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("composition is not associative at triple ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("unit axiom fails at element {0}")]
    BadUnit(usize),
    #[error("inverse axiom fails at element {0}")]
    BadInverse(usize),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("subgroupoid is not closed: {0}")]
    NotClosed(String),
    #[error("subgroupoid is not normal: {0}")]
    NotNormal(String),
}

/// Violations of twist/cocycle structure and preconditions of twisted ops.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("cocycle is not normalized at element {0}")]
    NotNormalized(usize),
    #[error("cocycle identity fails at triple ({0}, {1}, {2})")]
    CocycleIdentity(usize, usize, usize),
    #[error("cocycle entry on non-composable pair ({0}, {1})")]
    BadEntry(usize, usize),
    #[error("cocycle is not well defined: {0}")]
    IllDefined(String),
    #[error("twist elements with bases {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("restricted twist is not abelian over unit {0}")]
    NotAbelian(usize),
    #[error("cocycle restricted to the fiber is not symmetric, not a coboundary candidate")]
    NotCoboundary,
    #[error("map is not homomorphic on the given subgroup")]
    NotHomomorphic,
    #[error("fiber mismatch: element over unit {0}, character over unit {1}")]
    FiberMismatch(usize, usize),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// Failures of the higher-level checks and constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("normalizer has no support over the character's unit")]
    NotInDomain,
    #[error("equivalence criteria disagree: {0}")]
    CriteriaDisagree(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

/// Failures of the symbolic rotation engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("lattice is rank deficient where a full-rank subgroup is required")]
    RankDeficient,
    #[error("generators ({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("subgroup shape is not covered by the implemented criteria: {0}")]
    Unsupported(String),
}
