use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variant names double as the machine-readable error names emitted by the
/// CLI; [`Error::module`] names the subsystem that raised it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // nf_core
    #[error("{0} is not squarefree (or is 0 or 1)")]
    NotSquarefree(i64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("work limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("operation needs exact arithmetic, which asserted field profiles do not provide")]
    AssertedFieldUnsupported,
    #[error("inconsistent field invariants: {0}")]
    InconsistentInvariants(String),
    #[error("elements live in different quadratic fields")]
    FieldMismatch,

    // heights
    #[error("S must contain every infinite place")]
    MissingInfinitePlace,
    #[error("domain error: {0}")]
    Domain(String),

    // bounds
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("formula requires at least one finite place in S (t > 0)")]
    RequiresFinitePlaces,
    #[error("element is not an S-integer")]
    NotSIntegral,

    // forms
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient outside the modeled field: {0}")]
    UnsupportedCoefficientField(String),
    #[error("form does not split into linear factors over the modeled field")]
    DoesNotSplit,
    #[error("forms in three or more variables need an explicit factorization")]
    FactorsRequired,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),

    // verify
    #[error("search box has {size} candidates, over the budget of {budget}")]
    BoxTooLarge { size: u128, budget: u128 },
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("local height inequality violated: {0}")]
    Prop4Violated(String),
    #[error("linear form lower bound violated: {0}")]
    Prop5Violated(String),
    #[error("no witness found within the search box")]
    WitnessNotFound,

    // cli
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier, e.g. `"NotSquarefree"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::NotPrime(_) => "NotPrime",
            Error::LimitExceeded(_) => "LimitExceeded",
            Error::AssertedFieldUnsupported => "AssertedFieldUnsupported",
            Error::InconsistentInvariants(_) => "InconsistentInvariants",
            Error::FieldMismatch => "FieldMismatch",
            Error::MissingInfinitePlace => "MissingInfinitePlace",
            Error::Domain(_) => "DomainError",
            Error::UnknownConstant(_) => "UnknownConstant",
            Error::ParamOutOfRange(_) => "ParamOutOfRange",
            Error::RequiresFinitePlaces => "RequiresFinitePlaces",
            Error::NotSIntegral => "NotSIntegral",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnsupportedCoefficientField(_) => "UnsupportedCoefficientField",
            Error::DoesNotSplit => "DoesNotSplit",
            Error::FactorsRequired => "FactorsRequired",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::NotApplicable(_) => "NotApplicable",
            Error::BoxTooLarge { .. } => "BoxTooLarge",
            Error::BoundViolated(_) => "BoundViolated",
            Error::Prop4Violated(_) => "Prop4Violated",
            Error::Prop5Violated(_) => "Prop5Violated",
            Error::WitnessNotFound => "WitnessNotFound",
            Error::Schema(_) => "SchemaError",
            Error::Io(_) => "IoError",
        }
    }

    /// Subsystem that raises this error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::NotSquarefree(_)
            | Error::NotPrime(_)
            | Error::LimitExceeded(_)
            | Error::AssertedFieldUnsupported
            | Error::InconsistentInvariants(_)
            | Error::FieldMismatch => "nf_core",
            Error::MissingInfinitePlace | Error::Domain(_) => "heights",
            Error::UnknownConstant(_)
            | Error::ParamOutOfRange(_)
            | Error::RequiresFinitePlaces
            | Error::NotSIntegral => "bounds",
            Error::NotHomogeneous
            | Error::Syntax { .. }
            | Error::UnsupportedCoefficientField(_)
            | Error::DoesNotSplit
            | Error::FactorsRequired
            | Error::VerificationFailed(_)
            | Error::NotApplicable(_) => "forms",
            Error::BoxTooLarge { .. }
            | Error::BoundViolated(_)
            | Error::Prop4Violated(_)
            | Error::Prop5Violated(_)
            | Error::WitnessNotFound => "verify",
            Error::Schema(_) | Error::Io(_) => "cli",
        }
    }

    /// Universal inequalities that failed on a concrete counterexample.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Error::BoundViolated(_) | Error::Prop4Violated(_) | Error::Prop5Violated(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
