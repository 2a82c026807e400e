use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants carry rendered values rather than the values themselves so the
/// error stays cheap to clone and print.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group family mismatch: {0} vs {1}")]
    FamilyMismatch(String, String),
    #[error("{elem} does not lie in {group}")]
    NotInGroup { elem: String, group: String },
    #[error("invalid group description: {0}")]
    InvalidGroup(String),
    #[error("element {0} must be strictly positive")]
    NotPositive(String),
    #[error("{0} is not in the span of the generators")]
    NotInSpan(String),
    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),

    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("variable sets differ: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("denominator vanishes at the evaluation point")]
    Pole,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot invert a series that is zero to precision {0}")]
    ZeroToPrecision(String),
    #[error("product of two series that are both zero to finite precision is not certifiable")]
    UncertifiableProduct,
    #[error("undecidable at available precision: {0}")]
    Undecidable(String),
    #[error("requested precision {target} cannot be reached: {reason}")]
    PrecisionUnreachable { target: String, reason: String },
    #[error("insufficient input precision: {0}")]
    InsufficientPrecision(String),
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("residue polynomial has no simple root in the residue field")]
    NoResidueRoot,
    #[error("Jacobian is singular at the residue level")]
    SingularJacobian,
    #[error("the point is singular: {0}")]
    SingularPoint(String),
    #[error("perturbation value {value} does not exceed threshold {threshold}")]
    PerturbationTooLarge { value: String, threshold: String },
    #[error("wrong Artin-Schreier case: {0}")]
    WrongCase(String),

    #[error("place hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("malformed uniformization witness: {0}")]
    MalformedWitness(String),
    #[error("Abhyankar inequality violated: trdeg {ambient} < dim {dim} + rr {rr}")]
    AbhyankarViolated { ambient: usize, dim: usize, rr: usize },
    #[error("residue transcendence of a custom series embedding must be declared")]
    UndeclaredTranscendence,

    #[error("unknown scenario {0}")]
    UnknownScenario(String),
    #[error("invalid scenario parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
