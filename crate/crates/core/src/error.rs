use thiserror::Error;

pub type Result<T> = std::result::Result<T, BreuilError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BreuilError {
    #[error("ring parameters violate a constraint: {0}")]
    ParamViolation(String),
    #[error("objects live over different rings: {0}")]
    ParamMismatch(String),
    #[error("element is not a unit (constant term is zero)")]
    NotAUnit,
    #[error("filtration levels must satisfy a <= b (got a = {a}, b = {b})")]
    InvalidLevels { a: u32, b: u32 },
    #[error("matrix is not invertible over T_s")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a presentation: invariant exponent {exponent} exceeds er = {er}")]
    NotAPresentation { exponent: usize, er: usize },
    #[error("matrix does not define a morphism: {0}")]
    NotAMorphism(String),
    #[error("sequence is not short exact: {0}")]
    NotExact(String),
    #[error("regime not admissible: {0}")]
    RegimeViolation(String),
    #[error("truncation levels not admissible: {0}")]
    LevelViolation(String),
    #[error("monodromy requires r < p - 1 (got r = {r}, p = {p})")]
    RankViolation { r: u32, p: u32 },
    #[error("lifted data failed verification: {0}")]
    VerificationFailed(String),
    #[error("internal consistency check failed: {0}")]
    InternalCheckFailed(String),
    #[error("unipotency criteria disagree (dual test: {dual}, product test: {product})")]
    CriteriaDisagree { dual: bool, product: bool },
    #[error("isomorphism search inconclusive: morphism space too large for exhaustive search ({dimension})")]
    SearchInconclusive { dimension: usize },
    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
    #[error("validation failed: {0}")]
    ValidationError(Box<BreuilError>),
}

impl BreuilError {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        BreuilError::InternalCheckFailed(msg.into())
    }
}
