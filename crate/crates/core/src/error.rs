use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol `{op}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}` in signature")]
    DuplicateSymbol(String),
    #[error("signature has no symbols")]
    EmptySignature,
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("term depth exceeds limit of {0}")]
    DepthLimit(usize),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("coalgebra and algebra are over different signatures")]
    SignatureMismatch,
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("search space of {0} candidates exceeds the budget")]
    BudgetExceeded(u128),
    #[error("map is not a coalgebra-to-algebra morphism (fails at state `{0}`)")]
    NotCaMorphism(String),
    #[error("bijection check failed: {0}")]
    BijectionViolation(String),
    #[error("carrier has {size} elements; exhaustive mode is limited to {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("initial set is not post-fixed: `{witness}` is in I but not in F(I)")]
    NotPostFixed { witness: String },
    #[error("safe set is not pre-fixed: `{witness}` is in F(P) but not in P")]
    NotPreFixed { witness: String },
    #[error("operator is not monotone: {0}")]
    NotMonotone(String),
    #[error("subdivision depth {0} exceeds the limit")]
    SubdivisionDepth(u32),
}

impl Error {
    /// A stable kebab-case name for the variant, for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::UnknownSymbol(_) => "unknown-symbol",
            Error::DuplicateSymbol(_) => "duplicate-symbol",
            Error::EmptySignature => "empty-signature",
            Error::Parse { .. } => "parse",
            Error::DepthLimit(_) => "depth-limit",
            Error::UnboundVariable(_) => "unbound-variable",
            Error::SignatureMismatch => "signature-mismatch",
            Error::Invalid(_) => "invalid",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::NotCaMorphism(_) => "not-ca-morphism",
            Error::BijectionViolation(_) => "bijection-violation",
            Error::BoundExceeded { .. } => "bound-exceeded",
            Error::NotPostFixed { .. } => "not-post-fixed",
            Error::NotPreFixed { .. } => "not-pre-fixed",
            Error::NotMonotone(_) => "not-monotone",
            Error::SubdivisionDepth(_) => "subdivision-depth",
        }
    }
}
