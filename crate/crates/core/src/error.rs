use alloc::string::String;

pub type Result<T, E = KzError> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KzError {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    VariableMismatch { left: String, right: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    BadVariable { index: usize, nvars: usize },
    #[error("{0} variables requested, at most 8 are supported")]
    TooManyVariables(usize),
    #[error("exponent overflow (limit 65535 per variable)")]
    ExponentOverflow,
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("expected {expected} entries, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid exponent vector M: {0}")]
    InvalidMVector(String),
    #[error("division does not terminate with a zero remainder")]
    InexactDivision,
    #[error("{value} is not a unit modulo {p}")]
    NotAUnit { value: u64, p: u64 },
    #[error("{alpha} is not a nonzero quadratic residue mod {p}")]
    NotASquare { alpha: u64, p: u64 },
    #[error("branch {beta} does not square to {alpha} mod {p}")]
    WrongBranch { beta: u64, alpha: u64, p: u64 },
    #[error("p-adic precision exhausted: need {needed} digits, have {available}")]
    PrecisionExhausted { needed: u32, available: u32 },
    #[error("coefficient c[{r},{l}] is not a quasi-constant modulo p^{r}")]
    NotQuasiConstant { r: u32, l: u64 },
    #[error("relation is not triangular: {0}")]
    NotTriangular(String),
}
