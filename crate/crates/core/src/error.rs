use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("root enumeration exceeded {0} roots (Cartan matrix is not of finite type)")]
    NotFiniteType(usize),

    #[error("Weyl group has more than {0} elements")]
    WeylGroupTooLarge(usize),

    #[error("rank {rank} exceeds the supported maximum of {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("simple index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0:?} is not a root")]
    NotARoot(Vec<i64>),

    #[error("subset mask {mask:#b} is not contained in [{len}]")]
    InvalidSubset { mask: u64, len: usize },

    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("not divisible: obstruction at monomial {monomial:?} (degree {degree})")]
    NotDivisible { monomial: Vec<u32>, degree: u32 },

    #[error("constant term {0} is not a unit of the coefficient ring")]
    NotUnit(String),

    #[error("precision exhausted: operation needs precision {needed}, operand has {available}")]
    PrecisionExhausted { needed: u32, available: u32 },

    #[error("invalid formal group law: {0}")]
    InvalidFgl(String),

    #[error("residual denominator {roots:?} at Weyl element {word:?}")]
    ResidualDenominator {
        word: Vec<usize>,
        roots: Vec<Vec<i64>>,
    },

    #[error("mismatched operands: {0}")]
    Mismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by running out of truncation precision
    /// rather than by a mathematical obstruction.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionExhausted { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
