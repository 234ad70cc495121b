use thiserror::Error;

/// Everything that can go wrong while building fields, curves, algebras or reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} is too large to encode")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("operands belong to different fields")]
    CrossField,
    #[error("zero has no inverse")]
    DivisionByZero,
    #[error("cannot embed F_{src_p}^{src_k} into F_{dst_p}^{dst_k}")]
    IncompatibleEmbedding {
        src_p: u32,
        src_k: u32,
        dst_p: u32,
        dst_k: u32,
    },

    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("counts are inconsistent with any scheme: {0}")]
    InconsistentCounts(String),
    #[error("insufficient precision: need at least {required} coefficients, have {got}")]
    InsufficientPrecision { required: usize, got: usize },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid local equation: {0}")]
    InvalidLocalEquation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve is singular; the two-path check needs a smooth curve")]
    SingularCurve,
    #[error("curve fails the integrality screen: {0}")]
    NotIntegral(String),

    #[error("work budget exceeded: estimated cost {estimate} > limit {limit} ({what})")]
    Budget { what: String, estimate: u128, limit: u128 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable process exit status for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } => 2,
            Error::InvalidCurve(_)
            | Error::InvalidLocalEquation(_)
            | Error::Parse(_)
            | Error::NotIntegral(_)
            | Error::NotPrime(_)
            | Error::ZeroDegree
            | Error::FieldTooLarge { .. }
            | Error::Io(_)
            | Error::Json(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
