use thiserror::Error;

/// Errors surfaced by validation, I/O and the decision procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal: {0:?}")]
    BadRational(String),

    #[error("matrix is not unitriangular: entry ({row},{col}) is {value}, expected {expected}")]
    NotUnitriangular { row: usize, col: usize, value: String, expected: String },

    #[error("instance error: {0}")]
    BadInstance(String),

    #[error("nilpotency class bound {class} exceeds the supported bound {max} \
             (pass a higher --max-class together with --assume-conjecture to proceed)")]
    ClassTooHigh { class: usize, max: usize },

    #[error("running with class bound {0} > 10 requires --assume-conjecture")]
    ConjectureRequired(usize),

    #[error("k = {0} out of supported range {1}")]
    KOutOfRange(usize, &'static str),

    #[error("evaluation guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("malformed certificate: {0}")]
    BadCertificate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
