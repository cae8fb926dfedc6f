use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed network file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid network: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("{intermediate} intermediate nodes would give 2^{intermediate} cuts (limit 2^24)")]
    TooManyCuts { intermediate: usize },

    #[error("non-finite log-det value on cut {cut}")]
    Numeric { cut: String },

    #[error("enumeration of 2^{log2_size} input tuples exceeds the budget of 2^{limit_log2}")]
    EnumerationTooLarge { log2_size: u32, limit_log2: u32 },

    #[error("Monte Carlo budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("matrix has non-zero imaginary parts; expand it to real form first")]
    NonRealMatrix,

    #[error("certification failed at sample {sample}: {variable} = {value}")]
    Certification {
        sample: usize,
        variable: String,
        value: f64,
    },
}
