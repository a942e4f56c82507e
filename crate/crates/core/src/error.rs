use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {family} parameters: {reason}")]
    InvalidArm { family: &'static str, reason: String },

    #[error("bandit instance needs at least two arms, got {0}")]
    TooFewArms(usize),

    #[error("arms mix several families")]
    MixedFamilies,

    #[error("operation not supported for {family}: {what}")]
    Unsupported { family: &'static str, what: &'static str },

    #[error("sub-sample size {n} exceeds history length {m}")]
    SubsetTooLarge { m: usize, n: usize },

    #[error("sub-sample size must be positive")]
    EmptySubset,

    #[error("reward {reward} outside the supported range [{lo}, {hi}]")]
    RewardOutOfRange { reward: f64, lo: f64, hi: f64 },

    #[error("subset of size {subset} does not match challenger history of length {challenger}")]
    DuelSizeMismatch { subset: usize, challenger: usize },

    #[error("horizon {horizon} is smaller than the number of arms {arms}")]
    HorizonTooShort { horizon: usize, arms: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
