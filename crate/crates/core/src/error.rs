use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid node system: {0}")]
    InvalidNodeSystem(String),
    #[error("argument {value} outside domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval {
        a: f64,
        b: f64,
        reason: &'static str,
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("unknown kernel family `{0}`")]
    UnknownFamily(String),
    #[error("unsupported for {what}: {reason}")]
    Unsupported {
        what: &'static str,
        reason: &'static str,
    },
    #[error("interval maximum m_{index} is -inf; node system is outside the regularity set")]
    NotRegular { index: usize },
    #[error("no starting point in the regularity set found after {attempts} attempts")]
    Infeasible { attempts: usize },
    #[error("{0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
