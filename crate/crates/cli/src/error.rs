use thiserror::Error;

use nborient_core::Error as CoreError;
use nborient_mass::MassError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("corpus self-test failed: {0}")]
    SelfTest(String),
    #[error("{0}")]
    Core(CoreError),
    #[error("{0}")]
    Mass(MassError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(m) => CliError::Parse(m),
            CoreError::Budget(m) => CliError::Budget(m),
            CoreError::GroupTooLarge(n) => CliError::Budget(format!("group closure exceeded {n} elements")),
            other => CliError::Core(other),
        }
    }
}

impl From<MassError> for CliError {
    fn from(e: MassError) -> Self {
        match e {
            MassError::Core(c) => c.into(),
            other => CliError::Mass(other),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const FALSIFIED: i32 = 3;
    pub const BUDGET: i32 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Budget(_) => exit::BUDGET,
            _ => exit::FAILURE,
        }
    }
}
