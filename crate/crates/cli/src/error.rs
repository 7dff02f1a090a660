use multiforest::laws::LawError;
use multiforest::model::{LoadError, OffspringError};
use multiforest::oracle::OracleError;
use multiforest::sampling::SamplingError;

#[derive(Debug)]
pub enum CliError {
    /// A verification ran and failed.
    Failed(String),
    Invalid(String),
    Parse(String),
    Budget(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) | CliError::Io(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Failed(m) => write!(f, "verification failed: {}", m),
            CliError::Invalid(m) => write!(f, "invalid input: {}", m),
            CliError::Parse(m) => write!(f, "parse error: {}", m),
            CliError::Budget(m) => write!(f, "budget exceeded: {}", m),
            CliError::Io(e) => write!(f, "i/o error: {}", e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse(m) => CliError::Parse(m),
            LoadError::Invalid(v) => CliError::Invalid(v.to_string()),
        }
    }
}

impl From<OffspringError> for CliError {
    fn from(e: OffspringError) -> Self {
        match e {
            OffspringError::Parse(m) => CliError::Parse(m),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<LawError> for CliError {
    fn from(e: LawError) -> Self {
        match e {
            LawError::Budget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<SamplingError> for CliError {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::MaxTrials { .. } | SamplingError::TooLarge { .. } => CliError::Budget(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } => CliError::Budget(e.to_string()),
            OracleError::Sampling(s) => s.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<multiforest::cyclic::CyclicError> for CliError {
    fn from(e: multiforest::cyclic::CyclicError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
