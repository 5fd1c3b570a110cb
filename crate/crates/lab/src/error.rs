use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("format: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{module}: {source}")]
    Core {
        module: &'static str,
        #[source]
        source: splab_core::Error,
    },
    #[error("verify: {0} check(s) failed")]
    VerifyFailed(usize),
}

impl LabError {
    /// 1 for failed checks, 2 for bad input, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::VerifyFailed(_) => 1,
            LabError::Usage(_) | LabError::Config(_) => 2,
            _ => 3,
        }
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Format(e.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Format(e.to_string())
    }
}

/// Tags a core error with the module it came from.
pub fn tag(module: &'static str) -> impl Fn(splab_core::Error) -> LabError {
    move |source| LabError::Core { module, source }
}

pub type Result<T> = std::result::Result<T, LabError>;
