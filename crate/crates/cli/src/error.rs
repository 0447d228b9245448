use std::fmt;

/// Run failures, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad config, files or problem parameters; exit status 1.
    Validation(String),
    /// Divergence or non-finite values during a run; exit status 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            CliError::Validation(s) | CliError::Numerical(s) => s,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error kind={} reason={:?}", self.kind(), self.reason())
    }
}

impl From<tscale_core::Error> for CliError {
    fn from(e: tscale_core::Error) -> Self {
        match e {
            tscale_core::Error::NonFinite { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
