use olkit_core::{Error, Law, Report};

/// Every failure maps to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Exhausted(String),
    #[error("{} law violation(s)", .0.violations.len())]
    Violations(Report),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violations(_) => 1,
            CliError::Exhausted(_) => 2,
            CliError::Input(_) => 3,
        }
    }

    /// Prefixes violation scopes.
    pub fn scoped(self, scope: &str) -> Self {
        match self {
            CliError::Violations(r) => {
                let mut out = Report::new();
                out.absorb(scope, r);
                CliError::Violations(out)
            }
            other => other,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotOrtholattice(r) => CliError::Violations(r),
            Error::CapExceeded { .. } => CliError::Exhausted(e.to_string()),
            Error::NonCommuting { i, k, witness } => {
                let mut r = Report::new();
                r.push(Law::Commute, vec![i, k, witness]);
                CliError::Violations(r)
            }
            Error::NotGenerated { set, element } => {
                let mut r = Report::new();
                r.push(Law::NablaUnion, vec![set, element]);
                CliError::Violations(r)
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
