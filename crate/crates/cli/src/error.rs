use serde_json::json;

use multigauss::Error;

/// Failures with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or parameters: exit 2.
    Invalid(String),
    /// Error raised by the library; the code depends on the variant.
    Library(Error),
    /// Output could not be written: exit 2.
    Io(std::io::Error),
    /// Some verification reports failed: exit 1.
    VerificationFailed { failed: usize, total: usize },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Library(
                Error::NotConverged { .. } | Error::IllConditioned { .. } | Error::QuadratureFailed { .. },
            ) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Invalid(_) => "invalid_input",
            CliError::Io(_) => "io",
            CliError::VerificationFailed { .. } => "verification_failed",
            CliError::Library(e) => match e {
                Error::NotConverged { .. } => "not_converged",
                Error::IllConditioned { .. } => "ill_conditioned",
                Error::QuadratureFailed { .. } => "quadrature_failed",
                _ => "invalid_input",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Invalid(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
            CliError::Library(e) => e.to_string(),
            CliError::VerificationFailed { failed, total } => {
                format!("{failed} of {total} verification reports failed")
            }
        }
    }

    /// Machine-readable error object for stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "error": self.kind(),
            "message": self.message(),
            "exit_code": self.exit_code(),
        });
        let diagnostics = match self {
            CliError::Library(Error::NotConverged { terms, error_estimate, condition_number, .. }) => {
                Some(json!({
                    "terms_used": terms,
                    "error_estimate": error_estimate,
                    "condition_number": condition_number,
                }))
            }
            CliError::Library(Error::IllConditioned { condition_number, .. }) => {
                Some(json!({ "condition_number": condition_number }))
            }
            _ => None,
        };
        if let Some(d) = diagnostics {
            v["diagnostics"] = d;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Invalid("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(Error::InvalidShape(-1.0)).exit_code(), 2);
        let nc = Error::NotConverged {
            what: "C0(M)".into(),
            terms: 10,
            error_estimate: 1e-3,
            condition_number: 1.0,
        };
        let e = CliError::from(nc);
        assert_eq!(e.exit_code(), 3);
        assert_eq!(e.to_json()["diagnostics"]["terms_used"], 10);
        assert_eq!(CliError::VerificationFailed { failed: 1, total: 2 }.exit_code(), 1);
    }
}
