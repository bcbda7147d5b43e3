use serde::Serialize;

use blochapprox::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing input; exit 2.
    Validation(String),
    /// No closed form for this input and no oracle fallback requested; exit 3.
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }

    /// Single-line JSON for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            code: i32,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        let (kind, message) = match self {
            CliError::Validation(m) => ("validation", m.as_str()),
            CliError::Unsupported(m) => ("unsupported", m.as_str()),
        };
        let body = Wrapper { error: Body { kind, code: self.exit_code(), message } };
        serde_json::to_string(&body).expect("error body serializes")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonCanonical { .. } | Error::UnsupportedAngle { .. } => {
                CliError::Unsupported(format!("{e} (--oracle-fallback)"))
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}
