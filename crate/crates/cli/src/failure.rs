use std::fmt;
use std::process::ExitCode;

pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Error carried up to `main`, with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub stage: Option<&'static str>,
    pub message: String,
}

impl Failure {
    pub fn infeasible(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            stage: None,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            stage: None,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            stage: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, stage: &'static str) -> Self {
        self.stage.get_or_insert(stage);
        self
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stage {
            Some(stage) => write!(f, "stage {stage}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl From<girthforge::Error> for Failure {
    fn from(e: girthforge::Error) -> Self {
        Failure::validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;
