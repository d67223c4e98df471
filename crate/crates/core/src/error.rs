use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter index {index} out of range for {total} parameters")]
    ParameterIndex { index: usize, total: usize },

    #[error("division by a zero real part")]
    DivisionByZero,

    #[error("{function} is not defined at {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("attachment `{name}`: {message}")]
    Attachment { name: String, message: String },

    #[error("attachment `{name}` is missing recorded inputs: {}", missing.join(", "))]
    MissingInputs { name: String, missing: Vec<String> },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("mass matrix is singular or not positive definite")]
    SingularMassMatrix,

    #[error("non-finite {0}")]
    NonFinite(String),

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("window {window}: {source}")]
    Window {
        window: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid trajectory: {0}")]
    Trajectory(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("non-finite residuals at the initial point")]
    NonFiniteStart,

    #[error("damped normal equations stayed singular up to lambda = {0:e}")]
    SingularNormalEquations(f64),

    #[error("all {0} restarts failed")]
    AllRestartsFailed(usize),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_window(self, window: usize) -> Self {
        Error::Window {
            window,
            source: Box::new(self),
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
