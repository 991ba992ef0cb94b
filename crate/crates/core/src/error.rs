use thiserror::Error;

/// Location of a cell in the padded (ghost-inclusive) index space, or of an
/// interface between two cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Cell { i: isize, j: isize },
    XFace { i: isize, j: isize },
    YFace { i: isize, j: isize },
    Unknown,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Cell { i, j } => write!(f, "cell ({i}, {j})"),
            Location::XFace { i, j } => write!(f, "x-interface ({i}+1/2, {j})"),
            Location::YFace { i, j } => write!(f, "y-interface ({i}, {j}+1/2)"),
            Location::Unknown => write!(f, "unknown location"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("inadmissible state at {location}: rho = {rho}, p = {p}")]
    Inadmissible { location: Location, rho: f64, p: f64 },

    #[error("step failed in case `{case}` at t = {time}: {source}")]
    StepFailure {
        case: String,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("exact Riemann iteration failed to converge (residual {residual})")]
    NoConvergence { residual: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn at(self, location: Location) -> Self {
        match self {
            Error::Inadmissible { rho, p, .. } => Error::Inadmissible { location, rho, p },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
