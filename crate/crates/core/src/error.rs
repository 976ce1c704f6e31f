use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("flux window too small: state {level} has {mass:.3e} probability in the outer 5% of the grid")]
    WindowTooSmall { level: usize, mass: f64 },
    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),
    #[error("no double well: beta_L = {0:.4} <= 1")]
    NoDoubleWell(f64),
    #[error("target {target:.6e} GHz outside bracket [{low:.6e}, {high:.6e}] GHz")]
    BracketFailure { target: f64, low: f64, high: f64 },
    #[error("singular flux equations: inductance matrix is not positive definite")]
    SingularSystem,
    #[error("{n} qubits exceeds the dense-simulation cap of {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("invalid register: {0}")]
    InvalidRegister(String),
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("circuit parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
