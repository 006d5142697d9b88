use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("antiderivative unavailable: {0}")]
    AntiderivativeUnavailable(&'static str),

    #[error("invalid nonlinearity: {0}")]
    InvalidModel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("omega = {omega} outside the existence window: {reason}")]
    OmegaOutOfRange { omega: f64, reason: String },

    #[error("domain too small: half-width {half_width} < required {required}")]
    DomainTooSmall { half_width: f64, required: f64 },

    #[error("no sign change in shooting map: {0}")]
    NoShootingBracket(String),

    #[error("newton iteration did not converge after {iterations} steps (last residual {residual:.3e})")]
    NewtonDiverged { iterations: usize, residual: f64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("matrix of size {size} exceeds the configured maximum {max}")]
    TooLarge { size: usize, max: usize },

    #[error("eigenvectors required for this operation")]
    MissingEigenvectors,

    #[error("contour grazes spectrum: eigenvalue at distance {distance:.3e} from circle of radius {radius:.3e}")]
    ContourGrazesSpectrum { distance: f64, radius: f64 },

    #[error("kinetic energy has imaginary residue {0:.3e}")]
    ImaginaryKinetic(f64),

    #[error("no instability detected: smallest eigenvalue {0:.6e} is non-negative")]
    NoInstability(f64),

    #[error("omega = {0} is not interior to the charge curve")]
    EdgeOmega(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
