use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid domain parameter: {0}")]
    DomainParameter(String),

    #[error("triangulation failed: {0}")]
    Triangulation(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("grading inverted triangle {triangle} (signed area {area:e})")]
    Grading { triangle: usize, area: f64 },

    #[error("invalid grading spec: {0}")]
    GradingSpec(String),

    #[error("degenerate element {triangle}: signed area {area:e}")]
    Element { triangle: usize, area: f64 },

    #[error("non-finite data value {value} at ({x}, {y})", x = .at.x, y = .at.y)]
    DataEvaluation { at: Point, value: f64 },

    #[error("exact gradient is singular at ({x}, {y})", x = .at.x, y = .at.y)]
    SingularPoint { at: Point },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-positive diagonal entry {value:e} in row {row}")]
    Preconditioner { row: usize, value: f64 },

    #[error("matrix is not positive definite (pᵀAp = {curvature:e} at iteration {iteration})")]
    NotSpd { iteration: usize, curvature: f64 },

    #[error("conjugate gradients did not converge: {iterations} iterations, relative residual {relative_residual:e}")]
    CgFailure {
        iterations: usize,
        relative_residual: f64,
    },

    #[error("nonlinearity violates the monotonicity assumption: d'({y}) = {slope} at ({x}, {py})", x = .at.x, py = .at.y)]
    Assumption { at: Point, y: f64, slope: f64 },

    #[error("nonlinearity derivative is inconsistent with finite differences at y = {y}: d' = {analytic}, fd = {numeric}")]
    DerivativeMismatch { y: f64, analytic: f64, numeric: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (last increment {increment:e}, relative residual {residual:e})")]
    NewtonFailure {
        iterations: usize,
        increment: f64,
        residual: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("level {level}: {source}")]
    Level {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
