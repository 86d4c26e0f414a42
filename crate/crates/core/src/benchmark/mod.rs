//! The `r^λ cos(λφ)` benchmark, error norms, experimental orders of
//! convergence and the convergence-study driver.

mod norms;
mod problem;
mod rates;
mod study;

pub use norms::{
    error_h1_semi, error_l2, error_linf_discrete, h1_norm_discrete, h1_semi_difference, interpolate,
};
pub use problem::BenchmarkProblem;
pub use rates::{eoc, predicted_linf_rate, predicted_rate, PredictedRate, RateBasis};
pub use study::{
    graded_sector_mesh, run_convergence_study, ConvergenceReport, LevelResult, ProblemKind,
    StudyConfig, CSV_HEADER,
};
