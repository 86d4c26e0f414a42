use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;

use super::norms::{error_h1_semi, error_l2, error_linf_discrete, h1_norm_discrete};
use super::rates::{eoc, predicted_rate, PredictedRate, RateBasis};
use super::BenchmarkProblem;
use crate::geometry::{
    apply_grading, build_sector_domain, coarse_triangulation, uniform_refine, GradingSpec,
    TriangleMesh,
};
use crate::quadrature::TriangleRule;
use crate::solver::{ritz_projection, solve_linear, solve_semilinear, SolveOptions};
use crate::{Error, Exec, Result};

pub const CSV_HEADER: &str =
    "level,h,nodes,triangles,err_linf,eoc_linf,err_l2,eoc_l2,err_h1,solver_iters";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Linear,
    /// `d(y) = y³` with data chosen so that the benchmark function stays exact.
    SemilinearCubic,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Linear => "linear",
            ProblemKind::SemilinearCubic => "cubic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub omega: f64,
    pub mu: f64,
    pub radius: f64,
    /// Numbers of uniform refinements of the coarse mesh.
    pub levels: RangeInclusive<usize>,
    pub problem: ProblemKind,
    pub solve: SolveOptions,
    /// Quadrature degree of the L² and H¹ error norms.
    pub error_degree: usize,
    /// Policy for running levels concurrently.
    pub exec: Exec,
}

impl StudyConfig {
    /// Four levels ending at `h = √2/128` (level 7), `R = 1`, linear problem.
    pub fn new(omega: f64, mu: f64) -> Self {
        StudyConfig {
            omega,
            mu,
            radius: 1.0,
            levels: 4..=7,
            problem: ProblemKind::Linear,
            solve: SolveOptions::default(),
            error_degree: 7,
            exec: Exec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        build_sector_domain(self.omega)?;
        GradingSpec::at_origin(self.radius, self.mu)?;
        if self.radius > 1.0 {
            return Err(Error::GradingSpec(format!(
                "radius = {} exceeds the inscribed radius 1 of the sector",
                self.radius
            )));
        }
        if self.levels.is_empty() {
            return Err(Error::DomainParameter(format!(
                "empty level range {:?}",
                self.levels
            )));
        }
        if self.error_degree < 4 {
            return Err(Error::DomainParameter(
                "error quadrature degree must be at least 4".into(),
            ));
        }
        Ok(())
    }
}

/// Coarse fan, `level` red refinements, then grading about the origin.
pub fn graded_sector_mesh(omega: f64, mu: f64, radius: f64, level: usize) -> Result<TriangleMesh> {
    let domain = build_sector_domain(omega)?;
    let mut mesh = coarse_triangulation(&domain)?;
    for _ in 0..level {
        mesh = uniform_refine(&mesh);
    }
    apply_grading(&mesh, &GradingSpec::at_origin(radius, mu)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub h: f64,
    pub nodes: usize,
    pub triangles: usize,
    pub err_linf: f64,
    pub eoc_linf: Option<f64>,
    pub err_l2: f64,
    pub eoc_l2: Option<f64>,
    pub err_h1: f64,
    /// Total CG iterations spent on the level.
    pub solver_iters: usize,
    pub newton_iters: Option<usize>,
    /// `‖ỹ_h − y_h‖_{H¹} / ‖y − ỹ_h‖_{L²}` for the semilinear problem.
    pub superclose_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    pub lambda: f64,
    pub predicted: PredictedRate,
    pub rows: Vec<LevelResult>,
}

fn run_level(config: &StudyConfig, bench: &BenchmarkProblem, level: usize) -> Result<LevelResult> {
    let mesh = graded_sector_mesh(config.omega, config.mu, config.radius, level)?;
    let opts = &config.solve;
    let exact = |x| bench.exact(x);
    let (y, solver_iters, newton_iters, superclose_ratio) = match config.problem {
        ProblemKind::Linear => {
            let sol = solve_linear(&mesh, &bench.linear_problem(), opts)?;
            (sol.y, sol.cg.iterations, None, None)
        }
        ProblemKind::SemilinearCubic => {
            let (y, newton) = solve_semilinear(&mesh, &bench.cubic_problem(), opts)?;
            let ritz = ritz_projection(&mesh, bench, opts)?;
            let rule = TriangleRule::with_degree(config.error_degree);
            let diff: Vec<f64> = ritz.y.iter().zip(&y).map(|(a, b)| a - b).collect();
            let close = h1_norm_discrete(&mesh, &diff, opts.exec)?;
            let ritz_l2 = error_l2(&mesh, &ritz.y, exact, &rule, opts.exec)?;
            let iters = newton.total_cg_iterations() + ritz.cg.iterations;
            (y, iters, Some(newton.iterations), Some(close / ritz_l2))
        }
    };
    let rule = TriangleRule::with_degree(config.error_degree);
    Ok(LevelResult {
        level,
        h: mesh.h_global(),
        nodes: mesh.num_nodes(),
        triangles: mesh.num_triangles(),
        err_linf: error_linf_discrete(&mesh, &y, exact)?,
        eoc_linf: None,
        err_l2: error_l2(&mesh, &y, exact, &rule, opts.exec)?,
        eoc_l2: None,
        err_h1: error_h1_semi(&mesh, &y, |x| bench.gradient(x), &rule, opts.exec)?,
        solver_iters,
        newton_iters,
        superclose_ratio,
    })
}

/// Builds, solves and measures every level; EOCs pair consecutive levels of
/// this study only.
pub fn run_convergence_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let bench = BenchmarkProblem::new(config.omega)?;
    let levels: Vec<usize> = config.levels.clone().collect();
    let mut rows = config.exec.try_map(levels.len(), |k| {
        run_level(config, &bench, levels[k]).map_err(|e| Error::Level {
            level: levels[k],
            source: Box::new(e),
        })
    })?;
    for k in 1..rows.len() {
        let (prev, curr) = (&rows[k - 1], &rows[k]);
        let linf = eoc(prev.err_linf, curr.err_linf, prev.h, curr.h);
        let l2 = eoc(prev.err_l2, curr.err_l2, prev.h, curr.h);
        rows[k].eoc_linf = linf;
        rows[k].eoc_l2 = l2;
    }
    Ok(ConvergenceReport {
        config: config.clone(),
        lambda: bench.lambda(),
        predicted: predicted_rate(bench.lambda(), config.mu),
        rows,
    })
}

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

impl ConvergenceReport {
    /// EOC pair of the two finest levels.
    pub fn finest_eoc_linf(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.eoc_linf)
    }

    pub fn finest_eoc_l2(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.eoc_l2)
    }

    /// CSV with `#`-prefixed configuration lines. Byte-identical for identical configs.
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let basis = match self.predicted.basis {
            RateBasis::Graded => "graded",
            RateBasis::QuasiUniform => "quasi-uniform",
            RateBasis::Empirical => "empirical",
        };
        let _ = writeln!(s, "# omega={:.17e}", c.omega);
        let _ = writeln!(s, "# lambda={:.17e}", self.lambda);
        let _ = writeln!(s, "# mu={}", c.mu);
        let _ = writeln!(s, "# radius={}", c.radius);
        let _ = writeln!(s, "# levels={}..{}", c.levels.start(), c.levels.end());
        let _ = writeln!(s, "# problem={}", c.problem.name());
        let _ = writeln!(s, "# quad_degree_vol={}", c.solve.vol_degree);
        let _ = writeln!(s, "# quad_degree_edge={}", c.solve.edge_degree);
        let _ = writeln!(s, "# error_degree={}", c.error_degree);
        let _ = writeln!(s, "# cg_tol={:e}", c.solve.cg.tol);
        let _ = writeln!(s, "# newton_tol={:e}", c.solve.newton.increment_tol);
        let _ = writeln!(
            s,
            "# predicted_eoc_linf={} ({basis})",
            sci(self.predicted.rate)
        );
        let _ = writeln!(s, "{CSV_HEADER}");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.level,
                sci(r.h),
                r.nodes,
                r.triangles,
                sci(r.err_linf),
                opt(r.eoc_linf),
                sci(r.err_l2),
                opt(r.eoc_l2),
                sci(r.err_h1),
                r.solver_iters
            );
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}
