use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use gradfem::benchmark::{
    error_h1_semi, error_l2, error_linf_discrete, graded_sector_mesh, run_convergence_study,
    BenchmarkProblem, ProblemKind,
};
use gradfem::geometry::io::{read_mesh, write_mesh};
use gradfem::geometry::{
    audit_grading, compute_h_global, AuditConstants, GradingSpec, TriangleMesh,
};
use gradfem::quadrature::TriangleRule;
use gradfem::solver::{solve_linear, solve_semilinear, LinearProblem, SolveOptions};

use crate::config::{ConfigError, RawConfig, Settings};

pub enum CliError {
    Config(ConfigError),
    Core(gradfem::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use gradfem::Error::*;
        fn core(e: &gradfem::Error) -> u8 {
            match e {
                Level { source, .. } => core(source),
                DomainParameter(_) | GradingSpec(_) => 2,
                Triangulation(_)
                | InvalidMesh(_)
                | Grading { .. }
                | Element { .. }
                | Parse { .. }
                | Io(_)
                | DimensionMismatch { .. } => 3,
                _ => 4,
            }
        }
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => core(e),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<gradfem::Error> for CliError {
    fn from(e: gradfem::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn output(settings: &Settings) -> Result<Box<dyn Write>> {
    Ok(match &settings.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn mesh_for(settings: &Settings) -> Result<TriangleMesh> {
    Ok(graded_sector_mesh(
        settings.omega,
        settings.mu,
        settings.radius,
        *settings.levels.end(),
    )?)
}

fn radius_range(mesh: &TriangleMesh) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for p in mesh.nodes().iter().map(|p| p.norm()).filter(|&r| r > 0.0) {
        lo = lo.min(p);
        hi = hi.max(p);
    }
    (lo, hi)
}

pub fn mesh(settings: &Settings) -> Result<ExitCode> {
    let mesh = mesh_for(settings)?;
    let spec = GradingSpec::at_origin(settings.radius, settings.mu)?;
    let audit = audit_grading(&mesh, &spec, AuditConstants::default());
    let mut out = output(settings)?;
    write_mesh(&mesh, &mut out)?;
    let (r_min, r_max) = radius_range(&mesh);
    writeln!(out, "# nodes {}", mesh.num_nodes())?;
    writeln!(out, "# triangles {}", mesh.num_triangles())?;
    writeln!(out, "# h_global {:.6e}", mesh.h_global())?;
    writeln!(out, "# min_angle_deg {:.4}", mesh.min_angle().to_degrees())?;
    writeln!(out, "# node_radius [{r_min:.6e}, {r_max:.6e}]")?;
    for line in audit.to_string().lines() {
        writeln!(out, "# audit {line}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn check_grading(
    path: &Path,
    mu: &str,
    radius: &str,
    c1: Option<f64>,
    c2: Option<f64>,
) -> Result<ExitCode> {
    let mut raw = RawConfig::default();
    raw.set("mu", Some(&mu.to_owned()));
    raw.set("radius", Some(&radius.to_owned()));
    let settings = raw.resolve()?;
    let defaults = AuditConstants::default();
    let constants = AuditConstants {
        c1: c1.unwrap_or(defaults.c1),
        c2: c2.unwrap_or(defaults.c2),
    };
    if !(constants.c1 > 0.0 && constants.c1 <= constants.c2) {
        return Err(ConfigError {
            key: "c1".into(),
            message: "need 0 < c1 <= c2".into(),
        }
        .into());
    }
    let spec = GradingSpec::at_origin(settings.radius, settings.mu)?;
    let file = File::open(path).map_err(|e| {
        gradfem::Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    let mesh = read_mesh(BufReader::new(file))?;
    let h = compute_h_global(&mesh, &[spec]);
    let mesh = mesh.with_h_global(h);
    let report = audit_grading(&mesh, &spec, constants);
    println!("{report}");
    Ok(if report.satisfied {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn solve(settings: &Settings, patch_test: bool) -> Result<ExitCode> {
    let config = settings.study_config();
    let opts: &SolveOptions = &config.solve;
    let mesh = mesh_for(settings)?;
    let bench = BenchmarkProblem::new(settings.omega)?;
    let mut summary = Vec::new();
    let y = if patch_test {
        let sol = solve_linear(&mesh, &LinearProblem::constant_patch(), opts)?;
        let dev = sol.y.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        summary.push(format!("patch_max_deviation {dev:.3e}"));
        summary.push(format!("cg_iterations {}", sol.cg.iterations));
        summary.push(format!(
            "cg_relative_residual {:.3e}",
            sol.cg.relative_residual
        ));
        sol.y
    } else {
        let y = match settings.problem {
            ProblemKind::Linear => {
                let sol = solve_linear(&mesh, &bench.linear_problem(), opts)?;
                summary.push(format!("cg_iterations {}", sol.cg.iterations));
                summary.push(format!(
                    "cg_relative_residual {:.3e}",
                    sol.cg.relative_residual
                ));
                sol.y
            }
            ProblemKind::SemilinearCubic => {
                let (y, report) = solve_semilinear(&mesh, &bench.cubic_problem(), opts)?;
                summary.push(format!("newton_iterations {}", report.iterations));
                summary.push(format!(
                    "newton_final_increment {:.3e}",
                    report.final_increment_max
                ));
                summary.push(format!("cg_iterations {}", report.total_cg_iterations()));
                y
            }
        };
        let rule = TriangleRule::with_degree(config.error_degree);
        summary.push(format!(
            "err_linf {:.6e}",
            error_linf_discrete(&mesh, &y, |x| bench.exact(x))?
        ));
        summary.push(format!(
            "err_l2 {:.6e}",
            error_l2(&mesh, &y, |x| bench.exact(x), &rule, settings.exec)?
        ));
        summary.push(format!(
            "err_h1 {:.6e}",
            error_h1_semi(&mesh, &y, |x| bench.gradient(x), &rule, settings.exec)?
        ));
        y
    };
    let mut out = output(settings)?;
    for (i, v) in y.iter().enumerate() {
        writeln!(out, "{i} {v:.16e}")?;
    }
    out.flush()?;
    drop(out);
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "# level {}", settings.levels.end())?;
    writeln!(stdout, "# nodes {}", mesh.num_nodes())?;
    writeln!(stdout, "# h_global {:.6e}", mesh.h_global())?;
    for line in summary {
        writeln!(stdout, "# {line}")?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn study(settings: &Settings) -> Result<ExitCode> {
    let report = run_convergence_study(&settings.study_config())?;
    let mut out = output(settings)?;
    report.write_csv(&mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}
