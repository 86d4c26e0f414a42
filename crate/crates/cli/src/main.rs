use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{ConfigError, RawConfig};

#[derive(Parser)]
#[command(
    name = "gradfem",
    version,
    about = "Graded-mesh P1 finite elements on sector domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every command. Flags override the config file.
#[derive(Args)]
struct Common {
    /// `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Interior angle, e.g. `1.5pi` or `3pi/4`
    #[arg(long)]
    omega: Option<String>,
    /// Grading parameter in (0, 1]
    #[arg(long)]
    mu: Option<String>,
    /// Grading radius in (0, 1]
    #[arg(long)]
    radius: Option<String>,
    /// `n` or `a..b`; single-mesh commands use the last level
    #[arg(long)]
    levels: Option<String>,
    /// `linear` or `cubic`
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    quad_degree_vol: Option<String>,
    #[arg(long)]
    quad_degree_edge: Option<String>,
    #[arg(long)]
    cg_tol: Option<String>,
    #[arg(long)]
    newton_tol: Option<String>,
    /// Write the main output here instead of standard output
    #[arg(long, short)]
    output: Option<String>,
    /// Run everything on one thread
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn settings(&self) -> Result<config::Settings, ConfigError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        for (key, value) in [
            ("omega", &self.omega),
            ("mu", &self.mu),
            ("radius", &self.radius),
            ("levels", &self.levels),
            ("problem", &self.problem),
            ("quad_degree_vol", &self.quad_degree_vol),
            ("quad_degree_edge", &self.quad_degree_edge),
            ("cg_tol", &self.cg_tol),
            ("newton_tol", &self.newton_tol),
            ("output", &self.output),
        ] {
            raw.set(key, value.as_ref());
        }
        if self.sequential {
            raw.set("parallel", Some(&"false".to_owned()));
        }
        raw.resolve()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a graded mesh with a `#` stats block
    Mesh(Common),
    /// Audit a mesh file against the grading condition
    CheckGrading {
        mesh: PathBuf,
        #[arg(long, default_value = "1")]
        mu: String,
        #[arg(long, default_value = "1")]
        radius: String,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
    },
    /// Solve on one mesh and write nodal values
    Solve {
        #[command(flatten)]
        common: Common,
        /// Solve f = 1, g = 0 instead of the benchmark
        #[arg(long)]
        patch_test: bool,
    },
    /// Run a convergence study and write the CSV report
    Study(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mesh(c) => c
            .settings()
            .map_err(Into::into)
            .and_then(|s| commands::mesh(&s)),
        Command::CheckGrading {
            mesh,
            mu,
            radius,
            c1,
            c2,
        } => commands::check_grading(&mesh, &mu, &radius, c1, c2),
        Command::Solve { common, patch_test } => common
            .settings()
            .map_err(Into::into)
            .and_then(|s| commands::solve(&s, patch_test)),
        Command::Study(c) => c
            .settings()
            .map_err(Into::into)
            .and_then(|s| commands::study(&s)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gradfem: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
