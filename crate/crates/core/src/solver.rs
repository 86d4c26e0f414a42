//! Problem-level drivers: the linear Neumann problem, the semilinear problem
//! `-Δy + y + d(y) = f` by Newton's method, and the Ritz projection.

use std::sync::Arc;

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::assembly::{assemble_load, assemble_nonlinear, assemble_system, assemble_weighted_mass};
use crate::benchmark::BenchmarkProblem;
use crate::geometry::{Point, TriangleMesh};
use crate::linalg::{cg_solve, norm2, norm_max, CgOptions, CgReport, SparseMatrixCsr};
use crate::quadrature::{EdgeRule, TriangleRule};
use crate::{Error, Exec, Result};

pub type VolumeData = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
/// Boundary data, evaluated as `g(x, outward unit normal)`.
pub type BoundaryData = Arc<dyn Fn(Point, Point) -> f64 + Send + Sync>;
/// Position-dependent scalar function `d(x, y)`.
pub type Nonlinearity = Arc<dyn Fn(Point, f64) -> f64 + Send + Sync>;

/// `-Δy + y = f` in Ω, `∂ₙy = g` on Γ.
#[derive(Clone)]
pub struct LinearProblem {
    pub f: VolumeData,
    pub g: BoundaryData,
}

impl LinearProblem {
    pub fn new(
        f: impl Fn(Point) -> f64 + Send + Sync + 'static,
        g: impl Fn(Point, Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        LinearProblem {
            f: Arc::new(f),
            g: Arc::new(g),
        }
    }

    /// `f ≡ 1`, `g ≡ 0`, whose solution is `y ≡ 1`.
    pub fn constant_patch() -> Self {
        Self::new(|_| 1.0, |_, _| 0.0)
    }
}

/// `-Δy + y + d(x, y) = f` in Ω, `∂ₙy = g` on Γ, with `d` monotonically
/// increasing in `y`.
#[derive(Clone)]
pub struct SemilinearProblem {
    pub f: VolumeData,
    pub g: BoundaryData,
    pub d: Nonlinearity,
    pub d_prime: Nonlinearity,
}

impl SemilinearProblem {
    pub fn new(
        f: impl Fn(Point) -> f64 + Send + Sync + 'static,
        g: impl Fn(Point, Point) -> f64 + Send + Sync + 'static,
        d: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SemilinearProblem {
            f: Arc::new(f),
            g: Arc::new(g),
            d: Arc::new(move |_, y| d(y)),
            d_prime: Arc::new(move |_, y| d_prime(y)),
        }
    }

    /// General position-dependent nonlinearity; coercivity is the caller's concern.
    pub fn with_position_dependent(
        linear: LinearProblem,
        d: Nonlinearity,
        d_prime: Nonlinearity,
    ) -> Self {
        SemilinearProblem {
            f: linear.f,
            g: linear.g,
            d,
            d_prime,
        }
    }

    /// `d(y) = y³` with the given data.
    pub fn cubic(linear: LinearProblem) -> Self {
        SemilinearProblem {
            f: linear.f,
            g: linear.g,
            d: Arc::new(|_, y| y * y * y),
            d_prime: Arc::new(|_, y| 3.0 * y * y),
        }
    }

    fn linear_part(&self) -> LinearProblem {
        LinearProblem {
            f: self.f.clone(),
            g: self.g.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Stop when the max-norm of the applied step is at most this...
    pub increment_tol: f64,
    /// ...and `‖A y + N(y) − b‖₂ / ‖b‖₂` is at most this.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Step halvings tried when the residual does not decrease.
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            increment_tol: 1e-11,
            residual_tol: 1e-10,
            max_iter: 50,
            max_halvings: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub vol_degree: usize,
    pub edge_degree: usize,
    /// Red subdivisions of the volume rule, for rough data.
    pub subdivision_depth: usize,
    pub cg: CgOptions,
    pub newton: NewtonOptions,
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            vol_degree: 5,
            edge_degree: 5,
            subdivision_depth: 0,
            cg: CgOptions::default(),
            newton: NewtonOptions::default(),
            exec: Exec::default(),
        }
    }
}

impl SolveOptions {
    pub fn vol_rule(&self) -> TriangleRule {
        TriangleRule::with_degree(self.vol_degree).subdivided(self.subdivision_depth)
    }

    pub fn edge_rule(&self) -> EdgeRule {
        EdgeRule::with_degree(self.edge_degree)
    }

    fn cg_options(&self) -> CgOptions {
        CgOptions {
            exec: self.exec,
            ..self.cg
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub y: Vec<f64>,
    pub cg: CgReport,
}

fn solve_spd(a: &SparseMatrixCsr, b: &[f64], opts: &CgOptions) -> Result<(Vec<f64>, CgReport)> {
    let (x, report) = cg_solve(a, b, opts)?;
    if !report.converged {
        return Err(Error::CgFailure {
            iterations: report.iterations,
            relative_residual: report.relative_residual,
        });
    }
    Ok((x, report))
}

/// Discrete solution `y_h ∈ V_h` of `a(y_h, v_h) = (f, v_h) + (g, v_h)_Γ`.
pub fn solve_linear(
    mesh: &TriangleMesh,
    prob: &LinearProblem,
    opts: &SolveOptions,
) -> Result<LinearSolution> {
    let a = assemble_system(mesh, opts.exec)?;
    let b = assemble_load(
        mesh,
        &*prob.f,
        &*prob.g,
        &opts.vol_rule(),
        &opts.edge_rule(),
        opts.exec,
    )?;
    let (y, cg) = solve_spd(&a, &b, &opts.cg_options())?;
    Ok(LinearSolution { y, cg })
}

/// Ritz projection `ỹ_h` of the benchmark solution: `a(y − ỹ_h, v_h) = 0`.
/// Since `-Δy = 0` for the benchmark, this is the linear solve with `f = y`.
pub fn ritz_projection(
    mesh: &TriangleMesh,
    exact: &BenchmarkProblem,
    opts: &SolveOptions,
) -> Result<LinearSolution> {
    solve_linear(mesh, &exact.linear_problem(), opts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub final_increment_max: f64,
    pub converged: bool,
    /// CG report of the initial linear solve.
    pub initial_cg: CgReport,
    pub cg_reports: Vec<CgReport>,
    /// `‖F(y)‖₂` for the initial guess and after every iteration.
    pub residual_norms: Vec<f64>,
    pub halvings: Vec<usize>,
}

impl NewtonReport {
    pub fn total_cg_iterations(&self) -> usize {
        self.initial_cg.iterations + self.cg_reports.iter().map(|r| r.iterations).sum::<usize>()
    }
}

/// Compares `d'` against central differences of `d` at 10 pseudo-random points.
fn check_derivative(mesh: &TriangleMesh, prob: &SemilinearProblem) -> Result<()> {
    let mut rng = StdRng::seed_from_u64(0x5eed_d1ff);
    for _ in 0..10 {
        let x = mesh.nodes()[rng.gen_range(0..mesh.num_nodes())];
        let y: f64 = rng.gen_range(-2.0..2.0);
        let eps = 1e-6 * y.abs().max(1.0);
        let numeric = ((prob.d)(x, y + eps) - (prob.d)(x, y - eps)) / (2.0 * eps);
        let analytic = (prob.d_prime)(x, y);
        if analytic < 0.0 {
            return Err(Error::Assumption {
                at: x,
                y,
                slope: analytic,
            });
        }
        if !((numeric - analytic).abs() <= 1e-5 * analytic.abs().max(1.0)) {
            return Err(Error::DerivativeMismatch {
                y,
                analytic,
                numeric,
            });
        }
    }
    Ok(())
}

/// Newton's method for `a(y_h, v_h) + (d(y_h), v_h) = (f, v_h) + (g, v_h)_Γ`,
/// started from the linear solution with `d` dropped. The Jacobian
/// `A + M_{d'(y_h)}` is SPD for monotone `d`.
pub fn solve_semilinear(
    mesh: &TriangleMesh,
    prob: &SemilinearProblem,
    opts: &SolveOptions,
) -> Result<(Vec<f64>, NewtonReport)> {
    check_derivative(mesh, prob)?;
    let exec = opts.exec;
    let rule = opts.vol_rule();
    let cg_opts = opts.cg_options();
    let a = assemble_system(mesh, exec)?;
    let linear = prob.linear_part();
    let b = assemble_load(mesh, &*linear.f, &*linear.g, &rule, &opts.edge_rule(), exec)?;
    let b_norm = norm2(&b).max(f64::MIN_POSITIVE);

    let residual = |y: &[f64]| -> Result<Vec<f64>> {
        let mut r = a.spmv_with(y, exec)?;
        let n = assemble_nonlinear(mesh, y, &*prob.d, &rule, exec)?;
        for i in 0..r.len() {
            r[i] += n[i] - b[i];
        }
        Ok(r)
    };

    let (mut y, initial_cg) = solve_spd(&a, &b, &cg_opts)?;
    let mut r = residual(&y)?;
    let mut r_norm = norm2(&r);
    let mut report = NewtonReport {
        iterations: 0,
        final_increment_max: f64::INFINITY,
        converged: false,
        initial_cg,
        cg_reports: Vec::new(),
        residual_norms: vec![r_norm],
        halvings: Vec::new(),
    };
    let newton = opts.newton;
    for k in 1..=newton.max_iter {
        let jac = a.add(&assemble_weighted_mass(
            mesh,
            &y,
            &*prob.d_prime,
            &rule,
            exec,
        )?);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let (step, cg) = solve_spd(&jac, &rhs, &cg_opts)?;
        report.cg_reports.push(cg);

        let mut t = 1.0;
        let mut halvings = 0;
        let (mut y_try, mut r_try, mut r_try_norm);
        loop {
            y_try = y
                .iter()
                .zip(&step)
                .map(|(yi, si)| yi + t * si)
                .collect::<Vec<f64>>();
            r_try = residual(&y_try)?;
            r_try_norm = norm2(&r_try);
            if r_try_norm < r_norm || halvings == newton.max_halvings {
                break;
            }
            t *= 0.5;
            halvings += 1;
        }
        report.halvings.push(halvings);
        report.iterations = k;
        report.final_increment_max = t * norm_max(&step);
        y = y_try;
        r = r_try;
        r_norm = r_try_norm;
        report.residual_norms.push(r_norm);
        if report.final_increment_max <= newton.increment_tol
            && r_norm / b_norm <= newton.residual_tol
        {
            report.converged = true;
            return Ok((y, report));
        }
    }
    Err(Error::NewtonFailure {
        iterations: report.iterations,
        increment: report.final_increment_max,
        residual: r_norm / b_norm,
    })
}
