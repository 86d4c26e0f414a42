use std::f64::consts::{PI, TAU};

use crate::geometry::Point;
use crate::solver::{LinearProblem, SemilinearProblem};
use crate::{Error, Result};

/// Exact solution `y = r^λ cos(λφ)`, `λ = π/ω`, of `-Δy + y = y` with
/// `∂ₙy = ∇y·n` on the sector `Ω_ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchmarkProblem {
    omega: f64,
    lambda: f64,
}

impl BenchmarkProblem {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega < TAU) {
            return Err(Error::DomainParameter(format!(
                "omega = {omega} must lie in (0, 2π)"
            )));
        }
        Ok(BenchmarkProblem {
            omega,
            lambda: PI / omega,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Singular exponent `π/ω`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn exact(&self, x: Point) -> f64 {
        let r = x.norm();
        if r == 0.0 {
            return 0.0;
        }
        r.powf(self.lambda) * (self.lambda * x.angle()).cos()
    }

    /// `∇y = λ r^{λ−1} (cos((λ−1)φ), −sin((λ−1)φ))`.
    pub fn gradient(&self, x: Point) -> Result<Point> {
        let r = x.norm();
        let l = self.lambda;
        if r == 0.0 {
            return if l < 1.0 {
                Err(Error::SingularPoint { at: x })
            } else if l == 1.0 {
                Ok(Point::new(1.0, 0.0))
            } else {
                Ok(Point::ORIGIN)
            };
        }
        let s = l * r.powf(l - 1.0);
        let a = (l - 1.0) * x.angle();
        Ok(Point::new(s * a.cos(), -s * a.sin()))
    }

    /// Neumann data `∂ₙy = ∇y·n`; NaN at the corner when the gradient is singular.
    pub fn neumann(&self, x: Point, normal: Point) -> f64 {
        self.gradient(x).map_or(f64::NAN, |g| g.dot(normal))
    }

    /// Volume data of the linear problem; equals `y` because `Δy = 0`.
    pub fn f_lin(&self, x: Point) -> f64 {
        self.exact(x)
    }

    pub fn linear_problem(&self) -> LinearProblem {
        let (a, b) = (*self, *self);
        LinearProblem::new(move |x| a.f_lin(x), move |x, n| b.neumann(x, n))
    }

    /// `-Δy + y + y³ = f` with the same exact solution: `f = y + y³`.
    pub fn cubic_problem(&self) -> SemilinearProblem {
        let (a, b) = (*self, *self);
        SemilinearProblem::cubic(LinearProblem::new(
            move |x| {
                let y = a.exact(x);
                y + y * y * y
            },
            move |x, n| b.neumann(x, n),
        ))
    }
}
