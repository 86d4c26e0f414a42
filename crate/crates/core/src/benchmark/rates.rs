/// Experimental order of convergence `ln(e₁/e₂) / ln(h₁/h₂)`.
///
/// `None` when either error is zero or non-finite, or the mesh sizes coincide.
pub fn eoc(err_prev: f64, err_curr: f64, h_prev: f64, h_curr: f64) -> Option<f64> {
    let valid = |v: f64| v > 0.0 && v.is_finite();
    if !(valid(err_prev) && valid(err_curr) && valid(h_prev) && valid(h_curr)) || h_prev == h_curr {
        return None;
    }
    Some((err_prev / err_curr).ln() / (h_prev / h_curr).ln())
}

/// Where a predicted rate comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateBasis {
    /// `μ < λ/2`: quasi-optimal rate 2 (up to a log factor).
    Graded,
    /// `μ = 1`: `min(2, λ)` up to an arbitrarily small loss.
    QuasiUniform,
    /// Insufficient grading: the observed `min(2, λ/μ)`, not a proven bound.
    Empirical,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictedRate {
    pub rate: f64,
    pub basis: RateBasis,
}

pub fn predicted_rate(lambda: f64, mu: f64) -> PredictedRate {
    if mu < lambda / 2.0 {
        PredictedRate {
            rate: 2.0,
            basis: RateBasis::Graded,
        }
    } else if mu == 1.0 {
        PredictedRate {
            rate: lambda.min(2.0),
            basis: RateBasis::QuasiUniform,
        }
    } else {
        PredictedRate {
            rate: (lambda / mu).min(2.0),
            basis: RateBasis::Empirical,
        }
    }
}

/// Expected maximum-norm convergence rate for singular exponent `λ` and grading `μ`.
pub fn predicted_linf_rate(lambda: f64, mu: f64) -> f64 {
    predicted_rate(lambda, mu).rate
}
