use std::fmt;

use super::{point_triangle_distance, signed_area2, Point, TriangleMesh};
use crate::{Error, Result};

/// Radial grading towards one corner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradingSpec {
    corner: Point,
    radius: f64,
    mu: f64,
}

impl GradingSpec {
    pub fn new(corner: Point, radius: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(Error::GradingSpec(format!("mu = {mu} must lie in (0, 1]")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::GradingSpec(format!(
                "radius = {radius} must be positive"
            )));
        }
        Ok(GradingSpec { corner, radius, mu })
    }

    /// Grading about the origin, the singular corner of every sector domain.
    pub fn at_origin(radius: f64, mu: f64) -> Result<Self> {
        Self::new(Point::ORIGIN, radius, mu)
    }

    pub fn corner(&self) -> Point {
        self.corner
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Image of `x` under the grading map.
    pub fn map(&self, x: Point) -> Point {
        let d = x - self.corner;
        let r = d.norm();
        if r >= self.radius || r == 0.0 || self.mu == 1.0 {
            return x;
        }
        self.corner + d * (r / self.radius).powf(1.0 / self.mu - 1.0)
    }

    /// Errors if the grading balls of any two specs intersect.
    pub fn check_disjoint(specs: &[GradingSpec]) -> Result<()> {
        for (i, a) in specs.iter().enumerate() {
            for b in &specs[i + 1..] {
                if a.corner.dist(b.corner) < a.radius + b.radius {
                    return Err(Error::GradingSpec(format!(
                        "grading sectors around {:?} and {:?} overlap",
                        a.corner, b.corner
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Moves every node `X` with `|X − c| < R` to `c + (X − c)·(|X − c|/R)^{1/μ − 1}`.
///
/// Connectivity and `h_global` are unchanged.
pub fn apply_grading(mesh: &TriangleMesh, spec: &GradingSpec) -> Result<TriangleMesh> {
    if !mesh.nodes().contains(&spec.corner) {
        return Err(Error::GradingSpec(format!(
            "corner {:?} is not a mesh node",
            spec.corner
        )));
    }
    let nodes: Vec<Point> = mesh.nodes().iter().map(|&p| spec.map(p)).collect();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [a, b, c] = tri.map(|i| nodes[i]);
        let area2 = signed_area2(a, b, c);
        if !(area2 > 0.0) {
            return Err(Error::Grading {
                triangle: t,
                area: 0.5 * area2,
            });
        }
    }
    Ok(mesh.with_nodes(nodes))
}

/// Largest diameter among triangles outside every grading ball
/// (`r_T > R`); the overall maximum if no such triangle exists.
pub fn compute_h_global(mesh: &TriangleMesh, specs: &[GradingSpec]) -> f64 {
    let far = (0..mesh.num_triangles())
        .filter(|&t| {
            let p = mesh.triangle_points(t);
            specs
                .iter()
                .all(|s| point_triangle_distance(s.corner, p) > s.radius)
        })
        .map(|t| mesh.diameter(t))
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });
    far.unwrap_or_else(|| mesh.max_diameter())
}

/// Constants `c1 ≤ c2` bracketing the admissible element sizes.
///
/// The default `[1/16, 16]` covers the radial grading map for `μ ≥ 0.3` and
/// `R ≥ 1/2`: elements in the second ring around the corner reach ratios of
/// about `2^{1/μ} R^{μ−1} / √2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditConstants {
    pub c1: f64,
    pub c2: f64,
}

impl Default for AuditConstants {
    fn default() -> Self {
        AuditConstants {
            c1: 1.0 / 16.0,
            c2: 16.0,
        }
    }
}

/// Extremal size ratios within one branch of the mesh condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioRange {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl Default for RatioRange {
    fn default() -> Self {
        RatioRange {
            count: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl RatioRange {
    fn push(&mut self, ratio: f64) {
        self.count += 1;
        self.min = self.min.min(ratio);
        self.max = self.max.max(ratio);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradingAuditReport {
    pub satisfied: bool,
    pub constants: AuditConstants,
    pub h: f64,
    /// Smallest ratio over all branches.
    pub worst_lower_ratio: f64,
    /// Largest ratio over all branches.
    pub worst_upper_ratio: f64,
    /// `h_T / h^{1/μ}` for triangles touching the corner.
    pub corner: RatioRange,
    /// `h_T / (h r_T^{1−μ})` for `0 < r_T < R`.
    pub graded: RatioRange,
    /// `h_T / h` for `r_T ≥ R`.
    pub far: RatioRange,
    pub offending_elements: Vec<usize>,
}

/// Checks the element sizes against the three-branch grading condition with
/// `h = mesh.h_global()`.
pub fn audit_grading(
    mesh: &TriangleMesh,
    spec: &GradingSpec,
    constants: AuditConstants,
) -> GradingAuditReport {
    let AuditConstants { c1, c2 } = constants;
    let h = mesh.h_global();
    let mu = spec.mu;
    let mut report = GradingAuditReport {
        satisfied: true,
        constants,
        h,
        worst_lower_ratio: f64::INFINITY,
        worst_upper_ratio: f64::NEG_INFINITY,
        corner: RatioRange::default(),
        graded: RatioRange::default(),
        far: RatioRange::default(),
        offending_elements: Vec::new(),
    };
    for t in 0..mesh.num_triangles() {
        let p = mesh.triangle_points(t);
        let h_t = mesh.diameter(t);
        let r_t = point_triangle_distance(spec.corner, p);
        let (ratio, branch) = if r_t == 0.0 {
            (h_t / h.powf(1.0 / mu), &mut report.corner)
        } else if r_t < spec.radius {
            (h_t / (h * r_t.powf(1.0 - mu)), &mut report.graded)
        } else {
            (h_t / h, &mut report.far)
        };
        branch.push(ratio);
        report.worst_lower_ratio = report.worst_lower_ratio.min(ratio);
        report.worst_upper_ratio = report.worst_upper_ratio.max(ratio);
        if !(c1..=c2).contains(&ratio) {
            report.offending_elements.push(t);
        }
    }
    report.satisfied = report.offending_elements.is_empty();
    report
}

impl fmt::Display for GradingAuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "satisfied: {}", self.satisfied)?;
        writeln!(f, "h: {:.6e}", self.h)?;
        writeln!(f, "c1: {}  c2: {}", self.constants.c1, self.constants.c2)?;
        for (name, r) in [
            ("corner", &self.corner),
            ("graded", &self.graded),
            ("far", &self.far),
        ] {
            if r.count > 0 {
                writeln!(
                    f,
                    "{name}: {} elements, ratio in [{:.4}, {:.4}]",
                    r.count, r.min, r.max
                )?;
            } else {
                writeln!(f, "{name}: 0 elements")?;
            }
        }
        writeln!(f, "worst lower ratio: {:.4}", self.worst_lower_ratio)?;
        writeln!(f, "worst upper ratio: {:.4}", self.worst_upper_ratio)?;
        write!(f, "offending elements: {}", self.offending_elements.len())?;
        if !self.offending_elements.is_empty() {
            let shown: Vec<String> = self
                .offending_elements
                .iter()
                .take(20)
                .map(|t| t.to_string())
                .collect();
            write!(
                f,
                " [{}{}]",
                shown.join(", "),
                if self.offending_elements.len() > 20 {
                    ", ..."
                } else {
                    ""
                }
            )?;
        }
        Ok(())
    }
}
