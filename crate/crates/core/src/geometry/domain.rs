use std::f64::consts::{FRAC_PI_4, TAU};

use super::Point;
use crate::{Error, Result};

const ANGLE_EPS: f64 = 1e-12;

/// The sector domain `(−1,1)² ∩ {0 < φ < ω}` with the singular corner at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorDomain {
    omega: f64,
    polygon: Vec<Point>,
}

impl SectorDomain {
    /// Interior angle at the origin.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Vertices in counter-clockwise order, starting at the origin.
    pub fn polygon(&self) -> &[Point] {
        &self.polygon
    }

    /// Index of the singular corner in [`SectorDomain::polygon`].
    pub fn corner_index(&self) -> usize {
        0
    }

    pub fn corner(&self) -> Point {
        self.polygon[0]
    }

    /// Polygon edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.polygon.len();
        (self.polygon[i], self.polygon[(i + 1) % n])
    }

    pub fn num_edges(&self) -> usize {
        self.polygon.len()
    }

    pub fn area(&self) -> f64 {
        let n = self.polygon.len();
        0.5 * (0..n)
            .map(|i| self.polygon[i].cross(self.polygon[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.num_edges())
            .map(|i| {
                let (a, b) = self.edge(i);
                a.dist(b)
            })
            .sum()
    }

    /// Index of the polygon edge containing both `a` and `b`, if any.
    pub fn segment_containing(&self, a: Point, b: Point) -> Option<usize> {
        (0..self.num_edges()).find(|&i| {
            let (p, q) = self.edge(i);
            on_segment(a, p, q) && on_segment(b, p, q)
        })
    }

    /// Whether `x` lies on the polygon boundary (to within `1e-12`).
    pub fn on_boundary(&self, x: Point) -> bool {
        (0..self.num_edges()).any(|i| {
            let (p, q) = self.edge(i);
            on_segment(x, p, q)
        })
    }

    /// Points where the square boundary is crossed by the rays `φ = kπ/4`,
    /// `0 < kπ/4 < ω`, followed by the exit point of the ray `φ = ω`. Together
    /// with `(1, 0)` these are the boundary nodes of the coarse fan.
    pub(crate) fn fan_boundary(&self) -> Vec<Point> {
        let mut pts = vec![Point::new(1.0, 0.0)];
        for k in 1..8 {
            let theta = k as f64 * FRAC_PI_4;
            if theta < self.omega - ANGLE_EPS {
                pts.push(square_point(theta));
            }
        }
        pts.push(square_point(self.omega));
        pts
    }
}

fn on_segment(x: Point, p: Point, q: Point) -> bool {
    super::point_segment_distance(x, p, q) <= 1e-12
}

/// Exit point of the ray `φ = theta` through the boundary of `[−1,1]²`.
fn square_point(theta: f64) -> Point {
    let k = (theta / FRAC_PI_4).round();
    if (theta - k * FRAC_PI_4).abs() < ANGLE_EPS {
        const EXACT: [(f64, f64); 8] = [
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (-1.0, 1.0),
            (-1.0, 0.0),
            (-1.0, -1.0),
            (0.0, -1.0),
            (1.0, -1.0),
        ];
        let (x, y) = EXACT[(k as usize) % 8];
        return Point::new(x, y);
    }
    let (s, c) = theta.sin_cos();
    let m = c.abs().max(s.abs());
    let snap = |v: f64| {
        if (v.abs() - 1.0).abs() < 1e-14 {
            v.signum()
        } else {
            v
        }
    };
    Point::new(snap(c / m), snap(s / m))
}

/// Builds `Ω_ω = (−1,1)² ∩ {(r, φ) : 0 < r ≤ √2, 0 < φ < ω}` as a
/// counter-clockwise polygon starting at the origin.
pub fn build_sector_domain(omega: f64) -> Result<SectorDomain> {
    if !(omega > 0.0 && omega < TAU) {
        return Err(Error::DomainParameter(format!(
            "omega = {omega} must lie in (0, 2π)"
        )));
    }
    let mut polygon = vec![Point::ORIGIN, Point::new(1.0, 0.0)];
    for k in [1, 3, 5, 7] {
        let theta = k as f64 * FRAC_PI_4;
        if theta < omega - ANGLE_EPS {
            polygon.push(square_point(theta));
        }
    }
    let exit = square_point(omega);
    if polygon.last() != Some(&exit) {
        polygon.push(exit);
    }
    // Axis crossings (0,1), (−1,0), (0,−1) are not vertices: the boundary is straight there.
    debug_assert!(polygon.len() >= 3);
    Ok(SectorDomain { omega, polygon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn unit_square() {
        let d = build_sector_domain(PI / 2.0).unwrap();
        assert_eq!(
            d.polygon(),
            pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]).as_slice()
        );
        assert!((d.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn l_shape() {
        let d = build_sector_domain(1.5 * PI).unwrap();
        let expected = pts(&[
            (0., 0.),
            (1., 0.),
            (1., 1.),
            (-1., 1.),
            (-1., -1.),
            (0., -1.),
        ]);
        assert_eq!(d.polygon(), expected.as_slice());
        assert!((d.area() - 3.0).abs() < 1e-15);
        assert!((d.perimeter() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn three_quarter_pi_exits_through_corner() {
        let d = build_sector_domain(0.75 * PI).unwrap();
        let expected = pts(&[(0., 0.), (1., 0.), (1., 1.), (-1., 1.)]);
        assert_eq!(d.polygon(), expected.as_slice());
        assert!((d.area() - 1.5).abs() < 1e-15);
        assert_eq!(
            d.fan_boundary(),
            pts(&[(1., 0.), (1., 1.), (0., 1.), (-1., 1.)])
        );
    }

    #[test]
    fn generic_angle_hits_edge_interior() {
        let omega = PI / 3.0;
        let d = build_sector_domain(omega).unwrap();
        let exit = d.polygon()[3];
        assert_eq!(exit.y, 1.0);
        assert!((exit.x - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((exit.angle() - omega).abs() < 1e-12);
    }

    #[test]
    fn corner_angle_equals_omega() {
        for omega in [0.3, PI / 2.0, 2.0, 0.75 * PI, PI, 1.5 * PI, 1.9 * PI] {
            let d = build_sector_domain(omega).unwrap();
            let p = d.polygon();
            let first = p[1] - p[0];
            let last = p[p.len() - 1] - p[0];
            let mut angle = last.angle() - first.angle();
            if angle < 0.0 {
                angle += TAU;
            }
            assert!((angle - omega).abs() < 1e-12, "omega {omega}");
            assert!(d.area() > 0.0, "counter-clockwise");
            for v in &p[1..] {
                assert!(v.x.abs() == 1.0 || v.y.abs() == 1.0, "{v:?} off the square");
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        for omega in [0.0, -1.0, TAU, 3.0 * PI, f64::NAN] {
            assert!(matches!(
                build_sector_domain(omega),
                Err(Error::DomainParameter(_))
            ));
        }
    }
}
