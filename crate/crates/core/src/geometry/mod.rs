//! Sector domains, triangle meshes, red refinement and corner grading.

mod domain;
mod grading;
pub mod io;
mod mesh;

pub use domain::{build_sector_domain, SectorDomain};
pub use grading::{
    apply_grading, audit_grading, compute_h_global, AuditConstants, GradingAuditReport, GradingSpec,
};
pub use mesh::{coarse_triangulation, uniform_refine, BoundaryEdge, TriangleMesh};

use std::ops::{Add, Mul, Sub};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(r: f64, phi: f64) -> Self {
        Point::new(r * phi.cos(), r * phi.sin())
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let phi = self.y.atan2(self.x);
        if phi < 0.0 {
            phi + std::f64::consts::TAU
        } else {
            phi
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Twice the signed area of the triangle `(a, b, c)`; positive when counter-clockwise.
pub fn signed_area2(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Longest edge of the triangle.
pub fn diameter(p: [Point; 3]) -> f64 {
    p[0].dist(p[1]).max(p[1].dist(p[2])).max(p[2].dist(p[0]))
}

/// Distance from `q` to the segment `[a, b]`.
pub fn point_segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return q.dist(a);
    }
    let t = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    q.dist(a + ab * t)
}

/// `inf_{x ∈ T} |x − q|`; zero when `q` lies in the closed triangle.
pub fn point_triangle_distance(q: Point, p: [Point; 3]) -> f64 {
    if p.contains(&q) {
        return 0.0;
    }
    let inside = (0..3).all(|k| signed_area2(p[k], p[(k + 1) % 3], q) >= 0.0);
    if inside {
        return 0.0;
    }
    (0..3)
        .map(|k| point_segment_distance(q, p[k], p[(k + 1) % 3]))
        .fold(f64::INFINITY, f64::min)
}
