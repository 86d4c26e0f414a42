use std::collections::HashMap;

use super::{diameter, signed_area2, Point, SectorDomain};
use crate::{Error, Result};

/// A boundary edge, oriented as in its owning triangle so that the domain lies
/// to the left and `normal` points outwards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub normal: Point,
    /// Index of the polygon segment the edge lies on.
    pub tag: usize,
}

/// A conforming triangulation with counter-clockwise triangles.
///
/// Meshes are immutable once built; every transformation returns a new mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleMesh {
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    level: usize,
    h_global: f64,
}

impl TriangleMesh {
    /// Validates the connectivity and orients the boundary edges. `h_global`
    /// starts out as the largest element diameter.
    pub fn new(
        nodes: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<([usize; 2], usize)>,
        level: usize,
    ) -> Result<Self> {
        let mut mesh = TriangleMesh {
            nodes,
            triangles,
            boundary: boundary
                .into_iter()
                .map(|(nodes, tag)| BoundaryEdge {
                    nodes,
                    normal: Point::ORIGIN,
                    tag,
                })
                .collect(),
            level,
            h_global: 0.0,
        };
        mesh.orient_boundary()?;
        mesh.validate()?;
        mesh.h_global = mesh.max_diameter();
        Ok(mesh)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Number of uniform refinements applied since the coarse mesh.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Mesh size of the ungraded region, see [`super::compute_h_global`].
    pub fn h_global(&self) -> f64 {
        self.h_global
    }

    pub fn with_h_global(mut self, h: f64) -> Self {
        self.h_global = h;
        self
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|i| self.nodes[i])
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * signed_area2(a, b, c)
    }

    pub fn diameter(&self, t: usize) -> f64 {
        diameter(self.triangle_points(t))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.area(t)).sum()
    }

    pub fn max_diameter(&self) -> f64 {
        (0..self.num_triangles())
            .map(|t| self.diameter(t))
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.num_triangles() {
            let p = self.triangle_points(t);
            for k in 0..3 {
                let u = p[(k + 1) % 3] - p[k];
                let v = p[(k + 2) % 3] - p[k];
                min = min.min(u.cross(v).abs().atan2(u.dot(v)));
            }
        }
        min
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary
            .iter()
            .map(|e| self.nodes[e.nodes[0]].dist(self.nodes[e.nodes[1]]))
            .sum()
    }

    /// All distinct edges as sorted node pairs, in first-seen order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut seen = HashMap::new();
        let mut edges = Vec::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let e = sorted(tri[k], tri[(k + 1) % 3]);
                seen.entry(e).or_insert_with(|| {
                    edges.push(e);
                });
            }
        }
        edges
    }

    /// Same connectivity on moved nodes; boundary normals are recomputed.
    pub(crate) fn with_nodes(&self, nodes: Vec<Point>) -> Self {
        let mut mesh = TriangleMesh {
            nodes,
            ..self.clone()
        };
        for e in &mut mesh.boundary {
            e.normal = outward_normal(mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
        }
        mesh
    }

    fn orient_boundary(&mut self) -> Result<()> {
        let mut directed = HashMap::with_capacity(3 * self.triangles.len());
        for tri in &self.triangles {
            for k in 0..3 {
                directed.insert((tri[k], tri[(k + 1) % 3]), ());
            }
        }
        for e in &mut self.boundary {
            let [a, b] = e.nodes;
            if a >= self.nodes.len() || b >= self.nodes.len() {
                return Err(Error::InvalidMesh(format!(
                    "boundary edge {a}-{b} out of range"
                )));
            }
            if !directed.contains_key(&(a, b)) && directed.contains_key(&(b, a)) {
                e.nodes = [b, a];
            }
            e.normal = outward_normal(self.nodes[e.nodes[0]], self.nodes[e.nodes[1]]);
        }
        Ok(())
    }

    /// Checks orientation, conformity and boundary coverage.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        let mut used = vec![false; n];
        let mut edge_owner: HashMap<[usize; 2], Vec<(usize, bool)>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= n) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references a missing node"
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a node")));
            }
            let area = self.area(t);
            if !(area > 0.0) {
                return Err(Error::Element { triangle: t, area });
            }
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                used[a] = true;
                edge_owner.entry(sorted(a, b)).or_default().push((t, a < b));
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!(
                "node {i} belongs to no triangle"
            )));
        }
        let mut open = HashMap::new();
        for (e, owners) in &edge_owner {
            match owners.as_slice() {
                [_] => {
                    open.insert(*e, false);
                }
                [(_, o1), (_, o2)] if o1 != o2 => {}
                [(t1, _), (t2, _)] => {
                    return Err(Error::InvalidMesh(format!(
                        "triangles {t1} and {t2} have inconsistent orientation"
                    )))
                }
                _ => {
                    return Err(Error::InvalidMesh(format!(
                        "edge {}-{} shared by {} triangles",
                        e[0],
                        e[1],
                        owners.len()
                    )))
                }
            }
        }
        for be in &self.boundary {
            let key = sorted(be.nodes[0], be.nodes[1]);
            match open.get_mut(&key) {
                Some(seen @ false) => *seen = true,
                Some(true) => {
                    return Err(Error::InvalidMesh(format!(
                        "boundary edge {}-{} listed twice",
                        key[0], key[1]
                    )))
                }
                None => {
                    return Err(Error::InvalidMesh(format!(
                        "boundary edge {}-{} is not a free triangle edge",
                        key[0], key[1]
                    )))
                }
            }
        }
        if let Some((e, _)) = open.iter().find(|(_, seen)| !**seen) {
            return Err(Error::InvalidMesh(format!(
                "free edge {}-{} is not a boundary edge (hanging node or hole)",
                e[0], e[1]
            )));
        }
        Ok(())
    }
}

fn sorted(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn outward_normal(a: Point, b: Point) -> Point {
    let d = b - a;
    Point::new(d.y, -d.x) * (1.0 / d.norm())
}

/// Fan triangulation of the sector from the origin through `(1,0)`, the
/// square corners and axis crossings below `ω`, and the exit point of the ray
/// `φ = ω`. For `ω = 3π/2` this is the six-triangle L-shape.
pub fn coarse_triangulation(domain: &SectorDomain) -> Result<TriangleMesh> {
    let ring = domain.fan_boundary();
    let mut nodes = vec![domain.corner()];
    nodes.extend_from_slice(&ring);
    let m = ring.len();
    let mut triangles = Vec::with_capacity(m - 1);
    for i in 1..m {
        let tri = [0, i, i + 1];
        let [a, b, c] = tri.map(|k| nodes[k]);
        if !(signed_area2(a, b, c) > 1e-14) {
            return Err(Error::Triangulation(format!(
                "degenerate fan triangle {a:?}, {b:?}, {c:?}"
            )));
        }
        triangles.push(tri);
    }
    let mut boundary = Vec::with_capacity(m + 1);
    let mut push = |a: usize, b: usize| -> Result<()> {
        let tag = domain
            .segment_containing(nodes[a], nodes[b])
            .ok_or_else(|| Error::Triangulation(format!("edge {a}-{b} is not on the boundary")))?;
        boundary.push(([a, b], tag));
        Ok(())
    };
    push(0, 1)?;
    for i in 1..m {
        push(i, i + 1)?;
    }
    push(m, 0)?;
    TriangleMesh::new(nodes, triangles, boundary, 0)
}

/// Red refinement: every triangle is split into four congruent children
/// through its edge midpoints.
pub fn uniform_refine(mesh: &TriangleMesh) -> TriangleMesh {
    let mut nodes = mesh.nodes.clone();
    let mut midpoint_of: HashMap<[usize; 2], usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
        *midpoint_of.entry(sorted(a, b)).or_insert_with(|| {
            nodes.push(nodes[a].midpoint(nodes[b]));
            nodes.len() - 1
        })
    };
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let ab = mid(a, b, &mut nodes);
        let bc = mid(b, c, &mut nodes);
        let ca = mid(c, a, &mut nodes);
        triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let mut boundary = Vec::with_capacity(2 * mesh.boundary.len());
    for e in &mesh.boundary {
        let [a, b] = e.nodes;
        let m = mid(a, b, &mut nodes);
        let half = |nodes: [usize; 2]| BoundaryEdge { nodes, ..*e };
        boundary.push(half([a, m]));
        boundary.push(half([m, b]));
    }
    TriangleMesh {
        nodes,
        triangles,
        boundary,
        level: mesh.level + 1,
        h_global: 0.5 * mesh.h_global,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_sector_domain;
    use std::f64::consts::PI;

    fn coarse(omega: f64) -> TriangleMesh {
        coarse_triangulation(&build_sector_domain(omega).unwrap()).unwrap()
    }

    #[test]
    fn coarse_counts() {
        assert_eq!(coarse(0.5 * PI).num_triangles(), 2);
        assert_eq!(coarse(0.75 * PI).num_triangles(), 3);
        assert_eq!(coarse(1.5 * PI).num_triangles(), 6);
        for omega in [0.5 * PI, 0.75 * PI, 1.5 * PI] {
            let m = coarse(omega);
            assert_eq!(m.nodes()[0], Point::ORIGIN);
            assert!((m.h_global() - 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_square_refinement() {
        let m = uniform_refine(&coarse(0.5 * PI));
        assert_eq!((m.num_triangles(), m.num_nodes()), (8, 9));
        assert_eq!(m.level(), 1);
        m.validate().unwrap();
    }

    #[test]
    fn l_shape_two_refinements() {
        let m = uniform_refine(&uniform_refine(&coarse(1.5 * PI)));
        assert_eq!(m.num_triangles(), 96);
        m.validate().unwrap();
        assert!((m.total_area() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn children_are_half_size() {
        let m0 = coarse(2.0);
        let m1 = uniform_refine(&m0);
        for t in 0..m0.num_triangles() {
            for c in 0..4 {
                let ratio = m1.diameter(4 * t + c) / m0.diameter(t);
                assert!((ratio - 0.5).abs() < 1e-14);
            }
        }
        assert_eq!(m1.max_diameter(), 0.5 * m0.max_diameter());
    }

    #[test]
    fn boundary_normals_point_outwards() {
        let m = uniform_refine(&coarse(1.5 * PI));
        for e in m.boundary_edges() {
            let [a, b] = e.nodes.map(|i| m.nodes()[i]);
            let mid = a.midpoint(b);
            let probe = mid + e.normal * 1e-3;
            let inside = (0..m.num_triangles())
                .any(|t| super::super::point_triangle_distance(probe, m.triangle_points(t)) == 0.0);
            assert!(!inside, "normal of edge {:?} points inwards", e.nodes);
            assert!((e.normal.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn validator_rejects_broken_meshes() {
        let m = coarse(0.5 * PI);
        let nodes = m.nodes().to_vec();
        // clockwise triangle
        let r = TriangleMesh::new(nodes.clone(), vec![[0, 2, 1], [0, 2, 3]], vec![], 0);
        assert!(matches!(r, Err(Error::Element { triangle: 0, .. })));
        // missing boundary edge
        let r = TriangleMesh::new(
            nodes.clone(),
            vec![[0, 1, 2], [0, 2, 3]],
            vec![([0, 1], 0), ([1, 2], 1), ([2, 3], 2)],
            0,
        );
        assert!(matches!(r, Err(Error::InvalidMesh(_))));
        // hanging node: split one triangle only
        let mut hn = nodes.clone();
        hn.push(Point::new(0.5, 0.5));
        let r = TriangleMesh::new(
            hn,
            vec![[0, 1, 4], [1, 2, 4], [0, 2, 3]],
            vec![([0, 1], 0), ([1, 2], 1), ([2, 3], 2), ([3, 0], 3)],
            0,
        );
        assert!(matches!(r, Err(Error::InvalidMesh(_))));
    }
}
