//! P1 assembly of `a(y, v) = ∫ ∇y·∇v + y v` and of the load functional
//! `ℓ(v) = (f, v) + (g, v)_Γ`.
//!
//! Element contributions are computed independently (in parallel under
//! [`Exec::Parallel`]) and scattered in element order, so the result is
//! bit-identical for any worker count.

use crate::geometry::{signed_area2, Point, TriangleMesh};
use crate::linalg::SparseMatrixCsr;
use crate::quadrature::{EdgeRule, TriangleRule};
use crate::{Error, Exec, Result};

pub type LocalMatrix = [[f64; 3]; 3];

fn checked_area(p: &[Point; 3], triangle: usize) -> Result<f64> {
    let area = 0.5 * signed_area2(p[0], p[1], p[2]);
    if area > 0.0 {
        Ok(area)
    } else {
        Err(Error::Element { triangle, area })
    }
}

/// Gradients of the barycentric coordinates.
pub fn barycentric_gradients(p: &[Point; 3], area: f64) -> [Point; 3] {
    let s = 1.0 / (2.0 * area);
    std::array::from_fn(|i| {
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        Point::new(a.y - b.y, b.x - a.x) * s
    })
}

pub fn local_stiffness(p: &[Point; 3]) -> Result<LocalMatrix> {
    let area = checked_area(p, 0)?;
    let g = barycentric_gradients(p, area);
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| area * g[i].dot(g[j]))
    }))
}

/// `∫_T φ_i φ_j = |T|/12 (1 + δ_ij)`.
pub fn local_mass(p: &[Point; 3]) -> Result<LocalMatrix> {
    let area = checked_area(p, 0)?;
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { area / 6.0 } else { area / 12.0 })
    }))
}

pub fn local_stiffness_mass(p: &[Point; 3]) -> Result<LocalMatrix> {
    let k = local_stiffness(p)?;
    let m = local_mass(p)?;
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| k[i][j] + m[i][j])
    }))
}

/// Assembles `Σ_T local(T)` over the nodal basis.
pub fn assemble_matrix<F>(mesh: &TriangleMesh, exec: Exec, local: F) -> Result<SparseMatrixCsr>
where
    F: Fn(usize, &[Point; 3]) -> Result<LocalMatrix> + Sync + Send,
{
    let locals = exec.try_map(mesh.num_triangles(), |t| {
        let p = mesh.triangle_points(t);
        local(t, &p).map_err(|e| match e {
            Error::Element { area, .. } => Error::Element { triangle: t, area },
            other => other,
        })
    })?;
    let mut triplets = Vec::with_capacity(9 * locals.len());
    for (tri, m) in mesh.triangles().iter().zip(&locals) {
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((tri[i], tri[j], m[i][j]));
            }
        }
    }
    Ok(SparseMatrixCsr::from_triplets(mesh.num_nodes(), &triplets))
}

/// System matrix `A_ij = a(φ_j, φ_i)`.
pub fn assemble_system(mesh: &TriangleMesh, exec: Exec) -> Result<SparseMatrixCsr> {
    assemble_matrix(mesh, exec, |_, p| local_stiffness_mass(p))
}

pub fn assemble_stiffness(mesh: &TriangleMesh, exec: Exec) -> Result<SparseMatrixCsr> {
    assemble_matrix(mesh, exec, |_, p| local_stiffness(p))
}

pub fn assemble_mass(mesh: &TriangleMesh, exec: Exec) -> Result<SparseMatrixCsr> {
    assemble_matrix(mesh, exec, |_, p| local_mass(p))
}

/// Maps a barycentric point to physical coordinates.
pub fn to_physical(p: &[Point; 3], bary: &[f64; 3]) -> Point {
    Point::new(
        bary[0] * p[0].x + bary[1] * p[1].x + bary[2] * p[2].x,
        bary[0] * p[0].y + bary[1] * p[1].y + bary[2] * p[2].y,
    )
}

fn finite(value: f64, at: Point) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::DataEvaluation { at, value })
    }
}

fn scatter(n: usize, conn: impl Iterator<Item = (Vec<usize>, Vec<f64>)>) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (idx, vals) in conn {
        for (i, v) in idx.into_iter().zip(vals) {
            out[i] += v;
        }
    }
    out
}

/// `b_i = Σ_T ∫_T f φ_i + Σ_{E ⊂ Γ} ∫_E g φ_i`, with `g` evaluated as
/// `g(x, outward normal)`.
pub fn assemble_load<F, G>(
    mesh: &TriangleMesh,
    f: F,
    g: G,
    vol_rule: &TriangleRule,
    edge_rule: &EdgeRule,
    exec: Exec,
) -> Result<Vec<f64>>
where
    F: Fn(Point) -> f64 + Sync + Send,
    G: Fn(Point, Point) -> f64 + Sync + Send,
{
    let vol = exec.try_map(mesh.num_triangles(), |t| {
        let p = mesh.triangle_points(t);
        let jac = 2.0 * checked_area(&p, t)?;
        let mut local = [0.0; 3];
        for (bary, w) in vol_rule.iter() {
            let x = to_physical(&p, bary);
            let fx = finite(f(x), x)?;
            for i in 0..3 {
                local[i] += w * jac * fx * bary[i];
            }
        }
        Ok::<_, Error>(local)
    })?;
    let edges = mesh.boundary_edges();
    let bnd = exec.try_map(edges.len(), |e| {
        let edge = &edges[e];
        let [a, b] = edge.nodes.map(|i| mesh.nodes()[i]);
        let len = a.dist(b);
        let mut local = [0.0; 2];
        for (s, w) in edge_rule.iter() {
            let x = a * (1.0 - s) + b * s;
            let gx = finite(g(x, edge.normal), x)?;
            local[0] += w * len * gx * (1.0 - s);
            local[1] += w * len * gx * s;
        }
        Ok::<_, Error>(local)
    })?;
    let vol_iter = mesh
        .triangles()
        .iter()
        .zip(vol)
        .map(|(t, l)| (t.to_vec(), l.to_vec()));
    let bnd_iter = edges
        .iter()
        .zip(bnd)
        .map(|(e, l)| (e.nodes.to_vec(), l.to_vec()));
    Ok(scatter(mesh.num_nodes(), vol_iter.chain(bnd_iter)))
}

/// `N(y)_i = Σ_T ∫_T d(x, y_h(x)) φ_i` with `y_h` the P1 function of the nodal vector `y`.
pub fn assemble_nonlinear<D>(
    mesh: &TriangleMesh,
    y: &[f64],
    d: D,
    rule: &TriangleRule,
    exec: Exec,
) -> Result<Vec<f64>>
where
    D: Fn(Point, f64) -> f64 + Sync + Send,
{
    if y.len() != mesh.num_nodes() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_nodes(),
            got: y.len(),
        });
    }
    let locals = exec.try_map(mesh.num_triangles(), |t| {
        let p = mesh.triangle_points(t);
        let tri = mesh.triangles()[t];
        let jac = 2.0 * checked_area(&p, t)?;
        let mut local = [0.0; 3];
        for (bary, w) in rule.iter() {
            let x = to_physical(&p, bary);
            let yq = bary[0] * y[tri[0]] + bary[1] * y[tri[1]] + bary[2] * y[tri[2]];
            let dx = finite(d(x, yq), x)?;
            for i in 0..3 {
                local[i] += w * jac * dx * bary[i];
            }
        }
        Ok::<_, Error>(local)
    })?;
    let iter = mesh
        .triangles()
        .iter()
        .zip(locals)
        .map(|(t, l)| (t.to_vec(), l.to_vec()));
    Ok(scatter(mesh.num_nodes(), iter))
}

/// Weighted mass matrix `∫ d'(x, y_h) φ_i φ_j`. Errors if the weight is
/// negative at any quadrature point.
pub fn assemble_weighted_mass<D>(
    mesh: &TriangleMesh,
    y: &[f64],
    weight: D,
    rule: &TriangleRule,
    exec: Exec,
) -> Result<SparseMatrixCsr>
where
    D: Fn(Point, f64) -> f64 + Sync + Send,
{
    if y.len() != mesh.num_nodes() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_nodes(),
            got: y.len(),
        });
    }
    assemble_matrix(mesh, exec, |t, p| {
        let tri = mesh.triangles()[t];
        let jac = 2.0 * checked_area(p, t)?;
        let mut local = [[0.0; 3]; 3];
        for (bary, w) in rule.iter() {
            let x = to_physical(p, bary);
            let yq = bary[0] * y[tri[0]] + bary[1] * y[tri[1]] + bary[2] * y[tri[2]];
            let slope = finite(weight(x, yq), x)?;
            if slope < 0.0 {
                return Err(Error::Assumption {
                    at: x,
                    y: yq,
                    slope,
                });
            }
            for i in 0..3 {
                for j in 0..3 {
                    local[i][j] += w * jac * slope * bary[i] * bary[j];
                }
            }
        }
        Ok(local)
    })
}

/// Matrix and load vector of the linear problem. Degrees of freedom are the
/// mesh nodes, in mesh order.
#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub matrix: SparseMatrixCsr,
    pub load: Vec<f64>,
}

impl AssembledSystem {
    pub fn new<F, G>(
        mesh: &TriangleMesh,
        f: F,
        g: G,
        vol_rule: &TriangleRule,
        edge_rule: &EdgeRule,
        exec: Exec,
    ) -> Result<Self>
    where
        F: Fn(Point) -> f64 + Sync + Send,
        G: Fn(Point, Point) -> f64 + Sync + Send,
    {
        Ok(AssembledSystem {
            matrix: assemble_system(mesh, exec)?,
            load: assemble_load(mesh, f, g, vol_rule, edge_rule, exec)?,
        })
    }

    /// Degree of freedom of mesh node `node`.
    pub fn dof(&self, node: usize) -> usize {
        node
    }
}
