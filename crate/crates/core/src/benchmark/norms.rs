use crate::assembly::{assemble_system, barycentric_gradients, to_physical};
use crate::geometry::{Point, TriangleMesh};
use crate::linalg::dot;
use crate::quadrature::TriangleRule;
use crate::{Error, Exec, Result};

fn check_len(mesh: &TriangleMesh, v: &[f64]) -> Result<()> {
    if v.len() == mesh.num_nodes() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: mesh.num_nodes(),
            got: v.len(),
        })
    }
}

/// Nodal interpolant `I_h y`.
pub fn interpolate(mesh: &TriangleMesh, f: impl Fn(Point) -> f64) -> Vec<f64> {
    mesh.nodes().iter().map(|&p| f(p)).collect()
}

/// `max_i |y(x_i) − y_h(x_i)| = ‖I_h y − y_h‖_{L∞}`.
pub fn error_linf_discrete(
    mesh: &TriangleMesh,
    y_h: &[f64],
    exact: impl Fn(Point) -> f64,
) -> Result<f64> {
    check_len(mesh, y_h)?;
    Ok(mesh
        .nodes()
        .iter()
        .zip(y_h)
        .fold(0.0, |m, (&p, &v)| m.max((exact(p) - v).abs())))
}

/// `‖y − y_h‖_{L²}` by element quadrature.
///
/// # Panics
///
/// If `rule` is exact for less than degree 4.
pub fn error_l2<F>(
    mesh: &TriangleMesh,
    y_h: &[f64],
    exact: F,
    rule: &TriangleRule,
    exec: Exec,
) -> Result<f64>
where
    F: Fn(Point) -> f64 + Sync + Send,
{
    assert!(
        rule.exact_degree() >= 4,
        "L² error needs a rule of degree ≥ 4"
    );
    check_len(mesh, y_h)?;
    let parts = exec.map(mesh.num_triangles(), |t| {
        let p = mesh.triangle_points(t);
        let tri = mesh.triangles()[t];
        let jac = 2.0 * mesh.area(t);
        rule.iter()
            .map(|(bary, w)| {
                let x = to_physical(&p, bary);
                let yh = bary[0] * y_h[tri[0]] + bary[1] * y_h[tri[1]] + bary[2] * y_h[tri[2]];
                let e = exact(x) - yh;
                w * jac * e * e
            })
            .sum::<f64>()
    });
    Ok(parts.iter().sum::<f64>().sqrt())
}

/// `|y − y_h|_{H¹} = ‖∇y − ∇y_h‖_{L²}` by element quadrature.
pub fn error_h1_semi<G>(
    mesh: &TriangleMesh,
    y_h: &[f64],
    exact_gradient: G,
    rule: &TriangleRule,
    exec: Exec,
) -> Result<f64>
where
    G: Fn(Point) -> Result<Point> + Sync + Send,
{
    check_len(mesh, y_h)?;
    let parts = exec.try_map(mesh.num_triangles(), |t| {
        let p = mesh.triangle_points(t);
        let tri = mesh.triangles()[t];
        let area = mesh.area(t);
        let g = barycentric_gradients(&p, area);
        let grad_h = g[0] * y_h[tri[0]] + g[1] * y_h[tri[1]] + g[2] * y_h[tri[2]];
        let mut s = 0.0;
        for (bary, w) in rule.iter() {
            let d = exact_gradient(to_physical(&p, bary))? - grad_h;
            s += w * 2.0 * area * d.dot(d);
        }
        Ok::<_, Error>(s)
    })?;
    Ok(parts.iter().sum::<f64>().sqrt())
}

/// `|u_h − v_h|_{H¹}` for two discrete functions, from the piecewise
/// constant gradients.
pub fn h1_semi_difference(mesh: &TriangleMesh, u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(mesh, u)?;
    check_len(mesh, v)?;
    let mut s = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.area(t);
        let g = barycentric_gradients(&mesh.triangle_points(t), area);
        let d = tri.map(|i| u[i] - v[i]);
        let grad = g[0] * d[0] + g[1] * d[1] + g[2] * d[2];
        s += area * grad.dot(grad);
    }
    Ok(s.sqrt())
}

/// Full `H¹` norm of a discrete function, `√(vᵀ(K + M)v)`.
pub fn h1_norm_discrete(mesh: &TriangleMesh, v: &[f64], exec: Exec) -> Result<f64> {
    check_len(mesh, v)?;
    let a = assemble_system(mesh, exec)?;
    let av = a.spmv_with(v, exec)?;
    Ok(dot(v, &av).max(0.0).sqrt())
}
