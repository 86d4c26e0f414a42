use std::f64::consts::PI;

use gradfem::assembly::{assemble_load, assemble_mass, assemble_stiffness, assemble_system};
use gradfem::benchmark::{error_linf_discrete, graded_sector_mesh, BenchmarkProblem};
use gradfem::linalg::{cg_solve, dot, CgOptions};
use gradfem::quadrature::{EdgeRule, TriangleRule};
use gradfem::{Exec, Point};

#[test]
fn sparsity_counts_nodes_plus_twice_edges() {
    for (omega, mu, level) in [(0.5 * PI, 1.0, 2), (0.75 * PI, 0.6, 3), (1.5 * PI, 0.3, 4)] {
        let mesh = graded_sector_mesh(omega, mu, 1.0, level).unwrap();
        let a = assemble_system(&mesh, Exec::Sequential).unwrap();
        assert_eq!(a.nnz(), mesh.num_nodes() + 2 * mesh.edges().len());
    }
}

#[test]
fn stiffness_and_mass_reproduce_area() {
    let mesh = graded_sector_mesh(1.5 * PI, 0.3, 1.0, 3).unwrap();
    let ones = vec![1.0; mesh.num_nodes()];
    let k = assemble_stiffness(&mesh, Exec::Parallel).unwrap();
    let m = assemble_mass(&mesh, Exec::Parallel).unwrap();
    let k1 = k.spmv(&ones).unwrap();
    assert!(k1.iter().all(|v| v.abs() < 1e-12));
    assert!((dot(&ones, &m.spmv(&ones).unwrap()) - 3.0).abs() < 1e-12);
    // xᵀKx = |∇x|² · area = area
    let x: Vec<f64> = mesh.nodes().iter().map(|p| p.x).collect();
    assert!((dot(&x, &k.spmv(&x).unwrap()) - 3.0).abs() < 1e-11);
}

#[test]
fn parallel_and_sequential_assembly_agree_bitwise() {
    let mesh = graded_sector_mesh(0.75 * PI, 0.6, 1.0, 4).unwrap();
    let a = assemble_system(&mesh, Exec::Sequential).unwrap();
    let b = assemble_system(&mesh, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn load_quadrature_error_below_discretization_error() {
    let bench = BenchmarkProblem::new(1.5 * PI).unwrap();
    let f = |x: Point| bench.f_lin(x);
    let g = |x: Point, n: Point| bench.neumann(x, n);
    for (mu, level) in [(0.3, 2), (0.3, 4), (0.3, 6), (1.0, 4), (1.0, 6)] {
        let mesh = graded_sector_mesh(1.5 * PI, mu, 1.0, level).unwrap();
        let a = assemble_system(&mesh, Exec::Parallel).unwrap();
        let load = |deg| {
            assemble_load(
                &mesh,
                f,
                g,
                &TriangleRule::with_degree(deg),
                &EdgeRule::with_degree(deg),
                Exec::Parallel,
            )
            .unwrap()
        };
        let opts = CgOptions::default();
        let (y5, y10) = (
            cg_solve(&a, &load(5), &opts).unwrap().0,
            cg_solve(&a, &load(10), &opts).unwrap().0,
        );
        let quad = y5
            .iter()
            .zip(&y10)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let fem = error_linf_discrete(&mesh, &y10, |x| bench.exact(x)).unwrap();
        assert!(
            quad < 0.1 * fem,
            "μ={mu} level {level}: quadrature {quad:e} vs error {fem:e}"
        );
    }
}
