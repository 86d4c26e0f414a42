use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gradfem::assembly::{assemble_load, assemble_system};
use gradfem::benchmark::{
    graded_sector_mesh, run_convergence_study, BenchmarkProblem, StudyConfig,
};
use gradfem::quadrature::{EdgeRule, TriangleRule};
use gradfem::Exec;

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    let bench = BenchmarkProblem::new(1.5 * PI).unwrap();
    let (vol, edge) = (TriangleRule::with_degree(5), EdgeRule::with_degree(5));
    for level in [5, 7] {
        let mesh = graded_sector_mesh(1.5 * PI, 0.3, 1.0, level).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(
                BenchmarkId::new(format!("matrix/{name}"), level),
                &mesh,
                |b, m| b.iter(|| assemble_system(m, exec).unwrap()),
            );
            group.bench_with_input(
                BenchmarkId::new(format!("load/{name}"), level),
                &mesh,
                |b, m| {
                    b.iter(|| {
                        assemble_load(
                            m,
                            |x| bench.f_lin(x),
                            |x, n| bench.neumann(x, n),
                            &vol,
                            &edge,
                            exec,
                        )
                        .unwrap()
                    })
                },
            );
        }
    }
    group.finish();
}

fn spmv(c: &mut Criterion) {
    let mut group = c.benchmark_group("spmv");
    for level in [6, 8] {
        let mesh = graded_sector_mesh(1.5 * PI, 0.3, 1.0, level).unwrap();
        let a = assemble_system(&mesh, Exec::Parallel).unwrap();
        let x: Vec<f64> = (0..a.n()).map(|i| (i as f64).sin()).collect();
        let mut y = vec![0.0; a.n()];
        for (name, exec) in POLICIES {
            group.bench_function(BenchmarkId::new(name, level), |b| {
                b.iter(|| a.spmv_into(&x, &mut y, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn study(c: &mut Criterion) {
    let mut group = c.benchmark_group("study");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        let mut config = StudyConfig::new(1.5 * PI, 0.3);
        config.levels = 3..=6;
        config.exec = exec;
        config.solve.exec = exec;
        group.bench_function(name, |b| b.iter(|| run_convergence_study(&config).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, assembly, spmv, study);
criterion_main!(benches);
