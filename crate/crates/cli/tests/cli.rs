use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use gradfem::benchmark::graded_sector_mesh;
use gradfem::geometry::io::read_mesh;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradfem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Value of a `# key value` summary line.
fn summary(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("# {key} ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn unit_square_mesh_counts() {
    let out = run(&["mesh", "--omega", "0.5pi", "--mu", "1", "--levels", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(summary(&text, "nodes"), 9.0);
    assert_eq!(summary(&text, "triangles"), 8.0);
    assert!(text.contains("# audit satisfied: true"));
}

#[test]
fn bad_omega_names_the_key() {
    let out = run(&["mesh", "--omega", "3pi"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("omega"), "{}", stderr(&out));
    let out = run(&["study", "--mu", "1.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("mu"));
}

#[test]
fn mesh_round_trips_and_passes_its_own_audit() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("l.mesh");
    let out = run(&[
        "mesh",
        "--omega",
        "1.5pi",
        "--mu",
        "0.3",
        "--levels",
        "4",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let read = read_mesh(std::io::BufReader::new(std::fs::File::open(&file).unwrap())).unwrap();
    let direct = graded_sector_mesh(1.5 * PI, 0.3, 1.0, 4).unwrap();
    assert_eq!(read.nodes(), direct.nodes());
    assert_eq!(read.triangles(), direct.triangles());

    let out = run(&["check-grading", file.to_str().unwrap(), "--mu", "0.3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("satisfied: true"));
}

#[test]
fn wrong_mu_fails_audit_deep_down() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("l.mesh");
    let out = run(&[
        "mesh",
        "--omega",
        "1.5pi",
        "--mu",
        "0.3",
        "--levels",
        "6",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["check-grading", file.to_str().unwrap(), "--mu", "1.0"]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("satisfied: false"));
}

#[test]
fn truncated_mesh_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cut.mesh");
    let out = run(&["mesh", "--omega", "0.75pi", "--levels", "2"]);
    let text = stdout(&out);
    let cut: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
    std::fs::write(&file, cut).unwrap();
    let out = run(&["check-grading", file.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("line 21"), "{}", stderr(&out));

    let out = run(&["check-grading", "/nonexistent/mesh"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn patch_test_reproduces_constant() {
    let out = run(&[
        "solve",
        "--patch-test",
        "--omega",
        "1.5pi",
        "--mu",
        "0.3",
        "--levels",
        "4",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut count = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let v: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{line}");
        count += 1;
    }
    assert_eq!(count as f64, summary(&text, "nodes"));
}

#[test]
fn benchmark_solve_matches_table_magnitude() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("y.txt");
    let out = run(&[
        "solve",
        "--omega",
        "0.75pi",
        "--mu",
        "0.6",
        "--levels",
        "6",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let err = summary(&stdout(&out), "err_linf");
    assert!(err / 9.38e-5 < 4.0 && 9.38e-5 / err < 4.0, "{err:e}");
    let values = std::fs::read_to_string(&file).unwrap();
    assert_eq!(
        values.lines().count() as f64,
        summary(&stdout(&out), "nodes")
    );
}

#[test]
fn cubic_solve_reports_newton() {
    let out = run(&[
        "solve",
        "--problem",
        "cubic",
        "--omega",
        "1.5pi",
        "--mu",
        "0.3",
        "--levels",
        "5",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let n = summary(&stdout(&out), "newton_iterations");
    assert!((1.0..=10.0).contains(&n));
}

#[test]
fn single_level_study_has_empty_eoc() {
    let out = run(&["study", "--omega", "1.5pi", "--levels", "1..1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows[0],
        "level,h,nodes,triangles,err_linf,eoc_linf,err_l2,eoc_l2,err_h1,solver_iters"
    );
    assert_eq!(rows.len(), 2);
    let cells: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(cells[0], "1");
    assert!(cells[5].is_empty() && cells[7].is_empty());
}

fn study_csv(extra: &[&str], dir: &Path, name: &str) -> Vec<u8> {
    let file = dir.join(name);
    let mut args = vec![
        "study",
        "--omega",
        "0.75pi",
        "--mu",
        "0.6",
        "--levels",
        "2..4",
        "-o",
        file.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    std::fs::read(file).unwrap()
}

#[test]
fn study_is_byte_identical_across_runs_and_policies() {
    let dir = tempfile::tempdir().unwrap();
    let a = study_csv(&[], dir.path(), "a.csv");
    let b = study_csv(&[], dir.path(), "b.csv");
    let c = study_csv(&["--sequential"], dir.path(), "c.csv");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# convex sector\nomega = 3pi/4\nmu = 0.6\nlevels = 1..2\n",
    )
    .unwrap();
    let base = run(&["study", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&base), 0, "{}", stderr(&base));
    assert!(stdout(&base).contains("mu"));
    let over = run(&["study", "--config", cfg.to_str().unwrap(), "--levels", "1"]);
    let rows = stdout(&over)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(rows, 2);

    std::fs::write(&cfg, "omega = 3pi/4\nsmoothing = 3\n").unwrap();
    let bad = run(&["study", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("smoothing"));
}
