use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn polycycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn generate(dir: &TempDir, name: &str, sides: &str, points: &str, seed: &str) -> String {
    let out = dir.path().join(name);
    let o = polycycle(&["generate", "--sides", sides, "--points", points, "--seed", seed, "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fs::read_to_string(out).unwrap()
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = generate(&dir, "a.txt", "12", "9", "7");
    let b = generate(&dir, "b.txt", "12", "9", "7");
    let c = generate(&dir, "c.txt", "12", "9", "8");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(polycycle::instance::parse_instance(&a).is_ok());
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.txt");
    let o = polycycle(&["generate", "--sides", "2", "--points", "5", "--seed", "1", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(polycycle(&["solve"]).status.code(), Some(1));
    assert_eq!(polycycle(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_instance_exits_two() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("bad.txt");
    fs::write(&inst, "POLYGON 3\n0 0\n").unwrap();
    let out = dir.path().join("s.txt");
    let o = polycycle(&["solve", "--instance", path_str(&inst), "--version", "2", "--seed", "1", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn solve_is_deterministic_and_respects_cap() {
    let dir = TempDir::new().unwrap();
    generate(&dir, "inst.txt", "15", "12", "3");
    let inst = dir.path().join("inst.txt");
    let solve = |name: &str, gens: &str| {
        let out = dir.path().join(name);
        let o = polycycle(&[
            "solve", "--instance", path_str(&inst), "--version", "2", "--seed", "11",
            "--generations", gens, "--out", path_str(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(out).unwrap()
    };
    assert_eq!(solve("a.txt", "300"), solve("b.txt", "300"));
    let zero = solve("z.txt", "0");
    assert!(zero.lines().any(|l| l == "GENERATIONS 0"), "{zero}");
}

#[test]
fn oracle_solves_small_and_refuses_large() {
    let dir = TempDir::new().unwrap();
    let small = dir.path().join("small.txt");
    fs::write(&small, "POLYGON 4\n0 0\n10 0\n10 10\n0 10\nPOINTS 4\n2 2\n8 2\n8 8\n2 8\n").unwrap();
    let o = polycycle(&["oracle", "--instance", path_str(&small)]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("min_f=0, examined=3"), "{text}");

    generate(&dir, "large.txt", "10", "10", "1");
    let o = polycycle(&["oracle", "--instance", path_str(&dir.path().join("large.txt"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_marks_every_crossing() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("inst.txt");
    fs::write(&inst, "POLYGON 4\n0 0\n10 0\n10 10\n0 10\nPOINTS 4\n2 2\n8 2\n8 8\n2 8\n").unwrap();
    let sol = dir.path().join("sol.txt");
    fs::write(&sol, "ORDER 0 2 1 3\nFITNESS 1 0 1\nGENERATIONS 0\n").unwrap();
    let svg = dir.path().join("out.svg");
    let o = polycycle(&["render", "--instance", path_str(&inst), "--solution", path_str(&sol), "--svg", path_str(&svg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="crossing""#).count(), 1);

    // A solution whose recorded counts are wrong is rejected.
    fs::write(&sol, "ORDER 0 2 1 3\nFITNESS 0 0 0\nGENERATIONS 0\n").unwrap();
    let o = polycycle(&["render", "--instance", path_str(&inst), "--solution", path_str(&sol), "--svg", path_str(&svg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_writes_full_grid() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("grid.csv");
    let run = || {
        let o = polycycle(&[
            "experiment", "--sides", "10,15", "--points", "5,8", "--polygons", "2", "--runs", "2",
            "--generations", "50", "--seed", "9", "--no-timing", "--csv", path_str(&csv),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(&csv).unwrap()
    };
    let first = run();
    assert_eq!(first.lines().count(), 1 + 2 * 2 * 2 * 2 * 2);
    assert!(first.starts_with("sides,points,polygon_id,run_id,version,"));
    assert_eq!(first, run());
}
