use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_euler-bench"))
        .args(args)
        .env("EULER_BENCH_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn files_with_ext(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

#[test]
fn list_cases_names_every_case() {
    let o = bench(&["list-cases"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["titarev-toro", "hurricane-critical", "four-shocks", "rayleigh-taylor", "isentropic-vortex"] {
        assert!(text.contains(name), "{name} missing");
    }
    let json = bench(&["list-cases", "--json"]);
    assert!(json.status.success());
    let j = stdout(&json);
    assert!(j.trim_start().starts_with('{') && j.contains("\"gamma\""));
}

#[test]
fn run_then_compare_against_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = bench(&[
        "run",
        "--case",
        "isentropic-vortex",
        "--mesh",
        "16x16",
        "--t-end",
        "0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("manifest.json").exists());
    let csv = files_with_ext(&out, "csv");
    let snap = csv
        .iter()
        .find(|p| p.file_name().unwrap().to_string_lossy().contains("vortex"))
        .unwrap_or_else(|| &csv[0])
        .clone();

    let reference = dir.path().join("ref.csv");
    let r = bench(&[
        "reference",
        "--case",
        "isentropic-vortex",
        "--mesh",
        "16x16",
        "--t",
        "0.1",
        "--out",
        reference.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));

    let (s, rf) = (snap.to_str().unwrap(), reference.to_str().unwrap());
    let loose = bench(&["compare", s, rf, "--tol", "0.1"]);
    assert_eq!(loose.status.code(), Some(0));
    assert!(stdout(&loose).starts_with("component,l1,linf"));
    let tight = bench(&["compare", s, rf, "--tol", "1e-14"]);
    assert_eq!(tight.status.code(), Some(3));

    let same = bench(&["compare", rf, rf]);
    assert_eq!(same.status.code(), Some(0));
    for line in stdout(&same).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1].parse::<f64>().unwrap(), 0.0, "{line}");
        assert_eq!(cols[2].parse::<f64>().unwrap(), 0.0, "{line}");
    }
}

#[test]
fn binary_reference_compares_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("r.csv"), dir.path().join("r.bin"));
    for p in [&a, &b] {
        let o = bench(&["reference", "--case", "hurricane-critical", "--mesh", "20x20", "--out", p.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let o = bench(&["compare", a.to_str().unwrap(), b.to_str().unwrap(), "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(bench(&["run", "--case", "no-such-case"]).status.code(), Some(1));
    assert_eq!(bench(&["run"]).status.code(), Some(1));
    assert_eq!(bench(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bench(&["reference", "--case", "four-shocks", "--out", "/dev/null"]).status.code(), Some(1));
    assert_eq!(bench(&["compare", "/nonexistent/a.csv", "/nonexistent/b.csv"]).status.code(), Some(1));
}

#[test]
fn convergence_prints_a_table() {
    let o = bench(&["convergence", "--case", "isentropic-vortex", "--meshes", "8x8,16x16", "--t-end", "0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "nx,ny,dx,l1,order");
    assert_eq!(lines.len(), 3);
}
