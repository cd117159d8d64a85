use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Fixtures {
    dir: TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let f = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        f.write("a.json", r#"{"atoms": [[0, 0.5], [2, 0.5]]}"#);
        f.write("b.json", r#"{"atoms": [[1, 1]]}"#);
        f.write("half.csv", "value,mass\n0,0.5\n1,0.5\n");
        f.write("ones.csv", "1\n1\n1\n");
        f.write(
            "id.json",
            r#"{"u0": {"knots": [[0, 0], [1, 1]], "tails": ["linear", "linear"], "continuity": "left"},
                "v0": {"knots": [[0, 0], [1, 1]], "continuity": "right"}}"#,
        );
        f.write("x.json", "[1, 0, 0]");
        f.write("y.csv", "0.5\n0.5\n0\n");
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        run_in(self.dir.path(), args, None)
    }
}

fn run_in(dir: &Path, args: &[&str], eps: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stochord"));
    cmd.current_dir(dir).args(args).env_remove("STOCHORD_EPS");
    if let Some(e) = eps {
        cmd.env("STOCHORD_EPS", e);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn check_ssd_both_directions() {
    let f = Fixtures::new();
    let o = f.run(&["check", "ssd", "a.json", "b.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("holds: true"));
    let o = f.run(&["check", "ssd", "b.json", "a.json"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("holds: false"));
    assert!(out.contains("witness: at=1"), "{out}");
}

#[test]
fn identity_pair_matches_ssd() {
    let f = Fixtures::new();
    for (d1, d2) in [("a.json", "b.json"), ("b.json", "a.json"), ("half.csv", "b.json")] {
        let ssd = code(&f.run(&["check", "ssd", d1, d2]));
        let upper = code(&f.run(&["check", "upper", "--pair", "id.json", d1, d2]));
        assert_eq!(ssd, upper, "{d1} {d2}");
    }
}

#[test]
fn check_json_report() {
    let f = Fixtures::new();
    let o = f.run(&["check", "lower", "b.json", "a.json", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"]["holds"], true);
}

#[test]
fn input_errors_exit_two() {
    let f = Fixtures::new();
    f.write("bad.json", r#"{"atoms": [[0, 0.4]]}"#);
    assert_eq!(code(&f.run(&["check", "ssd", "bad.json", "b.json"])), 2);
    assert_eq!(code(&f.run(&["check", "ssd", "missing.json", "b.json"])), 2);
    assert_eq!(code(&f.run(&["check", "nope", "a.json", "b.json"])), 2);
    assert_eq!(code(&f.run(&["check", "ssd", "--pair", "id.json", "a.json", "b.json"])), 2);
    assert_eq!(code(&f.run(&["frobnicate"])), 2);
}

#[test]
fn lorenz_rows() {
    let f = Fixtures::new();
    let o = f.run(&["lorenz", "half.csv", "--points", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0,0\n0.5,0\n1,0.5\n");
    let o = f.run(&["lorenz", "half.csv", "--points", "4", "--normalize"]);
    assert!(stdout(&o).ends_with("1,1\n"));
    let o = f.run(&["lorenz", "ones.csv", "--points", "4", "--normalize"]);
    for line in stdout(&o).lines() {
        let (p, v) = line.split_once(',').unwrap();
        assert_eq!(p.parse::<f64>().unwrap(), v.parse::<f64>().unwrap());
    }
    f.write("zero.json", r#"{"atoms": [[-1, 0.5], [1, 0.5]]}"#);
    assert_eq!(code(&f.run(&["lorenz", "zero.json", "--normalize"])), 2);
}

#[test]
fn welfare_values() {
    let f = Fixtures::new();
    let value = |args: &[&str]| -> f64 {
        let o = f.run(args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["welfare"]["value"].as_f64().unwrap()
    };
    assert!((value(&["welfare", "half.csv", "sgini", "--rho", "2", "--json"]) - 0.75).abs() < 1e-6);
    assert_eq!(value(&["welfare", "half.csv", "mean", "--json"]), 0.5);
    assert_eq!(value(&["welfare", "a.json", "yaari", "--json"]), 1.0);
    f.write("sq.json", r#"{"knots": [[0, 0], [0.5, 0.25], [1, 1]]}"#);
    let y = value(&["welfare", "a.json", "yaari", "--f0", "sq.json", "--json"]);
    assert!((y - 1.5).abs() < 1e-12);
    let r = value(&["welfare", "a.json", "rdeu", "--f0", "sq.json", "--json"]);
    assert_eq!(r, y);
    let o = f.run(&["welfare", "half.csv", "yaari"]);
    assert!(stdout(&o).contains("residual:"));
    assert_eq!(code(&f.run(&["welfare", "half.csv", "sgini", "--rho", "1"])), 2);
    assert_eq!(code(&f.run(&["welfare", "half.csv", "mean", "--f0", "sq.json"])), 2);
}

#[test]
fn majorize_exit_codes() {
    let f = Fixtures::new();
    assert_eq!(code(&f.run(&["majorize", "x.json", "y.csv"])), 0);
    let o = f.run(&["majorize", "y.csv", "x.json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness"));
    let o = f.run(&["majorize", "x.json", "y.csv", "--kind", "weak-upper", "--sums", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sums"]["distorted"], true);
    f.write("short.json", "[1, 2]");
    assert_eq!(code(&f.run(&["majorize", "x.json", "short.json"])), 2);
}

#[test]
fn verify_exit_codes() {
    let f = Fixtures::new();
    let o = f.run(&["verify", "T1", "--trials", "50", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["agreements"], 50);
    assert_eq!(code(&f.run(&["verify", "MAJ", "--exhaustive", "--n", "3", "--grid", "0,1,2"])), 0);
    assert_eq!(code(&f.run(&["verify", "CV2", "--trials", "50"])), 0);
    assert_eq!(code(&f.run(&["verify", "T9"])), 2);
    assert_eq!(code(&f.run(&["verify", "MAJ", "--exhaustive", "--n", "9"])), 2);
}

#[test]
fn eps_from_environment() {
    let f = Fixtures::new();
    f.write("c.json", r#"{"atoms": [[1.000001, 1]]}"#);
    let strict = run_in(f.dir.path(), &["check", "fsd", "c.json", "b.json"], None);
    assert_eq!(code(&strict), 1);
    let loose = run_in(f.dir.path(), &["check", "ssd", "c.json", "b.json"], Some("1e-3"));
    assert_eq!(code(&loose), 0);
    let strict = run_in(f.dir.path(), &["check", "ssd", "c.json", "b.json"], None);
    assert_eq!(code(&strict), 1);
    let bad = run_in(f.dir.path(), &["check", "ssd", "c.json", "b.json"], Some("-1"));
    assert_eq!(code(&bad), 2);
    assert!(f.path("c.json").exists());
}
