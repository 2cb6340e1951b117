use ftlab_core::{ftf, Grid, RealField};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn ftlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ftlab"));
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

struct Run {
    dir: TempDir,
}

impl Run {
    fn new(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("run.cfg"), config).unwrap();
        Self { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cmd(&self, sub: &str, out: &str, extra: &[&str], env: &[(&str, &str)]) -> Output {
        let cfg = self.path("run.cfg");
        let out = self.path(out);
        let mut args = vec![
            sub,
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        ftlab(&args, env)
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Every listed artifact exists and parses.
fn check_manifest(dir: &Path) {
    let text = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
    let mut n = 0;
    for line in text.lines() {
        if let Some(name) = line.strip_prefix("artifact = ") {
            let p = dir.join(name);
            if name.ends_with(".ftf") {
                ftf::read(&p).unwrap();
            } else if name.ends_with(".csv") {
                let rows = csv(&p);
                assert!(rows.len() >= 2, "{name}");
                assert!(rows.iter().all(|r| r.len() == rows[0].len()), "{name}");
            } else {
                assert!(p.exists());
            }
            n += 1;
        }
    }
    assert!(n > 0);
}

const SMALL: &str = "n = 64\nm_t = 16\n";

#[test]
fn noise_is_deterministic_and_reproduces_unit_variance() {
    let r = Run::new("hurst = 0.5\nseed = 3\n");
    for out in ["a", "b"] {
        let o = r.cmd("noise", out, &[], &[]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for f in ["B.ftf", "Z.ftf", "covariance.csv", "regularity.csv"] {
        let a = std::fs::read(r.path("a").join(f)).unwrap();
        let b = std::fs::read(r.path("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    check_manifest(&r.path("a"));
    let rows = csv(&r.path("a").join("covariance.csv"));
    assert_eq!(
        rows[0],
        ["x", "y", "empirical", "formula", "stderr", "within_3sigma"]
    );
    let one = rows
        .iter()
        .skip(1)
        .find(|row| row[0].parse::<f64>().unwrap() == 1.0 && row[1].parse::<f64>().unwrap() == 1.0)
        .expect("row (1, 1)");
    let (emp, stderr_) = (
        one[2].parse::<f64>().unwrap(),
        one[4].parse::<f64>().unwrap(),
    );
    assert!((emp - 1.0).abs() <= 3.0 * stderr_, "{emp} ± {stderr_}");
    assert_eq!(one[5], "true");
    // 17 significant digits
    assert_eq!(one[0], "1.0000000000000000e0");
}

#[test]
fn noise_rejects_hurst_outside_unit_interval() {
    for h in ["1.2", "0", "-0.1"] {
        let r = Run::new(&format!("hurst = {h}\n"));
        let o = r.cmd("noise", "out", &[], &[]);
        assert_eq!(code(&o), 2);
        assert!(stderr(&o).contains("Hurst"), "{}", stderr(&o));
    }
}

#[test]
fn unknown_keys_and_bad_values_exit_with_code_two() {
    for cfg in [
        "hurts = 0.5\n",
        "m_t = ten\n",
        "n = 100\n",
        "kind = brownian\n",
    ] {
        let r = Run::new(cfg);
        let o = r.cmd("noise", "out", &[], &[]);
        assert_eq!(code(&o), 2, "{cfg}: {}", stderr(&o));
    }
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = ftlab(
        &[
            "verify",
            "--config",
            "/nonexistent/run.cfg",
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn solve_with_zero_noise_takes_one_iteration() {
    let r = Run::new(SMALL);
    let z = RealField::zeros(Grid::centered(1, 64).unwrap());
    ftf::write(&r.path("zero.ftf"), &z).unwrap();
    let noise = r.path("zero.ftf");
    let o = r.cmd("solve", "out", &["--noise", noise.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let diag = csv(&r.path("out").join("diagnostics.csv"));
    assert_eq!(diag.len(), 2);
    assert_eq!(diag[1][0], "1");
    assert_eq!(diag[1][1].parse::<f64>().unwrap(), 0.0);
    let index = std::fs::read_to_string(r.path("out").join("index.txt")).unwrap();
    let lines: Vec<&str> = index.lines().collect();
    assert_eq!(lines.len(), 17);
    let last: Vec<&str> = lines[16].split(' ').collect();
    assert_eq!(last[0], "16");
    assert_eq!(last[1].parse::<f64>().unwrap(), 0.5);
    assert_eq!(last[2], "path_0016.ftf");
    check_manifest(&r.path("out"));
}

#[test]
fn solve_with_fbm_noise_converges() {
    let r = Run::new("n = 128\nm_t = 32\nhurst = 0.9\nseed = 2\n");
    let o = r.cmd("solve", "out", &[], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let diag = csv(&r.path("out").join("diagnostics.csv"));
    assert!(diag.len() - 1 <= 30);
    let last: f64 = diag.last().unwrap()[1].parse().unwrap();
    assert!(last < 1e-8);
}

#[test]
fn solve_reports_non_convergence_with_code_three() {
    let r = Run::new("n = 64\nm_t = 16\nmax_iter = 1\nrho = 1\n");
    let o = r.cmd("solve", "out", &[], &[]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(r.path("out").join("diagnostics.csv").exists());
}

#[test]
fn solve_rejects_boundary_gamma() {
    // 2γ = 1 − β − δ exactly
    let r = Run::new("beta = 0.2\ndelta = 0.3\ngamma = 0.25\n");
    let o = r.cmd("solve", "out", &[], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("gamma"), "{}", stderr(&o));
}

#[test]
fn solve_rejects_noise_on_another_grid() {
    let r = Run::new(SMALL);
    ftf::write(
        &r.path("z.ftf"),
        &RealField::zeros(Grid::centered(1, 128).unwrap()),
    )
    .unwrap();
    let noise = r.path("z.ftf");
    let o = r.cmd("solve", "out", &["--noise", noise.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn environment_overrides_the_file() {
    let r = Run::new(SMALL);
    let z = RealField::zeros(Grid::centered(1, 64).unwrap());
    ftf::write(&r.path("zero.ftf"), &z).unwrap();
    let noise = r.path("zero.ftf");
    let o = r.cmd(
        "solve",
        "out",
        &["--noise", noise.to_str().unwrap()],
        &[("FT_M_T", "4")],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let index = std::fs::read_to_string(r.path("out").join("index.txt")).unwrap();
    assert_eq!(index.lines().count(), 5);
}

#[test]
fn verify_defaults_pass_and_include_sqrt_pi() {
    let r = Run::new("");
    let o = r.cmd("verify", "out", &[], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv(&r.path("out").join("reports.csv"));
    assert_eq!(
        rows[0].join(","),
        "name,measured,reference,tolerance,params,pass"
    );
    assert!(rows.iter().skip(1).all(|row| row[5] == "true"));
    let sqrt_pi = rows
        .iter()
        .find(|row| row[0] == "gamma_integral_bound" && row[4].starts_with("theta=0.5;rho=1;"))
        .expect("theta=0.5, rho=1 row");
    let reference: f64 = sqrt_pi[2].parse().unwrap();
    assert!((reference - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    check_manifest(&r.path("out"));
}

#[test]
fn verify_rejects_beta_above_delta_before_computing() {
    let r = Run::new("beta = 0.35\ndelta = 0.3\n");
    let o = r.cmd("verify", "out", &[], &[]);
    assert_eq!(code(&o), 2);
    assert!(!r.path("out").exists());
}

#[test]
fn contraction_defaults_decrease() {
    let r = Run::new("");
    let o = r.cmd("contraction", "out", &[], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv(&r.path("out").join("contraction.csv"));
    assert_eq!(rows[0], ["rho", "c"]);
    let c: Vec<f64> = rows.iter().skip(1).map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(c.len(), 4);
    assert!(c.windows(2).all(|w| w[1] < w[0]), "{c:?}");
    let slope = csv(&r.path("out").join("slope.csv"));
    let s: f64 = slope[1][0].parse().unwrap();
    assert!((s + 0.05).abs() <= 0.15, "{s}");
}

#[test]
fn contraction_without_drift_is_all_zero() {
    let r = Run::new(SMALL);
    ftf::write(
        &r.path("zero.ftf"),
        &RealField::zeros(Grid::centered(1, 64).unwrap()),
    )
    .unwrap();
    let noise = r.path("zero.ftf");
    let o = r.cmd(
        "contraction",
        "out",
        &["--noise", noise.to_str().unwrap()],
        &[],
    );
    // c ≡ 0 is not strictly decreasing and has no log-log slope.
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let rows = csv(&r.path("out").join("contraction.csv"));
    assert!(rows
        .iter()
        .skip(1)
        .all(|r| r[1].parse::<f64>().unwrap() == 0.0));
}
