use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(args)
        .output()
        .expect("spawn qes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn generate(dir: &Path, stem: &str, args: &[&str]) -> (String, String) {
    let csv = dir.join(format!("{stem}.csv"));
    let mut all = vec!["generate", "-o", csv.to_str().unwrap()];
    all.extend_from_slice(args);
    let o = qes(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    (
        fs::read_to_string(&csv).unwrap(),
        fs::read_to_string(csv.with_extension("meta")).unwrap(),
    )
}

fn meta_value<'a>(meta: &'a str, key: &str) -> &'a str {
    meta.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing {key}"))
}

#[test]
fn builtin_seeds_verify() {
    for seed in ["razavy", "hyperbolic-ratio", "sextic", "algebraic-sqrt"] {
        let o = qes(&["verify", "--seed", seed]);
        assert_eq!(code(&o), 0, "{seed}\n{}", stdout(&o));
        assert!(stdout(&o).contains("overall:   PASS\n"), "{seed}");
    }
}

#[test]
fn records_report() {
    let o = qes(&["verify", "--seed", "sextic", "--format", "records"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("seed=sextic params=a=2"));
    assert!(lines[0].ends_with("normalizability=both-states"));
    assert!(lines[1..lines.len() - 1]
        .iter()
        .all(|l| l.starts_with("check=") && l.contains(" pass=true")));
    assert!(lines.iter().any(|l| l.starts_with("check=riccati ")));
    assert_eq!(*lines.last().unwrap(), "overall=pass");
}

#[test]
fn ground_only_passes() {
    let o = qes(&["verify", "--seed", "algebraic-sqrt", "-p", "A=0.5", "-p", "b=1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("overall:   PASS (ground-only)"));
    assert!(out.contains("psi1_probe"));
}

#[test]
fn custom_seed_verifies() {
    let o = qes(&["verify", "--wplus", "x + x^3", "--format", "records"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("seed=custom "));
    assert!(out.contains(" epsilon=0.5 "));
}

#[test]
fn failed_check_exits_one() {
    // far too coarse for the requested eigenvalue accuracy
    let o = qes(&["verify", "--seed", "razavy", "--points", "101", "--eigen-tol", "1e-12"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("overall:   FAIL"));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["verify", "--seed", "no-such-seed"][..],
        &["verify", "--seed", "sextic", "-p", "a=-1"],
        &["verify", "--seed", "sextic", "-p", "q=1"],
        &["verify", "--wplus", "cosh(x)"],
        &["verify", "--wplus", "sinh("],
        &["verify", "--wplus", "x", "--interval", "3,1"],
        &["check-expr", "a*x"],
    ] {
        let o = qes(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, meta_a) = generate(dir.path(), "a", &["--seed", "hyperbolic-ratio"]);
    let (b, meta_b) = generate(dir.path(), "b", &["--seed", "hyperbolic-ratio"]);
    assert_eq!(a, b);
    assert_eq!(meta_a, meta_b);
    assert_eq!(a.lines().next().unwrap(), "x,W,W1,V_minus,V_plus,psi0,psi1");
    assert_eq!(a.lines().count(), 4002);
}

#[test]
fn wavefunction_columns_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, meta) = generate(dir.path(), "r", &["--seed", "razavy"]);
    let x = column(&csv, "x");
    let h = x[1] - x[0];
    for name in ["psi0", "psi1"] {
        let norm: f64 = column(&csv, name).iter().map(|v| v * v * h).sum();
        assert!((norm - 1.0).abs() <= 1e-10, "{name}: {norm}");
    }
    assert_eq!(meta_value(&meta, "n"), "4001");
    let c0: f64 = meta_value(&meta, "c0").parse().unwrap();
    let ln_c0: f64 = meta_value(&meta, "ln_c0").parse().unwrap();
    assert!((c0.ln() - ln_c0).abs() < 1e-12);
}

#[test]
fn ground_potential_vanishes_at_the_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, meta) = generate(dir.path(), "z", &["--seed", "razavy", "-p", "x0=0"]);
    assert_eq!(meta_value(&meta, "x0"), "0");
    let x = column(&csv, "x");
    let v = column(&csv, "V_minus");
    let w = column(&csv, "W");
    let i = (0..x.len())
        .min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()))
        .unwrap();
    assert!(x[i].abs() < 1e-12);
    // V₋ = ½(W² − W′) at x = 0, where W is odd, so V₋(0) = −W′(0)/2 matches the grid slope
    let slope = (w[i + 1] - w[i - 1]) / (x[i + 1] - x[i - 1]);
    assert!((v[i] + 0.5 * slope).abs() < 1e-4, "{} vs {}", v[i], -0.5 * slope);
}

#[test]
fn custom_sinh_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let (_, meta) = generate(dir.path(), "s", &["--wplus", "sinh(x)"]);
    assert_eq!(meta_value(&meta, "seed"), "custom");
    assert_eq!(meta_value(&meta, "x0"), "0");
    assert_eq!(meta_value(&meta, "epsilon"), "0.5");
    assert_eq!(meta_value(&meta, "xmin"), "-8");
    assert_eq!(meta_value(&meta, "xmax"), "8");
}

#[test]
fn list_seeds_formats() {
    let o = qes(&["list-seeds"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for seed in ["razavy", "hyperbolic-ratio", "sextic", "algebraic-sqrt"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{seed}  W+ = "))), "{seed}");
    }
    let o = qes(&["list-seeds", "--format", "records"]);
    let records = stdout(&o);
    assert_eq!(records.lines().count(), 4);
    assert!(records.lines().all(|l| l.starts_with("name=")));
    assert!(records.contains("name=sextic wplus=a*x+b*x^3 params=a,b"));
}

#[test]
fn check_expr_exit_codes() {
    let o = qes(&["check-expr", "x + x^3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("admissible: yes"));
    let o = qes(&["check-expr", "x^2 + 1", "--interval", "-2,2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("no sign change"));
    let o = qes(&["check-expr", "sinh(", "--interval", "-2,2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# sextic with a wider well\nseed = sextic\nparam.a = 3\nparams = b=0.5\npoints = 2001\nformat = records\n",
    )
    .unwrap();
    let o = qes(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains(" params=a=3;b=0.5 "), "{out}");
    assert!(out.contains(" n=2001 "));

    let o = qes(&["verify", "--config", cfg.to_str().unwrap(), "--points", "3001", "-p", "a=1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains(" n=3001 "));
    assert!(out.contains(" params=a=1;b=0.5 "), "{out}");
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = qes(&["verify", "--seed", "sextic", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(path).unwrap(), stdout(&o));
}
