use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use casimir::oracle::fixtures;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_casimir"));
    c.env_remove("CASIMIR_MAX_TERMS");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str], cfg: Option<&Path>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(p) = cfg {
        c.arg("--config").arg(p);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn line_value(text: &str, prefix: &str) -> f64 {
    let line = text.lines().find_map(|l| l.strip_prefix(prefix)).unwrap_or_else(|| panic!("no '{prefix}' line"));
    line.split_whitespace().next().unwrap().parse().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn validate_reports_unit_determinant() {
    for name in ["minkowski.conf", "rotating_unit_det.conf"] {
        let o = run(&["validate"], Some(&config(name)));
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("valid; −g = 1; ĝ00 = 1"), "{}", stdout(&o));
    }
}

#[test]
fn validate_names_the_failed_condition() {
    let o = run(&["validate"], Some(&config("invalid_g00.conf")));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("g00 > 0"));
}

#[test]
fn config_errors_carry_path_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(dir.path(), "bad.conf", "[metric]\nname = minkowski\n\n[cavity]\nL = one\n");
    let o = run(&["energy"], Some(&p));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.conf:5:"), "{}", stderr(&o));
}

#[test]
fn energy_outputs() {
    let o = run(&["energy"], Some(&config("minkowski.conf")));
    let text = stdout(&o);
    assert!(text.contains("E_p = -6.85389194520e-3"));
    assert!(text.contains("E_0 = -6.85389194520e-3"));
    assert!(text.lines().next().unwrap().contains("197.3269804"));

    let o = run(&["energy"], Some(&config("static_conformal.conf")));
    let text = stdout(&o);
    assert!(text.contains("redshift factor = 1.00000000000e0"));
    assert_eq!(line_value(&text, "E_0 = "), line_value(&text, "E_p = "));

    let o = run(&["energy"], Some(&config("stationary.conf")));
    assert!(stdout(&o).contains("redshift factor = 8.16496580928e-1"));
}

#[test]
fn observer_override() {
    let cfg = config("gravitating.conf");
    let moved = stdout(&run(&["energy"], Some(&cfg)));
    assert!(moved.contains("(z = 0.5)"));
    let origin = stdout(&run(&["energy", "--observer-z", "0"], Some(&cfg)));
    assert_eq!(line_value(&origin, "E_z = "), line_value(&origin, "E_0 = "));
    let below = run(&["energy", "--observer-z", "-5"], Some(&cfg));
    assert_ne!(below.status.code(), Some(0));
}

#[test]
fn thermal_single_point_is_consistent() {
    let o = run(&["thermal"], Some(&config("gravitating.conf")));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = stdout(&o);
    let f = line_value(&t, "F = ");
    let ez = line_value(&t, "E_z = ");
    let root = line_value(&t, "sqrt(-g) = ");
    let df = line_value(&t, "Delta_T F_p = ");
    assert!((f - (ez + root * df)).abs() < 1e-13);
    let (u, s, tp) = (line_value(&t, "U = "), line_value(&t, "S = "), line_value(&t, "T_p = "));
    assert!((u - f - tp * s).abs() < 1e-13);
}

#[test]
fn sweep_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = run(&["sweep", "--out", out.to_str().unwrap()], Some(&config("sweep.conf")));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().next().unwrap(), casimir::cli::CSV_HEADER);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 60);
    // fixed 12-significant-digit scientific notation
    let first = text.lines().nth(1).unwrap();
    assert!(first.split(',').all(|x| x.split('e').next().unwrap().trim_start_matches('-').len() == 13));
    // the heat-capacity maximum lies within half a grid step of 0.628
    let peak = rows.iter().max_by(|x, y| x[4].total_cmp(&y[4])).unwrap()[0];
    assert!((peak - 0.628).abs() <= 0.5 * 2.9 / 59.0 + 1e-12, "peak at {peak}");
}

#[test]
fn fine_sweep_locates_heat_capacity_peak() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fine.csv");
    let o = run(&["sweep", "--points", "2901", "--out", out.to_str().unwrap()], Some(&config("sweep.conf")));
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    let peak = rows.iter().max_by(|x, y| x[4].total_cmp(&y[4])).unwrap()[0];
    assert!((peak - 0.628).abs() <= 0.01, "peak at {peak}");
}

#[test]
fn zero_width_sweep_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "z.conf",
        "[metric]\nname = minkowski\n[cavity]\nL = 1\n[thermal]\nfrom = 0.7\nto = 0.7\npoints = 9\n",
    );
    let o = run(&["sweep"], Some(&p));
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 0.7);
}

#[test]
fn rotating_sweep_matches_flat_scaled_columns() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write_config(
        dir.path(),
        "flat.conf",
        "[metric]\nname = minkowski\n[cavity]\nL = 1\n[thermal]\nmode = reduced\nfrom = 0.1\nto = 3\npoints = 60\n",
    );
    let a = stdout(&run(&["sweep"], Some(&flat)));
    let b = stdout(&run(&["sweep"], Some(&config("rotating_unit_det.conf"))));
    let scaled =
        |t: &str| -> Vec<String> { t.lines().map(|l| l.split(',').take(5).collect::<Vec<_>>().join(",")).collect() };
    assert_eq!(scaled(&a), scaled(&b));
}

#[test]
fn floor_omissions_give_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "hot.conf",
        "[metric]\nname = minkowski\n[cavity]\nL = 1\n[thermal]\nmode = reduced\nfrom = 50\nto = 150\npoints = 5\n",
    );
    let o = run(&["sweep"], Some(&p));
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(csv_rows(&stdout(&o)).len(), 3);
    assert_eq!(stderr(&o).matches("below the beta_tilde accuracy floor").count(), 2);
}

#[test]
fn max_terms_environment_override() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "t.conf",
        "[metric]\nname = minkowski\n[cavity]\nL = 1\n[thermal]\nmode = reduced\nvalue = 5\n",
    );
    let ok = bin().args(["thermal", "--config"]).arg(&p).env("CASIMIR_MAX_TERMS", "2000").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let short = bin().args(["thermal", "--config"]).arg(&p).env("CASIMIR_MAX_TERMS", "3").output().unwrap();
    assert_eq!(short.status.code(), Some(1));
    assert!(stderr(&short).contains("series truncated"));
    let bad = bin().args(["thermal", "--config"]).arg(&p).env("CASIMIR_MAX_TERMS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn oracle_subcommands_write_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let cut = dir.path().join("cut.txt");
    let o = run(&["oracle", "cutoff", "--L", "1", "--out", cut.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let r = fixtures::read_file(&cut).unwrap();
    let target = -std::f64::consts::PI.powi(2) / 1440.0;
    assert!((r[0].value().unwrap() - target).abs() < 1e-3 * target.abs());

    let modes = run(&["oracle", "modes", "--metric", config("stationary.conf").to_str().unwrap()], None);
    let r = fixtures::parse(&stdout(&modes)).unwrap();
    assert!(r[0].value().unwrap() < 1e-8);

    let th = run(&["oracle", "thermal", "--beta-tilde", "1", "--digits", "50"], None);
    assert_eq!(th.status.code(), Some(0));
    let fresh = fixtures::parse(&stdout(&th)).unwrap();
    let golden =
        fixtures::read_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/thermal_bracket.txt")).unwrap();
    let stored = golden.iter().find(|r| r.get("beta_tilde") == Some("1")).unwrap();
    assert_eq!(fresh[0].get("value"), stored.get("value"));

    let weak = run(&["oracle", "thermal", "--beta-tilde", "1", "--digits", "20"], None);
    assert_eq!(weak.status.code(), Some(1));
}

#[test]
fn missing_config_is_reported() {
    let o = run(&["energy"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--config"));
    let o = run(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
}
