use std::path::PathBuf;
use std::process::{Command, Output};

fn bosegas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosegas")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bosegas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn scatter_barrier_scattering_length() {
    let o = bosegas(&["scatter", "--potential", "barrier", "--v0", "2", "--range", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert!((v["a"].as_f64().unwrap() - 0.2384058).abs() < 1e-7);
    assert_eq!(v["config"]["v0"], 2.0);
}

#[test]
fn scatter_csv_has_residual_column() {
    let o = bosegas(&["scatter", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config="));
    assert_eq!(lines.next().unwrap(), "r,g,omega,fit_residual");
    assert!(lines.count() > 100);
}

#[test]
fn tabulated_potential_from_file() {
    let path = scratch("soft.txt");
    std::fs::write(&path, "# r V\n0 3\n0.5 2\n1.0, 0.5\n1.5 0\n").unwrap();
    let o = bosegas(&["scatter", "--potential-file", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert!(v["a_closed_form"].is_null());
    assert!(v["identity_rel_err"].as_f64().unwrap() < 1e-8);
}

#[test]
fn freeenergy_zero_temperature_has_no_thermal_part() {
    let o = bosegas(&["freeenergy", "--rho", "1e-4", "--temp", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["thermal"].as_f64().unwrap(), 0.0);
    for key in ["inputs", "leading", "lhy_correction", "total", "schedule", "constraint_report"] {
        assert!(!v[key].is_null(), "{key}");
    }
    let lead = v["leading"].as_f64().unwrap();
    let a = v["inputs"]["a"].as_f64().unwrap();
    assert!((lead - 4.0 * std::f64::consts::PI * a * 1e-8).abs() < 1e-20);
}

#[test]
fn kernel_output_is_deterministic_across_thread_counts() {
    let a = bosegas(&["kernel", "--cutoff", "1"]);
    let b = Command::new(env!("CARGO_BIN_EXE_bosegas"))
        .args(["kernel", "--cutoff", "1"])
        .env("BOSEGAS_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().nth(1).unwrap(), "p_index,q_index,M_pq,expected,abs_err");
    assert_eq!(text.lines().count(), 2 + 64);
}

#[test]
fn bad_thread_count_is_a_validation_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_bosegas"))
        .args(["scatter"])
        .env("BOSEGAS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validation_errors_exit_one_with_single_line() {
    for args in [
        &["scatter", "--v0", "-1"][..],
        &["spectrum", "--lambda", "0.01"],
        &["scatter", "--potential", "file"],
        &["scatter", "--potential-file", "/nonexistent/v.txt"],
        &["sweep", "--sweep", "nope"],
        &["scatter", "--no-such-flag"],
    ] {
        let o = bosegas(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("error: kind="), "{err}");
    }
}

#[test]
fn config_file_precedence() {
    let path = scratch("config.json");
    std::fs::write(&path, r#"{"v0": 8.0, "range": 0.5}"#).unwrap();
    let p = path.to_str().unwrap();
    let from_file = json(&bosegas(&["scatter", "--config", p]));
    assert_eq!(from_file["config"]["v0"], 8.0);
    let flag = json(&bosegas(&["scatter", "--config", p, "--v0", "2", "--range", "1"]));
    assert!((flag["a"].as_f64().unwrap() - 0.2384058).abs() < 1e-7);
    std::fs::write(&path, r#"{"v_zero": 8.0}"#).unwrap();
    assert_eq!(bosegas(&["scatter", "--config", p]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("spectrum.csv");
    let o = bosegas(&["spectrum", "--cutoff", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "mode,p,A_p,B_p,nu,phi,e,e_approx,abs_dev");
    assert_eq!(text.lines().count(), 2 + 7);
}

#[test]
fn oracle_matches_bogoliubov_levels() {
    let o = bosegas(&["oracle", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["converged"], true);
    let eig = v["spectrum"]["eigenvalues"].as_array().unwrap();
    let lev = v["bogoliubov_levels"].as_array().unwrap();
    for (a, b) in eig.iter().zip(lev).take(10) {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-7);
    }
}

#[test]
fn oracle_full_hamiltonian() {
    let o = bosegas(&["oracle", "--hamiltonian", "full", "--modes", "0,0,0;1,0,0", "--particles", "2", "--ell", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2 + 3);
}

#[test]
fn sweep_reports_fitted_exponent() {
    let o = bosegas(&["sweep", "--sweep", "lhy-residual", "--values", "1,3,10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1).unwrap(), "parameter,value,quantity,result,tail_estimate,fitted_exponent");
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    let slope: f64 = rows[0].rsplit(',').next().unwrap().parse().unwrap();
    assert!(slope > 1.5 && slope < 3.0);
}

#[test]
fn verify_subset_passes() {
    let o = bosegas(&["verify", "--criteria", "1,2,3,10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).matches(",PASS,").count(), 4);
}

#[test]
fn verify_failure_exits_two() {
    let o = bosegas(&["verify", "--criteria", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).trim(), "verify: status=failed criteria=6");
}
