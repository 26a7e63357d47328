use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymkernel"))
        .args(args)
        .env_remove("ASYMP_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn ln_value(v: &Value) -> f64 {
    let m = v["mantissa"][0].as_f64().unwrap();
    m.ln() + v["log_scale"].as_f64().unwrap()
}

#[test]
fn kernel_eval_routes_agree() {
    let base = ["kernel", "eval", "--n", "1", "--m", "1", "--u", "1", "--v", "5", "--route"];
    let d = json(&[&base[..], &["direct"]].concat());
    let c = json(&[&base[..], &["contour"]].concat());
    let (a, b) = (ln_value(&d["result"]["value"]), ln_value(&c["result"]["value"]));
    assert!(d["result"]["decimal"].as_f64().unwrap() > 0.0);
    assert!(((a - b).exp() - 1.0).abs() < 1e-5);
    assert_eq!(d["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(d["meta"]["parameters"]["route"], "direct");
}

#[test]
fn domain_errors_exit_two() {
    let out = run(&["kernel", "eval", "--v", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("v must be ≥ 0"));
    assert_eq!(run(&["kernel", "eval", "--m", "2", "--v", "5", "--route", "contour"]).status.code(), Some(2));
    assert_eq!(run(&["asymp", "compare", "--v-grid", "40,20"]).status.code(), Some(2));
    assert_eq!(run(&["gtf", "check", "--fn", "plain_log", "--theta1", "2.0", "--theta0", "1.0"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "eval", "-v", "1"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_three() {
    // a panel budget this small cannot resolve the integrand
    let out = run(&["kernel", "eval", "--v", "3", "--u", "1", "--route", "direct", "--max-panels", "8", "--rel-tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn compare_csv_layout() {
    let out = run(&["asymp", "compare", "--n", "1", "--m", "1", "--u", "0", "--v-grid", "20,40,80"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "v,p_log,q_log,ratio,abs_dev");
    let dev: Vec<f64> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(dev.len(), 3);
    assert!(dev.windows(2).all(|w| w[1] < w[0]));
    assert!(text.starts_with(&format!("# asymkernel {}\n# config: {{", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn theorem_table_trend() {
    let doc = json(&["asymp", "compare", "--n", "2", "--m", "3", "--u", "1", "--v-grid", "50,100,200", "--format", "json"]);
    assert_eq!(doc["result"]["abs_dev_strictly_decreasing"], true);
}

#[test]
fn gtf_verdicts() {
    let a = json(&["gtf", "check", "--fn", "power_log", "--alpha", "1", "--beta", "2"]);
    assert_eq!(a["result"]["report"]["verdict"], "bounded");
    let b = json(&["gtf", "check", "--fn", "plain_log"]);
    assert_eq!(b["result"]["report"]["verdict"], "growing");
    assert_eq!(b["meta"]["parameters"]["radius_rule"], "half_sine");
}

#[test]
fn saddle_verify_records() {
    let d = json(&["saddle", "verify", "--u", "1", "--v", "100"]);
    assert!(d["result"]["phi_residual"].as_f64().unwrap() <= 1e-9);
    assert!(d["result"]["phi_prime_over_v"].as_f64().unwrap() <= 1e-9);
    let z = json(&["saddle", "verify", "--u", "0", "--v", "30"]);
    assert_eq!(z["result"]["route"], "u0_residue");
    let c = json(&["saddle", "verify", "--u", "2", "--v", "10000"]);
    assert!(c["result"]["diagnostics"]["bound_constant"].as_f64().unwrap().is_finite());
}

#[test]
fn derivative_demo_reports_counterexample() {
    let d = json(&["gtf", "derivative-demo"]);
    let c = &d["result"]["counterexample"];
    assert!(c["oscillation_amplitude"].as_f64().unwrap() >= 0.9);
    assert_eq!(c["derivative_asymptotics_fail"], true);
}

#[test]
fn json_round_trips_and_runs_repeat_exactly() {
    let args = ["kernel", "table", "--u", "1", "--v-grid", "1,4,12", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
    assert_eq!(doc["meta"]["command"], "kernel table");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("asymkernel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# defaults\nn = 2\nu = 1\nv = 3\n").unwrap();
    let d = json(&["kernel", "eval", "--config", cfg.to_str().unwrap(), "--v", "4"]);
    assert_eq!(d["meta"]["parameters"]["n"], 2);
    assert_eq!(d["meta"]["parameters"]["v"], 4.0);
    std::fs::write(&cfg, "nonsense\n").unwrap();
    assert_eq!(run(&["kernel", "eval", "--config", cfg.to_str().unwrap(), "--v", "1"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_cap_is_validated_and_recorded() {
    let bin = env!("CARGO_BIN_EXE_asymkernel");
    let bad = Command::new(bin).args(["kernel", "eval", "--v", "1"]).env("ASYMP_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let ok = Command::new(bin).args(["kernel", "eval", "--v", "1"]).env("ASYMP_THREADS", "1").output().unwrap();
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["meta"]["threads"], 1);
}
