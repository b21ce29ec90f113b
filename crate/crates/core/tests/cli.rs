use std::path::Path;
use std::process::{Command, Output};

use omori_core::frontend::commands::{CounterexampleReport, GrowthReport, RiccatiReport, SlowdownReport, SpliceLedger, SweepReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn omori(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omori"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("OMORI_OUT_DIR")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> T {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

/// Re-serialising a parsed report reproduces the file byte for byte.
fn round_trips<T: DeserializeOwned + Serialize>(path: &Path) {
    let bytes = std::fs::read(path).unwrap();
    let value: T = serde_json::from_slice(&bytes).unwrap();
    let mut again = serde_json::to_vec_pretty(&value).unwrap();
    again.push(b'\n');
    assert_eq!(String::from_utf8(again).unwrap(), String::from_utf8(bytes).unwrap(), "{}", path.display());
}

#[test]
fn slowdown_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(&["slowdown", "--G", "(1+t)^2", "--T", "50"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ledger: SpliceLedger = read_json(&dir.path().join("splices.json"));
    let s = ledger.splices[0];
    assert_eq!(s.t_n, 0.0);
    assert!((s.a_n - 2.0).abs() < 1e-12);
    assert!((s.v_n - 1.7320508).abs() < 1e-7);
    round_trips::<SpliceLedger>(&dir.path().join("splices.json"));
    round_trips::<SlowdownReport>(&dir.path().join("slowdown.json"));
    let csv = std::fs::read_to_string(dir.path().join("h_table.csv")).unwrap();
    assert!(csv.starts_with("t,H,dH,branch\n"));
}

#[test]
fn sweep_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(
        &["sweep", "--warping", "sinh", "--n", "2", "--g", "-1/(1+t)", "--L", "0", "--G", "2", "--eps", "0.1", "--T", "100"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: SweepReport = read_json(&dir.path().join("certificates.json"));
    assert!((report.certificates[0].x_eps - 10.7082).abs() < 1e-3);
    round_trips::<SweepReport>(&dir.path().join("certificates.json"));
    let trace = std::fs::read_to_string(dir.path().join("sweep_trace_0.csv")).unwrap();
    assert!(trace.starts_with("t,g,h_lambda0,gap\n"));
}

#[test]
fn counterexample_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(&["counterexample", "--G", "(1+t)^2", "--T", "50"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    round_trips::<CounterexampleReport>(&dir.path().join("counterexample.json"));
    let csv = std::fs::read_to_string(dir.path().join("delta_h.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let delta_h: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(delta_h > 1.0, "{line}");
    }
}

#[test]
fn divergent_growth_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(&["counterexample", "--G", "1+t", "--T", "50"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("integral of 1/G diverges (declared)"));
    assert!(!dir.path().join("counterexample.json").exists());
}

#[test]
fn parse_errors_report_offsets() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(&["growth", "--G", "1+*t"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("offset 2"), "{}", stderr(&o));
    let o = omori(&["growth", "--G", "1+q"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown identifier"), "{}", stderr(&o));
}

#[test]
fn property_violations_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(&["growth", "--G", "2-t", "--T", "5"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let report: GrowthReport = read_json(&dir.path().join("growth.json"));
    assert!(!report.admissible);
    assert!(!report.violations.is_empty());
    round_trips::<GrowthReport>(&dir.path().join("growth.json"));

    let o = omori(&["slowdown", "--G", "2-t", "--T", "5", "--force"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(omori(&["nonsense"], dir.path()).status.code(), Some(1));
    assert_eq!(omori(&["growth", "--G", "2", "--n", "1"], dir.path()).status.code(), Some(1));
    assert_eq!(omori(&["growth"], dir.path()).status.code(), Some(1));
    assert_eq!(omori(&["sweep", "--G", "2", "--g", "-1/(1+t)", "--eps", "0.9", "--T", "100"], dir.path()).status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# riccati run\nG = 1\nn = 2\nt0 = 0.1\nT = 3\n").unwrap();
    let out = dir.path().join("out");
    let o = omori(&["riccati", "--config", cfg.to_str().unwrap(), "--T", "10"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: RiccatiReport = read_json(&out.join("riccati.json"));
    assert_eq!(report.comparison.rows.last().unwrap().t, 10.0);
    assert!((report.m0 - 1.0 / 0.1f64.tanh()).abs() < 1e-12);
    round_trips::<RiccatiReport>(&out.join("riccati.json"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_omori"))
        .args(["growth", "--G", "exp", "--T", "10"])
        .env("OMORI_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("growth.json").exists());
    assert!(dir.path().join("f_table.csv").exists());
}

#[test]
fn csv_cells_carry_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let o = omori(&["growth", "--G", "(1+t)^2", "--T", "5", "--points", "11"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("f_table.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,G,dG,int_recip_G,F"));
    for line in lines {
        for cell in line.split(',') {
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{cell}");
            cell.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sweep", "--G", "2", "--g", "-1/(1+t)", "--eps", "0.5,0.25,0.1", "--T", "100"];
    assert_eq!(omori(&args, a.path()).status.code(), Some(0));
    assert_eq!(omori(&args, b.path()).status.code(), Some(0));
    for name in ["certificates.json", "sweep_trace_0.csv", "sweep_trace_1.csv", "sweep_trace_2.csv"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
