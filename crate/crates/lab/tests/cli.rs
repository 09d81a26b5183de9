use std::fs;
use std::process::{Command, Output};

use stbc_lab::output::read_csv;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stbc-lab"))
        .args(args)
        .env_remove("STBC_LAB_THREADS")
        .output()
        .expect("run stbc-lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn delta_min_prints_csv_with_provenance() {
    let o = lab(&["delta-min", "--code", "q34", "--rotation", "16"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let prov = lines.next().unwrap();
    assert!(prov.starts_with("# stbc-lab "), "{prov}");
    assert!(prov.contains("seed=0"), "{prov}");
    assert!(lines.next().unwrap().starts_with("code,theta_deg,rotation_deg,delta_min"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "q34");
    let d: f64 = row[3].parse().unwrap();
    assert!((d - 0.33808).abs() < 1e-4, "{d}");
}

#[test]
fn unknown_code_is_a_usage_error() {
    let o = lab(&["delta-min", "--code", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("x46") && err.contains("q34"), "{err}");
}

#[test]
fn bad_values_exit_with_usage_code() {
    for args in [
        &["ber", "--code", "x46", "--snr", "0:0:8"][..],
        &["ber", "--code", "x46", "--snr", "0", "--min-errors", "0", "--max-codewords", "0"],
        &["decode-check", "--code", "q44", "--trials", "5"],
        &["capacity", "--codes", "ostbc", "--snr", "0", "--ostbc-rate", "1.5", "--trials", "10"],
        &["theta-search", "--code", "x36", "--coarse", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(lab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = lab(&["delta-min", "--code", "q44", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn snr_range_is_inclusive() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ber.csv");
    let o = lab(&[
        "ber", "--code", "x46", "--snr", "0:2:16", "--max-codewords", "20", "--min-errors", "0",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out).unwrap();
    assert_eq!(header, ["snr_db", "ber", "bit_errors", "bits", "codewords"]);
    let snr: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(snr, ["0", "2", "4", "6", "8", "10", "12", "14", "16"]);
    assert!(rows.iter().all(|r| r[4] == "20"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# decode check\ncode = x36\ntrials = 7\nsnr = 5\nseed = 9\n").unwrap();
    let o = lab(&["decode-check", "--config", cfg.to_str().unwrap(), "--trials", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().contains("seed=9"));
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(&row[..3], ["5", "3", "3"]);
}

#[test]
fn decode_check_reports_agreement() {
    let o = lab(&["decode-check", "--code", "x46", "--trials", "50", "--snr", "0,20", "--seed", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!((r[1], r[2], r[4], r[5]), ("50", "50", "4096", "256"));
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("agreement 1.000"));
}

#[test]
fn out_flag_writes_file_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cap.csv");
    let o = lab(&[
        "capacity", "--codes", "q44,closed-q44,actual", "--nr", "2", "--snr", "0,10", "--trials", "200",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("3 curves x 2 SNR points"));
    let (_, rows) = read_csv(&out).unwrap();
    assert_eq!(rows.len(), 6);
}

#[test]
fn same_seed_same_bytes_different_seed_differs() {
    let run = |seed: &str| stdout(&lab(&["ber", "--code", "x36", "--snr", "4", "--max-codewords", "200", "--seed", seed]));
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}
