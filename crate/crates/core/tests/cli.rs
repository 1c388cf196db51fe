use std::path::Path;
use std::process::{Command, Output};

fn hnmx(args: &[&str], out_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hnmx"));
    cmd.args(args).env_remove("HNMX_OUT");
    if let Some(p) = out_env {
        cmd.env("HNMX_OUT", p);
    }
    cmd.output().expect("binary runs")
}

fn data_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn reruns_are_identical_apart_from_comments() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = hnmx(&["cm-check", "--alpha", "0.3,0.6", "--beta", "0.5", "--J", "200", "--out", dir.path().to_str().unwrap()], None);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["cm_check_cm2.csv", "cm_check_cm2_summary.csv"] {
        let first = std::fs::read_to_string(a.path().join(f)).unwrap();
        assert!(first.starts_with("# hnmx cm-check"));
        assert_eq!(data_lines(&a.path().join(f)), data_lines(&b.path().join(f)), "{f}");
    }
}

#[test]
fn output_directory_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = hnmx(&["kernel", "--alpha", "0.5", "--beta", "0.5"], Some(dir.path()));
    assert!(out.status.success());
    let lines = data_lines(&dir.path().join("kernel.csv"));
    assert_eq!(lines[0], "alpha,beta,t,omega");
    assert_eq!(lines.len(), 42);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# weights run\nalpha = 0.3\nbeta = 0.2\nJ = 4\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = hnmx(
        &["weights", "--config", cfg.to_str().unwrap(), "--alpha", "0.7", "--out", out_dir.to_str().unwrap()],
        None,
    );
    assert!(out.status.success());
    let lines = data_lines(&out_dir.join("weights_cm2.csv"));
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.starts_with("0.7,0.2,")), "{lines:?}");
}

#[test]
fn bad_input_exits_with_code_two() {
    let out = hnmx(&["nope"], None);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let out = hnmx(&["weights", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let out = hnmx(&["weights", "--alpha", "1.5", "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_mode_reports_and_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = hnmx(&["kernel", "--check", "--out", dir.path().to_str().unwrap()], None);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS special functions"), "{stdout}");
    assert!(out.status.success());

    let out = hnmx(&["weights", "--check", "--J", "10", "--out", dir.path().to_str().unwrap()], None);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let check_lines: Vec<&str> = stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(check_lines.len(), 2, "{stdout}");
    let all_pass = check_lines.iter().all(|l| l.starts_with("PASS"));
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn energy_run_writes_one_trace_per_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = hnmx(
        &["energy", "--alpha", "0.5", "--beta", "0.4,1", "--nx", "4", "--ny", "4", "--tau", "0.1", "--out", dir.path().to_str().unwrap()],
        None,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["energy_a0.5_b0.4.csv", "energy_a0.5_b1.csv"] {
        let lines = data_lines(&dir.path().join(f));
        assert_eq!(lines[0], "n,t,total,term_E,term_H,term_hist");
        assert_eq!(lines.len(), 12);
    }
}
