//! End-to-end tests of the command-line binary: golden output bytes,
//! determinism, exit codes, and the diagnostic stream.

use std::path::Path;
use std::process::{Command, Output};

fn bellsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellsplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("config written");
    path.to_str().expect("UTF-8 path").to_string()
}

const DEFAULT_HEADER: &str = "case,r_v,r_h,gamma,eps,eps_prime,abs_c_phi_plus,abs_c_phi_minus,\
                              abs_c_psi_plus,abs_c_psi_minus,p_AhBh,p_AhBv,p_AvBh,p_AvBv,\
                              p_same_side_total,fidelity_phi,fidelity_psi";

const DEFAULT_ROW: &str = "1,0.774596669241,0.774596669241,1,0,0,0.141421356237,0,\
                           0.141421356237,0,0.01,0.01,0.01,0.01,0.96,1,1";

#[test]
fn run_emits_the_default_row() {
    let output = bellsplit(&["run"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), format!("{DEFAULT_HEADER}\n{DEFAULT_ROW}\n"));
    assert_eq!(stderr(&output), "");
}

#[test]
fn run_dump_state_appends_the_ten_line_serialization() {
    let output = bellsplit(&["run", "--dump-state"]);
    assert!(output.status.success());
    let expected_dump = "\
aH,aH 0 0.346410161514
aH,aV 0 0.489897948557
aH,bH 0.1 0
aH,bV 0.1 0
aV,aV 0 0.346410161514
aV,bH 0.1 0
aV,bV 0.1 0
bH,bH 0 0.346410161514
bH,bV 0 0.489897948557
bV,bV 0 0.346410161514
";
    assert_eq!(
        stdout(&output),
        format!("{DEFAULT_HEADER}\n{DEFAULT_ROW}\n\n{expected_dump}")
    );
}

#[test]
fn output_is_byte_deterministic() {
    let first = bellsplit(&["sweep", "--sweep", "eps:-0.3:0.3:13"]);
    let second = bellsplit(&["sweep", "--sweep", "eps:-0.3:0.3:13"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let first = bellsplit(&["verify", "--draws", "50"]);
    let second = bellsplit(&["verify", "--draws", "50"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("row.csv");
    let piped = bellsplit(&["run"]);
    let filed = bellsplit(&["run", "--out", path.to_str().unwrap()]);
    assert!(filed.status.success());
    assert_eq!(stdout(&filed), "");
    assert_eq!(std::fs::read(&path).expect("file written"), piped.stdout);
}

#[test]
fn out_with_dump_state_keeps_the_dump_on_stdout() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("row.csv");
    let output = bellsplit(&["run", "--out", path.to_str().unwrap(), "--dump-state"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("aH,aH "));
    assert_eq!(text.lines().count(), 10);
    assert!(std::fs::read_to_string(&path)
        .expect("file written")
        .starts_with("case,"));
}

#[test]
fn config_files_change_the_row() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_config(
        dir.path(),
        "case2.cfg",
        "# second arrangement\ncase = 2\nr_sq = 0.6\ngamma = 1\n",
    );
    let output = bellsplit(&["run", "--config", &path]);
    assert!(output.status.success());
    let row = stdout(&output).lines().nth(1).expect("row").to_string();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "2");
    // Case 2 populates the minus family instead of the plus one.
    assert_eq!(fields[6], "0");
    assert_eq!(fields[7], "0.141421356237");
    assert_eq!(fields[8], "0");
    assert_eq!(fields[9], "0.707106781187");
}

#[test]
fn custom_amplitude_configs_report_case_zero_and_nan() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_config(
        dir.path(),
        "custom.cfg",
        "case = 0\nr_sq = 0.5\n\
         alpha_re = 1\nalpha_im = 0\nbeta_re = 0\nbeta_im = 0\n\
         alpha_prime_re = 1\nalpha_prime_im = 0\nbeta_prime_re = 0\nbeta_prime_im = 0\n",
    );
    let output = bellsplit(&["run", "--config", &path]);
    assert!(output.status.success());
    let row = stdout(&output).lines().nth(1).expect("row").to_string();
    assert!(row.starts_with("0,"));
    assert!(row.ends_with(",nan,nan"));
    // Both-V on the symmetric splitter: complete bunching.
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[10], "0");
    assert_eq!(fields[14], "1");
}

#[test]
fn malformed_configs_exit_2_naming_line_and_key() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_config(dir.path(), "bad.cfg", "case = 1\ngamma = 1.5\n");
    let output = bellsplit(&["run", "--config", &path]);
    assert_eq!(output.status.code(), Some(2));
    let diagnostics = stderr(&output);
    assert!(diagnostics.contains("line 2"), "{diagnostics}");
    assert!(diagnostics.contains("gamma"), "{diagnostics}");
    assert!(diagnostics.contains("[0, 1]"), "{diagnostics}");
}

#[test]
fn unknown_flags_exit_2() {
    let output = bellsplit(&["run", "--frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn degenerate_arrangement_warns_on_stderr() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_config(dir.path(), "sym.cfg", "case = 1\nr_sq = 0.5\n");
    let output = bellsplit(&["run", "--config", &path]);
    assert!(output.status.success());
    let diagnostics = stderr(&output);
    assert!(diagnostics.starts_with("warning:"), "{diagnostics}");
    assert!(diagnostics.contains("symmetric splitter"), "{diagnostics}");
    // The row itself: zero cross-side, everything same-side.
    let row = stdout(&output).lines().nth(1).expect("row").to_string();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(&fields[6..15], &["0", "0", "0", "0", "0", "0", "0", "0", "1"]);
}

#[test]
fn gamma_sweep_traces_the_interference_dip() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = write_config(
        dir.path(),
        "hom.cfg",
        "case = 0\nr_sq = 0.5\n\
         alpha_re = 1\nalpha_im = 0\nbeta_re = 0\nbeta_im = 0\n\
         alpha_prime_re = 1\nalpha_prime_im = 0\nbeta_prime_re = 0\nbeta_prime_im = 0\n",
    );
    let output = bellsplit(&["sweep", "--config", &path, "--sweep", "gamma:0:1:5"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert!(lines.next().expect("header").ends_with(
        ",fidelity_phi,fidelity_psi,fidelity_phi_direct,fidelity_psi_direct"
    ));
    let gammas = [0.0, 0.25, 0.5, 0.75, 1.0];
    for (line, gamma) in lines.zip(gammas) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 19);
        let total: f64 = fields[10..14].iter().map(|f| f.parse::<f64>().unwrap()).sum();
        let expected = (1.0 - gamma * gamma) / 2.0;
        assert!((total - expected).abs() < 1e-12, "gamma {gamma}: {total}");
    }
}

#[test]
fn eps_sweep_follows_the_cosine_law() {
    let output = bellsplit(&["sweep", "--sweep", "eps:-0.3:0.3:13"]);
    assert!(output.status.success());
    let text = stdout(&output);
    for (line, i) in text.lines().skip(1).zip(0..) {
        let eps = -0.3 + 0.05 * i as f64;
        let fields: Vec<&str> = line.split(',').collect();
        let fidelity_phi: f64 = fields[15].parse().unwrap();
        let fidelity_phi_direct: f64 = fields[17].parse().unwrap();
        let expected = eps.cos().powi(2);
        assert!((fidelity_phi - expected).abs() < 1e-12);
        assert!((fidelity_phi_direct - expected).abs() < 1e-10);
    }
}

#[test]
fn r_sq_sweep_scales_the_target_coefficient() {
    let output = bellsplit(&["sweep", "--sweep", "r_sq:0.5:0.95:10"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut count = 0;
    for (line, i) in text.lines().skip(1).zip(0..) {
        let r_sq = 0.5 + 0.05 * i as f64;
        let fields: Vec<&str> = line.split(',').collect();
        let c_phi_plus: f64 = fields[6].parse().unwrap();
        let expected = (2.0 * r_sq - 1.0) / 2.0f64.sqrt();
        assert!((c_phi_plus - expected).abs() < 1e-12, "r_sq {r_sq}");
        count += 1;
    }
    assert_eq!(count, 10);
}

#[test]
fn invalid_sweeps_exit_2() {
    for spec in ["eps:-0.3:0.3", "r_sq:0:2:5", "gamma:1:0:5", "r2:0:1:5"] {
        let output = bellsplit(&["sweep", "--sweep", spec]);
        assert_eq!(output.status.code(), Some(2), "spec {spec}");
        assert!(stderr(&output).starts_with("error:"));
    }
}

#[test]
fn optimizer_reports_the_argmax_below_the_mirror_bound() {
    let output = bellsplit(&[
        "optimize",
        "--sweep",
        "r_sq:0.5:1.0:6",
        "--objective",
        "max_cross_side_rate",
    ]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "best r_sq = 0.9\nobjective max_cross_side_rate = 0.64\n\
         evaluated 5 grid points (1 skipped at the mirror bound)\n"
    );
}

#[test]
fn balance_objective_breaks_ties_toward_the_smallest_r_sq() {
    let output = bellsplit(&[
        "optimize",
        "--sweep",
        "r_sq:0.5:0.95:10",
        "--objective",
        "target_balance",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("best r_sq = 0.5\n"), "{text}");
    assert!(stderr(&output).contains("symmetric splitter"), "warns at the best point");
}

#[test]
fn two_axis_optimization_reports_axes_in_canonical_order() {
    let output = bellsplit(&[
        "optimize",
        "--sweep",
        "eps:-0.3:0.3:3",
        "--sweep",
        "r_sq:0.5:0.9:3",
        "--objective",
        "max_min_bell_coefficient",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("best r_sq = 0.9"));
    assert_eq!(lines.next(), Some("best eps = 0"));
}

#[test]
fn verify_passes_with_one_line_per_suite() {
    let output = bellsplit(&["verify", "--draws", "100"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.lines().count(), 9);
    for line in text.lines() {
        assert!(line.contains(": pass ("), "{line}");
    }
}

#[test]
fn missing_config_files_exit_2() {
    let output = bellsplit(&["run", "--config", "/nonexistent/path.cfg"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("/nonexistent/path.cfg"));
}
