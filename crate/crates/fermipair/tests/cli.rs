//! Black-box tests of the `fermipair` binary: flag handling, config
//! parsing diagnostics, output schemas, exit codes, and rerun determinism.

use std::path::Path;
use std::process::{Command, Output};

use fermipair::output::fmt_float;
use fermipair::toymodel::toy_curve_point;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fermipair"))
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.conf");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_with_config(text: &str, extra: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), text);
    bin()
        .arg("--config")
        .arg(&path)
        .args(extra)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data lines of a CSV output: everything after the `#` header block and
/// the column-name line.
fn csv_data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = bin().arg("--config").arg("/no/such/file.conf").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot read config"));
}

#[test]
fn missing_mode_is_a_config_error() {
    let out = run_with_config("lambda = 1\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing required key 'mode'"));
}

#[test]
fn unknown_key_is_reported_with_its_line_number() {
    let out = run_with_config("mode = toy\n# comment\ntwist = 3\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("config line 3"), "stderr: {err}");
    assert!(err.contains("unknown key 'twist'"), "stderr: {err}");
}

#[test]
fn duplicate_key_is_rejected() {
    let out = run_with_config("mode = toy\nlambda = 1\nlambda = 2\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("duplicate key 'lambda'"));
}

#[test]
fn bad_mode_flag_is_rejected() {
    let out = run_with_config("mode = toy\n", &["--mode", "banana"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown mode 'banana'"));
}

#[test]
fn toy_mode_rejects_negative_coupling_sweep() {
    let out = run_with_config("mode = toy\nlo = -1\nhi = 1\nstep = 1\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("coupling ratio"));
}

#[test]
fn toy_csv_has_documented_schema_and_defaults() {
    let out = run_with_config("mode = toy\nlo = 0\nhi = 2\nstep = 1\n", &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);

    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(header[0], format!("# fermipair {}", fermipair::VERSION));
    assert!(header.contains(&"# mode = toy"));
    assert!(header.contains(&"# lambda = 1"), "defaults echoed");
    assert!(header.contains(&"# r0_ratio = 0.04"));
    assert!(header.contains(&"# format = csv"));
    assert!(!text.contains("output"), "destination never appears in output");

    let cols: &str = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(cols, "g_over_gap,entropy");
    let rows = csv_data_rows(&text);
    assert_eq!(rows.len(), 3, "lo..=hi endpoints included");
    assert_eq!(rows[0][0], fmt_float(0.0));
    assert_eq!(rows[0][1], fmt_float(0.0), "decoupled state is pure");
    assert_eq!(rows[1][1], fmt_float(toy_curve_point(1.0).unwrap()));
}

#[test]
fn rational_lambda_is_echoed_verbatim() {
    let out = run_with_config(
        "mode = spectrum\nlambda = 5/6\nlo = -1\nhi = 1\nstep = 1\nbranches = 1\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "# lambda = 5/6"));
    assert_eq!(csv_data_rows(&text).len(), 3);
}

#[test]
fn spectrum_rows_are_sorted_and_branches_deduplicated() {
    let out = run_with_config(
        "mode = spectrum\nlo = -1\nhi = 1\nstep = 1\nbranches = 1,0,1\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let rows = csv_data_rows(&stdout(&out));
    assert_eq!(rows.len(), 6, "two branches, three grid points");
    let branches: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(branches, ["0", "0", "0", "1", "1", "1"]);
    for pair in rows.chunks(3) {
        let xs: Vec<f64> = pair.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "x rises along inv_as");
    }
}

#[test]
fn entanglement_csv_reports_truncation_and_convergence() {
    let out = run_with_config(
        "mode = entanglement\nlo = -1\nhi = 1\nstep = 1\nk_schedule = 4,8\ntol = 0.05\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let cols: &str = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(cols, "inv_as,branch,K,spatial_entropy,total_entropy,converged");
    let rows = csv_data_rows(&text);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert!(row[2] == "4" || row[2] == "8", "K from the schedule");
        let spatial: f64 = row[3].parse().unwrap();
        let total: f64 = row[4].parse().unwrap();
        assert!((total - spatial - std::f64::consts::LN_2).abs() < 1e-10);
        assert!(row[5] == "true" || row[5] == "false");
    }
}

#[test]
fn json_output_has_header_columns_and_rows() {
    let out = run_with_config(
        "mode = toy\nlo = 0\nhi = 2\nstep = 1\nformat = json\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["header"]["mode"], "toy");
    assert_eq!(doc["header"]["version"], fermipair::VERSION);
    assert_eq!(doc["columns"][0], "g_over_gap");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row.as_array().unwrap().len(), 2);
        assert!(row[1].is_f64() || row[1].is_u64());
    }
    assert_eq!(rows[0][1].as_f64().unwrap(), 0.0);
}

#[test]
fn format_flag_overrides_config_format() {
    let out = run_with_config(
        "mode = toy\nlo = 0\nhi = 1\nstep = 1\nformat = csv\n",
        &["--format", "json"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with('{'));
}

#[test]
fn mode_flag_overrides_config_mode() {
    let out = run_with_config(
        "mode = spectrum\nlo = 0\nhi = 1\nstep = 1\n",
        &["--mode", "toy"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).lines().any(|l| l == "# mode = toy"));
}

#[test]
fn output_flag_writes_a_file_and_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "mode = spectrum\nlambda = 7/6\nlo = -2\nhi = 2\nstep = 1\nbranches = 0,1\n",
    );
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let out = bin()
            .args(["--config", &config, "--output", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        assert!(stdout(&out).is_empty(), "file output leaves stdout empty");
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn wide_resonance_width_prints_a_warning_but_still_runs() {
    let out = run_with_config(
        "mode = spectrum\nr0_ratio = 0.25\nlo = -1\nhi = 1\nstep = 1\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning:"));
    assert!(stderr(&out).contains("narrow resonance"));
    assert!(!csv_data_rows(&stdout(&out)).is_empty());
}

#[test]
fn validate_mode_passes_and_prints_one_line_per_check() {
    let out = run_with_config("mode = validate\n", &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let pass_lines = text.lines().filter(|l| l.starts_with("PASS ")).count();
    let fail_lines = text.lines().filter(|l| l.starts_with("FAIL ")).count();
    assert_eq!(pass_lines, 11);
    assert_eq!(fail_lines, 0);
    assert!(text.ends_with("11 of 11 checks passed\n"));
}
