//! End-to-end checks of the binary: output shape, determinism, config
//! merging, and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvbench"))
}

fn data_lines(stdout: &str) -> Vec<&str> {
    stdout.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn cft_closed_form_row() {
    let out = bin().args(["cft", "--lambda", "0.5", "--beta", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines = data_lines(&text);
    assert_eq!(lines[0], "kind,lambda,beta,closed_form,method,numeric,abs_discrepancy");
    assert!(lines[1].starts_with("gaussian,0.5,2.0,0.44999999999999996"), "{}", lines[1]);
}

#[test]
fn cft_without_widths_is_a_config_error() {
    let out = bin().arg("cft").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_width_rejected_by_parser() {
    let out = bin().args(["cft", "--lambda", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infinite_width_token() {
    let out = bin().args(["cft", "--lambda", "inf", "--beta", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // λ → ∞ reduces to the squeezed threshold (1+β)/(2+β) = 0.8
    assert!(data_lines(&text)[1].contains(",0.8,"), "{text}");
}

#[test]
fn sample_prior_is_seed_deterministic() {
    let run = |seed: &str| {
        let out = bin()
            .args([
                "sample-prior", "--kind", "gaussian", "--lambda", "1", "--beta", "2", "--n",
                "50", "--seed", seed,
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run("11");
    let b = run("11");
    let c = run("12");
    assert_eq!(data_lines(&a), data_lines(&b), "same seed must give identical rows");
    assert_ne!(data_lines(&a), data_lines(&c), "different seeds must differ");
}

#[test]
fn json_output_is_well_formed() {
    let out = bin()
        .args(["threshold", "--beta", "2", "--lambda", "inf", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["command"], "threshold");
    let row = &v["rows"][0];
    assert_eq!(row[3], true); // beats
    let r = row[4].as_f64().unwrap();
    assert!(r > 1.151 && r < 1.3, "threshold {r}");
}

#[test]
fn config_file_provides_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("cvbench-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("run.toml");
    std::fs::write(&config, "lambda = 0.5\nbeta = 2.0\nseed = 21\n").unwrap();

    let out = bin().args(["cft", "--config", config.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(data_lines(&text)[1].starts_with("gaussian,0.5,2.0"), "{text}");
    assert!(text.contains("# seed = 21"));

    // flag overrides the file value
    let out = bin()
        .args(["cft", "--config", config.to_str().unwrap(), "--beta", "3"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(data_lines(&text)[1].starts_with("gaussian,0.5,3.0"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file_writing() {
    let dir = std::env::temp_dir().join(format!("cvbench-out-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let out = bin()
        .args(["cft", "--beta", "1", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("squeezed"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn eigencheck_gaussian_blocks_small() {
    let out = bin()
        .args(["eigencheck", "--beta", "2", "--lambda", "1", "--k-max", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines = data_lines(&text);
    // k = 0 and k = 1 rows, reference ≈ 0.5
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("gaussian,1.0,2.0,0,"), "{}", lines[1]);
    let reference: f64 = lines[1].split(',').nth(6).unwrap().parse().unwrap();
    assert!((reference - 0.5).abs() < 1e-3, "reference {reference}");
}

#[test]
fn verify_all_quick_passes() {
    let out = bin().args(["verify-all", "--quick"]).output().unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(out.status.success(), "verify-all failed:\n{stderr}");
    assert_eq!(stderr.matches("[PASS]").count(), 8, "{stderr}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(data_lines(&stdout).len() == 9); // header + 8 criteria
}
