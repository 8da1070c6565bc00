//! Integration tests for the command-line interface: exit-code contract,
//! output determinism, and the config-file override rules.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conequant"))
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = bin().args(["verify", "--dim", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim s = 15"));
    assert!(text.contains("Jacobi: 560/560 triples"));
    assert!(!text.contains("\"fail\""));
}

#[test]
fn spectrum_reports_degeneracy() {
    let dir = std::env::temp_dir().join("conequant-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("spectrum.csv");
    let out = bin()
        .args([
            "spectrum",
            "--kappa",
            "1",
            "--ell-max",
            "2",
            "--nmax",
            "3",
            "--size",
            "120",
            "--beta",
            "1",
            "--csv",
        ])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"n\": 3"));
    assert!(text.contains("n=3: 9"));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("n,ell,lambda,expected,rel_err,residual,N,beta\n"));
    assert_eq!(csv.lines().count(), 7); // header + (1,0),(2,0),(2,1),(3,0),(3,1),(3,2)
}

#[test]
fn spectrum_output_is_deterministic() {
    let run = || {
        let out = bin()
            .args([
                "spectrum",
                "--kappa",
                "1",
                "--ell-max",
                "1",
                "--nmax",
                "2",
                "--size",
                "80",
                "--beta",
                "1",
            ])
            .env("CONEQUANT_THREADS", "2")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn classify_prints_class() {
    let out = bin()
        .args(["classify", "--lambda", "-0.25"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("elliptic, nu=0.5\n"), "{text}");
}

#[test]
fn monodromy_candidate_is_unimodular() {
    let out = bin()
        .args(["monodromy", "--lambda", "-0.25"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["status"], "pass");
    let i_re = v["tables"]["integral"][0].as_f64().unwrap();
    assert!((i_re - 4.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn eval_round_trips_and_grades() {
    let out = bin()
        .args(["eval", "--dim", "4", "--grade", "[d1, z1] + z2*d3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("z2*d3 + 1"), "{text}");
    assert!(text.contains("weight=0"), "{text}");
}

#[test]
fn eval_restrictable_failure_exits_one() {
    // A bare first-order derivative does not preserve the cone ideal.
    let out = bin()
        .args(["eval", "--dim", "4", "--restrictable", "d1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // A rotation does.
    let out = bin()
        .args(["eval", "--dim", "4", "--restrictable", "z1*d2 - z2*d1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    // Unknown subcommand (clap).
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Out-of-range index in the DSL.
    let out = bin()
        .args(["eval", "--dim", "4", "z5*d1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Monodromy domain error: lambda on [0, inf).
    let out = bin()
        .args(["monodromy", "--lambda", "2.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Missing required parameter.
    let out = bin().args(["spectrum", "--kappa", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join("conequant-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(
        &cfg,
        "kappa = 1.0   # ground-state coupling\nell_max = 1\nnmax = 2\nsize = 80\nbeta = 1.0\n",
    )
    .unwrap();
    let out = bin()
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["config"]["size"], 80);
    // A flag beats the file.
    let out = bin()
        .args(["spectrum", "--size", "60", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["config"]["size"], 60);
}

#[test]
fn custom_form_file() {
    let dir = std::env::temp_dir().join("conequant-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let form = dir.join("form.json");
    // A non-diagonal rational symmetric form of signature (2,1).
    std::fs::write(&form, r#"[[1, 0, "1/2"], [0, 1, 0], ["1/2", 0, -1]]"#).unwrap();
    let out = bin()
        .args(["verify", "--dim", "3", "--form"])
        .arg(&form)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim s = 10"), "{text}");
}
