use std::path::Path;
use std::process::{Command, Output};

fn cohdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohdisc"))
        .args(args)
        .env_remove("COHDISC_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cohdisc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn columns(text: &str) -> &str {
    data_lines(text)[0]
}

fn field(line: &str, k: usize) -> f64 {
    line.split(',').nth(k).unwrap().parse().unwrap()
}

#[test]
fn column_schemas() {
    let cases: &[(&[&str], &str)] = &[
        (&["bounds", "--alpha-sq", "0.24"], "alpha_sq,sigma,helstrom,usd_pinc"),
        (
            &["hd-curve", "--alpha-sq", "0.24", "--b", "0:1:3"],
            "alpha_sq,B,p_inc,p_err,chefles",
        ),
        (
            &["pnr-curve", "--alpha-sq", "0.24", "--beta", "0.5,1", "--m", "1"],
            "alpha_sq,beta,m,p_inc,p_err,chefles",
        ),
        (
            &["optimize-beta", "--alpha-sq", "0.24", "--m", "0,1"],
            "alpha_sq,m,beta_opt,p_inc,p_err,multimodal",
        ),
        (
            &["compare", "--alpha-sq", "0.24"],
            "alpha_sq,p_inc,p_err_pnr,p_err_hd,chefles",
        ),
        (
            &["gaussian-scan", "--alpha-sq", "0.24", "--r", "0,1", "--phi", "0", "--lambda-b", "2"],
            "r,phi,lambda_B,p_error,p_inconclusive",
        ),
        (
            &[
                "simulate", "--receiver", "hd", "--alpha-sq", "0.24", "--param", "0.5",
                "--n-trials", "1000", "--seed", "1",
            ],
            "receiver,alpha_sq,parameter,p_err_emp,se_err,p_inc_emp,se_inc,p_err_closed,p_inc_closed,chefles_bound",
        ),
        (
            &["mode-overlap", "--samples", "2000"],
            "source,cutoff_hz,ripple_db,g12,delay_s",
        ),
    ];
    for (args, expected) in cases {
        let text = stdout(args);
        assert_eq!(columns(&text), *expected, "{args:?}");
        assert!(text.starts_with(&format!("# cohdisc {}\n", env!("CARGO_PKG_VERSION"))));
        assert!(text.contains(&format!("# command = {}\n", args[0])));
    }
}

#[test]
fn bounds_row() {
    let text = stdout(&["bounds", "--alpha-sq", "0.24"]);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 2);
    assert!((field(rows[1], 1) - 0.618_783_391_806_140_9).abs() < 1e-15);
    assert!((field(rows[1], 2) - 0.107_219_172_430_448_19).abs() < 1e-15);
    assert_eq!(field(rows[1], 1), field(rows[1], 3));
}

#[test]
fn compare_grid_has_forty_rows() {
    let text = stdout(&[
        "compare",
        "--m",
        "1",
        "--alpha-sq-grid",
        "0.05:2.0:40",
        "--eta",
        "1.0",
    ]);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 41);
    assert!((field(rows[1], 0) - 0.05).abs() < 1e-15);
    assert!((field(rows[40], 0) - 2.0).abs() < 1e-15);
    for row in &rows[1..] {
        assert!(field(row, 4) <= field(row, 2) + 1e-12);
        assert!(field(row, 4) <= field(row, 3) + 1e-12);
    }
}

#[test]
fn exit_codes() {
    let missing_seed = cohdisc(&[
        "simulate",
        "--receiver",
        "hd",
        "--alpha-sq",
        "0.2",
        "--param",
        "0",
    ]);
    assert_eq!(missing_seed.status.code(), Some(3));
    let err = String::from_utf8(missing_seed.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("parameter=seed"));

    assert_eq!(cohdisc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cohdisc(&[]).status.code(), Some(2));
    assert_eq!(cohdisc(&["bounds", "--alpha-sq=-1"]).status.code(), Some(3));
    assert_eq!(cohdisc(&["bounds"]).status.code(), Some(3));
    assert_eq!(
        cohdisc(&["hd-curve", "--alpha-sq", "0.2", "--b", "0", "--eta", "1.5"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        cohdisc(&[
            "--out",
            "/nonexistent/dir/x.csv",
            "bounds",
            "--alpha-sq",
            "0.2"
        ])
        .status
        .code(),
        Some(4)
    );
    assert_eq!(cohdisc(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_dir_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cohdisc"))
        .args(["--out", "b.csv", "bounds", "--alpha-sq", "1"])
        .env("COHDISC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(written, stdout(&["bounds", "--alpha-sq", "1"]));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# matched comparison\ncommand = compare\nalpha_sq = 0.1,0.2\nm = 2\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = stdout(&["--config", cfg]);
    assert_eq!(
        from_file,
        stdout(&["compare", "--alpha-sq", "0.1,0.2", "--m", "2"])
    );

    let overridden = stdout(&["--config", cfg, "compare", "--m", "1"]);
    assert!(overridden.contains("# m = 1\n"));
    assert_eq!(
        overridden,
        stdout(&["compare", "--alpha-sq", "0.1,0.2", "--m", "1"])
    );
}

#[test]
fn json_output() {
    let text = stdout(&[
        "--format",
        "json",
        "optimize-beta",
        "--alpha-sq",
        "0.24",
        "--m",
        "0,2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "optimize-beta");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1]["beta_opt"].as_f64().unwrap() > rows[0]["beta_opt"].as_f64().unwrap());
}

#[test]
fn eta_corrected_axis_recorded() {
    let text = stdout(&[
        "--eta-corrected",
        "compare",
        "--alpha-sq",
        "0.4",
        "--eta",
        "0.5",
    ]);
    assert!(text.contains("# eta-corrected = true\n"));
    assert!((field(data_lines(&text)[1], 0) - 0.2).abs() < 1e-15);
}

#[test]
fn simulation_is_byte_identical() {
    let args = [
        "simulate",
        "--receiver",
        "pnr",
        "--alpha-sq",
        "0.24,0.47",
        "--param",
        "0.8",
        "--m",
        "1",
        "--n-trials",
        "100000",
        "--seed",
        "5",
    ];
    let reference = stdout(&args);
    for workers in ["1", "2", "7"] {
        let mut with = vec!["--workers", workers];
        with.extend_from_slice(&args);
        assert_eq!(stdout(&with), reference);
    }
    let other_seed = stdout(&[&args[..args.len() - 1], &["6"]].concat());
    assert_ne!(other_seed, reference);
}

#[test]
fn mode_overlap_with_measured_response() {
    let dir = tempfile::tempdir().unwrap();
    let response = dir.path().join("g.csv");
    let geff = dir.path().join("geff.csv");
    let mut text = String::from("time_s,amplitude\n");
    for k in 0..50 {
        text.push_str(&format!(
            "{},{}\n",
            k as f64 * 1e-9,
            if k < 10 { 1e8 } else { 0.0 }
        ));
    }
    std::fs::write(&response, text).unwrap();
    let out = stdout(&[
        "mode-overlap",
        "--response",
        response.to_str().unwrap(),
        "--geff-out",
        geff.to_str().unwrap(),
    ]);
    let row = data_lines(&out)[1];
    assert!(row.starts_with("file,"));
    let g12 = field(row, 3);
    assert!(g12 > 0.99 && g12 <= 1.0);
    let written = std::fs::read_to_string(&geff).unwrap();
    assert!(written.starts_with("time_s,amplitude"));
    assert!(Path::new(&geff).exists());
}
