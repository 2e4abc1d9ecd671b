use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    p.to_str().unwrap().to_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("interp-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs the binary on a whitespace-separated argument line.
fn interp(line: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interp"))
        .args(line.split_whitespace())
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn check_reports_the_violated_pair() {
    let pair = data("two-point-wc.json");
    let o = interp(&format!("check {pair} --family wc-tight --mu 1 --B 1"));
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["satisfied"], false);
    assert_eq!(v["worst"]["i"], 0);
    assert_eq!(v["worst"]["j"], 1);
    assert!((v["worst"]["value"].as_f64().unwrap() + 0.5).abs() < 1e-12);

    let o = interp(&format!("check {pair} --family wc --mu 1 --B 1"));
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["satisfied"], true);
}

#[test]
fn inline_family_parameters_work() {
    let o = Command::new(env!("CARGO_BIN_EXE_interp"))
        .args([
            "check",
            &data("two-point-wc.json"),
            "--family",
            "wc mu=1 B=1",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn input_errors_exit_with_two() {
    let pair = data("two-point-wc.json");
    let bad = scratch("malformed.json");
    fs::write(&bad, r#"{"points": [{"x": [0], "f": "zero", "g": [1]}]}"#).unwrap();
    let bad = bad.display();
    for line in [
        format!("check {bad} --family wc --mu 1 --B 1"),
        "check /definitely/not/here.json --family convex".into(),
        format!("check {pair} --family convex --mu 1"),
        format!("check {pair} --family wc --mu 1"),
        format!("check {pair} --family wc --mu 1 --B -1"),
        format!("check {pair} --family nonsense"),
        format!("extend {pair} --family wc --mu 1 --B 1 --x 1,2"),
        "pep --N 0..2".into(),
        "pep --h fast".into(),
        "frobnicate".into(),
    ] {
        let o = interp(&line);
        assert_eq!(code(&o), 2, "{line}: {}", stderr(&o));
    }
}

#[test]
fn extend_distinguishes_probe_points() {
    let pair = data("two-point-wc.json");
    // probe_x = 2.5 from the file
    let o = interp(&format!("extend {pair} --family wc --mu 1 --B 1 --grid"));
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert!((v["tau_star"].as_f64().unwrap() - 0.1).abs() < 1e-6);
    assert!((v["oracle_tau"].as_f64().unwrap() - 0.1).abs() < 1e-3);

    let o = interp(&format!("extend {pair} --family wc --mu 1 --B 1 --x 2"));
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["extensible"], true);
}

#[test]
fn hunt_writes_a_reloadable_counterexample() {
    let (out, again) = (scratch("hunt.json"), scratch("hunt-again.json"));
    let hunt = "hunt --family wc --mu 1 --B 1 --n 2 --budget 500 --seeds 3 --seed 11";
    let o = interp(&format!("{hunt} --out {}", out.display()));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    // the exported file carries its family and probe, so extend needs no flags
    let o = interp(&format!("extend {} --grid", out.display()));
    assert_eq!(code(&o), 1, "{}", stderr(&o));

    // same seed, same artifact
    interp(&format!("{hunt} --out {}", again.display()));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn hunt_on_an_interpolable_family_finds_nothing() {
    let o = interp("hunt --family wc-tight --mu 1 --B 1 --budget 300");
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["found"], false);
}

#[test]
fn pep_csv_has_the_frozen_header() {
    let dump = scratch("inst.sdp");
    let o = interp(&format!(
        "pep --N 1 --variant tight --format csv --dump-sdp {}",
        dump.display()
    ));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("N,h_rule,h,tight,classical,baseline_classical,baseline_prior")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[..3], ["1", "classical", "0.25"]);
    assert!((row[3].parse::<f64>().unwrap() - 0.482422).abs() < 1e-5);
    assert_eq!(row[4], "");
    let dumped = fs::read_to_string(&dump).unwrap();
    assert!(dumped.starts_with("%%sdp-instance "));
}

#[test]
fn pep_gd_calibration() {
    let o = interp("pep --gd");
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert!((v["tight"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-3);
    assert!((v["weak"].as_f64().unwrap() - 0.25).abs() < 1e-3);
}

#[test]
fn region_csv_and_shared_flags() {
    let region = "region --anchor 0,0,1 --x 1 --family-a wc --family-b wc-tight --mu 1 --B 1";
    let o = interp(&format!(
        "{region} --g-min -1 --g-max 1 --steps 4 --format csv"
    ));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("g,f_min_A,f_max_A,f_min_B,f_max_B\n-1,NaN,NaN,NaN,NaN\n"));

    // a flag neither family uses is an input error
    let o = interp(&format!("{region} --L 2"));
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_supplies_defaults() {
    let cfg = scratch("pep.conf");
    fs::write(&cfg, "# calibration run\ngd = true\nformat = csv\n").unwrap();
    let o = interp(&format!("--config {} pep", cfg.display()));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("N,alpha,L,R2,tight,weak\n8,"));
    // command-line flags override the file
    let o = interp(&format!("--config {} pep --format json", cfg.display()));
    assert!(stdout_json(&o)["tight"].is_number());
}

#[test]
fn verify_tables_flags_the_known_bad_rows() {
    let o = interp("verify-tables --which table3 --format csv");
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    let certified: Vec<bool> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1) == Some("true"))
        .collect();
    assert_eq!(certified, [true, true, false, false]);
}
