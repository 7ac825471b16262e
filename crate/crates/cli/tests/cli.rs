use std::process::Command;

use serde_json::Value;

use pcmap_cli::output::{data_payload, read_csv};

fn pcmap(args: &[&str]) -> (i32, String, String) {
    pcmap_env(args, &[])
}

fn pcmap_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pcmap"))
        .args(args)
        .env_clear()
        .envs(env.iter().copied())
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok_csv(args: &[&str]) -> pcmap_cli::output::ParsedCsv {
    let (code, out, err) = pcmap(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    read_csv(&out).unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let (code, out, err) = pcmap(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn orbit_has_n_plus_one_rows() {
    let csv = ok_csv(&[
        "orbit", "--a", "0.2", "--b", "0.8", "--x0", "0.9", "--n", "50",
    ]);
    assert_eq!(csv.header, ["n", "x"]);
    assert_eq!(csv.rows.len(), 51);
    assert_eq!(csv.column("x").unwrap()[0], 0.9);
}

#[test]
fn orbit_near_three_cycle_repeats() {
    let csv = ok_csv(&[
        "orbit",
        "--a",
        "0.5",
        "--b",
        "1",
        "--x0",
        "0.47556611",
        "--n",
        "6",
    ]);
    let x = csv.column("x").unwrap();
    for k in 0..3 {
        assert!((x[k] - x[k + 3]).abs() < 1e-6, "{x:?}");
    }
    assert!((x[1] - 0.60026760).abs() < 1e-6);
    assert!((x[2] - 0.36032119).abs() < 1e-6);
}

#[test]
fn orbit_with_flat_left_branch_settles() {
    let csv = ok_csv(&[
        "orbit", "--a", "0", "--b", "0.5", "--x0", "0.8", "--n", "100",
    ]);
    let x = csv.column("x").unwrap();
    let tail = &x[90..];
    assert!(tail.iter().all(|&v| v == tail[0]));
    assert!(tail[0] <= 0.5 && tail[0] > 0.375);
}

#[test]
fn metadata_reproduces_config() {
    let csv = ok_csv(&[
        "orbit", "--a", "0.2", "--b", "0.8", "--x0", "0.9", "--n", "3",
    ]);
    assert_eq!(csv.command.as_deref(), Some("orbit"));
    assert!(csv.tool.unwrap().starts_with("pcmap "));
    let cfg = csv.config.unwrap();
    let orbit = &cfg["command"]["orbit"];
    assert_eq!(orbit["params"]["a"], 0.2);
    assert_eq!(orbit["x0"], 0.9);
    assert_eq!(orbit["n"], 3);
    assert_eq!(cfg["global"]["threads"], 0);
}

#[test]
fn two_cycle_is_repelling() {
    let doc = ok_json(&["two-cycle", "--a", "0.8", "--b", "0.8"]);
    let cycles = doc["data"].as_array().unwrap();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0]["classification"], "Repelling");
    assert_eq!(cycles[0]["prime_period"], 2);
    assert!(cycles[0]["multiplier"].as_f64().unwrap() > 1.0);
}

#[test]
fn two_cycle_absent_is_empty_list() {
    let doc = ok_json(&["two-cycle", "--a", "0.3", "--b", "0.2"]);
    assert_eq!(doc["data"], serde_json::json!([]));
}

#[test]
fn fixed_points_are_endpoints() {
    let doc = ok_json(&["fixed-points", "--a", "0.3", "--b", "0.7"]);
    assert_eq!(doc["data"]["points"], serde_json::json!([0.0, 1.0]));
    assert_eq!(doc["data"]["intervals"], serde_json::json!([]));
}

#[test]
fn cycles_include_the_three_cycle() {
    let doc = ok_json(&["cycles", "--a", "0.5", "--b", "1", "--max-period", "3"]);
    let three = doc["data"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["prime_period"] == 3)
        .expect("3-cycle");
    let pts: Vec<f64> = three["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for want in [0.47556611, 0.60026760, 0.36032119] {
        assert!(pts.iter().any(|x| (x - want).abs() < 1e-6), "{pts:?}");
    }
}

#[test]
fn cycles_csv_view() {
    let csv = ok_csv(&[
        "cycles",
        "--a",
        "0.5",
        "--b",
        "1",
        "--max-period",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(
        csv.header,
        [
            "cycle",
            "period",
            "index",
            "x",
            "multiplier",
            "classification"
        ]
    );
    assert_eq!(csv.rows.len(), 5);
}

#[test]
fn lyapunov_single_point_is_nonnegative() {
    let csv = ok_csv(&["lyapunov", "--a", "0.5", "--b", "0.5", "--x0", "0.3"]);
    assert_eq!(csv.header, ["a", "b", "lambda"]);
    assert_eq!(csv.rows.len(), 1);
    assert!(csv.column("lambda").unwrap()[0] >= 0.0);
}

#[test]
fn lyapunov_sweep_rows() {
    let csv = ok_csv(&[
        "lyapunov", "--rule", "b=a/2", "--steps", "5", "--n", "2000", "--burn", "100",
    ]);
    assert_eq!(csv.rows.len(), 5);
    let a = csv.column("a").unwrap();
    let b = csv.column("b").unwrap();
    assert_eq!(a[4], 1.0);
    assert!(a.iter().zip(&b).all(|(a, b)| *b == a / 2.0));
}

#[test]
fn bifurcation_row_count() {
    let csv = ok_csv(&[
        "bifurcation",
        "--rule",
        "b=a",
        "--steps",
        "400",
        "--burn",
        "10000",
        "--keep",
        "500",
    ]);
    assert_eq!(csv.header, ["a", "b", "x"]);
    assert_eq!(csv.rows.len(), 400 * 500);
}

#[test]
fn bands_along_equal_rule() {
    let csv = ok_csv(&[
        "bands", "--rule", "b=a", "--a-min", "0.3", "--a-max", "0.8", "--steps", "3",
    ]);
    assert_eq!(csv.column("bands").unwrap(), vec![3.0; 3]);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = |t: &'static str| {
        vec![
            "bifurcation",
            "--rule",
            "b=2a/3",
            "--steps",
            "50",
            "--keep",
            "200",
            "--threads",
            t,
        ]
    };
    let (_, one, _) = pcmap(&args("1"));
    let (_, four, _) = pcmap(&args("4"));
    let (_, four_again, _) = pcmap(&args("4"));
    assert_eq!(data_payload(&one), data_payload(&four));
    assert_eq!(four, four_again);
}

#[test]
fn values_round_trip_bit_exact() {
    let (_, out, _) = pcmap(&[
        "orbit", "--a", "0.7", "--b", "0.9", "--x0", "0.123", "--n", "20",
    ]);
    let x = read_csv(&out).unwrap().column("x").unwrap();
    let p = pcmap::Params::new(0.7, 0.9).unwrap();
    let mut want = 0.123f64;
    for v in x {
        assert_eq!(v.to_bits(), want.to_bits());
        want = p.apply(want);
    }
}

#[test]
fn json_format_for_tables() {
    let doc = ok_json(&[
        "orbit", "--a", "0.2", "--b", "0.8", "--x0", "0.9", "--n", "2", "--format", "json",
    ]);
    assert_eq!(doc["command"], "orbit");
    assert_eq!(doc["data"].as_array().unwrap().len(), 3);
    assert_eq!(doc["data"][0]["x"], 0.9);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("pcmap-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("orbit.csv");
    let (code, stdout, _) = pcmap(&[
        "orbit",
        "--a",
        "0.2",
        "--b",
        "0.8",
        "--x0",
        "0.9",
        "--n",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(read_csv(&text).unwrap().rows.len(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn env_vars_supply_flags() {
    let (code, out, _) = pcmap_env(
        &["orbit", "--n", "4"],
        &[("PCMAP_A", "0.2"), ("PCMAP_B", "0.8"), ("PCMAP_X0", "0.9")],
    );
    assert_eq!(code, 0);
    assert_eq!(read_csv(&out).unwrap().rows.len(), 5);

    let (_, out, _) = pcmap_env(
        &["orbit", "--a", "0.2", "--b", "0.8", "--x0", "0.9"],
        &[("PCMAP_N", "2"), ("PCMAP_FORMAT", "json")],
    );
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["data"].as_array().unwrap().len(), 3);
}

#[test]
fn flags_override_env() {
    let (_, out, _) = pcmap_env(
        &[
            "orbit", "--a", "0.2", "--b", "0.8", "--x0", "0.9", "--n", "1",
        ],
        &[("PCMAP_N", "9")],
    );
    assert_eq!(read_csv(&out).unwrap().rows.len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(pcmap(&["orbit", "--a", "0.5"]).0, 2);
    assert_eq!(
        pcmap(&["orbit", "--a", "1.5", "--b", "0.5", "--x0", "0.3"]).0,
        2
    );
    assert_eq!(
        pcmap(&["orbit", "--a", "0.5", "--b", "0.5", "--x0", "1.3"]).0,
        2
    );
    assert_eq!(pcmap(&["lyapunov", "--rule", "nonsense"]).0, 2);
    assert_eq!(pcmap(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(pcmap(&["cycles", "--a", "0", "--b", "0.5"]).0, 2);

    let (code, _, err) = pcmap(&["lyapunov", "--rule", "b=2a", "--steps", "10", "--n", "1000"]);
    assert_eq!(code, 3);
    assert!(err.contains("b=2a"), "{err}");
    assert_eq!(
        pcmap(&["bifurcation", "--rule", "b=5a/(4-a^2)", "--a-min", "0.5"]).0,
        3
    );
}

#[test]
fn verify_conjugacy_passes() {
    let (code, out, _) = pcmap(&["verify", "--suite", "conjugacy"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("[PASS] conjugacy"), "{out}");
}

#[test]
fn verify_odd_periods_passes() {
    assert_eq!(pcmap(&["verify", "--suite", "odd-periods"]).0, 0);
}

#[test]
fn verify_oracle_report_json() {
    let doc = ok_json(&["verify", "--suite", "oracle-vs-theorem", "--format", "json"]);
    let report = &doc[0];
    assert_eq!(report["suite"], "oracle-vs-theorem");
    assert_eq!(report["passed"], true);
    let detail = report["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.contains("closed form disagrees at 0"), "{detail}");
}

#[test]
fn invariant_set_reports_partition() {
    let doc = ok_json(&[
        "invariant-set",
        "--a",
        "0.5",
        "--b",
        "0.5",
        "--samples",
        "2000",
    ]);
    assert_eq!(doc["data"]["interval"]["lo"], 0.375);
    assert_eq!(doc["data"]["interval"]["hi"], 0.625);
    assert_eq!(
        doc["data"]["transitions"]["inclusions"]
            .as_array()
            .unwrap()
            .len(),
        4
    );

    let csv = ok_csv(&[
        "invariant-set",
        "--a",
        "0.9",
        "--b",
        "0.2",
        "--format",
        "csv",
    ]);
    assert_eq!(csv.rows.len(), 1);
}

#[test]
fn entry_time_and_preimages() {
    let csv = ok_csv(&["entry-time", "--a", "0.2", "--b", "0.8", "--x0", "0.95"]);
    assert_eq!(csv.rows[0][1], "5");

    let csv = ok_csv(&["preimages", "--b", "0.5", "--x0", "0.45", "--n", "10"]);
    let x = csv.column("x").unwrap();
    let p = pcmap::Params::new(0.0, 0.5).unwrap();
    for w in x.windows(2) {
        assert!((p.apply(w[1]) - w[0]).abs() < 1e-12);
    }
}

#[test]
fn simplex_orbits() {
    let csv = ok_csv(&["simplex", "--a", "-0.5", "--x0", "0.3", "--n", "2000"]);
    let x = csv.column("x").unwrap();
    let y = csv.column("y").unwrap();
    assert!(x.last().unwrap().abs() < 1e-6);
    assert!((y.last().unwrap() - 1.0).abs() < 1e-6);

    let csv = ok_csv(&[
        "simplex", "--a", "0.4", "--b", "0.6", "--x0", "0.3", "--n", "30",
    ]);
    let p = pcmap::Params::new(0.4, 0.6).unwrap();
    let x = csv.column("x").unwrap();
    for w in x.windows(2) {
        assert_eq!(p.apply(w[0]), w[1]);
    }
}
