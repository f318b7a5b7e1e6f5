use std::path::Path;
use std::process::{Command, Output};

use incrrelay_cli::output::{
    from_json, read_cloud_csv, to_json, write_cloud_csv, CharacteristicReport,
};
use incrrelay_core::characteristics::contains;
use incrrelay_core::fixtures::four_bus;
use incrrelay_core::{Complex64, FaultType};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incrrelay"))
        .args(args)
        .env_remove("INCRRELAY_EPS")
        .output()
        .unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn paper22_ag_characteristic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = run(&["characteristic", "--fault", "ag", "--out", out]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(String::from_utf8_lossy(&res.stdout).contains("ms"));

    let svg = read(&dir.path().join("ag.svg"));
    assert_eq!(svg.matches("<circle").count(), 22);
    assert!(svg.contains("stroke-dasharray"));

    let report = from_json(&read(&dir.path().join("ag_characteristic.json"))).unwrap();
    assert!(report.hull.vertices.len() >= 3);
    for s in &report.hull.samples {
        assert!(contains(&report.hull, s.z));
    }
    let cloud = read_cloud_csv(read(&dir.path().join("ag_cloud.csv")).as_bytes()).unwrap();
    assert_eq!(cloud, report.hull.samples);
}

#[test]
fn corner_grid_gives_four_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = run(&[
        "characteristic",
        "--fault",
        "ab",
        "--grid",
        "corners4",
        "--format",
        "json",
        "--out",
        out,
    ]);
    assert!(res.status.success());
    let report = from_json(&read(&dir.path().join("ab_characteristic.json"))).unwrap();
    assert_eq!(report.hull.vertices.len(), 4);
    assert!(!dir.path().join("ab.svg").exists());
}

#[test]
fn csv_json_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(run(&[
        "characteristic",
        "--fault",
        "bcg",
        "--grid",
        "dense:7x5",
        "--out",
        out
    ])
    .status
    .success());
    let csv_text = read(&dir.path().join("bcg_cloud.csv"));
    let mut report: CharacteristicReport =
        from_json(&read(&dir.path().join("bcg_characteristic.json"))).unwrap();
    report.hull.samples = read_cloud_csv(csv_text.as_bytes()).unwrap();
    let again = from_json(&to_json(&report)).unwrap();
    let mut buf = Vec::new();
    write_cloud_csv(&again.hull.samples, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), csv_text);
}

#[test]
fn svg_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let res = run(&[
            "characteristic",
            "--fault",
            "ab",
            "--format",
            "svg",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    assert_eq!(
        std::fs::read(a.path().join("ab.svg")).unwrap(),
        std::fs::read(b.path().join("ab.svg")).unwrap()
    );
}

#[test]
fn unknown_fault_is_a_usage_error() {
    let res = run(&["characteristic", "--fault", "ax"]);
    assert_eq!(res.status.code(), Some(1));
    let err = String::from_utf8_lossy(&res.stderr);
    for eta in FaultType::ALL {
        assert!(err.contains(eta.name()), "{err}");
    }
}

#[test]
fn bundled_fixture_verifies() {
    let res = run(&["verify"]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stdout)
    );
    assert!(String::from_utf8_lossy(&res.stdout).contains("275 scenarios, 0 failed"));
}

#[test]
fn verify_table_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("residuals.csv");
    let res = run(&[
        "verify",
        "--fault",
        "ag",
        "--grid",
        "corners4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let text = read(&path);
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("fault,m_t,m_f,sigma"));
}

#[test]
fn corrupted_line_data_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let net = four_bus();
    let model = dir.path().join("model.toml");
    let truth = dir.path().join("truth.toml");
    std::fs::write(&model, net.to_toml()).unwrap();
    let line = net.protected_line();
    let bent = net
        .with_line_impedance(&line.id, line.z1 * Complex64::new(1.05, 0.0), line.z0)
        .unwrap();
    std::fs::write(&truth, bent.to_toml()).unwrap();
    let res = run(&[
        "verify",
        "--network",
        model.to_str().unwrap(),
        "--truth",
        truth.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&res.stdout).contains("FAIL"));
}

#[test]
fn missing_file_is_an_io_error() {
    let res = run(&["verify", "--network", "/definitely/not/here.toml"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn invalid_network_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "buses = []\nlines = []\n").unwrap();
    let res = run(&["verify", "--network", p.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn simulate_prints_toml() {
    let res = run(&["simulate", "--fault", "abg", "--mhat", "0.3,0.5"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("eta = \"abg\""));
    assert!(text.contains("[window]"));
}

#[test]
fn eps_override_is_honoured() {
    let res = Command::new(env!("CARGO_BIN_EXE_incrrelay"))
        .args(["verify", "--fault", "ag", "--grid", "corners4"])
        .env("INCRRELAY_EPS", "0.01")
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("0.990000"));
    let bad = Command::new(env!("CARGO_BIN_EXE_incrrelay"))
        .args(["verify"])
        .env("INCRRELAY_EPS", "2")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
