use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_soliton-spectra"))
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg(cmd).arg("--config").arg(config).arg("--output-dir").arg(out).args(extra).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const NLS_SCAN: &str = r#"{
  "equation": "nls",
  "model": {"family": "soler_power", "k": 3, "m": 1.0},
  "omega_grid": {"start": 0.2, "stop": 0.8, "count": 3},
  "grid": {"N": 192}
}"#;

#[test]
fn scan_is_reproducible_from_echoed_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "scan.json", NLS_SCAN);
    let a = tmp.path().join("a");
    let out = run("scan", &cfg, &a, &["--threads", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let b = tmp.path().join("b");
    let out = run("scan", &a.join("effective_config.json"), &b, &["--threads", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["scan.csv", "scan.json", "charge.dat", "max_real.dat", "charge.svg"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.join("scan.csv")).unwrap();
    assert!(csv.starts_with("# tool: soliton-spectra "));
    assert!(csv.contains("# config_sha256: "));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols[3], "2");
        assert_eq!(cols[9], "vk_unstable_sign");
    }
}

#[test]
fn failed_rows_are_written_and_flagged() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "scan.json",
        r#"{"equation":"nls","model":{"family":"soler_power","k":1,"m":1.0},
            "omega_grid":{"start":0.2,"stop":0.95,"count":2},"grid":{"L":10.0,"N":128}}"#,
    );
    let out = run("scan", &cfg, tmp.path(), &[]);
    assert!(!out.status.success());
    let csv = fs::read_to_string(tmp.path().join("scan.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(','), "first row succeeds: {}", rows[0]);
    assert!(rows[1].contains("domain too small"), "{}", rows[1]);
}

#[test]
fn malformed_configs_exit_nonzero_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"equation":"nls","model":{"family":"soler_power","k":1,"m":1.0},"omega":0.5,"grid":{"N":-4}}"#, "grid.N"),
        (
            r#"{"equation":"nls","model":{"family":"soler_power","k":1,"m":1.0},"omega":0.5,"grid":{"N":64},"tolerance":{}}"#,
            "tolerance",
        ),
        (r#"{"equation":"nls","model":{"family":"soler_power","k":1,"m":1.0},"omega":1.5,"grid":{"N":64}}"#, "omega"),
        (r#"{"equation":"nls","model":{"family":"soler_power","k":1,"m":1.0},"omega":0.5,"grid":{"N":63}}"#, "grid.N"),
    ];
    for (i, (text, field)) in cases.iter().enumerate() {
        let cfg = write(tmp.path(), &format!("bad{i}.json"), text);
        let out = run("profile", &cfg, &tmp.path().join(format!("o{i}")), &[]);
        assert!(!out.status.success());
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{err}");
    }
    let cfg = write(tmp.path(), "ok.json", NLS_SCAN);
    let out = run("scan", &cfg, tmp.path(), &["--threads", "0"]);
    assert!(!out.status.success());
}

#[test]
fn verify_and_derrick_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "v.json",
        r#"{"equation":"nls","model":{"family":"soler_power","k":1,"m":1.0},"omega":0.5,"grid":{"N":256}}"#,
    );
    let out = run("verify", &cfg, &tmp.path().join("v"), &[]);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{table}");
    assert!(table.contains("charge vs closed form") && !table.contains("FAIL"));

    let cfg = write(tmp.path(), "d.json", r#"{"equation":"nlw","grid":{"L":30.0,"N":256}}"#);
    let out = run("derrick", &cfg, &tmp.path().join("d"), &[]);
    assert!(out.status.success());
    let j: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("d/derrick.json")).unwrap()).unwrap();
    assert!((j["data"]["lambda_min_l"].as_f64().unwrap() + 3.0).abs() < 1e-8);
    assert_eq!(j["header"]["checks"][0], "derrick-instability");
}

#[test]
fn profile_and_spectrum_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "s.json",
        r#"{"equation":"dirac1d","model":{"family":"soler_power","k":1,"m":1.0},"omega":0.6,
            "grid":{"L":25.0,"N":128},"output":{"formats":["csv","json"],"write_matrix":true}}"#,
    );
    let out = run("spectrum", &cfg, tmp.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!tmp.path().join("charge.svg").exists());
    let j: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("spectrum.json")).unwrap()).unwrap();
    let eig = j["data"]["spectrum"]["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 512);
    assert_eq!(eig[0].as_array().unwrap().len(), 2);
    assert!(j["data"]["summary"]["conjugation_defect"].as_f64().unwrap() <= 1e-8);
    let m = fs::read_to_string(tmp.path().join("jl_matrix.txt")).unwrap();
    assert!(m.starts_with("# size 512"));

    let out = run("profile", &cfg, tmp.path(), &[]);
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("profile.csv")).unwrap();
    assert!(csv.contains("x,component_1,component_2"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 129);
}
