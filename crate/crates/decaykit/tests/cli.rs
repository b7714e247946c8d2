//! End-to-end runs of the `decaykit` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

const F5: &str = r#"
[resonance]
x_d = 0.1
nu = 0.5
b_s = 1.0

[grid]
n_max = 30.0
count = 61
spacing = "linear"
"#;

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("decaykit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn decaykit(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_decaykit"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("DECAYKIT_THREADS", n),
        None => cmd.env_remove("DECAYKIT_THREADS"),
    };
    cmd.output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = decaykit(args, None);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn survival_csv_is_stable() {
    let cfg = scratch("f5.toml", F5);
    let cfg = cfg.to_str().unwrap();
    let a = decaykit(&["survival", "--config", cfg], None).stdout;
    let b = decaykit(&["survival", "--config", cfg], Some("4")).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.starts_with("n,tau,P,P_e,P_ne,P_i,I\n"));
    assert_eq!(text.lines().count(), 62);
    let first = text.lines().nth(2).unwrap().split(',').nth(2).unwrap();
    let mantissa = first.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
    let p = column(&text, "P");
    let parts: Vec<f64> = ["P_e", "P_ne", "P_i"]
        .iter()
        .map(|c| column(&text, c))
        .fold(vec![0.0; p.len()], |acc, v| {
            acc.iter().zip(v).map(|(a, b)| a + b).collect()
        });
    for (p, s) in p.iter().zip(parts) {
        assert!((p - s).abs() < 1e-12);
    }
    let i = column(&text, "I");
    assert!(i.iter().all(|v| (0.0..=2.0).contains(v)));
}

#[test]
fn json_config_matches_toml() {
    let toml = scratch("same.toml", F5);
    let json = scratch(
        "same.json",
        r#"{"resonance": {"x_d": 0.1, "nu": 0.5, "b_s": 1.0},
            "grid": {"n_max": 30.0, "count": 61, "spacing": "linear"}}"#,
    );
    for cmd in ["survival", "moments", "regions"] {
        assert_eq!(
            stdout(&[cmd, "--config", toml.to_str().unwrap()]),
            stdout(&[cmd, "--config", json.to_str().unwrap()])
        );
    }
}

#[test]
fn overrides_and_output_file() {
    let cfg = scratch("override.toml", F5);
    let out = cfg.with_file_name("moments.json");
    stdout(&[
        "moments",
        "--config",
        cfg.to_str().unwrap(),
        "--b-s",
        "2",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["moments"].as_array().unwrap().len(), 5);
    let base: serde_json::Value = serde_json::from_str(&stdout(&[
        "moments",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert_ne!(v["variance"], base["variance"]);
}

#[test]
fn physical_units_reduce_to_dimensionless() {
    let phys = scratch(
        "phys.toml",
        r#"
[physical]
nu = 0.5
form_factor = "exponential"
b_per_mev = 10.0
poles = [{ re_kev = 100.0, im_ev = 5000.0 }]
"#,
    );
    let dimless = scratch(
        "dimless.toml",
        "[resonance]\nx_d = 0.05\nnu = 0.5\nb_s = 1.0\n",
    );
    let a: serde_json::Value = serde_json::from_str(&stdout(&[
        "regions",
        "--config",
        phys.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert!((a["x_d"].as_f64().unwrap() - 5000.0 / 100e3).abs() < 1e-16);
    let p = column(
        &stdout(&["survival", "--config", phys.to_str().unwrap()]),
        "P",
    );
    let q = column(
        &stdout(&["survival", "--config", dimless.to_str().unwrap()]),
        "P",
    );
    for (p, q) in p.iter().zip(q) {
        assert!((p - q).abs() < 1e-12);
    }
}

#[test]
fn constant_form_factor_from_pole_list() {
    let cfg = scratch(
        "constant.toml",
        r#"
[physical]
nu = 0.5
form_factor = "constant"
poles = [{ re_kev = 100.0, im_ev = 2000.0 }, { re_kev = 140.0, im_ev = 9000.0 }]

[grid]
n_max = 3.0
count = 4
spacing = "linear"
"#,
    );
    let p = column(
        &stdout(&["survival", "--config", cfg.to_str().unwrap()]),
        "P",
    );
    assert!((p[0] - 1.0).abs() < 1e-8);
    assert!(p.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn table_and_preset() {
    let cfg = scratch("t1.toml", F5);
    let table = stdout(&["table1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(table.lines().count(), 13);
    let tau_g = column(&table, "tau_G");
    assert!((tau_g[9] / 4.840e-3 - 1.0).abs() < 5e-3);
    let none = stdout(&["table1", "--config", cfg.to_str().unwrap(), "--b-s", "1"]);
    assert!(none
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(2) == Some("")));
    let be8 = stdout(&["be8", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&be8).unwrap();
    assert!((v["b_per_mev"].as_f64().unwrap() / 10.83 - 1.0).abs() < 5e-3);
}

fn exit_code(args: &[&str]) -> (i32, String) {
    let out = decaykit(args, None);
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn exit_codes() {
    let good = scratch("ok.toml", F5);
    let good = good.to_str().unwrap();
    let (code, err) = exit_code(&["survival", "--config", "/nonexistent/scenario.toml"]);
    assert_eq!(code, 2);
    assert!(err.contains("Config"));

    let both = scratch(
        "both.toml",
        &format!("{F5}\n[physical]\nnu = 0.5\nform_factor = \"constant\"\npoles = []\n"),
    );
    assert_eq!(exit_code(&["dos", "--config", both.to_str().unwrap()]).0, 2);

    let tiny = scratch("tiny.toml", &F5.replace("count = 61", "count = 1"));
    assert_eq!(
        exit_code(&["survival", "--config", tiny.to_str().unwrap()]).0,
        2
    );

    let (code, err) = exit_code(&["moments", "--config", good, "--nu", "1.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("NuOutOfRange"));

    let (code, err) = exit_code(&["regions", "--config", good, "--b-s", "0.1"]);
    assert_eq!(code, 3);
    assert!(err.contains("NegativeVariance"));

    assert_eq!(exit_code(&["frobnicate", "--config", good]).0, 2);
}
