//! End-to-end tests driving the `qres` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qres(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qres"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qres-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

fn json_field(text: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(text).expect("valid json");
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("field {key} in {text}"))
}

#[test]
fn state_make_measure_f1_on_cat() {
    let dir = tmp_dir("cat-f1");
    let out = qres(
        &[
            "state",
            "make",
            "--kind",
            "cat",
            "--alpha-re",
            "2.0",
            "--dim",
            "40",
            "--out",
            "cat.json",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let out = qres(&["measure", "f1", "--state", "cat.json"], &dir);
    assert!(out.status.success());
    let f1 = json_field(&String::from_utf8_lossy(&out.stdout), "f1");
    // α²(1 + tanh α²) at α = 2
    let expect = 4.0 * (1.0 + 4.0f64.tanh());
    assert!((f1 - expect).abs() < 1e-6, "f1 = {f1}, expect {expect}");
}

#[test]
fn measure_eta_on_diagonal_state_is_zero() {
    let dir = tmp_dir("eta-diag");
    qres(
        &[
            "state",
            "make",
            "--kind",
            "lossy-photon",
            "--q",
            "0.5",
            "--out",
            "diag.json",
        ],
        &dir,
    );
    let out = qres(&["measure", "eta", "--state", "diag.json"], &dir);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert_eq!(json_field(&text, "eta"), 0.0);
    assert_eq!(json_field(&text, "predicted_sio_fidelity"), 0.5);
}

#[test]
fn ncdepth_bracket_of_lossy_photon() {
    let dir = tmp_dir("ncdepth");
    qres(
        &[
            "state",
            "make",
            "--kind",
            "lossy-photon",
            "--q",
            "0.8",
            "--out",
            "s.json",
        ],
        &dir,
    );
    let out = qres(
        &[
            "measure", "ncdepth", "--state", "s.json", "--grid", "41", "--tol", "0.005",
        ],
        &dir,
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let lower = json_field(&text, "lower");
    let upper = json_field(&text, "upper");
    assert!(lower <= 0.8 && 0.8 <= upper, "bracket [{lower}, {upper}]");
}

#[test]
fn descriptor_round_trip_through_files() {
    let dir = tmp_dir("roundtrip");
    qres(
        &[
            "state",
            "make",
            "--kind",
            "coherent",
            "--alpha-re",
            "0.7",
            "--alpha-im",
            "-0.2",
            "--dim",
            "16",
            "--out",
            "c.json",
        ],
        &dir,
    );
    let text = std::fs::read_to_string(dir.join("c.json")).expect("file exists");
    let desc: qres_core::fock::StateDescriptor = serde_json::from_str(&text).expect("parses");
    let rho = desc.to_density().expect("valid");
    let back = qres_core::fock::StateDescriptor::from_density(&rho);
    let rho2 = back.to_density().expect("valid");
    assert!((rho.matrix() - rho2.matrix()).norm() < 1e-12);
}

#[test]
fn exit_codes_distinguish_usage_and_domain_errors() {
    let dir = tmp_dir("exits");
    // unknown flag → clap usage error (2)
    let out = qres(&["measure", "f1", "--nonsense"], &dir);
    assert_eq!(out.status.code(), Some(2));
    // missing descriptor file → usage error (2), message carries the path
    let out = qres(&["measure", "f1", "--state", "missing.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    // unknown descriptor key → usage error (2)
    std::fs::write(
        dir.join("bad.json"),
        r#"{"kind":"fock","n":1,"dim":4,"oops":1}"#,
    )
    .unwrap();
    let out = qres(&["measure", "f1", "--state", "bad.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
    // unphysical matrix → domain error (1)
    std::fs::write(
        dir.join("unphys.json"),
        r#"{"kind":"dm","dims":[2],"re":[[0.9,0.9],[0.9,0.1]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = qres(&["measure", "f1", "--state", "unphys.json"], &dir);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lossy_scan_csv_is_deterministic_and_svg_renders() {
    let dir = tmp_dir("scan");
    let args = [
        "exp",
        "lossy-scan",
        "--qmin",
        "0.0",
        "--qmax",
        "1.0",
        "--steps",
        "5",
        "--dim",
        "6",
        "--tol",
        "0.01",
        "--out",
        "scan.csv",
        "--svg",
        "scan.svg",
        "--seed",
        "3",
    ];
    let out = qres(&args, &dir);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let first = std::fs::read(dir.join("scan.csv")).expect("csv written");
    let svg = std::fs::read_to_string(dir.join("scan.svg")).expect("svg written");
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("polyline"));

    let out = qres(&args, &dir);
    assert!(out.status.success());
    let second = std::fs::read(dir.join("scan.csv")).expect("csv written");
    assert_eq!(first, second, "same seed must give byte-identical CSV");

    // header carries version, seed, config hash, and the located threshold
    let text = String::from_utf8_lossy(&first);
    assert!(text.starts_with("# experiment=lossy_concentration_scan"));
    assert!(text.contains("seed=3"));
    assert!(text.contains("config_hash="));
    assert!(text.contains("# q_star="));
}

#[test]
fn channel_random_and_eta() {
    let dir = tmp_dir("channel");
    let out = qres(
        &[
            "channel",
            "random",
            "--din",
            "2",
            "--dout",
            "2",
            "--rank",
            "4",
            "--seed",
            "5",
            "--out",
            "choi.json",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = qres(
        &["channel", "eta", "--choi", "choi.json", "--starts", "8"],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let eta = json_field(&text, "eta_tilde");
    assert!((0.0..=1.0).contains(&eta), "η̃ = {eta}");
}

#[test]
fn gaussian_make_and_measures() {
    let dir = tmp_dir("gaussian");
    qres(
        &[
            "gaussian", "make", "--kind", "squeezed", "--r", "0.5", "--out", "g.json",
        ],
        &dir,
    );
    let out = qres(&["gaussian", "ncdepth", "--state", "g.json"], &dir);
    assert!(out.status.success());
    let depth = json_field(&String::from_utf8_lossy(&out.stdout), "ncdepth");
    let expect = (1.0 - (-1.0f64).exp()) / 2.0;
    assert!((depth - expect).abs() < 1e-12);

    qres(
        &[
            "gaussian", "make", "--kind", "tmsv", "--r", "0.5", "--out", "t.json",
        ],
        &dir,
    );
    let out = qres(&["gaussian", "kappa-sep", "--state", "t.json"], &dir);
    assert!(out.status.success());
    let kappa = json_field(&String::from_utf8_lossy(&out.stdout), "kappa_sep");
    assert!((kappa - 1.0f64.exp()).abs() < 1e-6, "κ_sep = {kappa}");
}

#[test]
fn cat_experiment_json_records() {
    let dir = tmp_dir("catexp");
    let out = qres(
        &[
            "exp", "cat", "--alpha", "1.0", "--dim", "24", "--format", "json", "--out", "cat.json",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.join("cat.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["experiment"], "cat_amplification");
    assert!(v["records"][0]["bound_ok"].as_bool().unwrap());
}

#[test]
fn tau_tensor_and_tmsv_records() {
    let dir = tmp_dir("tau-tmsv");
    let out = qres(
        &["exp", "tau-tensor", "--t1", "0.8", "--t2", "0.3", "--out", "tau.csv"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("tau.csv")).unwrap();
    assert!(text.contains("tensorization_ok"));
    assert!(text.lines().filter(|l| !l.starts_with('#')).count() >= 2);

    let out = qres(&["exp", "tmsv", "--r", "0.4", "--format", "json", "--out", "tmsv.json"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("tmsv.json")).unwrap()).unwrap();
    assert!(v["records"][0]["bound_ok"].as_bool().unwrap());
    assert!(v["records"][0]["het_within_budget"].as_bool().unwrap());
}

#[test]
fn eta_tensor_scatter_svg() {
    let dir = tmp_dir("etatensor");
    let out = qres(
        &[
            "exp", "eta-tensor", "--da", "2", "--db", "2", "--trials", "2", "--starts", "6",
            "--seed", "5", "--out", "e.csv", "--svg", "e.svg",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(dir.join("e.svg")).unwrap();
    // scatter points plus the tensorization reference diagonal
    assert!(svg.contains("circle"));
    assert!(svg.contains("stroke-dasharray"));
}

#[test]
fn empty_record_list_is_a_usage_error() {
    let dir = tmp_dir("empty");
    let out = qres(
        &["exp", "lossy-scan", "--steps", "0", "--dim", "6", "--out", "x.csv"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
}
