use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use siftlab_cli::report::{DIAGNOSTICS_CSV, INEQUALITIES_CSV, SUMMARY_JSON};
use siftlab_cli::{summary_matches_csv, Summary};
use siftlab_core::envelope::{parse_csv, FourierMajorant, MajorantParams, Variant};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_siftlab"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

#[test]
fn minimal_campaign_writes_one_row() {
    let out = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run(bin().args(["campaign", "--config"]).arg(config("minimal.json")).arg("--out").arg(out.path()));
    assert_eq!(code, 0, "{stdout}");
    let csv = std::fs::read_to_string(out.path().join(INEQUALITIES_CSV)).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("empty-prime-set,restriction,256,"));
}

#[test]
fn lemma_campaign_flags_probe_without_failing() {
    let out = tempfile::tempdir().unwrap();
    let (code, _, _) = run(bin().args(["campaign", "--config"]).arg(config("lemmas.json")).arg("--out").arg(out.path()));
    assert_eq!(code, 0);
    let diags = std::fs::read_to_string(out.path().join(DIAGNOSTICS_CSV)).unwrap();
    assert!(diags.contains("lemma:product-probe,,10.0,,NOT-ASSERTED,false,counterexample: 11/3 < 35/8"));
    assert!(!diags.contains(",FAIL,"));
    let lemmas = std::fs::read_to_string(out.path().join("lemmas.csv")).unwrap();
    assert!(lemmas.lines().skip(1).filter(|l| l.ends_with(",true")).all(|l| l.contains(",true,true")));
    let summary: Summary = serde_json::from_str(&std::fs::read_to_string(out.path().join(SUMMARY_JSON)).unwrap()).unwrap();
    assert!(summary.pass);
    assert!(summary_matches_csv(&summary, &diags).unwrap());
}

#[test]
fn hard_failure_sets_exit_code() {
    let out = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run(bin()
        .args(["campaign", "--config"])
        .arg(config("determinism.json"))
        .arg("--out")
        .arg(out.path())
        .args(["--tolerance", "parseval=0", "--workers", "2"]));
    assert_eq!(code, 1, "{stdout}");
    let diags = std::fs::read_to_string(out.path().join(DIAGNOSTICS_CSV)).unwrap();
    let summary: Summary = serde_json::from_str(&std::fs::read_to_string(out.path().join(SUMMARY_JSON)).unwrap()).unwrap();
    assert!(!summary.pass);
    assert!(summary_matches_csv(&summary, &diags).unwrap());
}

#[test]
fn invalid_config_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"runs": [{"name": "x", "system": {"primes": "all", "residues": {"fixed": [0]}, "z": 5}, "ell": ["four"]}]}"#).unwrap();
    let (code, _, stderr) = run(bin().args(["campaign", "--config"]).arg(&path).arg("--out").arg(dir.path().join("o")));
    assert_eq!(code, 2);
    assert!(stderr.contains("CONFIG-INVALID at runs[0].ell[0]"), "{stderr}");
}

#[test]
fn sums_prints_exact_rationals() {
    let (code, stdout, _) = run(bin().args(["sums", "--y", "10"]));
    assert_eq!(code, 0);
    assert!(stdout.contains("G(10) = 11/3"));
    assert!(stdout.contains("V(10) = 35/8"));
    assert!(stdout.contains("NOT-ASSERTED"));
}

#[test]
fn constants_command() {
    let (code, stdout, _) = run(bin().args(["constants", "--kappa", "1", "--eulerian", "4", "--carlitz-t", "0.3"]));
    assert_eq!(code, 0);
    assert!(stdout.contains("c(1) = 12\n"));
    assert!(stdout.contains("A_4: 1 11 11 1"));
}

#[test]
fn verify_reports_ceiling() {
    let (code, stdout, _) = run(bin().args(["verify", "--theorem", "large-sieve", "--n", "4096", "--grid", "--beta", "0.1"]));
    assert_eq!(code, 0);
    assert!(stdout.contains("classical ceiling") && stdout.contains("PASS"));
    assert!(stdout.contains("large-sieve,4096,"));
    let (code, _, stderr) = run(bin().args(["verify", "--theorem", "nonsense", "--n", "16"]));
    assert_eq!(code, 2);
    assert!(stderr.contains("CONFIG-INVALID"));
}

#[test]
fn sift_and_apps_export_lists() {
    let dir = tempfile::tempdir().unwrap();
    let members = dir.path().join("s.txt");
    let (code, _, _) = run(bin().args(["sift", "--n", "20", "--z", "4", "--out"]).arg(&members));
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&members).unwrap(), "1\n5\n7\n11\n13\n17\n19\n");
    let (code, _, _) = run(bin().args(["apps", "--n", "30", "--poly", "1,0;1,2", "--two-squares", "--out"]).arg(dir.path()));
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("x_of_f.txt")).unwrap(), "3\n5\n11\n17\n29\n");
    assert_eq!(std::fs::read_to_string(dir.path().join("b4.txt")).unwrap(), "1\n13\n25\n");
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b4.certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["violations"], serde_json::json!([]));
}

#[test]
fn majorant_table_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    std::fs::write(&sys, r#"{"primes": "all", "residues": {"fixed": [0, -2]}, "z": 20}"#).unwrap();
    let table = dir.path().join("w.csv");
    let (code, stdout, _) = run(bin().args(["majorant", "--config"]).arg(&sys).args(["--z0", "3", "--out"]).arg(&table));
    assert_eq!(code, 0, "{stdout}");
    let rows = parse_csv(&std::fs::read_to_string(&table).unwrap()).unwrap();
    let system = siftlab_core::sieve::build_system(
        &siftlab_core::sieve::SystemConfig::from_json(&std::fs::read_to_string(&sys).unwrap()).unwrap(),
        None,
    )
    .unwrap();
    let built = FourierMajorant::build(&system, MajorantParams::new(3.0, 20.0), Variant::default()).unwrap();
    let reloaded = FourierMajorant::from_rows(built.params, built.variant, &rows);
    assert_eq!(reloaded.rows(), built.rows());
}

#[test]
fn plot_selectors() {
    let out = tempfile::tempdir().unwrap();
    let (code, _, _) = run(bin().args(["campaign", "--config"]).arg(config("determinism.json")).arg("--out").arg(out.path()));
    assert_eq!(code, 0);
    let (code, csv, _) = run(bin().args(["plot", "--selector", "constant-vs-N", "--bundle"]).arg(out.path()));
    assert_eq!(code, 0);
    let xs: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(!xs.is_empty() && xs.windows(2).all(|w| w[0] <= w[1]));
    let (_, csv, _) = run(bin().args(["plot", "--selector", "levelsets", "--bundle"]).arg(out.path()));
    assert!(csv.lines().skip(1).all(|l| l.contains("/xi=")));
    let (_, csv, _) = run(bin().args(["plot", "--selector", "ell-sweep", "--bundle"]).arg(out.path()));
    assert!(csv.contains("blowup/kappa=1") && csv.contains("explicit-constant/kappa=1"));
    let (code, _, stderr) = run(bin().args(["plot", "--selector", "pie", "--bundle"]).arg(out.path()));
    assert_eq!(code, 2);
    assert!(stderr.contains("UNKNOWN-SELECTOR"));
}
