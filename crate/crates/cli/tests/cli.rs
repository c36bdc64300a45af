use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use ncbundle_core::gns::{spectrum, spectrum_csv};
use ncbundle_core::{build_flat_triple, LinearOperator, ThetaMatrix};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncbundle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_into(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    let d = dir.to_str().unwrap();
    all.extend(["--out-dir", d]);
    run(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn data(name: &str) -> String {
    fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/data")
            .join(name),
    )
    .unwrap()
}

fn preset_files() -> Vec<(String, PathBuf)> {
    let mut v: Vec<_> = fs::read_dir(scenarios_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), p))
        .collect();
    v.sort();
    v
}

#[test]
fn flagship_run_passes_and_writes_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(dir.path(), &["run", "t3-over-s1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path());
    assert_eq!(r["pass"], true);
    assert_eq!(r["j0_used"], "J");
    assert_eq!(r["stages"].as_array().unwrap().len(), 9);
    for op in ["D", "D_v", "D_h", "D_omega", "script_D_omega"] {
        assert!(dir.path().join(format!("{op}.csv")).exists(), "{op}");
    }
    // D_h = σ³δ₃ at Λ=4: eigenvalues ±k₃, each with 9·9 lattice modes
    let d_h = fs::read_to_string(dir.path().join("D_h.csv")).unwrap();
    let rows: Vec<&str> = d_h.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0], "0,-4.000000000000,162");
    assert_eq!(rows[4], "4,0.000000000000,162");
    // canonical family: D_ω has the same spectrum file as D_h
    assert_eq!(
        d_h,
        fs::read_to_string(dir.path().join("D_omega.csv")).unwrap()
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_into(a.path(), &["run", "t3-constant"])), 0);
    let o = bin()
        .args([
            "run",
            "t3-constant",
            "--out-dir",
            b.path().to_str().unwrap(),
        ])
        .env("NCG_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 5);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn constant_family_spectra_match_oracle_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run_into(dir.path(), &["run", "t3-constant"])), 0);
    for op in ["D", "D_omega", "script_D_omega"] {
        let got = fs::read_to_string(dir.path().join(format!("{op}.csv"))).unwrap();
        assert_eq!(got, data(&format!("t3-constant_{op}.csv")), "{op}");
    }
    let r = report(dir.path());
    let compat = r["stages"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["stage"] == "compatibility")
        .unwrap();
    assert_eq!(compat["required"], false);
    assert_eq!(compat["pass"], false);
}

#[test]
fn presets_exit_by_prefix() {
    for (name, path) in preset_files() {
        let dir = tempfile::tempdir().unwrap();
        let o = run_into(dir.path(), &["run", path.to_str().unwrap()]);
        let want = if name.starts_with("xfail-") { 1 } else { 0 };
        assert_eq!(
            code(&o),
            want,
            "{name}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
        assert_eq!(report(dir.path())["scenario"], name.as_str());
    }
}

#[test]
fn nonconstant_connection_fails_only_compatibility() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(dir.path(), &["run", "xfail-t3-nonconstant"]);
    assert_eq!(code(&o), 1);
    let r = report(dir.path());
    let failing: Vec<&str> = r["stages"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["pass"] == false)
        .map(|s| s["stage"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["compatibility"]);
}

#[test]
fn verify_single_stage() {
    let o = run(&["verify", "t3-over-s1", "--only", "sectors"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("sectors"));
    assert_eq!(
        code(&run(&[
            "verify",
            "xfail-t3-nonconstant",
            "--only",
            "compatibility"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "verify",
            "xfail-t3-nonconstant",
            "--only",
            "fibres"
        ])),
        0
    );
}

#[test]
fn overrides_reach_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(
        dir.path(),
        &[
            "verify",
            "commutative-t2",
            "--only",
            "triple",
            "--lambda",
            "3",
            "--seed",
            "9",
            "--tolerance",
            "1e-11",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = report(dir.path());
    assert_eq!(r["lambda"], 3);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["tolerance"], 1e-11);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"id": "bad", "theta": [[0, 0.1], [-0.1, 0]], "n": 2, "m": 1, "lambda": 3}"#,
    )
    .unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["run"],
        vec!["run", "no-such-preset"],
        vec!["run", bad.to_str().unwrap()],
        vec!["verify", "t3-over-s1", "--only", "everything"],
        vec!["run", "t3-over-s1", "--lambda", "1"],
        vec!["sweep"],
    ];
    for args in cases {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
    let o = bin()
        .args(["verify", "t3-over-s1", "--only", "triple"])
        .env("NCG_NUM_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert_eq!(code(&run_into(&blocker, &["run", "commutative-t2"])), 3);
    let unreadable = dir.path().join("config-dir.json");
    fs::create_dir(&unreadable).unwrap();
    assert_eq!(code(&run(&["run", unreadable.to_str().unwrap()])), 3);
}

#[test]
fn kr_sweep_flags_wrong_sign_cases() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(dir.path(), &["sweep", "--kr", "--max-dim", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("kr_sweep.json")).unwrap())
            .unwrap();
    let flagged: Vec<(u64, u64)> = r["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["recipe"]["pathological"] == true)
        .map(|c| (c["j"].as_u64().unwrap(), c["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(flagged, vec![(0, 3), (4, 3), (4, 5)]);
    assert_eq!(r["table"].as_array().unwrap().len(), 64);
    assert!(String::from_utf8_lossy(&o.stdout).contains("wrong-sign j0"));
}

#[test]
fn dirac_csv_at_cutoff_one() {
    let th = Arc::new(ThetaMatrix::from_upper(3, &[0.3, 0.0, 0.0]).unwrap());
    let t = build_flat_triple(&th, 2, 1, 1).unwrap();
    let s = spectrum(&t.d).unwrap();
    assert_eq!(s.len(), 54);
    let csv = spectrum_csv(&s);
    let mult: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    // |k|² = 0, 1, 2, 3 occurs 1, 6, 12, 8 times; each mode gives ±|k|
    assert_eq!(mult, ["8", "12", "6", "2", "6", "12", "8"]);
    assert!(csv.contains(",1.732050807569,8\n"));

    let zero = spectrum_csv(&spectrum(&LinearOperator::zero(t.space)).unwrap());
    assert_eq!(zero, "index,eigenvalue,multiplicity\n0,0.000000000000,54\n");
}
