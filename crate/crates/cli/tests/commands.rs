use std::path::Path;
use std::process::{Command, Output};

use vekua::grid::{interior_rms, relative, BiquaternionField, ScalarField, VectorField, DEFAULT_LAYER};
use vekua::vekua_ops::{v_residual, FactorizingFunction};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vekua")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_conjugate_derive_antiderive_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = run(d, &["generate", "cyl-f-r", "--res", "17", "-o", "psi.vfld", "--f-out", "f.vfld"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    let o = run(d, &["conjugate", "psi.vfld", "--f", "f.vfld", "--direction", "scalar-to-vector", "-o", "vec.vfld"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // assemble W = ψ + 𝐖 and differentiate it
    let psi = ScalarField::read_vfld(&d.join("psi.vfld")).unwrap();
    let vec = VectorField::read_vfld(&d.join("vec.vfld")).unwrap();
    let f = FactorizingFunction::new(ScalarField::read_vfld(&d.join("f.vfld")).unwrap()).unwrap();
    let w = BiquaternionField::from_parts(&psi, &vec);
    assert!(v_residual(&w, &f, DEFAULT_LAYER) < 0.05);
    w.write_vfld(&d.join("w.vfld")).unwrap();

    let o = run(d, &["derive", "w.vfld", "--f", "f.vfld", "-o", "wd.vfld"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(d, &["antiderive", "wd.vfld", "--f", "f.vfld", "-o", "w2.vfld"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(d, &["derive", "w2.vfld", "--f", "f.vfld", "-o", "wd2.vfld"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let wd = VectorField::read_vfld(&d.join("wd.vfld")).unwrap();
    let wd2 = VectorField::read_vfld(&d.join("wd2.vfld")).unwrap();
    let gap = relative(interior_rms(&wd2.sub(&wd), DEFAULT_LAYER), &[interior_rms(&wd, DEFAULT_LAYER)]);
    assert!(gap < 0.05, "round trip gap {gap}");
}

#[test]
fn conjugate_of_f_in_zero_gauge_is_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["generate", "exp-x1", "--res", "9", "-o", "psi.vfld", "--f-out", "f.vfld"])), 0);
    let o = run(d, &["conjugate", "f.vfld", "--f", "f.vfld", "--direction", "scalar-to-vector", "-o", "v.vfld"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = VectorField::read_vfld(&d.join("v.vfld")).unwrap();
    assert!(v.max_abs() < 1e-12);
}

#[test]
fn derive_rejects_a_non_solution_with_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["generate", "exp-x1", "--res", "9", "-o", "psi.vfld", "--f-out", "f.vfld"])), 0);
    let psi = ScalarField::read_vfld(&d.join("psi.vfld")).unwrap();
    let junk = ScalarField::from_real_fn(psi.domain(), |p| p[1] * p[1] + p[2]).unwrap();
    junk.to_biquaternion().write_vfld(&d.join("junk.vfld")).unwrap();
    let o = run(d, &["derive", "junk.vfld", "--f", "f.vfld", "-o", "out.vfld"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
    assert!(!d.join("out.vfld").exists());
}

#[test]
fn verify_writes_json_and_reports_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = run(d, &["verify", "exp-x1", "--res", "9,17", "--json", "r.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(code(&run(d, &["verify", "no-such-scenario"])), 2);
    assert_eq!(code(&run(d, &["verify", "--scenario-file", "missing.scn"])), 2);
    assert_eq!(code(&run(d, &["verify", "--bogus-flag"])), 2);
}

#[test]
fn large_grids_need_force_for_newton_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["generate", "exp-x1", "--res", "33", "-o", "psi.vfld", "--f-out", "f.vfld"])), 0);
    let o = run(d, &["conjugate", "psi.vfld", "--f", "f.vfld", "--direction", "scalar-to-vector", "-o", "v.vfld"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
}

#[test]
fn list_names_every_registered_item() {
    let tmp = tempfile::tempdir().unwrap();
    let out = stdout(&run(tmp.path(), &["list"]));
    for name in ["cyl-f-r", "sph-inv-r", "derivative-pipeline", "triplet", "axis-path", "newton", "file:PATH"] {
        assert!(out.contains(name), "{name}");
    }
}
