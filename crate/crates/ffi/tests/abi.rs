use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use residuum_ffi::*;

const EXAMPLE_TWO: &str =
    "vars x y;\ncone (1,0) (-1,1);\nnum exp(2*pi*i*(x + 2*y));\nden (x - i) (y - i) (x + y - 2*i);\n";

fn parse(src: &str) -> (ResiduumStatus, *mut ResiduumProblem) {
    let c = CString::new(src).unwrap();
    let mut p = ptr::null_mut();
    let status = unsafe { residuum_problem_parse(c.as_ptr(), 0, &mut p) };
    (status, p)
}

fn last_error() -> String {
    let e = residuum_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_str().unwrap().to_string()
}

#[test]
fn eval_and_report() {
    let (status, p) = parse(EXAMPLE_TWO);
    assert_eq!(status, ResiduumStatus::Ok);
    let mut dim = 0usize;
    assert_eq!(unsafe { residuum_problem_dimension(p, &mut dim) }, ResiduumStatus::Ok);
    assert_eq!(dim, 2);
    let (mut re, mut im, mut cert) = (0.0, 0.0, 0);
    assert_eq!(unsafe { residuum_eval(p, 0, &mut re, &mut im, &mut cert) }, ResiduumStatus::Ok);
    let two_pi = 2.0 * std::f64::consts::PI;
    let expected = -two_pi.powi(3) * (-3.0 * two_pi).exp();
    assert!(re.abs() < 1e-20 && (im - expected).abs() < 1e-10 * expected.abs(), "{re} {im}");
    assert_eq!(cert, 1);

    let mut json = ptr::null_mut();
    let g = CString::new("(H1H2,H3)").unwrap();
    let status = unsafe { residuum_report_json(p, ResiduumCommand::Grouping, 0.0, 0.0, g.as_ptr(), &mut json) };
    assert_eq!(status, ResiduumStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["report"]["grouping"], "(H1H2,H3)");
    unsafe { residuum_string_free(json) };

    let (mut qre, mut qim, mut err) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { residuum_quadrature(p, 50.0, 1e-6, &mut qre, &mut qim, &mut err) }, ResiduumStatus::Ok);
    assert!((qim - im).abs() < 1e-3 * im.abs());
    unsafe { residuum_problem_free(p) };
}

#[test]
fn errors_are_reported() {
    let (status, p) = parse("vars x;\nnum x +;");
    assert_eq!(status, ResiduumStatus::ParseError);
    assert!(p.is_null());
    assert!(last_error().starts_with("parse error at 2:8"), "{}", last_error());

    let status = unsafe { residuum_problem_parse(ptr::null(), 0, &mut ptr::null_mut()) };
    assert_eq!(status, ResiduumStatus::NullArgument);
    let mut dim = 0usize;
    assert_eq!(unsafe { residuum_problem_dimension(ptr::null(), &mut dim) }, ResiduumStatus::NullArgument);

    let bytes = [0xffu8, 0];
    let status = unsafe { residuum_problem_parse(bytes.as_ptr().cast(), 0, &mut ptr::null_mut()) };
    assert_eq!(status, ResiduumStatus::InvalidUtf8);

    let (status, p) = parse("vars x y; cone (1,0) (0,1); param n1 = 3, n2 = 2;\nnum n1^(i*x - 1)*n2^(i*y - 1);\nden (-x - i) (-y - i) (x + y - i);");
    assert_eq!(status, ResiduumStatus::Ok);
    let mut json = ptr::null_mut();
    let status = unsafe { residuum_report_json(p, ResiduumCommand::Eval, 0.0, 0.0, ptr::null(), &mut json) };
    assert_eq!(status, ResiduumStatus::NotCertified);
    assert!(!json.is_null());
    unsafe { residuum_string_free(json) };
    let status = unsafe { residuum_report_json(p, ResiduumCommand::Verify, 50.0, 1e-4, ptr::null(), &mut json) };
    assert_eq!(status, ResiduumStatus::VerifyMismatch);
    unsafe { residuum_string_free(json) };
    unsafe { residuum_problem_free(p) };
    assert!(last_error().contains("disagree"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/residuum.h")).unwrap();
    for name in [
        "typedef struct ResiduumProblem ResiduumProblem",
        "residuum_problem_parse",
        "residuum_problem_free",
        "residuum_eval",
        "residuum_quadrature",
        "residuum_report_json",
        "residuum_string_free",
        "residuum_last_error",
        "RESIDUUM_STATUS_VERIFY_MISMATCH = 6",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libresiduum_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("residuum_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
