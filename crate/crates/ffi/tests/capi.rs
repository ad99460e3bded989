//! Exercises the C ABI end to end through the exported symbols.

use std::ffi::{c_char, CStr, CString};

use posdom_ffi::*;

const CONFIG: &str = r#"{
    "variables": [
        {"name": "x1", "lo": -1.0, "hi": 1.0},
        {"name": "x2", "lo": -1.0, "hi": 1.0}
    ],
    "target": [
        {"lo": 0.0, "hi": 1.0, "lo_closed": true, "hi_closed": true}
    ],
    "granularity": 0.2,
    "model": {"expr": "x1 + x2"},
    "seed": 42,
    "test_size": 2000
}"#;

fn make_problem(json: &str) -> *mut PosdomProblem {
    let json = CString::new(json).unwrap();
    let mut problem: *mut PosdomProblem = std::ptr::null_mut();
    let status = unsafe { posdom_problem_from_json(json.as_ptr(), &mut problem) };
    assert_eq!(status, PosdomStatus::Ok, "{}", last_error());
    assert!(!problem.is_null());
    problem
}

fn last_error() -> String {
    let ptr = posdom_last_error_message();
    if ptr.is_null() {
        return "<no error>".into();
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn carve_evaluate_refine_round_trip() {
    let problem = make_problem(CONFIG);
    let mut apd: *mut PosdomApd = std::ptr::null_mut();
    assert_eq!(unsafe { posdom_carve(problem, &mut apd) }, PosdomStatus::Ok);

    let mut boxes = 0usize;
    assert_eq!(
        unsafe { posdom_apd_num_boxes(apd, &mut boxes) },
        PosdomStatus::Ok
    );
    assert!(boxes > 0);
    let mut dims = 0usize;
    assert_eq!(unsafe { posdom_apd_dims(apd, &mut dims) }, PosdomStatus::Ok);
    assert_eq!(dims, 2);

    // Membership at a point deep inside the band and far outside it.
    let mut inside = false;
    let point = [0.3f64, 0.3];
    assert_eq!(
        unsafe { posdom_apd_contains(apd, point.as_ptr(), 2, &mut inside) },
        PosdomStatus::Ok
    );
    assert!(inside);
    let point = [-0.9f64, -0.9];
    assert_eq!(
        unsafe { posdom_apd_contains(apd, point.as_ptr(), 2, &mut inside) },
        PosdomStatus::Ok
    );
    assert!(!inside);

    // Evaluation fills the contingency table.
    let mut report = PosdomEvalReport {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
        tpr: 0.0,
        tpr_defined: false,
        accuracy: 0.0,
    };
    assert_eq!(
        unsafe { posdom_evaluate(problem, apd, &mut report) },
        PosdomStatus::Ok
    );
    assert_eq!(report.tp + report.fp + report.fn_ + report.tn, 2000);
    assert!(report.tpr_defined);
    assert!(report.tpr > 0.7 && report.tpr <= 1.0);

    // Refinement keeps a subset.
    let mut refined: *mut PosdomApd = std::ptr::null_mut();
    assert_eq!(
        unsafe { posdom_refine(problem, apd, 0.05, &mut refined) },
        PosdomStatus::Ok
    );
    let mut kept = 0usize;
    assert_eq!(
        unsafe { posdom_apd_num_boxes(refined, &mut kept) },
        PosdomStatus::Ok
    );
    assert!(kept < boxes);

    // JSON round trip preserves the box count.
    let mut json: *mut c_char = std::ptr::null_mut();
    assert_eq!(
        unsafe { posdom_apd_to_json(apd, &mut json) },
        PosdomStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"granularity\": 0.2"));
    let reloaded_json = CString::new(text).unwrap();
    let mut reloaded: *mut PosdomApd = std::ptr::null_mut();
    assert_eq!(
        unsafe { posdom_apd_from_json(reloaded_json.as_ptr(), &mut reloaded) },
        PosdomStatus::Ok
    );
    let mut reloaded_boxes = 0usize;
    assert_eq!(
        unsafe { posdom_apd_num_boxes(reloaded, &mut reloaded_boxes) },
        PosdomStatus::Ok
    );
    assert_eq!(reloaded_boxes, boxes);

    let mut text_report: *mut c_char = std::ptr::null_mut();
    assert_eq!(
        unsafe { posdom_apd_box_report(apd, &mut text_report) },
        PosdomStatus::Ok
    );
    let rendered = unsafe { CStr::from_ptr(text_report) }.to_str().unwrap();
    assert!(rendered.contains("x1 ∈ "));

    unsafe {
        posdom_string_free(json);
        posdom_string_free(text_report);
        posdom_apd_free(reloaded);
        posdom_apd_free(refined);
        posdom_apd_free(apd);
        posdom_problem_free(problem);
    }
}

#[test]
fn invalid_config_reports_validation() {
    let json = CString::new(CONFIG.replace("0.2", "0")).unwrap();
    let mut problem: *mut PosdomProblem = std::ptr::null_mut();
    let status = unsafe { posdom_problem_from_json(json.as_ptr(), &mut problem) };
    assert_eq!(status, PosdomStatus::Validation);
    assert!(last_error().contains("granularity"), "{}", last_error());
    assert!(problem.is_null());
}

#[test]
fn null_arguments_are_rejected() {
    let mut problem: *mut PosdomProblem = std::ptr::null_mut();
    assert_eq!(
        unsafe { posdom_problem_from_json(std::ptr::null(), &mut problem) },
        PosdomStatus::NullArgument
    );
    assert_eq!(
        unsafe { posdom_carve(std::ptr::null(), &mut std::ptr::null_mut()) },
        PosdomStatus::NullArgument
    );
    unsafe { posdom_apd_free(std::ptr::null_mut()) };
    unsafe { posdom_string_free(std::ptr::null_mut()) };
}

#[test]
fn dimension_mismatch_is_validation() {
    let problem = make_problem(CONFIG);
    let mut apd: *mut PosdomApd = std::ptr::null_mut();
    assert_eq!(unsafe { posdom_carve(problem, &mut apd) }, PosdomStatus::Ok);
    let mut inside = false;
    let point = [0.0f64];
    assert_eq!(
        unsafe { posdom_apd_contains(apd, point.as_ptr(), 1, &mut inside) },
        PosdomStatus::Validation
    );
    assert!(last_error().contains("dimensions"));
    unsafe {
        posdom_apd_free(apd);
        posdom_problem_free(problem);
    }
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/posdom.h"))
        .expect("build script generated include/posdom.h");
    for symbol in [
        "posdom_problem_from_json",
        "posdom_problem_free",
        "posdom_carve",
        "posdom_refine",
        "posdom_evaluate",
        "posdom_apd_from_json",
        "posdom_apd_to_json",
        "posdom_apd_num_boxes",
        "posdom_apd_dims",
        "posdom_apd_contains",
        "posdom_apd_box_report",
        "posdom_apd_free",
        "posdom_string_free",
        "posdom_last_error_message",
        "PosdomStatus",
        "PosdomEvalReport",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}
