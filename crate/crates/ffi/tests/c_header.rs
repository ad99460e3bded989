//! Compiles and runs a small C program against the generated header and
//! the cdylib, proving the ABI surface is usable from C.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "posdom.h"

static const char *CONFIG =
    "{"
    "\"variables\": ["
    "  {\"name\": \"x1\", \"lo\": -1.0, \"hi\": 1.0},"
    "  {\"name\": \"x2\", \"lo\": -1.0, \"hi\": 1.0}"
    "],"
    "\"target\": [{\"lo\": 0.0, \"hi\": 1.0, \"lo_closed\": true, \"hi_closed\": true}],"
    "\"granularity\": 0.2,"
    "\"model\": {\"expr\": \"x1 + x2\"},"
    "\"seed\": 42,"
    "\"test_size\": 1000"
    "}";

int main(void) {
    PosdomProblem *problem = NULL;
    PosdomApd *apd = NULL;
    if (posdom_problem_from_json(CONFIG, &problem) != POSDOM_STATUS_OK) {
        fprintf(stderr, "problem: %s\n", posdom_last_error_message());
        return 1;
    }
    if (posdom_carve(problem, &apd) != POSDOM_STATUS_OK) {
        fprintf(stderr, "carve: %s\n", posdom_last_error_message());
        return 1;
    }
    size_t boxes = 0;
    if (posdom_apd_num_boxes(apd, &boxes) != POSDOM_STATUS_OK || boxes == 0) {
        return 1;
    }
    double point[2] = {0.3, 0.3};
    bool inside = false;
    if (posdom_apd_contains(apd, point, 2, &inside) != POSDOM_STATUS_OK || !inside) {
        return 1;
    }
    PosdomEvalReport report;
    if (posdom_evaluate(problem, apd, &report) != POSDOM_STATUS_OK) {
        return 1;
    }
    if (!report.tpr_defined || report.tp + report.fp + report.fn_ + report.tn != 1000) {
        return 1;
    }
    char *json = NULL;
    if (posdom_apd_to_json(apd, &json) != POSDOM_STATUS_OK ||
        strstr(json, "\"boxes\"") == NULL) {
        return 1;
    }
    posdom_string_free(json);
    posdom_apd_free(apd);
    posdom_problem_free(problem);
    printf("ok: %zu boxes, tpr %.3f\n", boxes, report.tpr);
    return 0;
}
"#;

#[test]
fn c_program_builds_against_header_and_cdylib() {
    let exe = std::env::current_exe().unwrap();
    let debug_dir: PathBuf = exe.parent().unwrap().parent().unwrap().to_path_buf();
    assert!(
        debug_dir.join("libposdom_ffi.so").exists(),
        "cdylib not found next to {}",
        debug_dir.display()
    );
    let include_dir = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let scratch = debug_dir.join("c-header-smoke");
    std::fs::create_dir_all(&scratch).unwrap();
    let c_path = scratch.join("smoke.c");
    std::fs::write(&c_path, C_SOURCE).unwrap();
    let bin_path = scratch.join("smoke");

    let compile = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror"])
        .arg(format!("-I{include_dir}"))
        .arg(&c_path)
        .arg(format!("-L{}", debug_dir.display()))
        .arg("-lposdom_ffi")
        .arg(format!("-Wl,-rpath,{}", debug_dir.display()))
        .arg("-o")
        .arg(&bin_path)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "cc failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin_path).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "smoke program failed: {stdout} {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("ok: "), "{stdout}");
}
