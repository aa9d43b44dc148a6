//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "onebit.h"

int main(void) {
    double data[] = {3.0, 1.0, -3.0, -1.0, 3.5, 0.5, -3.5, -0.5, 4.0, 0.2, -4.0, -0.2};
    size_t labels[] = {1, 2, 1, 2, 1, 2};
    OnebitModel *model = NULL;
    if (onebit_train(data, 2, 6, labels, 2, 12, 1, 3, &model) != ONEBIT_STATUS_OK) {
        fprintf(stderr, "train: %s\n", onebit_last_error());
        return 1;
    }
    double x[] = {3.2, 0.8};
    size_t label = 0;
    double scores[2];
    if (onebit_classify_point(model, x, 2, &label, scores, 2) != ONEBIT_STATUS_OK || label != 1) {
        return 2;
    }
    onebit_model_free(model);
    double b = 0.0;
    if (onebit_theorem_bound(1, 15.0, 30.0, &b) != ONEBIT_STATUS_OK || fabs(b - 5.0 / 24.0) > 1e-12) {
        return 3;
    }
    if (onebit_model_load(NULL, &model) != ONEBIT_STATUS_NULL_POINTER) {
        return 4;
    }
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("onebit.h").exists());
    // test executables live in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libonebit_ffi.a");
    if !lib.exists() {
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "onebit-ffi", "--lib"])
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert!(lib.exists(), "{} missing", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("C compiler available");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&bin).output().unwrap();
    assert!(
        run.status.success(),
        "exit {:?}: {}",
        run.status,
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
