//! Compiles a C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "qcite.h"

int main(void) {
    double v = 0.0;
    if (qcite_q_exp(-3.0, 4.0 / 3.0, &v) != QCITE_STATUS_OK || v < 0.1249 || v > 0.1251) return 1;
    if (qcite_q_exp(10.0, 4.0 / 3.0, &v) != QCITE_STATUS_DOMAIN) return 2;
    if (qcite_last_error()[0] == '\0') return 3;

    QciteHistogram *h = NULL;
    if (qcite_synth_deterministic("twin", 1.35, 7.14, 27931, 20000, &h) != QCITE_STATUS_OK) return 4;
    QciteConfig *cfg = qcite_config_new();
    QciteFit fit;
    if (qcite_fit(h, cfg, &fit) != QCITE_STATUS_OK) return 5;
    printf("%.3f %.2f\n", fit.q, fit.t);
    qcite_config_free(cfg);
    qcite_histogram_free(h);
    return 0;
}
"#;

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = profile_dir().join("libqcite_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or {} missing", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1.350 7.14");
}
