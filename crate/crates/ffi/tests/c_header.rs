//! Builds a C program against `include/breuil.h` and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "breuil.h"

int main(void) {
    BreuilModule *m = NULL, *d = NULL;
    if (breuil_module_random(7, 5, 2, 1, 8, 3, &m) != BREUIL_STATUS_OK) return 10;
    if (breuil_module_rank(m) != 3) return 11;
    if (breuil_module_dual(m, &d) != BREUIL_STATUS_OK) return 12;
    size_t ranks[4];
    if (breuil_module_parts_ranks(d, ranks) != BREUIL_STATUS_OK) return 13;
    char *json = NULL;
    if (breuil_module_to_json(d, &json) != BREUIL_STATUS_OK) return 14;
    if (strstr(json, "breuil-phimod/1") == NULL) return 15;
    breuil_string_free(json);
    size_t dim = 0;
    if (breuil_fil_quotient_dim(3, 1, 2, 3, &dim) != BREUIL_STATUS_INVALID_LEVELS) return 16;
    if (strlen(breuil_last_error()) == 0) return 17;
    printf("%zu %zu %zu %zu\n", ranks[0], ranks[1], ranks[2], ranks[3]);
    breuil_module_free(m);
    breuil_module_free(d);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libbreuil_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let ranks: Vec<usize> = text.split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(ranks.len(), 4);
    assert_eq!(ranks[0] + ranks[1], 3);
    assert_eq!(ranks[2] + ranks[3], 3);
}
