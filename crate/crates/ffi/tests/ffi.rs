use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use caracol_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { cr_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cr_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn graph(spec: &str) -> *mut CrGraph {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { cr_graph_from_spec(spec.as_ptr(), &mut g) },
        CrStatus::Ok
    );
    g
}

#[test]
fn volumes_through_handles() {
    let g = graph("caracol:n=5,k=2");
    assert_eq!(unsafe { cr_graph_num_vertices(g) }, 6);
    assert_eq!(unsafe { cr_graph_num_edges(g) }, 12);
    let ones = [1i64, 1, 1, 1, 1, -5];
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { cr_volume(g, ones.as_ptr(), ones.len(), &mut out) },
        CrStatus::Ok
    );
    assert_eq!(take_string(out), "2800");
    assert_eq!(unsafe { cr_volume_unit_flow(g, &mut out) }, CrStatus::Ok);
    assert_eq!(take_string(out), "7");
    let unit = [1i64, 0, 0, 0, 0, -1];
    assert_eq!(
        unsafe { cr_lattice_points(g, unit.as_ptr(), unit.len(), &mut out) },
        CrStatus::Ok
    );
    let lattice = take_string(out);
    assert_eq!(
        unsafe { cr_kostant(g, unit.as_ptr(), unit.len(), &mut out) },
        CrStatus::Ok
    );
    assert_eq!(take_string(out), lattice);
    unsafe { cr_graph_free(g) };

    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cr_graph_multicaracol(3, 2, &mut m) }, CrStatus::Ok);
    assert_eq!(unsafe { cr_volume_unit_flow(m, &mut out) }, CrStatus::Ok);
    assert_eq!(take_string(out), "7");
    unsafe { cr_graph_free(m) };

    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cr_graph_caracol(4, 1, &mut c) }, CrStatus::Ok);
    assert_eq!(unsafe { cr_volume_unit_flow(c, &mut out) }, CrStatus::Ok);
    assert_eq!(take_string(out), "2");
    unsafe { cr_graph_free(c) };
}

#[test]
fn numbers() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { cr_k_parking_number(3, 5, 2, &mut out) },
        CrStatus::Ok
    );
    assert_eq!(take_string(out), "6840");
    assert_eq!(unsafe { cr_rational_catalan(3, 5, &mut out) }, CrStatus::Ok);
    assert_eq!(take_string(out), "7");
    assert_eq!(
        unsafe { cr_rational_catalan(8, 23, &mut out) },
        CrStatus::Ok
    );
    assert_eq!(take_string(out), "254475");
    assert_eq!(
        unsafe { cr_k_parking_number(3, 2, 5, &mut out) },
        CrStatus::InvalidArgument
    );
    assert!(!last_error().is_empty());
}

#[test]
fn errors_are_reported() {
    let mut g = ptr::null_mut();
    let bad = CString::new("carcol:n=5").unwrap();
    assert_eq!(
        unsafe { cr_graph_from_spec(bad.as_ptr(), &mut g) },
        CrStatus::ParseError
    );
    assert!(last_error().contains("unknown family"));
    assert!(g.is_null());
    let reversed = CString::new("edges:[(1,2),(3,2)]").unwrap();
    assert_eq!(
        unsafe { cr_graph_from_spec(reversed.as_ptr(), &mut g) },
        CrStatus::InvalidGraph
    );
    assert_eq!(
        unsafe { cr_graph_caracol(3, 3, &mut g) },
        CrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cr_graph_from_spec(ptr::null(), &mut g) },
        CrStatus::NullPointer
    );

    let g = graph("ps:n=4");
    let mut out = ptr::null_mut();
    let short = [1i64, -1];
    assert_eq!(
        unsafe { cr_volume(g, short.as_ptr(), short.len(), &mut out) },
        CrStatus::InvalidArgument
    );
    let unbalanced = [1i64, 0, 0, 0];
    assert_eq!(
        unsafe { cr_kostant(g, unbalanced.as_ptr(), 4, &mut out) },
        CrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cr_volume(g, ptr::null(), 4, &mut out) },
        CrStatus::NullPointer
    );
    assert_eq!(
        unsafe { cr_volume_unit_flow(ptr::null(), &mut out) },
        CrStatus::NullPointer
    );
    let ok = [1i64, 1, 1, -3];
    assert_eq!(
        unsafe { cr_volume(g, ok.as_ptr(), 4, &mut out) },
        CrStatus::Ok
    );
    assert_eq!(take_string(out), "3");
    assert_eq!(last_error(), "");
    unsafe {
        cr_graph_free(g);
        cr_graph_free(ptr::null_mut());
        cr_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/caracol.h")).unwrap();
    for name in [
        "cr_graph_from_spec",
        "cr_graph_caracol",
        "cr_graph_multicaracol",
        "cr_graph_free",
        "cr_volume",
        "cr_kostant",
        "cr_lattice_points",
        "cr_volume_unit_flow",
        "cr_k_parking_number",
        "cr_rational_catalan",
        "cr_string_free",
        "cr_last_error_message",
        "CR_STATUS_OK",
        "typedef struct CrGraph CrGraph",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "caracol.h"

int main(void) {
    CrGraph *g = NULL;
    if (cr_graph_from_spec("caracol:n=5,k=2", &g) != CR_STATUS_OK) return 10;
    int64_t ones[6] = {1, 1, 1, 1, 1, -5};
    char *v = NULL;
    if (cr_volume(g, ones, 6, &v) != CR_STATUS_OK) return 11;
    int bad = strcmp(v, "2800");
    cr_string_free(v);
    if (cr_graph_from_spec("nope", &g) != CR_STATUS_PARSE_ERROR) return 12;
    if (strlen(cr_last_error_message()) == 0) return 13;
    cr_graph_free(g);
    printf("ok\n");
    return bad ? 14 : 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/this-test -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libcaracol_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!(
            "skipping: no static library at {} or no C compiler",
            lib.display()
        );
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi_c_smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
