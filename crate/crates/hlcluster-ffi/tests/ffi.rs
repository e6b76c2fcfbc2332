use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hlcluster_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    hl_string_free(s);
    out
}

#[test]
fn seed_round_trip() {
    unsafe {
        let xi = [-3i64, -2, -3, -4, -5, -4];
        let mut seed = ptr::null_mut();
        assert_eq!(hl_seed_from_xi(xi.as_ptr(), xi.len(), 2, &mut seed), HlStatus::Ok);
        let v = CString::new("1").unwrap();
        let mut before = ptr::null_mut();
        assert_eq!(hl_seed_label(seed, v.as_ptr(), &mut before), HlStatus::Ok);
        assert_eq!(take(before), "Y[1,-2] * Y[1,0]");
        assert_eq!(hl_seed_mutate(seed, v.as_ptr()), HlStatus::Ok);
        assert_eq!(hl_seed_log_len(seed), 1);
        let mut json = ptr::null_mut();
        assert_eq!(hl_seed_to_json(seed, &mut json), HlStatus::Ok);
        let parsed: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(parsed["log"].as_array().unwrap().len(), 1);
        let mut undone = 0;
        assert_eq!(hl_seed_undo(seed, &mut undone), HlStatus::Ok);
        assert_eq!(undone, 1);
        assert_eq!(hl_seed_undo(seed, &mut undone), HlStatus::Ok);
        assert_eq!(undone, 0);
        hl_seed_free(seed);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut seed = ptr::null_mut();
        assert_eq!(hl_seed_grid(3, 2, &mut seed), HlStatus::Ok);
        let frozen = CString::new("(1,3)").unwrap();
        assert_eq!(hl_seed_mutate(seed, frozen.as_ptr()), HlStatus::FrozenVertex);
        assert!(take(hl_last_error()).contains("frozen"));
        let missing = CString::new("(9,9)").unwrap();
        assert_eq!(hl_seed_mutate(seed, missing.as_ptr()), HlStatus::NoSuchVertex);
        assert_eq!(hl_seed_mutate(seed, ptr::null()), HlStatus::NullPointer);
        let ok = CString::new("(2,1)").unwrap();
        assert_eq!(hl_seed_mutate(seed, ok.as_ptr()), HlStatus::Ok);
        assert!(hl_last_error().is_null());
        hl_seed_free(seed);
        assert_eq!(hl_seed_grid(0, 2, &mut seed), HlStatus::InvalidArgument);
        assert_eq!(hl_seed_from_xi(ptr::null(), 3, 1, &mut seed), HlStatus::NullPointer);
        hl_seed_free(ptr::null_mut());
        hl_string_free(ptr::null_mut());
    }
}

#[test]
fn ghl_and_arrows() {
    unsafe {
        let (idx, as_, rs) = ([1usize, 2, 3, 4], [-3i64, -6, -3, -6], [0i64, -1, 0, 0]);
        let mut out = ptr::null_mut();
        assert_eq!(hl_ghl_monomial(idx.as_ptr(), as_.as_ptr(), rs.as_ptr(), 4, 2, &mut out), HlStatus::Ok);
        assert_eq!(take(out), "Y[1,-3] * Y[1,-1] * Y[2,-6] * Y[3,-3] * Y[3,-1] * Y[4,-6] * Y[4,-4]");
        let bad = [1usize, 1];
        assert_eq!(
            hl_ghl_monomial(bad.as_ptr(), as_.as_ptr(), rs.as_ptr(), 2, 2, &mut out),
            HlStatus::InvalidArgument
        );
        let xi = [0i64, 1, 0, -1];
        let mut passed = 0;
        assert_eq!(hl_verify_arrows(xi.as_ptr(), 4, &mut passed), HlStatus::Ok);
        assert_eq!(passed, 1);
        let not_height = [0i64, 2];
        assert_eq!(hl_verify_arrows(not_height.as_ptr(), 2, &mut passed), HlStatus::InvalidArgument);
    }
}

/// Compiles the C smoke program against the generated header and static library.
#[test]
fn c_header_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target/debug");
    let lib = target.join("libhlcluster_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let exe = std::env::temp_dir().join(format!("hlcluster_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C smoke program failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Y[1,-4] * Y[1,-2]");
    let _ = std::fs::remove_file(exe);
}
