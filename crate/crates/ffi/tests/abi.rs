use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mgn_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { mgn_string_free(s) };
    v
}

fn last_error() -> String {
    let p = mgn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn correlators_and_denominators() {
    let eng = mgn_engine_new();
    let mut out = ptr::null_mut();
    unsafe {
        let d = [1u32];
        assert_eq!(mgn_psi_correlator(eng, 1, d.as_ptr(), 1, &mut out), MgnStatus::Ok);
        assert_eq!(take(out), "1/24");
        let b = CString::new("1:1").unwrap();
        let d0 = [0u32];
        assert_eq!(mgn_kappa_correlator(eng, 1, d0.as_ptr(), 1, b.as_ptr(), &mut out), MgnStatus::Ok);
        assert_eq!(take(out), "1/24");
        let b3 = CString::new("3:1").unwrap();
        assert_eq!(mgn_kappa_correlator(eng, 2, ptr::null(), 0, b3.as_ptr(), &mut out), MgnStatus::Ok);
        assert_eq!(take(out), "1/1152");
        assert_eq!(mgn_denominator(eng, 2, 1, &mut out), MgnStatus::Ok);
        assert_eq!(take(out), "1152");
        assert_eq!(mgn_script_denominator(eng, 2, &mut out), MgnStatus::Ok);
        assert_eq!(take(out), "5760");
        mgn_engine_free(eng);
    }
}

#[test]
fn error_codes() {
    let eng = mgn_engine_new();
    let mut out = ptr::null_mut();
    unsafe {
        let d = [1u32];
        assert_eq!(mgn_psi_correlator(ptr::null(), 1, d.as_ptr(), 1, &mut out), MgnStatus::NullPointer);
        assert!(out.is_null());
        assert!(last_error().contains("engine"));
        assert_eq!(mgn_psi_correlator(eng, 1, d.as_ptr(), 1, ptr::null_mut()), MgnStatus::NullPointer);
        assert_eq!(mgn_psi_correlator(eng, 1, ptr::null(), 0, &mut out), MgnStatus::InvalidArgument);
        let bad = CString::new("x:y").unwrap();
        assert_eq!(mgn_pure_kappa_volume(eng, 2, bad.as_ptr(), &mut out), MgnStatus::InvalidArgument);
        let b = CString::new("1:1").unwrap();
        assert_eq!(mgn_pure_kappa_volume(eng, 1, b.as_ptr(), &mut out), MgnStatus::Unstable);
        assert_eq!(mgn_denominator(eng, 0, 2, &mut out), MgnStatus::Unstable);
        // success clears the message
        assert_eq!(mgn_denominator(eng, 0, 3, &mut out), MgnStatus::Ok);
        assert_eq!(take(out), "1");
        assert!(mgn_last_error_message().is_null());
        mgn_engine_free(eng);
        mgn_engine_free(ptr::null_mut());
        mgn_string_free(ptr::null_mut());
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempdir();
    let path = CString::new(dir.join("cache.txt").to_str().unwrap()).unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        let a = mgn_engine_new();
        let d = [2u32, 3];
        assert_eq!(mgn_psi_correlator(a, 2, d.as_ptr(), 2, &mut out), MgnStatus::Ok);
        take(out);
        assert!(mgn_cache_len(a) > 0);
        assert_eq!(mgn_cache_save(a, path.as_ptr()), MgnStatus::Ok);
        let b = mgn_engine_new();
        let mut count = 0usize;
        assert_eq!(mgn_cache_load(b, path.as_ptr(), &mut count), MgnStatus::Ok);
        assert_eq!(count, mgn_cache_len(a));
        mgn_engine_free(a);
        mgn_engine_free(b);

        std::fs::write(dir.join("bad.txt"), "2|3,2||1/2\n").unwrap();
        let bad = CString::new(dir.join("bad.txt").to_str().unwrap()).unwrap();
        let c = mgn_engine_new();
        assert_eq!(mgn_cache_load(c, bad.as_ptr(), ptr::null_mut()), MgnStatus::Ok);
        assert_eq!(mgn_psi_correlator(c, 2, d.as_ptr(), 2, &mut out), MgnStatus::Disagreement);
        std::fs::write(dir.join("garbage.txt"), "nonsense\n").unwrap();
        let garbage = CString::new(dir.join("garbage.txt").to_str().unwrap()).unwrap();
        assert_eq!(mgn_cache_load(c, garbage.as_ptr(), ptr::null_mut()), MgnStatus::Parse);
        let missing = CString::new(dir.join("missing.txt").to_str().unwrap()).unwrap();
        assert_eq!(mgn_cache_load(c, missing.as_ptr(), ptr::null_mut()), MgnStatus::Io);
        mgn_engine_free(c);
    }
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mgn-ffi-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(crate_dir.join("include/mgn.h")).unwrap();
    for name in ["mgn_engine_new", "mgn_string_free", "mgn_last_error_message", "MGN_STATUS_DISAGREEMENT"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    // target/<profile>/deps/abi-… → target/<profile>/libmgn_ffi.a
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libmgn_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C link check: no staticlib at {} or no cc", lib.display());
        return;
    }
    let exe = std::env::temp_dir().join(format!("mgn-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "0\n");
}
