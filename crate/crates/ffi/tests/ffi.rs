use ising_ffi::*;
use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::ptr;

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ising_string_free(p) };
    s
}

fn coeffs(s: *const IsingSeries) -> Vec<String> {
    let n = unsafe { ising_series_order(s) };
    (0..=n)
        .map(|r| {
            let mut p = ptr::null_mut();
            assert_eq!(unsafe { ising_series_coeff_string(s, r, &mut p) }, ISING_OK);
            take_string(p)
        })
        .collect()
}

#[test]
fn critical_point_and_free_energy() {
    let (mut x, mut t) = (0.0, 0.0);
    assert_eq!(unsafe { ising_critical_point(&mut x, &mut t) }, ISING_OK);
    assert!((x - (2.0 - 3f64.sqrt())).abs() < 1e-12);
    let (mut phi, mut err) = (0.0, 0.0);
    assert_eq!(unsafe { ising_free_energy(100.0, 1.0, 0, &mut phi, &mut err) }, ISING_OK);
    assert!((phi / 100.0 + std::f64::consts::LN_2).abs() < 1e-3);
    assert_eq!(unsafe { ising_free_energy(-1.0, 1.0, 0, &mut phi, ptr::null_mut()) }, ISING_ERR_INVALID_ARG);
    let msg = unsafe { CStr::from_ptr(ising_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("T > 0"), "{msg}");
}

#[test]
fn partition_series_of_a_ring() {
    let mut s = ptr::null_mut();
    let sides = [4usize];
    assert_eq!(
        unsafe { ising_series_oracle_partition(ISING_LATTICE_CHAIN, sides.as_ptr(), 1, 1, &mut s) },
        ISING_OK
    );
    assert_eq!(coeffs(s), ["1", "0", "0", "0", "1"]);
    let mut v = 0.0;
    assert_eq!(unsafe { ising_series_coeff_f64(s, 4, &mut v) }, ISING_OK);
    assert_eq!(v, 1.0);
    assert_eq!(unsafe { ising_series_coeff_f64(s, 9, &mut v) }, ISING_ERR_INVALID_ARG);
    unsafe { ising_series_free(s) };
}

#[test]
fn window_and_filtered_series() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ising_series_ht_window(ISING_LATTICE_SQ, 6, 1, 1, &mut s) }, ISING_OK);
    assert_eq!(coeffs(s), ["0", "0", "0", "0", "4", "0", "12"]);
    unsafe { ising_series_free(s) };

    assert_eq!(unsafe { ising_series_sc_filtered(4, 1, &mut s) }, ISING_OK);
    assert_eq!(coeffs(s)[4], "3");
    unsafe { ising_series_free(s) };
    assert_eq!(unsafe { ising_series_sc_filtered(12, 1, &mut s) }, ISING_ERR_INVALID_ARG);
}

#[test]
fn whitney_and_argument_errors() {
    let mut pass = 0;
    let tri = [1u8, 3, 5];
    assert_eq!(unsafe { ising_whitney_check(tri.as_ptr(), 3, 0, &mut pass) }, ISING_OK);
    assert_eq!(pass, 1);
    assert_eq!(unsafe { ising_whitney_check(tri.as_ptr(), 2, 0, &mut pass) }, ISING_ERR_INVALID_ARG);
    assert_eq!(unsafe { ising_whitney_check(ptr::null(), 3, 0, &mut pass) }, ISING_ERR_NULL);
    assert_eq!(unsafe { ising_series_ht_window(7, 4, 0, 1, &mut ptr::null_mut()) }, ISING_ERR_INVALID_ARG);
    assert_eq!(unsafe { ising_series_order(ptr::null()) }, 0);
    unsafe { ising_series_free(ptr::null_mut()) };
    unsafe { ising_string_free(ptr::null_mut()) };
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ising_series.h")).unwrap();
    for name in [
        "ising_version",
        "ising_critical_point",
        "ising_free_energy",
        "ising_series_sc_filtered",
        "ising_series_oracle_partition",
        "ising_series_ht_window",
        "ising_series_order",
        "ising_series_coeff_f64",
        "ising_series_coeff_string",
        "ising_series_free",
        "ising_string_free",
        "ising_last_error_message",
        "ising_whitney_check",
        "typedef struct IsingSeries IsingSeries",
        "#define ISING_ERR_PANIC 5",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

/// Compile and run a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libising_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc available");
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
