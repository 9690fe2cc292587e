use std::ffi::{CStr, CString};
use std::ptr;

use carpetdim_ffi::*;

const AB: &str = include_str!("../../core/fixtures/ex_ab.json");
const MC: &str = include_str!("../../core/fixtures/ex_mc.json");

fn parse(json: &str) -> *mut CdSystem {
    let text = CString::new(json).unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { cd_system_parse(text.as_ptr(), &mut handle) }, CdStatus::Ok);
    assert!(!handle.is_null());
    handle
}

fn last_error() -> String {
    let p = cd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn counts_and_dimensions() {
    let h = parse(AB);
    let (mut v, mut e) = (0usize, 0usize);
    unsafe {
        assert_eq!(cd_system_vertex_count(h, &mut v), CdStatus::Ok);
        assert_eq!(cd_system_edge_count(h, &mut e), CdStatus::Ok);
    }
    assert_eq!((v, e), (2, 13));

    let (mut b, mut lo, mut hi, mut low) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(cd_box_dimension(h, &mut b), CdStatus::Ok);
        assert_eq!(cd_assouad_bracket(h, 6, &mut lo, &mut hi), CdStatus::Ok);
        assert_eq!(cd_lower_estimate(h, 6, &mut low), CdStatus::Ok);
        cd_system_free(h);
    }
    assert!((b - 1.5).abs() < 1e-9);
    assert!((lo - 2.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
    assert!((low - 1.0).abs() < 1e-9);
    assert!(cd_last_error().is_null());
}

#[test]
fn report_json_round_trips() {
    let h = parse(MC);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(cd_report_json(h, 5, 1e-9, &mut s), CdStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        cd_string_free(s);
        cd_system_free(h);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((v["box"].as_f64().unwrap() - 1.3690702).abs() < 1e-6);
    }
}

#[test]
fn occupancy_count() {
    let h = parse(MC);
    let mut n = 0u64;
    unsafe {
        assert_eq!(cd_occupancy_count(h, 2, &mut n), CdStatus::Ok);
        cd_system_free(h);
    }
    assert_eq!(n, 6);
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new(r#"{"n":3,"m":5,"vertices":["v"],"edges":[]}"#).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cd_system_parse(bad.as_ptr(), &mut h) }, CdStatus::Invalid);
    assert!(h.is_null());
    assert!(last_error().contains("n > m"));

    let mut x = 0.0;
    assert_eq!(unsafe { cd_box_dimension(ptr::null(), &mut x) }, CdStatus::NullPointer);
    assert!(last_error().contains("null"));

    let full = parse(include_str!("../../core/fixtures/ex_full.json"));
    unsafe {
        assert_eq!(cd_lower_estimate(full, 40, &mut x), CdStatus::Budget);
        assert!(last_error().contains("largest feasible depth is 22"));
        assert_eq!(cd_lower_estimate(full, 0, &mut x), CdStatus::Invalid);
        assert_eq!(cd_box_dimension(full, ptr::null_mut()), CdStatus::NullPointer);
        cd_system_free(full);
        cd_system_free(ptr::null_mut());
        cd_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/carpetdim.h");
    for name in [
        "cd_system_parse",
        "cd_system_free",
        "cd_system_vertex_count",
        "cd_system_edge_count",
        "cd_box_dimension",
        "cd_assouad_bracket",
        "cd_lower_estimate",
        "cd_report_json",
        "cd_occupancy_count",
        "cd_string_free",
        "cd_last_error",
        "typedef struct CdSystem CdSystem",
        "CD_STATUS_BUDGET = 3",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
