use std::ffi::{c_char, CStr, CString};
use std::ptr;

use infocoh_capi::*;

fn data(name: &str) -> CString {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

unsafe fn parse(json: &CString) -> *mut IcohStructure {
    let mut handle = ptr::null_mut();
    assert_eq!(icoh_structure_parse(json.as_ptr(), &mut handle), IcohStatus::Ok);
    assert!(!handle.is_null());
    handle
}

unsafe fn last_error() -> String {
    CStr::from_ptr(icoh_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn version_is_static_semver() {
    let v = unsafe { CStr::from_ptr(icoh_version()) }.to_str().unwrap();
    assert_eq!(v.split('.').count(), 3);
}

#[test]
fn parse_query_free_roundtrip() {
    unsafe {
        let json = data("two_binary_full.json");
        let h = parse(&json);

        let mut objects = 0usize;
        assert_eq!(icoh_object_count(h, &mut objects), IcohStatus::Ok);
        assert_eq!(objects, 4);

        let mut sections = 0usize;
        assert_eq!(icoh_section_count(h, &mut sections), IcohStatus::Ok);
        assert_eq!(sections, 4);

        let mut ok = false;
        assert_eq!(icoh_validate(h, &mut ok), IcohStatus::Ok);
        assert!(ok);

        icoh_structure_free(h);
    }
}

#[test]
fn cohomology_queries() {
    unsafe {
        let json = data("two_binary_full.json");
        let h = parse(&json);

        let mut dim = usize::MAX;
        assert_eq!(icoh_h0_dimension(h, 1.0, 3, &mut dim), IcohStatus::Ok);
        assert_eq!(dim, 1);
        assert_eq!(icoh_h0_dimension(h, 2.0, 3, &mut dim), IcohStatus::Ok);
        assert_eq!(dim, 0);

        let (mut z1, mut b1, mut h1) = (0usize, 0usize, 0usize);
        assert_eq!(
            icoh_grid_dimensions(h, 1.0, 3, &mut z1, &mut b1, &mut h1),
            IcohStatus::Ok
        );
        assert_eq!((z1, b1, h1), (2, 0, 2));
        assert_eq!(
            icoh_grid_dimensions(h, 1.0, 3, ptr::null_mut(), ptr::null_mut(), &mut h1),
            IcohStatus::Ok
        );

        let mut residual = f64::NAN;
        assert_eq!(icoh_entropy_residual(h, 1.0, 3, &mut residual), IcohStatus::Ok);
        assert_eq!(residual, 0.0);

        let mut verdict = IcohVerdict::Unknown;
        let mut predicted = 0usize;
        assert_eq!(
            icoh_predict_h1(h, 1.0, 0, &mut verdict, &mut predicted),
            IcohStatus::Ok
        );
        assert_eq!(verdict, IcohVerdict::Finite);
        assert_eq!(predicted, 1);

        icoh_structure_free(h);
    }
}

#[test]
fn h1_report_is_json() {
    unsafe {
        let json = data("two_binary_full.json");
        let h = parse(&json);

        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(
            icoh_h1_report_json(h, 1.0, 3, 1e-10, 0, &mut report),
            IcohStatus::Ok
        );
        assert!(!report.is_null());
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        icoh_string_free(report);
        icoh_structure_free(h);

        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["z1"], 2);
        assert_eq!(v["verdict"], "finite");
        assert_eq!(v["structural_dimension"], 1);
        assert_eq!(v["entropy_residual"], 0.0);
        assert_eq!(v["consistent"], true);
    }
}

#[test]
fn standalone_checks() {
    unsafe {
        let mut residual = f64::NAN;
        assert_eq!(icoh_funceq_residual(1.0, 6, &mut residual), IcohStatus::Ok);
        assert_eq!(residual, 0.0);
        assert_eq!(icoh_funceq_residual(2.0, 6, &mut residual), IcohStatus::Ok);
        assert!(residual <= 1e-12);

        let (mut passed, mut total) = (0usize, 0usize);
        assert_eq!(icoh_modular_identities(&mut passed, &mut total), IcohStatus::Ok);
        assert_eq!((passed, total), (7, 7));
    }
}

#[test]
fn error_paths() {
    unsafe {
        let mut handle = ptr::null_mut();

        let bad = CString::new("not json").unwrap();
        assert_eq!(
            icoh_structure_parse(bad.as_ptr(), &mut handle),
            IcohStatus::InvalidInput
        );
        assert!(handle.is_null());
        assert!(!last_error().is_empty());

        let broken = CString::new(r#"{"kind": "galaxy"}"#).unwrap();
        assert_eq!(
            icoh_structure_parse(broken.as_ptr(), &mut handle),
            IcohStatus::InvalidInput
        );

        assert_eq!(
            icoh_structure_parse(ptr::null(), &mut handle),
            IcohStatus::NullPointer
        );
        let json = data("two_binary_full.json");
        assert_eq!(
            icoh_structure_parse(json.as_ptr(), ptr::null_mut()),
            IcohStatus::NullPointer
        );

        let mut objects = 0usize;
        assert_eq!(icoh_object_count(ptr::null(), &mut objects), IcohStatus::NullPointer);
        let h = parse(&json);
        assert_eq!(icoh_object_count(h, ptr::null_mut()), IcohStatus::NullPointer);

        let mut dim = 0usize;
        assert_eq!(icoh_h0_dimension(h, -1.0, 3, &mut dim), IcohStatus::InvalidInput);
        assert!(last_error().contains("alpha"));

        icoh_structure_free(h);
        icoh_structure_free(ptr::null_mut());
        icoh_string_free(ptr::null_mut());
    }
}
