use std::ffi::{CStr, CString};
use std::ptr;

use breuil_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(breuil_last_error()) }.to_string_lossy().into_owned()
}

fn parse(json: &str) -> *mut BreuilModule {
    let text = CString::new(json).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_parse(text.as_ptr(), &mut m) }, BreuilStatus::Ok, "{}", last_error());
    m
}

fn to_json(m: *const BreuilModule) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_to_json(m, &mut s) }, BreuilStatus::Ok);
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { breuil_string_free(s) };
    out
}

const ETALE: &str = r#"{"format": "breuil-phimod/1", "p": 3, "e": 2, "r": 1, "s": 6, "d": 1, "c": [1], "A": [[[1]]]}"#;

#[test]
fn parse_dual_and_round_trip() {
    let m = parse(ETALE);
    assert_eq!(unsafe { breuil_module_rank(m) }, 1);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_dual(m, &mut d) }, BreuilStatus::Ok);
    let again = parse(&to_json(d));
    assert_eq!(to_json(again), to_json(d));
    let mut unip = true;
    assert_eq!(unsafe { breuil_module_is_unipotent(m, &mut unip) }, BreuilStatus::Ok);
    assert!(!unip);
    assert_eq!(unsafe { breuil_module_is_unipotent(d, &mut unip) }, BreuilStatus::Ok);
    assert!(unip);
    let mut ranks = [9usize; 4];
    assert_eq!(unsafe { breuil_module_parts_ranks(d, ranks.as_mut_ptr()) }, BreuilStatus::Ok);
    assert_eq!(ranks, [1, 0, 1, 0]);
    let mut dim = 9;
    assert_eq!(unsafe { breuil_hom_dimension(m, m, &mut dim) }, BreuilStatus::Ok);
    assert_eq!(dim, 1);
    unsafe {
        breuil_module_free(m);
        breuil_module_free(d);
        breuil_module_free(again);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let bad = CString::new(r#"{"format": "breuil-phimod/1", "p": 3, "e": 1, "r": 3, "s": 3, "d": 0, "c": [1], "A": []}"#).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_parse(bad.as_ptr(), &mut m) }, BreuilStatus::ValidationError);
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    let garbled = CString::new("{\"format\": ").unwrap();
    assert_eq!(unsafe { breuil_module_parse(garbled.as_ptr(), &mut m) }, BreuilStatus::ParseError);
    assert_eq!(unsafe { breuil_module_parse(ptr::null(), &mut m) }, BreuilStatus::NullPointer);
    let mut dim = 0;
    assert_eq!(unsafe { breuil_fil_quotient_dim(2, 1, 2, 3, &mut dim) }, BreuilStatus::InvalidLevels);
    assert_eq!(unsafe { breuil_fil_quotient_dim(1, 2, 2, 6, &mut dim) }, BreuilStatus::Ok);
    assert_eq!(dim, 2);
    assert!(last_error().is_empty());
}

#[test]
fn boundary_lift_needs_unipotency() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_random(4, 3, 2, 1, 3, 2, &mut m) }, BreuilStatus::Ok);
    let m3 = parse(&ETALE.replace("\"s\": 6", "\"s\": 3"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_lift(m3, 6, &mut out) }, BreuilStatus::RegimeViolation);
    let mut six = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_random(4, 3, 2, 1, 6, 2, &mut six) }, BreuilStatus::Ok);
    let mut four = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_truncate(six, 4, &mut four) }, BreuilStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_lift(four, 6, &mut back) }, BreuilStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_truncate(back, 4, &mut again) }, BreuilStatus::Ok);
    assert_eq!(to_json(again), to_json(four));
    let mut iso = false;
    assert_eq!(unsafe { breuil_modules_isomorphic(four, again, &mut iso) }, BreuilStatus::Ok);
    assert!(iso);
    for h in [m, m3, six, four, back, again] {
        unsafe { breuil_module_free(h) };
    }
}

#[test]
fn kernel_cokernel_image_of_a_projection() {
    // Projection of u^2 m1 + ... onto the etale quotient of mu_p (+) Z/p at s = p.
    let json = r#"{
      "format": "breuil-morphism/1",
      "source": {"format": "breuil-phimod/1", "p": 3, "e": 2, "r": 1, "s": 3, "d": 2, "c": [1], "A": [[[0, 0, 1], []], [[], [1]]]},
      "target": {"format": "breuil-phimod/1", "p": 3, "e": 2, "r": 1, "s": 3, "d": 1, "c": [1], "A": [[[1]]]},
      "X": [[[]], [[1]]]
    }"#;
    let text = CString::new(json).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { breuil_morphism_parse(text.as_ptr(), &mut f) }, BreuilStatus::Ok, "{}", last_error());
    let (mut k, mut incl) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { breuil_morphism_kernel(f, &mut k, &mut incl) }, BreuilStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { breuil_module_rank(k) }, 1);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { breuil_morphism_cokernel(f, &mut q, ptr::null_mut()) }, BreuilStatus::Ok);
    assert_eq!(unsafe { breuil_module_rank(q) }, 0);
    let mut im = ptr::null_mut();
    assert_eq!(unsafe { breuil_morphism_image(f, &mut im, ptr::null_mut()) }, BreuilStatus::Ok);
    assert_eq!(unsafe { breuil_module_rank(im) }, 1);
    let mut zero = true;
    assert_eq!(unsafe { breuil_morphism_is_zero(incl, &mut zero) }, BreuilStatus::Ok);
    assert!(!zero);
    let mut src = ptr::null_mut();
    assert_eq!(unsafe { breuil_morphism_endpoint(incl, 0, &mut src) }, BreuilStatus::Ok);
    assert_eq!(to_json(src), to_json(k));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { breuil_morphism_to_json(incl, &mut s) }, BreuilStatus::Ok);
    let mut reparsed = ptr::null_mut();
    assert_eq!(unsafe { breuil_morphism_parse(s, &mut reparsed) }, BreuilStatus::Ok);
    unsafe {
        breuil_string_free(s);
        breuil_morphism_free(reparsed);
        breuil_morphism_free(f);
        breuil_morphism_free(incl);
        for h in [k, q, im, src] {
            breuil_module_free(h);
        }
    }
}

#[test]
fn null_handles_are_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { breuil_module_dual(ptr::null(), &mut out) }, BreuilStatus::NullPointer);
    assert_eq!(unsafe { breuil_module_rank(ptr::null()) }, 0);
    unsafe {
        breuil_module_free(ptr::null_mut());
        breuil_morphism_free(ptr::null_mut());
        breuil_string_free(ptr::null_mut());
    }
}
