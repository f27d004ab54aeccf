use std::ffi::{CStr, CString};
use std::ptr;

use popmatch_ffi::*;

const INTRO: &str = "students: a a'\ncourses: b b'\npref: a b b'\npref: a' b\npref: b a a'\npref: b' a\n";

fn parse(text: &str) -> *mut PmInstance {
    let text = CString::new(text).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { pm_instance_parse(text.as_ptr(), &mut inst) }, PmStatus::Ok);
    inst
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pm_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn solve_and_verify_round_trip() {
    let inst = parse(INTRO);
    unsafe {
        assert_eq!(
            (
                pm_instance_num_students(inst),
                pm_instance_num_courses(inst),
                pm_instance_num_edges(inst)
            ),
            (2, 2, 3)
        );

        let mut stable = ptr::null_mut();
        assert_eq!(pm_solve_stable(inst, &mut stable), PmStatus::Ok);
        assert_eq!(pm_matching_size(stable), 1);
        let (mut s, mut c) = (9, 9);
        assert_eq!(pm_matching_pair(stable, 0, &mut s, &mut c), PmStatus::Ok);
        assert_eq!((s, c), (0, 0));
        assert_eq!(pm_matching_pair(stable, 1, &mut s, &mut c), PmStatus::OutOfRange);
        assert!(last_error().contains("out of range"));

        let mut lm = ptr::null_mut();
        assert_eq!(pm_solve_maxpop(inst, &mut lm), PmStatus::Ok);
        assert_eq!(pm_level_matching_size(lm), 2);
        let mut level = 9u8;
        assert_eq!(pm_level_matching_edge(lm, 1, &mut s, &mut c, &mut level), PmStatus::Ok);
        assert_eq!((s, c, level), (1, 0, 1));
        let mut maxpop = ptr::null_mut();
        assert_eq!(pm_level_matching_projection(lm, &mut maxpop), PmStatus::Ok);

        let mut verdict = PmVerdict::Inconclusive;
        let mut optimum = 99;
        let mut witness = ptr::null_mut();
        assert_eq!(
            pm_verify_popular(inst, maxpop, &mut verdict, &mut optimum, &mut witness),
            PmStatus::Ok
        );
        assert_eq!((verdict, optimum), (PmVerdict::Popular, 0));
        assert!(witness.is_null());

        let mut popular = false;
        assert_eq!(
            pm_is_popular_bruteforce(inst, maxpop, 16, 1000, &mut popular),
            PmStatus::Ok
        );
        assert!(popular);
        assert_eq!(
            pm_is_popular_bruteforce(inst, maxpop, 2, 1000, &mut popular),
            PmStatus::BudgetExceeded
        );

        let mut delta = 99;
        assert_eq!(pm_big_delta(inst, stable, maxpop, &mut delta), PmStatus::Ok);
        assert_eq!(delta, 0);

        let mut text = ptr::null_mut();
        assert_eq!(pm_matching_to_string(inst, maxpop, &mut text), PmStatus::Ok);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "a b'\na' b\n");
        let mut reparsed = ptr::null_mut();
        assert_eq!(pm_matching_parse(inst, text, &mut reparsed), PmStatus::Ok);
        assert_eq!(pm_matching_size(reparsed), 2);
        pm_string_free(text);

        pm_matching_free(reparsed);
        pm_matching_free(maxpop);
        pm_level_matching_free(lm);
        pm_matching_free(stable);
        pm_instance_free(inst);
    }
}

#[test]
fn not_popular_yields_witness() {
    let inst = parse(INTRO);
    unsafe {
        let text = CString::new("a b'\n").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(pm_matching_parse(inst, text.as_ptr(), &mut m), PmStatus::Ok);
        let mut verdict = PmVerdict::Popular;
        let mut optimum = 0;
        let mut witness = ptr::null_mut();
        assert_eq!(
            pm_verify_popular(inst, m, &mut verdict, &mut optimum, &mut witness),
            PmStatus::Ok
        );
        assert_eq!(verdict, PmVerdict::NotPopular);
        assert!(optimum > 0);
        let mut delta = 0;
        assert_eq!(pm_big_delta(inst, m, witness, &mut delta), PmStatus::Ok);
        assert!(delta < 0);
        pm_matching_free(witness);
        pm_matching_free(m);
        pm_instance_free(inst);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut inst = ptr::null_mut();
        let bad = CString::new("students: a\npref: a zz\n").unwrap();
        assert_eq!(pm_instance_parse(bad.as_ptr(), &mut inst), PmStatus::ParseError);
        assert!(inst.is_null());
        assert!(last_error().contains("zz"), "{}", last_error());
        assert_eq!(pm_instance_parse(ptr::null(), &mut inst), PmStatus::NullArgument);
        let invalid = [0xffu8, 0];
        assert_eq!(
            pm_instance_parse(invalid.as_ptr().cast(), &mut inst),
            PmStatus::InvalidUtf8
        );
        assert_eq!(
            pm_solve_stable(ptr::null(), &mut ptr::null_mut()),
            PmStatus::NullArgument
        );
        assert_eq!(pm_instance_num_edges(ptr::null()), 0);

        let inst = parse(INTRO);
        let over = CString::new("a b\na b'\n").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(
            pm_matching_parse(inst, over.as_ptr(), &mut m),
            PmStatus::InvalidMatching
        );
        assert!(last_error().contains("capacity"));

        let other = parse("students: x\ncourses: y\npref: x y\npref: y x\n");
        let mut foreign = ptr::null_mut();
        assert_eq!(pm_solve_stable(other, &mut foreign), PmStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(
            pm_matching_to_string(inst, foreign, &mut text),
            PmStatus::InvalidMatching
        );
        assert!(text.is_null());
        pm_matching_free(foreign);
        pm_instance_free(other);
        pm_instance_free(inst);
        pm_instance_free(ptr::null_mut());
    }
}
