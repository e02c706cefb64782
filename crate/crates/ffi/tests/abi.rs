use std::ffi::{CStr, CString};
use std::ptr;

use rookmonoid_ffi::*;

fn build(instance: &str) -> *mut RmPoset {
    let s = CString::new(instance).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rm_poset_build(s.as_ptr(), &mut p) }, RmStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let msg = rm_last_error_message();
    assert!(!msg.is_null());
    unsafe { CStr::from_ptr(msg) }.to_string_lossy().into_owned()
}

fn index_of(p: *const RmPoset, entries: &[u8]) -> usize {
    let mut i = usize::MAX;
    assert_eq!(
        unsafe { rm_poset_index_of(p, entries.as_ptr(), entries.len(), &mut i) },
        RmStatus::Ok
    );
    i
}

#[test]
fn sizes_through_every_constructor() {
    unsafe {
        let mut len = 0;
        let mut p = ptr::null_mut();
        assert_eq!(rm_poset_build_rook(3, &mut p), RmStatus::Ok);
        assert_eq!(rm_poset_len(p, &mut len), RmStatus::Ok);
        assert_eq!(len, 34);
        rm_poset_free(p);

        assert_eq!(rm_poset_build_symmetric(3, &mut p), RmStatus::Ok);
        assert_eq!(rm_poset_len(p, &mut len), RmStatus::Ok);
        assert_eq!(len, 6);
        rm_poset_free(p);

        assert_eq!(rm_poset_build_rank_level(3, 1, &mut p), RmStatus::Ok);
        assert_eq!(rm_poset_len(p, &mut len), RmStatus::Ok);
        assert_eq!(len, 9);
        rm_poset_free(p);
    }
}

#[test]
fn elements_ranks_and_covers() {
    let p = build("rook:2");
    unsafe {
        let mut n = 0;
        assert_eq!(rm_poset_dimension(p, &mut n), RmStatus::Ok);
        assert_eq!(n, 2);
        let mut buf = [9u8; 2];
        assert_eq!(rm_poset_element(p, 0, buf.as_mut_ptr(), 2), RmStatus::Ok);
        assert_eq!(buf, [0, 0]);
        assert_eq!(rm_poset_element(p, 0, buf.as_mut_ptr(), 1), RmStatus::BufferTooSmall);

        let top = index_of(p, &[2, 1]);
        let mut rank = 0;
        assert_eq!(rm_poset_rank(p, top, &mut rank), RmStatus::Ok);
        assert_eq!(rank, 4);

        // The bottom has a single cover, (0,1), labeled (0,1).
        let mut count = 0;
        assert_eq!(rm_poset_cover_count(p, 0, &mut count), RmStatus::Ok);
        assert_eq!(count, 1);
        let (mut target, mut label) = (0usize, RmLabel::default());
        assert_eq!(rm_poset_cover(p, 0, 0, &mut target, &mut label), RmStatus::Ok);
        assert_eq!(target, index_of(p, &[0, 1]));
        assert_eq!(label, RmLabel { first: 0, second: 1 });
        assert_eq!(rm_poset_cover(p, 0, 1, &mut target, &mut label), RmStatus::IndexOutOfRange);

        let mut leq = false;
        assert_eq!(rm_poset_leq(p, 0, top, &mut leq), RmStatus::Ok);
        assert!(leq);
        assert_eq!(rm_poset_leq(p, top, 0, &mut leq), RmStatus::Ok);
        assert!(!leq);
        rm_poset_free(p);
    }
}

#[test]
fn worked_chain_example() {
    let p = build("rook:3");
    let x = index_of(p, &[0, 1, 0]);
    let y = index_of(p, &[3, 1, 2]);
    let mut vertices = [0usize; 7];
    let mut labels = [RmLabel::default(); 6];
    let mut len = 0;
    unsafe {
        assert_eq!(
            rm_poset_lex_first_chain(p, x, y, vertices.as_mut_ptr(), labels.as_mut_ptr(), 2, &mut len),
            RmStatus::BufferTooSmall
        );
        assert_eq!(len, 6);
        assert_eq!(
            rm_poset_lex_first_chain(p, x, y, vertices.as_mut_ptr(), labels.as_mut_ptr(), 6, &mut len),
            RmStatus::Ok
        );
        let pairs: Vec<(u8, u8)> = labels.iter().map(|l| (l.first, l.second)).collect();
        assert_eq!(pairs, [(0, 1), (0, 2), (0, 2), (0, 3), (1, 2), (2, 3)]);
        assert_eq!((vertices[0], vertices[6]), (x, y));

        let mut count = 0;
        assert_eq!(rm_poset_count_increasing_chains(p, x, y, &mut count), RmStatus::Ok);
        assert_eq!(count, 1);
        let mut mu = 99;
        assert_eq!(rm_poset_mobius(p, 0, 0, &mut mu), RmStatus::Ok);
        assert_eq!(mu, 1);
        assert_eq!(rm_poset_mobius(p, y, x, &mut mu), RmStatus::Ok);
        assert_eq!(mu, 0);
        assert_eq!(
            rm_poset_count_increasing_chains(p, y, x, &mut count),
            RmStatus::Incomparable
        );
        assert!(last_error().contains("not comparable"));
        rm_poset_free(p);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut p = ptr::null_mut();
        let bad = CString::new("rook:x").unwrap();
        assert_eq!(rm_poset_build(bad.as_ptr(), &mut p), RmStatus::InvalidArgument);
        assert!(p.is_null());
        assert!(last_error().contains("bad instance"));

        assert_eq!(rm_poset_build_rook(7, &mut p), RmStatus::BoundExceeded);
        assert_eq!(rm_poset_build(ptr::null(), &mut p), RmStatus::NullPointer);

        let mut len = 0;
        assert_eq!(rm_poset_len(ptr::null(), &mut len), RmStatus::NullPointer);
        let q = build("rook:1");
        assert_eq!(rm_poset_len(q, ptr::null_mut()), RmStatus::NullPointer);
        let mut rank = 0;
        assert_eq!(rm_poset_rank(q, 5, &mut rank), RmStatus::IndexOutOfRange);
        let mut i = 0;
        let wrong = [1u8, 0];
        assert_eq!(rm_poset_index_of(q, wrong.as_ptr(), 2, &mut i), RmStatus::InvalidArgument);
        rm_poset_free(q);
        rm_poset_free(ptr::null_mut());
        rm_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_returns_json() {
    let instance = CString::new("rook:2").unwrap();
    let checks = CString::new("el").unwrap();
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(
            rm_verify(instance.as_ptr(), checks.as_ptr(), ptr::null(), 1, &mut json),
            RmStatus::Ok
        );
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        rm_string_free(json);
        let report: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(report["passed"], true);
        assert_eq!(report["instance"], "rook:2");

        let scope = CString::new("nonsense").unwrap();
        assert_eq!(
            rm_verify(instance.as_ptr(), ptr::null(), scope.as_ptr(), 1, &mut json),
            RmStatus::InvalidArgument
        );
        assert!(json.is_null());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rookmonoid.h")).unwrap();
    for name in [
        "rm_last_error_message",
        "rm_poset_build",
        "rm_poset_build_rook",
        "rm_poset_build_symmetric",
        "rm_poset_build_rank_level",
        "rm_poset_free",
        "rm_poset_len",
        "rm_poset_dimension",
        "rm_poset_element",
        "rm_poset_index_of",
        "rm_poset_rank",
        "rm_poset_cover_count",
        "rm_poset_cover",
        "rm_poset_leq",
        "rm_poset_mobius",
        "rm_poset_lex_first_chain",
        "rm_poset_count_increasing_chains",
        "rm_verify",
        "rm_string_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct RmPoset RmPoset;"));
    assert!(header.contains("RM_STATUS_PANIC = 9"));
}
