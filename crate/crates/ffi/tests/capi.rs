use std::ffi::{c_char, CStr, CString};
use std::ptr;

use zerosum_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(zs_last_error()) }.to_str().unwrap().to_owned()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { zs_string_free(s) };
    out
}

fn sequence(text: &str) -> *mut ZsSequence {
    let c = CString::new(text).unwrap();
    let mut seq = ptr::null_mut();
    assert_eq!(unsafe { zs_sequence_parse(c.as_ptr(), &mut seq) }, ZsStatus::Ok, "{}", last_error());
    seq
}

#[test]
fn group_handles() {
    let lit = CString::new("metacyclic n=15 s=11").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { zs_group_parse(lit.as_ptr(), &mut g) }, ZsStatus::Ok);
    assert_eq!(unsafe { zs_group_order(g) }, 30);
    unsafe { zs_group_free(g) };
    assert_eq!(unsafe { zs_group_order(ptr::null()) }, 0);
    unsafe { zs_group_free(ptr::null_mut()) };
}

#[test]
fn gao_of_d6_and_infeasible_sizes() {
    let mut g = ptr::null_mut();
    let lit = CString::new("metacyclic n=3 s=2").unwrap();
    assert_eq!(unsafe { zs_group_parse(lit.as_ptr(), &mut g) }, ZsStatus::Ok);
    let mut value = 0usize;
    assert_eq!(unsafe { zs_gao_constant(g, &mut value) }, ZsStatus::Ok);
    assert_eq!(value, 9);
    unsafe { zs_group_free(g) };

    let lit = CString::new("metacyclic n=15 s=11").unwrap();
    assert_eq!(unsafe { zs_group_parse(lit.as_ptr(), &mut g) }, ZsStatus::Ok);
    assert_eq!(unsafe { zs_gao_constant(g, &mut value) }, ZsStatus::Infeasible);
    assert!(last_error().contains("infeasible"));
    unsafe { zs_group_free(g) };
}

#[test]
fn product_one_roundtrip() {
    let seq = sequence("group metacyclic n=3 s=2\nseq y * 2, x, x*y\n");
    assert_eq!(unsafe { zs_sequence_len(seq) }, 4);
    let mut found = false;
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { zs_has_product_one(seq, 4, 0, &mut found, &mut w) }, ZsStatus::Ok);
    assert!(found);
    let line = CString::new(take(w)).unwrap();
    let mut valid = false;
    assert_eq!(unsafe { zs_verify_witness(seq, line.as_ptr(), &mut valid) }, ZsStatus::Ok);
    assert!(valid);

    let bad = CString::new("witness k=2 target=1 : y y").unwrap();
    assert_eq!(unsafe { zs_verify_witness(seq, bad.as_ptr(), &mut valid) }, ZsStatus::Ok);
    assert!(!valid);
    assert!(!last_error().is_empty());
    unsafe { zs_sequence_free(seq) };
}

#[test]
fn big_witness_for_family_group() {
    let seq = sequence("group metacyclic n=15 s=11\nseq 1 * 29, y * 15, x\n");
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { zs_find_big_product_one(seq, &mut w) }, ZsStatus::Ok, "{}", last_error());
    let line = take(w);
    assert!(line.starts_with("witness k=30 target=1 :"));
    let c = CString::new(line).unwrap();
    let mut valid = false;
    assert_eq!(unsafe { zs_verify_witness(seq, c.as_ptr(), &mut valid) }, ZsStatus::Ok);
    assert!(valid);
    unsafe { zs_sequence_free(seq) };
}

#[test]
fn errors_are_reported() {
    let mut seq = ptr::null_mut();
    let text = CString::new("group metacyclic n=3 s=2\nseq y, q\n").unwrap();
    assert_eq!(unsafe { zs_sequence_parse(text.as_ptr(), &mut seq) }, ZsStatus::Parse);
    assert!(seq.is_null());
    assert!(last_error().starts_with("2:"), "{}", last_error());

    assert_eq!(unsafe { zs_sequence_parse(ptr::null(), &mut seq) }, ZsStatus::NullPointer);

    let mut found = false;
    assert_eq!(
        unsafe { zs_has_product_one(ptr::null(), 1, 0, &mut found, ptr::null_mut()) },
        ZsStatus::NullPointer
    );

    // outside the family
    let d6 = sequence("group metacyclic n=3 s=2\nseq y * 9\n");
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { zs_find_big_product_one(d6, &mut w) }, ZsStatus::InvalidArgument);
    assert!(w.is_null());
    unsafe { zs_sequence_free(d6) };

    let bytes = [0x67u8, 0xff, 0];
    assert_eq!(
        unsafe { zs_sequence_parse(bytes.as_ptr().cast(), &mut seq) },
        ZsStatus::InvalidUtf8
    );
}

#[test]
fn tiny_budget() {
    let seq = sequence("group metacyclic n=15 s=11\nseq 1 * 29, y * 14, x\n");
    let mut found = false;
    assert_eq!(
        unsafe { zs_has_product_one(seq, 30, 10, &mut found, ptr::null_mut()) },
        ZsStatus::BudgetExceeded
    );
    unsafe { zs_sequence_free(seq) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/zerosum.h")).unwrap();
    for name in [
        "zs_last_error",
        "zs_group_parse",
        "zs_group_order",
        "zs_group_free",
        "zs_sequence_parse",
        "zs_sequence_len",
        "zs_sequence_free",
        "zs_has_product_one",
        "zs_verify_witness",
        "zs_gao_constant",
        "zs_find_big_product_one",
        "zs_string_free",
        "typedef struct ZsGroup ZsGroup;",
        "ZS_STATUS_PANIC = 8",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let src = std::env::temp_dir().join(format!("zerosum_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"zerosum.h\"\n\
         int use(void) {\n\
           ZsSequence *s = NULL; bool found = false; char *w = NULL;\n\
           if (zs_sequence_parse(\"group cyclic n=3\\nseq y * 3\\n\", &s) != ZS_STATUS_OK) return 1;\n\
           ZsStatus st = zs_has_product_one(s, 3, 0, &found, &w);\n\
           zs_string_free(w); zs_sequence_free(s);\n\
           return st == ZS_STATUS_OK && found ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = match std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", dir])
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({cc}: {e})");
            return;
        }
    };
    let _ = std::fs::remove_file(&src);
    assert!(status.success(), "header failed to compile");
}
