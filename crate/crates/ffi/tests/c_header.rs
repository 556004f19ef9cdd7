//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libboxlogic_ffi.a");
    assert!(
        lib.is_file(),
        "static library not found at {}",
        lib.display()
    );
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");

    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "{cc} failed");

    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "elements=82 chsh=4 verified=1 bad_status=4 bad_null=1"
    );
}

#[test]
fn header_is_up_to_date_with_the_sources() {
    let header = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/boxlogic.h"),
    )
    .unwrap();
    for symbol in [
        "boxlogic_world_new",
        "boxlogic_world_free",
        "boxlogic_world_element_count",
        "boxlogic_world_atom_count",
        "boxlogic_world_verify",
        "boxlogic_world_evaluate",
        "boxlogic_world_chsh",
        "boxlogic_last_error",
        "boxlogic_string_free",
        "boxlogic_version",
        "BOXLOGIC_STATUS_CHECK_FAILED = 9",
        "typedef struct BoxlogicWorld BoxlogicWorld;",
    ] {
        assert!(header.contains(symbol), "{symbol} missing from header");
    }
}
