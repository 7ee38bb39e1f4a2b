//! End-to-end runs of the command line binary: exit codes, diagnostics,
//! output-file handling, and the report cache.

#[path = "common/golden.rs"]
mod golden;

use std::fs;
use std::process::Command;

#[test]
fn exit_codes_and_diagnostics_follow_the_contract() {
    for case in golden::cases() {
        let (code, stdout, stderr) = golden::run(&case.args);
        assert_eq!(
            code, case.expect_exit,
            "case {}: exit {} (stdout: {:?}, stderr: {:?})",
            case.name,
            code,
            String::from_utf8_lossy(&stdout),
            String::from_utf8_lossy(&stderr),
        );
        if let Some(fragment) = case.stderr_has {
            let text = String::from_utf8_lossy(&stderr);
            assert!(
                text.contains(fragment),
                "case {}: stderr {:?} lacks {:?}",
                case.name,
                text,
                fragment
            );
            assert!(text.starts_with("error: "), "case {}: {:?}", case.name, text);
        }
        if case.expect_exit != 2 {
            assert!(
                stderr.is_empty(),
                "case {}: unexpected stderr {:?}",
                case.name,
                String::from_utf8_lossy(&stderr)
            );
            assert!(!stdout.is_empty(), "case {}: empty report", case.name);
        }
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for case in golden::cases() {
        let first = golden::run(&case.args);
        for _ in 0..2 {
            let again = golden::run(&case.args);
            assert_eq!(first, again, "case {} is not deterministic", case.name);
        }
    }
}

#[test]
fn the_out_flag_duplicates_stdout() {
    let target = std::env::temp_dir().join(format!("ncminors-out-{}.txt", std::process::id()));
    let mut args = vec![
        "gldim".to_string(),
        "--algebra".to_string(),
        golden::fixture("lambda.alg"),
    ];
    let (code, stdout, _) = golden::run(&args);
    assert_eq!(code, 0);
    args.push("--out".to_string());
    args.push(target.display().to_string());
    let (code, stdout_again, _) = golden::run(&args);
    assert_eq!(code, 0);
    assert_eq!(stdout, stdout_again);
    let written = fs::read(&target).expect("the report file is written");
    assert_eq!(written, stdout);
    let _ = fs::remove_file(&target);
}

#[test]
fn the_report_cache_replays_identical_output() {
    let dir = std::env::temp_dir().join(format!("ncminors-cache-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let args = [
        "recollement".to_string(),
        "--algebra".to_string(),
        golden::fixture("lambda.alg"),
        "--idempotent".to_string(),
        "e1+e2".to_string(),
    ];
    let run_cached = || {
        let out = Command::new(env!("CARGO_BIN_EXE_ncminors"))
            .args(&args)
            .env("NCMINORS_CACHE_DIR", &dir)
            .output()
            .expect("the binary runs");
        (out.status.code().unwrap(), out.stdout)
    };
    let first = run_cached();
    let entries = fs::read_dir(&dir).unwrap().count();
    assert_eq!(entries, 1, "one cache entry after the first run");
    let second = run_cached();
    assert_eq!(first, second);
    let (code, stdout, _) = golden::run(&args);
    assert_eq!((code, stdout), first, "cache replay matches a cold run");
    let _ = fs::remove_dir_all(&dir);
}
