//! Shared command list for the golden-report and determinism suites.
//!
//! Every case is run through the installed binary; the expected exit code is
//! part of the case so that both suites agree on what "passing" means. Cases
//! that exercise diagnostics carry a stderr fragment to look for.

use std::process::Command;

pub struct GoldenCase {
    pub name: &'static str,
    pub args: Vec<String>,
    pub expect_exit: i32,
    /// Fragment the diagnostics must contain; only the golden suite reads it.
    #[allow(dead_code)]
    pub stderr_has: Option<&'static str>,
}

pub fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn ok(name: &'static str, args: Vec<String>) -> GoldenCase {
    GoldenCase {
        name,
        args,
        expect_exit: 0,
        stderr_has: None,
    }
}

fn failing(name: &'static str, args: Vec<String>) -> GoldenCase {
    GoldenCase {
        name,
        args,
        expect_exit: 1,
        stderr_has: None,
    }
}

fn rejected(name: &'static str, args: Vec<String>, stderr_has: &'static str) -> GoldenCase {
    GoldenCase {
        name,
        args,
        expect_exit: 2,
        stderr_has: Some(stderr_has),
    }
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn cases() -> Vec<GoldenCase> {
    let lambda = fixture("lambda.alg");
    let kronecker = fixture("kronecker.alg");
    let kx2 = fixture("kx2.alg");
    let a2 = fixture("a2_triangular.alg");
    let mat2 = fixture("mat2.alg");
    let diag = fixture("glue_diagonal.alg");
    let bad_glue = fixture("glue_bad.alg");
    let w222 = fixture("w222.curve");
    let c013 = fixture("curve_013.curve");
    let single2 = fixture("single2.curve");
    let bare = fixture("bare.curve");
    let mixed = fixture("mixed_comp.curve");
    vec![
        ok(
            "minor-lambda-e12",
            args(&["minor", "--algebra", &lambda, "--idempotent", "e1+e2"]),
        ),
        ok(
            "minor-lambda-e3",
            args(&["minor", "--algebra", &lambda, "--idempotent", "e3"]),
        ),
        ok(
            "trace-ideal-lambda-e3",
            args(&["trace-ideal", "--algebra", &lambda, "--idempotent", "e3"]),
        ),
        ok(
            "recollement-lambda-e12",
            args(&["recollement", "--algebra", &lambda, "--idempotent", "e1+e2"]),
        ),
        ok(
            "recollement-kronecker-e1",
            args(&["recollement", "--algebra", &kronecker, "--idempotent", "e1"]),
        ),
        ok(
            "recollement-diagonal-e2",
            args(&["recollement", "--algebra", &diag, "--idempotent", "e2"]),
        ),
        ok("gldim-lambda", args(&["gldim", "--algebra", &lambda])),
        ok("gldim-dual-numbers", args(&["gldim", "--algebra", &kx2])),
        ok(
            "ext-lambda-simples",
            args(&[
                "ext",
                "--algebra",
                &lambda,
                "--module",
                "simple:e1",
                "--module",
                "simple:e3",
                "--cap",
                "4",
            ]),
        ),
        ok(
            "inj-dim-dual-numbers",
            args(&["inj-dim", "--algebra", &kx2, "--module", "simple:e1"]),
        ),
        ok("qhered-lambda", args(&["qhered", "--algebra", &lambda])),
        ok("qhered-dual-numbers", args(&["qhered", "--algebra", &kx2])),
        ok(
            "gldim-bound-lambda-e12",
            args(&["gldim-bound", "--algebra", &lambda, "--idempotent", "e1+e2"]),
        ),
        ok(
            "gldim-bound-lambda-e3",
            args(&["gldim-bound", "--algebra", &lambda, "--idempotent", "e3"]),
        ),
        ok(
            "semiorth-lambda-e3",
            args(&[
                "semiorth",
                "--algebra",
                &lambda,
                "--idempotent",
                "e3",
                "--cap",
                "6",
            ]),
        ),
        ok(
            "endo-dual-numbers-simple",
            args(&["endo", "--algebra", &kx2, "--module", "simple:e1"]),
        ),
        ok(
            "endo-a2-projective",
            args(&["endo", "--algebra", &a2, "--module", "projective:e1"]),
        ),
        ok("glue-diagonal", args(&["glue", "--algebra", &diag])),
        ok("hom-table-w222", args(&["curve-hom-table", "--curve", &w222])),
        ok(
            "hom-table-mixed",
            args(&["curve-hom-table", "--curve", &mixed]),
        ),
        ok("tilting-w222", args(&["curve-tilting", "--curve", &w222])),
        ok("tilting-bare", args(&["curve-tilting", "--curve", &bare])),
        ok(
            "local-order-mixed",
            args(&["curve-local-order", "--curve", &mixed]),
        ),
        ok("canonical-013", args(&["canonical", "--curve", &c013])),
        ok(
            "canonical-single",
            args(&["canonical", "--curve", &single2]),
        ),
        failing("glue-bad", args(&["glue", "--algebra", &bad_glue])),
        rejected(
            "missing-file",
            args(&["gldim", "--algebra", &fixture("missing.alg")]),
            "cannot read",
        ),
        rejected(
            "unknown-idempotent",
            args(&["minor", "--algebra", &lambda, "--idempotent", "e9"]),
            "unknown idempotent label `e9`",
        ),
        rejected(
            "parse-position",
            args(&["gldim", "--algebra", &fixture("broken.alg")]),
            "broken.alg:5:1: unknown key `extra` in [meta]",
        ),
        rejected(
            "ext-module-count",
            args(&["ext", "--algebra", &lambda, "--module", "regular"]),
            "exactly two --module arguments",
        ),
        rejected(
            "labels-need-basic-top",
            args(&["semiorth", "--algebra", &mat2, "--idempotent", "e1"]),
            "cannot enumerate primitive idempotents",
        ),
    ]
}

/// Runs the binary on the given arguments with the report cache disabled.
pub fn run(case_args: &[String]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncminors"))
        .args(case_args)
        .env_remove("NCMINORS_CACHE_DIR")
        .output()
        .expect("the binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}
