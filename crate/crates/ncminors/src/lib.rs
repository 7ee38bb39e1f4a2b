//! Exact-arithmetic computations with finite-dimensional algebras: corner
//! (idempotent-cut) subalgebras and the functors they induce, homological
//! invariants, and the sheaf calculus of weighted projective lines that feeds
//! the same machinery.

pub mod algebra;
pub mod cli;
pub mod exactla;
pub mod format;
pub mod hcurve;
pub mod homalg;
pub mod minors;
pub mod presets;
pub mod reference;
pub mod report;

/// Command-line entry point; returns the process exit code.
pub fn run() -> i32 {
    cli::run()
}
