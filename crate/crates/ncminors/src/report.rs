//! Line-oriented, byte-stable report structures shared by the library checks
//! and the command-line driver.
//!
//! Format: `key = value` lines, `check <name> = PASS|FAIL (<witness>)` lines,
//! and simple labelled tables. Reports compare bytewise across runs on equal
//! inputs, so everything that feeds them must be deterministic.

/// Outcome of a single verification, with a human-readable witness: either a
/// certificate of what was exhausted or a concrete counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, witness: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), pass: true, witness: witness.into() }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), pass: false, witness: witness.into() }
    }

    pub fn of(name: impl Into<String>, pass: bool, witness: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), pass, witness: witness.into() }
    }
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "check {} = {} ({})",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.witness
        )
    }
}

/// Accumulates report lines in emission order.
#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    failures: usize,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key} = {value}"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn check(&mut self, c: &CheckResult) {
        if !c.pass {
            self.failures += 1;
        }
        self.lines.push(c.to_string());
    }

    pub fn checks(&mut self, cs: &[CheckResult]) {
        for c in cs {
            self.check(c);
        }
    }

    /// A labelled table: one `table <name>` line, then one line per row with
    /// cells joined by two spaces.
    pub fn table(&mut self, name: &str, rows: &[Vec<String>]) {
        self.lines.push(format!("table {name}"));
        for row in rows {
            self.lines.push(format!("  {}", row.join("  ")));
        }
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_renders_stable_lines() {
        let mut r = Report::new();
        r.kv("dim", 4);
        r.check(&CheckResult::pass("unit", "4 cases"));
        r.check(&CheckResult::fail("counit", "module S1"));
        assert_eq!(
            r.render(),
            "dim = 4\ncheck unit = PASS (4 cases)\ncheck counit = FAIL (module S1)\n"
        );
        assert_eq!(r.failures(), 1);
        assert!(!r.all_pass());
    }
}
