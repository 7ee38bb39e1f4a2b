//! Sectioned text formats for algebras and curves.
//!
//! Both formats are line oriented: `[section]` headers followed by
//! `key = value` entries. Lines whose first non-blank character is `#` are
//! comments. An algebra file opens with `[meta]` (format = 1, name, field = Q)
//! and then carries exactly one of `[quiver]` or `[structure_constants]`,
//! optionally followed by `[subalgebra]` rows spanning a unital subalgebra of
//! the ambient algebra. A curve file opens with `[curve]` (rank, base_point)
//! followed by one `[point]` section per special point.
//!
//! Every diagnostic names the file, line, and column, and the emitters
//! round-trip: parsing what `emit` prints reproduces the parsed value.

use crate::algebra::{
    algebra_from_quiver, Algebra, Arrow, QuiverAlgebra, QuiverPresentation, RelationTerm,
};
use crate::exactla::{Mat, Scalar, SpanAccumulator};
use crate::hcurve::{P1Point, SpecialPoint, WeightedP1};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Longest path length at which quiver bases must certify closure.
const PATH_LENGTH_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error: {}:{}:{}: {}", self.file, self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

type Result<T> = std::result::Result<T, ParseError>;

fn err<T>(file: &str, line: usize, col: usize, message: impl Into<String>) -> Result<T> {
    Err(ParseError { file: file.to_string(), line, col, message: message.into() })
}

// ---------------------------------------------------------------------------
// Low-level scanner
// ---------------------------------------------------------------------------

struct Entry {
    key: String,
    value: String,
    line: usize,
    /// Column of the first character of the key.
    key_col: usize,
    /// Column of the first character of the value.
    val_col: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

fn split_sections(file: &str, text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(file, lineno, indent + 1, "unterminated section header");
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return err(file, lineno, indent + 2, "invalid section name");
            }
            sections.push(Section { name: name.to_string(), line: lineno, entries: Vec::new() });
            continue;
        }
        let Some(eq) = raw.find('=') else {
            return err(file, lineno, indent + 1, "expected `[section]` or `key = value`");
        };
        let key = raw[..eq].trim();
        let value = raw[eq + 1..].trim();
        if key.is_empty() {
            return err(file, lineno, indent + 1, "missing key before `=`");
        }
        if value.is_empty() {
            return err(file, lineno, eq + 2, format!("missing value for key `{key}`"));
        }
        let key_col = indent + 1;
        let val_col = eq + 2 + raw[eq + 1..].len() - raw[eq + 1..].trim_start().len();
        let Some(section) = sections.last_mut() else {
            return err(file, lineno, key_col, "entry appears before any section header");
        };
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            line: lineno,
            key_col,
            val_col,
        });
    }
    Ok(sections)
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strict rational literal: optional sign, digits, optional /digits.
fn parse_rational(s: &str) -> Option<Scalar> {
    let (num_text, den_text) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let body = num_text.strip_prefix('-').unwrap_or(num_text);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = num_text.parse().ok()?;
    let den: BigInt = match den_text {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            d.parse().ok()?
        }
    };
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

fn parse_count(file: &str, e: &Entry, what: &str) -> Result<usize> {
    match e.value.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => err(file, e.line, e.val_col, format!("{what} must be a positive integer")),
    }
}

/// Entries must each appear exactly once; returns them in `keys` order.
fn required<'a>(
    file: &str,
    section: &'a Section,
    keys: &[&str],
) -> Result<Vec<&'a Entry>> {
    let mut found: Vec<Option<&Entry>> = vec![None; keys.len()];
    for e in &section.entries {
        match keys.iter().position(|k| *k == e.key) {
            Some(i) => {
                if found[i].is_some() {
                    return err(file, e.line, e.key_col, format!("duplicate key `{}`", e.key));
                }
                found[i] = Some(e);
            }
            None => {
                return err(
                    file,
                    e.line,
                    e.key_col,
                    format!("unknown key `{}` in [{}]", e.key, section.name),
                )
            }
        }
    }
    let mut out = Vec::with_capacity(keys.len());
    for (k, f) in keys.iter().zip(found) {
        match f {
            Some(e) => out.push(e),
            None => {
                return err(file, section.line, 1, format!("[{}] is missing `{k}`", section.name))
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Algebra files
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSource {
    Quiver(QuiverPresentation),
    /// Sparse multiplication table entries (i, j, k, c) with zero-based
    /// indices, meaning basis_i * basis_j has coefficient c on basis_k.
    Table { dim: usize, entries: Vec<(usize, usize, usize, Scalar)> },
}

#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub name: String,
    pub source: AlgebraSource,
    /// Rows spanning a unital subalgebra of the ambient algebra; empty when
    /// the file has no [subalgebra] section.
    pub subalgebra: Vec<Vec<Scalar>>,
    file: String,
    source_line: usize,
    sub_line: usize,
}

// Position bookkeeping is excluded from equality so that round-tripping
// through emit() compares equal.
impl PartialEq for AlgebraFile {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.source == other.source
            && self.subalgebra == other.subalgebra
    }
}

#[derive(Debug)]
pub struct BuiltAlgebra {
    pub name: String,
    pub algebra: Algebra,
    /// Present when the file gave a quiver presentation.
    pub quiver: Option<QuiverAlgebra>,
    /// Subalgebra with its inclusion (one column per subalgebra coordinate).
    pub subalgebra: Option<(Algebra, Mat)>,
}

fn parse_meta(file: &str, section: &Section) -> Result<String> {
    let got = required(file, section, &["format", "name", "field"])?;
    if got[0].value != "1" {
        return err(file, got[0].line, got[0].val_col, "unsupported format version");
    }
    let name = &got[1].value;
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
        return err(file, got[1].line, got[1].val_col, "name must be alphanumeric with _-.");
    }
    if got[2].value != "Q" {
        return err(file, got[2].line, got[2].val_col, "only field = Q is supported");
    }
    Ok(name.clone())
}

struct ComboTerm {
    coeff: Scalar,
    /// Arrow labels in text order (last applied first).
    labels: Vec<String>,
}

/// A signed combination like `a3 - a1 - 3/2 a2` or `b1.a1`, or the literal 0.
fn parse_combo(file: &str, line: usize, col: usize, text: &str) -> Result<Vec<ComboTerm>> {
    if text.trim() == "0" {
        return Ok(Vec::new());
    }
    let mut chunks: Vec<(Scalar, String)> = Vec::new();
    let mut sign = Scalar::one();
    let mut cur = String::new();
    let mut first = true;
    for ch in text.chars() {
        if ch == '+' || ch == '-' {
            if cur.trim().is_empty() && !first {
                return err(file, line, col, "empty relation term");
            }
            if !cur.trim().is_empty() {
                chunks.push((sign.clone(), cur.trim().to_string()));
            } else if ch == '+' {
                return err(file, line, col, "relation must not start with `+`");
            }
            sign = if ch == '-' { -Scalar::one() } else { Scalar::one() };
            cur.clear();
            first = false;
        } else {
            cur.push(ch);
            first = false;
        }
    }
    if cur.trim().is_empty() {
        return err(file, line, col, "relation ends with a dangling sign");
    }
    chunks.push((sign, cur.trim().to_string()));

    let mut terms = Vec::new();
    for (sgn, chunk) in chunks {
        let parts: Vec<&str> = chunk.split_whitespace().collect();
        let (coeff, path_text) = match parts.as_slice() {
            [p] => (Scalar::one(), *p),
            [c, p] => match parse_rational(c) {
                Some(x) if !x.is_zero() => (x, *p),
                Some(_) => return err(file, line, col, "zero coefficient in relation"),
                None => {
                    return err(file, line, col, format!("bad coefficient `{c}` in relation"))
                }
            },
            _ => return err(file, line, col, format!("cannot read relation term `{chunk}`")),
        };
        let labels: Vec<String> = path_text.split('.').map(|s| s.to_string()).collect();
        if labels.iter().any(|l| !is_label(l)) {
            return err(file, line, col, format!("bad path `{path_text}` in relation"));
        }
        terms.push(ComboTerm { coeff: sgn * coeff, labels });
    }
    Ok(terms)
}

fn parse_quiver(file: &str, section: &Section) -> Result<QuiverPresentation> {
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut relations: Vec<Vec<RelationTerm>> = Vec::new();
    let mut seen_vertices = false;

    for e in &section.entries {
        match e.key.as_str() {
            "vertices" => {
                if seen_vertices {
                    return err(file, e.line, e.key_col, "duplicate key `vertices`");
                }
                seen_vertices = true;
                for v in e.value.split(',') {
                    let v = v.trim();
                    if !is_label(v) {
                        return err(file, e.line, e.val_col, format!("bad vertex label `{v}`"));
                    }
                    if vertices.iter().any(|w| w == v) {
                        return err(
                            file,
                            e.line,
                            e.val_col,
                            format!("duplicate vertex label `{v}`"),
                        );
                    }
                    vertices.push(v.to_string());
                }
            }
            "arrow" => {
                if !seen_vertices {
                    return err(file, e.line, e.key_col, "arrows must come after `vertices`");
                }
                let Some((label, ends)) = e.value.split_once(':') else {
                    return err(file, e.line, e.val_col, "arrow needs `label : src -> tgt`");
                };
                let label = label.trim();
                if !is_label(label) {
                    return err(file, e.line, e.val_col, format!("bad arrow label `{label}`"));
                }
                if arrows.iter().any(|a| a.label == label) || vertices.iter().any(|v| v == label)
                {
                    return err(file, e.line, e.val_col, format!("label `{label}` already used"));
                }
                let Some((src, tgt)) = ends.split_once("->") else {
                    return err(file, e.line, e.val_col, "arrow needs `label : src -> tgt`");
                };
                let (src, tgt) = (src.trim(), tgt.trim());
                let find = |v: &str| vertices.iter().position(|w| w == v);
                let (Some(source), Some(target)) = (find(src), find(tgt)) else {
                    return err(file, e.line, e.val_col, "arrow endpoint is not a vertex");
                };
                arrows.push(Arrow { label: label.to_string(), source, target });
            }
            "relation" => {
                let Some((lhs, rhs)) = e.value.split_once('=') else {
                    return err(file, e.line, e.val_col, "relation needs `combo = combo`");
                };
                let mut terms = parse_combo(file, e.line, e.val_col, lhs)?;
                for t in parse_combo(file, e.line, e.val_col, rhs)? {
                    terms.push(ComboTerm { coeff: -t.coeff, labels: t.labels });
                }
                if terms.is_empty() {
                    return err(file, e.line, e.val_col, "relation `0 = 0` is empty");
                }
                let mut rel: Vec<RelationTerm> = Vec::new();
                let mut endpoints: Option<(usize, usize)> = None;
                for t in terms {
                    let mut path = Vec::with_capacity(t.labels.len());
                    // Text lists the last-applied arrow first; traversal
                    // order reverses it.
                    for l in t.labels.iter().rev() {
                        match arrows.iter().position(|a| a.label == *l) {
                            Some(i) => path.push(i),
                            None => {
                                return err(
                                    file,
                                    e.line,
                                    e.val_col,
                                    format!("unknown arrow `{l}` in relation"),
                                )
                            }
                        }
                    }
                    let mut at = arrows[path[0]].source;
                    for &i in &path {
                        if arrows[i].source != at {
                            return err(
                                file,
                                e.line,
                                e.val_col,
                                format!("path `{}` does not compose", t.labels.join(".")),
                            );
                        }
                        at = arrows[i].target;
                    }
                    let ends = (arrows[path[0]].source, at);
                    if *endpoints.get_or_insert(ends) != ends {
                        return err(file, e.line, e.val_col, "relation mixes non-parallel paths");
                    }
                    rel.push((t.coeff, path));
                }
                relations.push(rel);
            }
            other => {
                return err(file, e.line, e.key_col, format!("unknown key `{other}` in [quiver]"))
            }
        }
    }
    if !seen_vertices {
        return err(file, section.line, 1, "[quiver] is missing `vertices`");
    }
    Ok(QuiverPresentation { vertices, arrows, relations })
}

fn parse_table(file: &str, section: &Section) -> Result<AlgebraSource> {
    let mut dim: Option<usize> = None;
    let mut entries: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for e in &section.entries {
        match e.key.as_str() {
            "dim" => {
                if dim.is_some() {
                    return err(file, e.line, e.key_col, "duplicate key `dim`");
                }
                dim = Some(parse_count(file, e, "dim")?);
            }
            "c" => {
                let Some(d) = dim else {
                    return err(file, e.line, e.key_col, "`dim` must come before entries");
                };
                let parts: Vec<&str> = e.value.split_whitespace().collect();
                let [i, j, k, v] = parts.as_slice() else {
                    return err(file, e.line, e.val_col, "entry needs `i j k value`");
                };
                let idx = |s: &str| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(n) if (1..=d).contains(&n) => Ok(n - 1),
                        _ => err(
                            file,
                            e.line,
                            e.val_col,
                            format!("index `{s}` outside 1..={d}"),
                        ),
                    }
                };
                let (i, j, k) = (idx(i)?, idx(j)?, idx(k)?);
                let Some(value) = parse_rational(v) else {
                    return err(file, e.line, e.val_col, format!("bad rational `{v}`"));
                };
                if value.is_zero() {
                    return err(file, e.line, e.val_col, "zero entries are implied; drop them");
                }
                if entries.iter().any(|(a, b, c, _)| (*a, *b, *c) == (i, j, k)) {
                    return err(file, e.line, e.val_col, "duplicate structure constant entry");
                }
                entries.push((i, j, k, value));
            }
            other => {
                return err(
                    file,
                    e.line,
                    e.key_col,
                    format!("unknown key `{other}` in [structure_constants]"),
                )
            }
        }
    }
    let Some(dim) = dim else {
        return err(file, section.line, 1, "[structure_constants] is missing `dim`");
    };
    entries.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    Ok(AlgebraSource::Table { dim, entries })
}

fn parse_vector(file: &str, e: &Entry) -> Result<Vec<Scalar>> {
    e.value
        .split(',')
        .map(|s| {
            parse_rational(s.trim()).ok_or_else(|| ParseError {
                file: file.to_string(),
                line: e.line,
                col: e.val_col,
                message: format!("bad rational `{}`", s.trim()),
            })
        })
        .collect()
}

impl AlgebraFile {
    pub fn parse(file: &str, text: &str) -> Result<AlgebraFile> {
        let sections = split_sections(file, text)?;
        let Some(meta) = sections.first() else {
            return err(file, 1, 1, "file is empty; expected a [meta] section");
        };
        if meta.name != "meta" {
            return err(file, meta.line, 1, "first section must be [meta]");
        }
        let name = parse_meta(file, meta)?;

        let Some(body) = sections.get(1) else {
            return err(file, meta.line, 1, "expected [quiver] or [structure_constants]");
        };
        let (source, source_line) = match body.name.as_str() {
            "quiver" => (AlgebraSource::Quiver(parse_quiver(file, body)?), body.line),
            "structure_constants" => (parse_table(file, body)?, body.line),
            other => return err(file, body.line, 1, format!("unexpected section [{other}]")),
        };

        let mut subalgebra = Vec::new();
        let mut sub_line = source_line;
        match sections.get(2) {
            None => {}
            Some(s) if s.name == "subalgebra" => {
                sub_line = s.line;
                for e in &s.entries {
                    if e.key != "element" {
                        return err(
                            file,
                            e.line,
                            e.key_col,
                            format!("unknown key `{}` in [subalgebra]", e.key),
                        );
                    }
                    subalgebra.push(parse_vector(file, e)?);
                }
                if subalgebra.is_empty() {
                    return err(file, s.line, 1, "[subalgebra] needs `element` rows");
                }
            }
            Some(s) => return err(file, s.line, 1, format!("unexpected section [{}]", s.name)),
        }
        if let Some(s) = sections.get(3) {
            return err(file, s.line, 1, format!("unexpected section [{}]", s.name));
        }

        Ok(AlgebraFile { name, source, subalgebra, file: file.to_string(), source_line, sub_line })
    }

    /// Construct the algebra (and subalgebra, if any), converting
    /// mathematical defects of the data into positioned diagnostics.
    pub fn build(&self) -> Result<BuiltAlgebra> {
        let at = |line: usize, message: String| ParseError {
            file: self.file.clone(),
            line,
            col: 1,
            message,
        };
        let (algebra, quiver) = match &self.source {
            AlgebraSource::Quiver(pres) => {
                let qa = algebra_from_quiver(pres, PATH_LENGTH_CAP)
                    .map_err(|e| at(self.source_line, e.to_string()))?;
                (qa.algebra.clone(), Some(qa))
            }
            AlgebraSource::Table { dim, entries } => {
                let d = *dim;
                let mut table = vec![vec![Scalar::zero(); d]; d * d];
                for &(i, j, k, ref v) in entries {
                    table[i * d + j][k] = v.clone();
                }
                let unit = solve_unit(&table, d).ok_or_else(|| {
                    at(self.source_line, "multiplication table has no unit element".into())
                })?;
                let labels = (1..=d).map(|i| format!("b{i}")).collect();
                let alg = Algebra::from_structure_constants(labels, table, unit)
                    .map_err(|e| at(self.source_line, e.to_string()))?;
                (alg, None)
            }
        };

        let subalgebra = if self.subalgebra.is_empty() {
            None
        } else {
            Some(self.build_subalgebra(&algebra).map_err(|m| at(self.sub_line, m))?)
        };
        Ok(BuiltAlgebra { name: self.name.clone(), algebra, quiver, subalgebra })
    }

    fn build_subalgebra(&self, ambient: &Algebra) -> std::result::Result<(Algebra, Mat), String> {
        let dim = ambient.dim();
        let mut acc = SpanAccumulator::new(dim);
        for row in &self.subalgebra {
            if row.len() != dim {
                return Err(format!(
                    "element has {} coordinates but the algebra has dimension {dim}",
                    row.len()
                ));
            }
            if !acc.insert(row) {
                return Err("subalgebra elements are linearly dependent".into());
            }
        }
        let rows = &self.subalgebra;
        let d = rows.len();
        // Columns are the spanning rows; coordinates in the span solve
        // against it.
        let incl = Mat::from_rows(rows.iter().cloned().collect::<Vec<_>>()).transpose();
        let coords = |v: &[Scalar]| incl.solve(v);
        let Some(unit) = coords(ambient.unit_coords()) else {
            return Err("subalgebra does not contain the unit".into());
        };
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let prod = ambient.mul_coords(&rows[i], &rows[j]);
                match coords(&prod) {
                    Some(c) => table.push(c),
                    None => {
                        return Err(format!(
                            "subalgebra is not closed: element {} times element {} leaves the span",
                            i + 1,
                            j + 1
                        ))
                    }
                }
            }
        }
        let labels = (1..=d).map(|i| format!("s{i}")).collect();
        let sub = Algebra::from_structure_constants(labels, table, unit)
            .map_err(|e| e.to_string())?;
        Ok((sub, incl))
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str("[meta]\nformat = 1\n");
        out.push_str(&format!("name = {}\nfield = Q\n", self.name));
        match &self.source {
            AlgebraSource::Quiver(p) => {
                out.push_str("\n[quiver]\n");
                out.push_str(&format!("vertices = {}\n", p.vertices.join(", ")));
                for a in &p.arrows {
                    out.push_str(&format!(
                        "arrow = {} : {} -> {}\n",
                        a.label, p.vertices[a.source], p.vertices[a.target]
                    ));
                }
                for rel in &p.relations {
                    out.push_str(&format!("relation = {} = 0\n", combo_text(p, rel)));
                }
            }
            AlgebraSource::Table { dim, entries } => {
                out.push_str("\n[structure_constants]\n");
                out.push_str(&format!("dim = {dim}\n"));
                for (i, j, k, v) in entries {
                    out.push_str(&format!("c = {} {} {} {v}\n", i + 1, j + 1, k + 1));
                }
            }
        }
        if !self.subalgebra.is_empty() {
            out.push_str("\n[subalgebra]\n");
            for row in &self.subalgebra {
                let coords: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("element = {}\n", coords.join(", ")));
            }
        }
        out
    }
}

/// Left unit of a multiplication table, if one exists; the algebra
/// constructor then certifies it is two-sided.
fn solve_unit(table: &[Vec<Scalar>], dim: usize) -> Option<Vec<Scalar>> {
    let mut rows = Vec::with_capacity(dim * dim);
    let mut rhs = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for k in 0..dim {
            rows.push((0..dim).map(|i| table[i * dim + j][k].clone()).collect::<Vec<_>>());
            rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
        }
    }
    Mat::from_rows(rows).solve(&rhs)
}

fn combo_text(p: &QuiverPresentation, rel: &[RelationTerm]) -> String {
    let mut out = String::new();
    for (n, (coeff, path)) in rel.iter().enumerate() {
        let mag = coeff.abs();
        let negative = coeff.is_negative();
        if n == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        // Traversal order back to text order: last applied first.
        let labels: Vec<&str> =
            path.iter().rev().map(|&a| p.arrows[a].label.as_str()).collect();
        out.push_str(&labels.join("."));
    }
    out
}

// ---------------------------------------------------------------------------
// Curve files
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct CurveFile {
    pub rank: usize,
    pub base: P1Point,
    pub points: Vec<SpecialPoint>,
    file: String,
    line: usize,
}

impl PartialEq for CurveFile {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.base == other.base && self.points == other.points
    }
}

fn parse_point_value(file: &str, e: &Entry) -> Result<P1Point> {
    if e.value == "inf" {
        return Ok(P1Point::Infinity);
    }
    match parse_rational(&e.value) {
        Some(x) => Ok(P1Point::Finite(x)),
        None => err(file, e.line, e.val_col, format!("bad point `{}`; use p/q or inf", e.value)),
    }
}

impl CurveFile {
    pub fn parse(file: &str, text: &str) -> Result<CurveFile> {
        let sections = split_sections(file, text)?;
        let Some(head) = sections.first() else {
            return err(file, 1, 1, "file is empty; expected a [curve] section");
        };
        if head.name != "curve" {
            return err(file, head.line, 1, "first section must be [curve]");
        }
        let got = required(file, head, &["rank", "base_point"])?;
        let rank = parse_count(file, got[0], "rank")?;
        let base = parse_point_value(file, got[1])?;

        let mut points = Vec::new();
        for s in &sections[1..] {
            if s.name != "point" {
                return err(file, s.line, 1, format!("unexpected section [{}]", s.name));
            }
            let got = required(file, s, &["xi", "weight", "composition"])?;
            let xi = parse_point_value(file, got[0])?;
            let weight = parse_count(file, got[1], "weight")?;
            let comp = got[2];
            let mut composition = Vec::new();
            for part in comp.value.split(',') {
                match part.trim().parse::<usize>() {
                    Ok(n) if n > 0 => composition.push(n),
                    _ => {
                        return err(
                            file,
                            comp.line,
                            comp.val_col,
                            "composition parts must be positive integers",
                        )
                    }
                }
            }
            if composition.len() != weight {
                return err(
                    file,
                    comp.line,
                    comp.val_col,
                    format!("composition has {} parts but weight is {weight}", composition.len()),
                );
            }
            points.push(SpecialPoint { xi, weight, composition });
        }
        Ok(CurveFile { rank, base, points, file: file.to_string(), line: head.line })
    }

    pub fn build(&self) -> Result<WeightedP1> {
        WeightedP1::new(self.points.clone(), self.rank, self.base.clone()).map_err(|e| {
            ParseError { file: self.file.clone(), line: self.line, col: 1, message: e.to_string() }
        })
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str("[curve]\n");
        out.push_str(&format!("rank = {}\nbase_point = {}\n", self.rank, self.base));
        for p in &self.points {
            let comp: Vec<String> = p.composition.iter().map(|n| n.to_string()).collect();
            out.push_str(&format!(
                "\n[point]\nxi = {}\nweight = {}\ncomposition = {}\n",
                p.xi,
                p.weight,
                comp.join(", ")
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{frac, scalar};

    const LAMBDA: &str = "\
[meta]
format = 1
name = lambda
field = Q

[quiver]
# two parallel arrows into a middle vertex, two out of it
vertices = e1, e2, e3
arrow = a1 : e1 -> e2
arrow = a2 : e1 -> e2
arrow = b1 : e2 -> e3
arrow = b2 : e2 -> e3
relation = b1.a1 = 0
relation = b2.a2 = 0
";

    #[test]
    fn quiver_files_parse_and_build() {
        let af = AlgebraFile::parse("lambda.alg", LAMBDA).unwrap();
        assert_eq!(af.name, "lambda");
        let AlgebraSource::Quiver(p) = &af.source else { panic!("expected a quiver") };
        assert_eq!(p.vertices, vec!["e1", "e2", "e3"]);
        assert_eq!(p.arrows.len(), 4);
        // Text order b1.a1 reverses into traversal order (a1 then b1).
        assert_eq!(p.relations[0], vec![(scalar(1), vec![0, 2])]);
        assert_eq!(p.relations[1], vec![(scalar(1), vec![1, 3])]);

        let built = af.build().unwrap();
        assert_eq!(built.algebra.dim(), 9);
        assert!(built.quiver.is_some());
        assert!(built.subalgebra.is_none());
    }

    #[test]
    fn relations_combine_terms_with_rational_coefficients() {
        let text = "\
[meta]
format = 1
name = combo
field = Q

[quiver]
vertices = u, m, w
arrow = x1 : u -> m
arrow = x2 : u -> m
arrow = y1 : m -> w
arrow = y2 : m -> w
relation = y1.x1 - y2.x2 = 3/2 y2.x1
";
        let af = AlgebraFile::parse("c.alg", text).unwrap();
        let AlgebraSource::Quiver(p) = &af.source else { panic!("expected a quiver") };
        assert_eq!(
            p.relations[0],
            vec![
                (scalar(1), vec![0, 2]),
                (scalar(-1), vec![1, 3]),
                (frac(-3, 2), vec![0, 3]),
            ]
        );
        // Three of the four length-two paths survive the single relation.
        assert_eq!(af.build().unwrap().algebra.dim(), 10);
        let again = AlgebraFile::parse("c.alg", &af.emit()).unwrap();
        assert_eq!(af, again);
    }

    #[test]
    fn algebra_files_round_trip() {
        let af = AlgebraFile::parse("lambda.alg", LAMBDA).unwrap();
        let again = AlgebraFile::parse("lambda.alg", &af.emit()).unwrap();
        assert_eq!(af, again);

        let table = "\
[meta]
format = 1
name = dual-numbers
field = Q

[structure_constants]
dim = 2
c = 1 1 1 1
c = 1 2 2 1
c = 2 1 2 1

[subalgebra]
element = 1, 0
";
        let tf = AlgebraFile::parse("dual.alg", table).unwrap();
        let again = AlgebraFile::parse("dual.alg", &tf.emit()).unwrap();
        assert_eq!(tf, again);
        let built = tf.build().unwrap();
        assert_eq!(built.algebra.dim(), 2);
        assert_eq!(built.algebra.radical().len(), 1);
        let (sub, incl) = built.subalgebra.unwrap();
        assert_eq!(sub.dim(), 1);
        assert_eq!(incl.rows(), 2);
    }

    #[test]
    fn units_are_solved_from_the_table() {
        // Basis (x, 1) of the dual numbers: the unit is the second element.
        let text = "\
[meta]
format = 1
name = swapped
field = Q

[structure_constants]
dim = 2
c = 1 2 1 1
c = 2 1 1 1
c = 2 2 2 1
";
        let built = AlgebraFile::parse("s.alg", text).unwrap().build().unwrap();
        assert_eq!(built.algebra.unit_coords(), &[scalar(0), scalar(1)]);

        let zero_entry = "\
[meta]
format = 1
name = nounit
field = Q

[structure_constants]
dim = 1
c = 1 1 1 0/3
";
        // A zero entry is rejected before the unit solve even runs.
        let e = AlgebraFile::parse("n.alg", zero_entry).unwrap_err();
        assert!(e.message.contains("zero entries"));

        let no_unit = "\
[meta]
format = 1
name = nounit
field = Q

[structure_constants]
dim = 2
c = 1 1 2 1
";
        let e = AlgebraFile::parse("n.alg", no_unit).unwrap().build().unwrap_err();
        assert!(e.message.contains("no unit"), "{e}");
    }

    #[test]
    fn diagnostics_carry_positions() {
        let bad_key = "[meta]\nformat = 1\nname = x\nfield = Q\nextra = 1\n";
        let e = AlgebraFile::parse("m.alg", bad_key).unwrap_err();
        assert_eq!(e.to_string(), "error: m.alg:5:1: unknown key `extra` in [meta]");

        let bad_arrow = "\
[meta]
format = 1
name = x
field = Q

[quiver]
vertices = u, v
arrow = a : u -> w
";
        let e = AlgebraFile::parse("q.alg", bad_arrow).unwrap_err();
        assert_eq!(e.line, 8);
        assert!(e.message.contains("endpoint"));

        let bad_rel = LAMBDA.replace("relation = b1.a1 = 0", "relation = a1.b1 = 0");
        let e = AlgebraFile::parse("r.alg", &bad_rel).unwrap_err();
        assert!(e.message.contains("does not compose"));

        let zero_den = LAMBDA.replace("b2.a2 = 0", "b2.a2 - 1/0 b2.a1 = 0");
        let e = AlgebraFile::parse("z.alg", &zero_den).unwrap_err();
        assert!(e.message.contains("bad coefficient"));
    }

    #[test]
    fn subalgebras_are_checked_against_the_ambient_algebra() {
        let base = "\
[meta]
format = 1
name = product
field = Q

[structure_constants]
dim = 2
c = 1 1 1 1
c = 2 2 2 1

[subalgebra]
";
        let good = format!("{base}element = 1, 1\n");
        let built = AlgebraFile::parse("p.alg", &good).unwrap().build().unwrap();
        let (sub, _) = built.subalgebra.unwrap();
        assert_eq!(sub.dim(), 1);

        let no_unit = format!("{base}element = 1, 0\nelement = 0, 1\nelement = 1, 1\n");
        let e = AlgebraFile::parse("p.alg", &no_unit).unwrap().build().unwrap_err();
        assert!(e.message.contains("linearly dependent"));

        let missing_unit = format!("{base}element = 1, 0\n");
        let e = AlgebraFile::parse("p.alg", &missing_unit).unwrap().build().unwrap_err();
        assert!(e.message.contains("does not contain the unit"));

        let wrong_len = format!("{base}element = 1, 0, 0\n");
        let e = AlgebraFile::parse("p.alg", &wrong_len).unwrap().build().unwrap_err();
        assert!(e.message.contains("3 coordinates"));
    }

    #[test]
    fn curve_files_parse_build_and_round_trip() {
        let text = "\
[curve]
rank = 2
base_point = inf

[point]
xi = 0
weight = 2
composition = 1, 1

[point]
xi = -1/2
weight = 2
composition = 1, 1
";
        let cf = CurveFile::parse("w.curve", text).unwrap();
        assert_eq!(cf.rank, 2);
        assert_eq!(cf.base, P1Point::Infinity);
        assert_eq!(cf.points[1].xi, P1Point::Finite(frac(-1, 2)));
        let again = CurveFile::parse("w.curve", &cf.emit()).unwrap();
        assert_eq!(cf, again);
        let curve = cf.build().unwrap();
        assert_eq!(curve.points().len(), 2);

        let bad = text.replace("composition = 1, 1\n\n[point]", "composition = 1, 2\n\n[point]");
        let e = CurveFile::parse("w.curve", &bad).unwrap().build().unwrap_err();
        assert!(e.message.contains("sum to the rank"), "{e}");
        assert_eq!(e.line, 1);

        let unknown = text.replace("weight = 2", "weight = 2\ncolour = blue");
        let e = CurveFile::parse("w.curve", &unknown).unwrap_err();
        assert!(e.message.contains("unknown key `colour`"));
    }
}
