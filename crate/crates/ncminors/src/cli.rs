//! Command-line driver: loads algebra and curve files, dispatches to the
//! library, and prints line-oriented reports.
//!
//! Exit codes: 0 when every check in the report passes, 1 when a
//! mathematical check fails (the report says which), 2 for input errors,
//! which are diagnosed on standard error as `error: FILE:LINE:COL: MESSAGE`.
//!
//! Reports are byte-stable: the same invocation on the same input always
//! prints the same bytes. Setting NCMINORS_CACHE_DIR to a writable directory
//! memoizes reports keyed by the subcommand, its flags, and the input file
//! contents; the variable is unset by default and nothing is cached then.

use crate::algebra::{Algebra, AlgebraElement, PathWord, QuiverAlgebra, Representation};
use crate::exactla::{Mat, Scalar, SpanAccumulator};
use crate::format::{AlgebraFile, CurveFile, ParseError};
use crate::hcurve::{self, HcurveError, WeightedP1};
use crate::homalg::{self, Dim};
use crate::minors::{self, MinorsError};
use crate::report::{CheckResult, Report};
use clap::{Args, Parser, Subcommand};
use num_traits::{One, Zero};
use std::path::PathBuf;

enum CliError {
    Parse(ParseError),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::Parse(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "ncminors",
    version,
    about = "Corner algebras of finite-dimensional algebras, their recollement \
             checks, and the tilting calculus of weighted projective lines"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct AlgebraOpt {
    /// Algebra file in the .alg format
    #[arg(long, value_name = "FILE")]
    algebra: PathBuf,
}

#[derive(Args)]
struct CurveOpt {
    /// Curve file in the .curve format
    #[arg(long, value_name = "FILE")]
    curve: PathBuf,
}

#[derive(Args)]
struct OutOpt {
    /// Also write the report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapOpt {
    /// Resolution and search depth for homological computations
    #[arg(long, value_name = "N", default_value_t = 12)]
    cap: usize,
}

#[derive(Args)]
struct IdemOpt {
    /// Sum of primitive idempotent labels, e.g. "e1+e2"
    #[arg(long, value_name = "LABELS")]
    idempotent: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Corner algebra eAe at an idempotent
    Minor {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        idem: IdemOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Two-sided ideal generated by an idempotent
    TraceIdeal {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        idem: IdemOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Adjunction, kernel, and orthogonality checks for a corner
    Recollement {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        idem: IdemOpt,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Global dimension
    Gldim {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Ext dimensions between two modules
    Ext {
        #[command(flatten)]
        alg: AlgebraOpt,
        /// Module spec (give twice: source then target); one of
        /// regular, simple:<idem>, projective:<idem>
        #[arg(long = "module", value_name = "SPEC")]
        modules: Vec<String>,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Injective dimension of a module
    InjDim {
        #[command(flatten)]
        alg: AlgebraOpt,
        /// Module spec: regular, simple:<idem>, or projective:<idem>
        #[arg(long = "module", value_name = "SPEC")]
        module: String,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Quasi-heredity test and heredity chain search
    Qhered {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Global dimension bound through a corner and its trace ideal
    GldimBound {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        idem: IdemOpt,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Ext orthogonality between induced projectives and quotient simples
    Semiorth {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        idem: IdemOpt,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Doubled algebra [[A, F], [F*, E]] over a module F
    Endo {
        #[command(flatten)]
        alg: AlgebraOpt,
        /// Module spec: regular, simple:<idem>, or projective:<idem>
        #[arg(long = "module", value_name = "SPEC")]
        module: String,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Glue a subalgebra along its conductor; needs a [subalgebra] section
    Glue {
        #[command(flatten)]
        alg: AlgebraOpt,
        #[command(flatten)]
        cap: CapOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Hom/Ext dimension table over the canonical sheaf collection
    CurveHomTable {
        #[command(flatten)]
        curve: CurveOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Endomorphism algebra of the tilting collection
    CurveTilting {
        #[command(flatten)]
        curve: CurveOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Local hereditary orders at the special points
    CurveLocalOrder {
        #[command(flatten)]
        curve: CurveOpt,
        #[command(flatten)]
        out: OutOpt,
    },
    /// Match the tilting endomorphism algebra against a canonical algebra
    Canonical {
        #[command(flatten)]
        curve: CurveOpt,
        #[command(flatten)]
        out: OutOpt,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}

// ---------------------------------------------------------------------------
// Input loading and name resolution
// ---------------------------------------------------------------------------

struct Loaded {
    name: String,
    algebra: Algebra,
    quiver: Option<QuiverAlgebra>,
    subalgebra: Option<(Algebra, Mat)>,
}

fn read_file(path: &PathBuf) -> Result<(String, String)> {
    let label = path.display().to_string();
    match std::fs::read_to_string(path) {
        Ok(text) => Ok((label, text)),
        Err(e) => Err(CliError::Input(format!("cannot read {label}: {e}"))),
    }
}

fn load_algebra(path: &PathBuf) -> Result<Loaded> {
    let (label, text) = read_file(path)?;
    let built = AlgebraFile::parse(&label, &text)?.build()?;
    Ok(Loaded {
        name: built.name,
        algebra: built.algebra,
        quiver: built.quiver,
        subalgebra: built.subalgebra,
    })
}

fn load_curve(path: &PathBuf) -> Result<(WeightedP1, String)> {
    let (label, text) = read_file(path)?;
    let curve = CurveFile::parse(&label, &text)?.build()?;
    Ok((curve, text))
}

impl Loaded {
    /// Primitive idempotents with their user-facing labels: quiver vertex
    /// names when the file gave a quiver, e1..ek in computed order otherwise.
    fn idempotent_table(&self) -> Result<(Vec<String>, Vec<AlgebraElement>)> {
        match &self.quiver {
            Some(qa) => {
                let labels = qa.presentation.vertices.clone();
                let idems = qa
                    .vertex_idempotent_index
                    .iter()
                    .map(|&i| self.algebra.basis_element(i))
                    .collect();
                Ok((labels, idems))
            }
            None => {
                let idems = self.algebra.primitive_idempotents().map_err(|e| {
                    CliError::Input(format!(
                        "cannot enumerate primitive idempotents of {}: {e}",
                        self.name
                    ))
                })?;
                let labels = (1..=idems.len()).map(|i| format!("e{i}")).collect();
                Ok((labels, idems))
            }
        }
    }

    fn resolve_idempotent(&self, text: &str) -> Result<AlgebraElement> {
        let (labels, idems) = self.idempotent_table()?;
        let mut used: Vec<usize> = Vec::new();
        let mut sum: Option<AlgebraElement> = None;
        for part in text.split('+') {
            let part = part.trim();
            let Some(i) = labels.iter().position(|l| l == part) else {
                return Err(CliError::Input(format!(
                    "unknown idempotent label `{part}`; available: {}",
                    labels.join(", ")
                )));
            };
            if used.contains(&i) {
                return Err(CliError::Input(format!("idempotent label `{part}` repeats")));
            }
            used.push(i);
            sum = Some(match sum {
                None => idems[i].clone(),
                Some(s) => s.add(&idems[i]).expect("same parent"),
            });
        }
        sum.ok_or_else(|| CliError::Input("empty idempotent expression".into()))
    }

    /// A named module: regular, simple:<label>, or projective:<label>.
    fn resolve_module(&self, spec: &str) -> Result<Representation> {
        if spec == "regular" {
            return Ok(self.algebra.regular_module());
        }
        let Some((kind, label)) = spec.split_once(':') else {
            return Err(CliError::Input(format!(
                "module spec `{spec}` is not regular, simple:<idem>, or projective:<idem>"
            )));
        };
        let (labels, _) = self.idempotent_table()?;
        let Some(i) = labels.iter().position(|l| l == label) else {
            return Err(CliError::Input(format!(
                "unknown idempotent label `{label}`; available: {}",
                labels.join(", ")
            )));
        };
        match (kind, &self.quiver) {
            ("simple", Some(qa)) => Ok(vertex_simple(qa, i)),
            ("projective", Some(qa)) => Ok(vertex_projective(qa, i)),
            ("simple", None) => {
                let simples = self.algebra.simple_modules().map_err(|e| {
                    CliError::Input(format!("cannot list simple modules: {e}"))
                })?;
                Ok(simples[i].clone())
            }
            ("projective", None) => {
                let projs = self.algebra.indecomposable_projectives().map_err(|e| {
                    CliError::Input(format!("cannot list projective modules: {e}"))
                })?;
                Ok(projs[i].rep.clone())
            }
            _ => Err(CliError::Input(format!(
                "module spec `{spec}` is not regular, simple:<idem>, or projective:<idem>"
            ))),
        }
    }
}

/// One-dimensional module at a vertex: the trivial path there acts as the
/// identity and every other basis path acts as zero.
fn vertex_simple(qa: &QuiverAlgebra, v: usize) -> Representation {
    let ev = qa.vertex_idempotent_index[v];
    let dim = qa.algebra.dim();
    let action = (0..dim)
        .map(|b| {
            Mat::from_rows(vec![vec![if b == ev { Scalar::one() } else { Scalar::zero() }]])
        })
        .collect();
    Representation::new(qa.algebra.clone(), 1, action).expect("vertex simple is a module")
}

fn path_source(qa: &QuiverAlgebra, p: &PathWord) -> usize {
    match p {
        PathWord::Trivial(u) => *u,
        PathWord::Arrows(w) => qa.presentation.arrows[w[0]].source,
    }
}

/// Indecomposable projective at a vertex: the span of basis paths starting
/// there, under left multiplication.
fn vertex_projective(qa: &QuiverAlgebra, v: usize) -> Representation {
    let dim = qa.algebra.dim();
    let members: Vec<usize> =
        (0..dim).filter(|&i| path_source(qa, &qa.basis_paths[i]) == v).collect();
    let slot: Vec<Option<usize>> = {
        let mut s = vec![None; dim];
        for (k, &m) in members.iter().enumerate() {
            s[m] = Some(k);
        }
        s
    };
    let k = members.len();
    let action = (0..dim)
        .map(|b| {
            let mut m = Mat::zero(k, k);
            for (col, &p) in members.iter().enumerate() {
                for (idx, c) in qa.algebra.table(b, p).iter().enumerate() {
                    if !c.is_zero() {
                        let row = slot[idx].expect("left multiplication preserves the source");
                        m[(row, col)] = c.clone();
                    }
                }
            }
            m
        })
        .collect();
    Representation::new(qa.algebra.clone(), k, action).expect("vertex projective is a module")
}

// ---------------------------------------------------------------------------
// Dispatch with the optional report cache
// ---------------------------------------------------------------------------

fn execute(cmd: &Cmd) -> Result<i32> {
    let (key, out) = cache_key(cmd)?;
    if let Some(dir) = std::env::var_os("NCMINORS_CACHE_DIR") {
        let path = PathBuf::from(dir).join(format!("{:016x}.report", fnv1a(key.as_bytes())));
        if let Ok(cached) = std::fs::read_to_string(&path) {
            if let Some((head, body)) = cached.split_once('\n') {
                if let Some(code) = head.strip_prefix("exit = ").and_then(|c| c.parse().ok()) {
                    return emit(body, code, &out);
                }
            }
        }
        let (report, code) = build_report(cmd)?;
        let _ = std::fs::create_dir_all(path.parent().unwrap());
        let _ = std::fs::write(&path, format!("exit = {code}\n{}", report));
        return emit(&report, code, &out);
    }
    let (report, code) = build_report(cmd)?;
    emit(&report, code, &out)
}

fn emit(report: &str, code: i32, out: &Option<PathBuf>) -> Result<i32> {
    print!("{report}");
    if let Some(path) = out {
        std::fs::write(path, report).map_err(|e| {
            CliError::Input(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    Ok(code)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Cache key (subcommand, flags, input file bytes) and the --out target.
fn cache_key(cmd: &Cmd) -> Result<(String, Option<PathBuf>)> {
    let file = |p: &PathBuf| -> Result<String> { Ok(read_file(p)?.1) };
    Ok(match cmd {
        Cmd::Minor { alg, idem, out } => {
            (format!("minor\0{}\0{}", idem.idempotent, file(&alg.algebra)?), out.out.clone())
        }
        Cmd::TraceIdeal { alg, idem, out } => (
            format!("trace-ideal\0{}\0{}", idem.idempotent, file(&alg.algebra)?),
            out.out.clone(),
        ),
        Cmd::Recollement { alg, idem, cap, out } => (
            format!("recollement\0{}\0{}\0{}", idem.idempotent, cap.cap, file(&alg.algebra)?),
            out.out.clone(),
        ),
        Cmd::Gldim { alg, cap, out } => {
            (format!("gldim\0{}\0{}", cap.cap, file(&alg.algebra)?), out.out.clone())
        }
        Cmd::Ext { alg, modules, cap, out } => (
            format!("ext\0{}\0{}\0{}", modules.join("\0"), cap.cap, file(&alg.algebra)?),
            out.out.clone(),
        ),
        Cmd::InjDim { alg, module, cap, out } => (
            format!("inj-dim\0{module}\0{}\0{}", cap.cap, file(&alg.algebra)?),
            out.out.clone(),
        ),
        Cmd::Qhered { alg, cap, out } => {
            (format!("qhered\0{}\0{}", cap.cap, file(&alg.algebra)?), out.out.clone())
        }
        Cmd::GldimBound { alg, idem, cap, out } => (
            format!("gldim-bound\0{}\0{}\0{}", idem.idempotent, cap.cap, file(&alg.algebra)?),
            out.out.clone(),
        ),
        Cmd::Semiorth { alg, idem, cap, out } => (
            format!("semiorth\0{}\0{}\0{}", idem.idempotent, cap.cap, file(&alg.algebra)?),
            out.out.clone(),
        ),
        Cmd::Endo { alg, module, out } => {
            (format!("endo\0{module}\0{}", file(&alg.algebra)?), out.out.clone())
        }
        Cmd::Glue { alg, cap, out } => {
            (format!("glue\0{}\0{}", cap.cap, file(&alg.algebra)?), out.out.clone())
        }
        Cmd::CurveHomTable { curve, out } => {
            (format!("curve-hom-table\0{}", file(&curve.curve)?), out.out.clone())
        }
        Cmd::CurveTilting { curve, out } => {
            (format!("curve-tilting\0{}", file(&curve.curve)?), out.out.clone())
        }
        Cmd::CurveLocalOrder { curve, out } => {
            (format!("curve-local-order\0{}", file(&curve.curve)?), out.out.clone())
        }
        Cmd::Canonical { curve, out } => {
            (format!("canonical\0{}", file(&curve.curve)?), out.out.clone())
        }
    })
}

fn build_report(cmd: &Cmd) -> Result<(String, i32)> {
    let r = match cmd {
        Cmd::Minor { alg, idem, .. } => minor_report(alg, idem)?,
        Cmd::TraceIdeal { alg, idem, .. } => trace_ideal_report(alg, idem)?,
        Cmd::Recollement { alg, idem, cap, .. } => recollement_cmd(alg, idem, cap)?,
        Cmd::Gldim { alg, cap, .. } => gldim_report(alg, cap)?,
        Cmd::Ext { alg, modules, cap, .. } => ext_report(alg, modules, cap)?,
        Cmd::InjDim { alg, module, cap, .. } => inj_dim_report(alg, module, cap)?,
        Cmd::Qhered { alg, cap, .. } => qhered_report(alg, cap)?,
        Cmd::GldimBound { alg, idem, cap, .. } => gldim_bound_report(alg, idem, cap)?,
        Cmd::Semiorth { alg, idem, cap, .. } => semiorth_report(alg, idem, cap)?,
        Cmd::Endo { alg, module, .. } => endo_report(alg, module)?,
        Cmd::Glue { alg, cap, .. } => glue_report(alg, cap)?,
        Cmd::CurveHomTable { curve, .. } => curve_hom_table_report(curve)?,
        Cmd::CurveTilting { curve, .. } => curve_tilting_report(curve)?,
        Cmd::CurveLocalOrder { curve, .. } => curve_local_order_report(curve)?,
        Cmd::Canonical { curve, .. } => canonical_report(curve)?,
    };
    let code = if r.all_pass() { 0 } else { 1 };
    Ok((r.render(), code))
}

fn math(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

// ---------------------------------------------------------------------------
// Algebra subcommands
// ---------------------------------------------------------------------------

fn header(r: &mut Report, sub: &str, l: &Loaded) {
    r.kv("subcommand", sub);
    r.kv("algebra", &l.name);
    r.kv("algebra dim", l.algebra.dim());
}

/// Gabriel-style sketch: number of primitive idempotents and the arrow
/// counts dim e_j (rad / rad^2) e_i between them, written i -> j.
fn quiver_sketch(r: &mut Report, prefix: &str, a: &Algebra) {
    let Ok(idems) = a.primitive_idempotents() else {
        r.kv(&format!("{prefix} quiver"), "not computed (top is not split basic)");
        return;
    };
    r.kv(&format!("{prefix} vertices"), idems.len());
    let rad = a.radical();
    let mut rad2 = SpanAccumulator::new(a.dim());
    for x in rad {
        for y in rad {
            rad2.insert(&a.mul_coords(x, y));
        }
    }
    for (i, ei) in idems.iter().enumerate() {
        for (j, ej) in idems.iter().enumerate() {
            let mut acc = rad2.clone();
            let mut count = 0;
            for x in rad {
                let w = a.mul_coords(ej.coords(), &a.mul_coords(x, ei.coords()));
                if acc.insert(&w) {
                    count += 1;
                }
            }
            if count > 0 {
                r.kv(&format!("{prefix} arrows e{} -> e{}", i + 1, j + 1), count);
            }
        }
    }
}

fn minor_report(alg: &AlgebraOpt, idem: &IdemOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let e = l.resolve_idempotent(&idem.idempotent)?;
    let md = minors::minor(&l.algebra, &e).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "minor", &l);
    r.kv("idempotent", &idem.idempotent);
    r.kv("corner dim", md.corner().dim());
    r.kv("corner radical dim", md.corner().radical().len());
    quiver_sketch(&mut r, "corner", md.corner());
    r.check(&CheckResult::pass(
        "corner associativity and unit",
        format!("validated on {} basis elements", md.corner().dim()),
    ));
    Ok(r)
}

fn trace_ideal_report(alg: &AlgebraOpt, idem: &IdemOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let e = l.resolve_idempotent(&idem.idempotent)?;
    let ideal = minors::trace_ideal(&l.algebra, &e).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "trace-ideal", &l);
    r.kv("idempotent", &idem.idempotent);
    r.kv("trace ideal dim", ideal.dim());
    r.check(&CheckResult::of(
        "trace ideal idempotency",
        ideal.is_idempotent_ideal(),
        "I*I spans I",
    ));
    let (right, _) = ideal.as_right_module_over_op();
    let verdict = match homalg::is_projective(&right) {
        Ok(true) => "yes".to_string(),
        Ok(false) => "no".to_string(),
        Err(e) => format!("not computed ({e})"),
    };
    r.kv("trace ideal right projective", verdict);
    let (quotient, _, _) = ideal.quotient();
    r.kv("quotient dim", quotient.dim());
    Ok(r)
}

fn recollement_cmd(alg: &AlgebraOpt, idem: &IdemOpt, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let e = l.resolve_idempotent(&idem.idempotent)?;
    let md = minors::minor(&l.algebra, &e).map_err(math)?;
    let outcome = minors::recollement_report(&md, None, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "recollement", &l);
    r.kv("idempotent", &idem.idempotent);
    r.kv("cap", cap.cap);
    r.kv("corner dim", md.corner().dim());
    r.kv("trace ideal dim", outcome.trace_dim);
    r.kv("quotient dim", outcome.quotient_dim);
    for c in &outcome.checks {
        // Right projectivity of the trace ideal is a hypothesis, not a
        // theorem: its honest value is data, never a failure.
        if c.name == "trace ideal right projective" {
            r.kv(
                "trace ideal right projective",
                format!("{} ({})", if c.pass { "yes" } else { "no" }, c.witness),
            );
        } else {
            r.check(c);
        }
    }
    Ok(r)
}

fn gldim_report(alg: &AlgebraOpt, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let g = homalg::global_dim(&l.algebra, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "gldim", &l);
    r.kv("cap", cap.cap);
    r.kv("global dimension", g);
    Ok(r)
}

fn ext_report(alg: &AlgebraOpt, modules: &[String], cap: &CapOpt) -> Result<Report> {
    if modules.len() != 2 {
        return Err(CliError::Input(
            "ext needs exactly two --module arguments (source, then target)".into(),
        ));
    }
    let l = load_algebra(&alg.algebra)?;
    let m = l.resolve_module(&modules[0])?;
    let n = l.resolve_module(&modules[1])?;
    let dims = homalg::ext_dims_up_to(&m, &n, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "ext", &l);
    r.kv("module M", &modules[0]);
    r.kv("module N", &modules[1]);
    r.kv("cap", cap.cap);
    let rows: Vec<Vec<String>> = std::iter::once(vec!["i".to_string(), "dim".to_string()])
        .chain(dims.iter().enumerate().map(|(i, d)| vec![i.to_string(), d.to_string()]))
        .collect();
    r.table("ext dimensions", &rows);
    Ok(r)
}

fn inj_dim_report(alg: &AlgebraOpt, module: &str, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let m = l.resolve_module(module)?;
    let d = homalg::inj_dim(&m, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "inj-dim", &l);
    r.kv("module", module);
    r.kv("cap", cap.cap);
    r.kv("injective dimension", d);
    Ok(r)
}

fn qhered_report(alg: &AlgebraOpt, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let classical = homalg::is_quasi_hereditary_classical(&l.algebra, cap.cap).map_err(math)?;
    let chain = homalg::heredity_chain_search(&l.algebra, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "qhered", &l);
    r.kv("cap", cap.cap);
    r.kv("classical quasi-hereditary", if classical { "yes" } else { "no" });
    match chain {
        None => r.kv("heredity chain found", "no"),
        Some(chain) => {
            r.kv("heredity chain found", "yes");
            r.kv("chain length", chain.level());
            let mut rows = vec![vec![
                "level".to_string(),
                "support".to_string(),
                "trace dim".to_string(),
                "corner gldim".to_string(),
                "quotient dim".to_string(),
            ]];
            for (i, s) in chain.steps.iter().enumerate() {
                rows.push(vec![
                    (i + 1).to_string(),
                    s.support.join("+"),
                    s.trace_dim.to_string(),
                    s.corner_gldim.to_string(),
                    s.quotient_dim.to_string(),
                ]);
            }
            r.table("heredity chain", &rows);
            let g = homalg::global_dim(&l.algebra, cap.cap).map_err(math)?;
            let bound = 2 * chain.level() + 1;
            r.kv("global dimension", g);
            r.check(&CheckResult::of(
                "global dimension within chain bound",
                g.le(Dim::Finite(bound)) == Some(true),
                format!("{g} <= {bound}"),
            ));
        }
    }
    Ok(r)
}

fn gldim_bound_report(alg: &AlgebraOpt, idem: &IdemOpt, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let e = l.resolve_idempotent(&idem.idempotent)?;
    let b = homalg::gldim_bound_check(&l.algebra, &e, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "gldim-bound", &l);
    r.kv("idempotent", &idem.idempotent);
    r.kv("cap", cap.cap);
    r.kv("corner global dimension (n)", b.n);
    r.kv("quotient global dimension (m)", b.m);
    r.kv("trace ideal projective dimension (d)", b.d);
    r.kv("global dimension", b.gldim);
    r.kv("bound max(m + d + 2, n)", b.bound);
    r.kv(
        "hypothesis: Be projective over the corner",
        if b.hypothesis_holds { "yes" } else { "no" },
    );
    if !b.hypothesis_holds {
        r.kv("bound status", "not asserted (hypothesis fails)");
    } else {
        match b.inequality_holds {
            None => r.kv("bound status", format!("undecided at cap {}", cap.cap)),
            Some(ok) => r.check(&CheckResult::of(
                "global dimension within bound",
                ok,
                format!("{} <= {}", b.gldim, b.bound),
            )),
        }
    }
    Ok(r)
}

fn semiorth_report(alg: &AlgebraOpt, idem: &IdemOpt, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let e = l.resolve_idempotent(&idem.idempotent)?;
    let check = homalg::semiorthogonality_check(&l.algebra, &e, cap.cap).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "semiorth", &l);
    r.kv("idempotent", &idem.idempotent);
    r.kv("cap", cap.cap);
    r.check(&check);
    Ok(r)
}

fn endo_report(alg: &AlgebraOpt, module: &str) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let f = l.resolve_module(module)?;
    let data = minors::endomorphism_construction(&l.algebra, &f).map_err(math)?;
    let mut r = Report::new();
    header(&mut r, "endo", &l);
    r.kv("module", module);
    r.kv(
        "part dimensions a, f, f*, end",
        format!("{}, {}, {}, {}", data.a_dim, data.f_dim, data.dual_dim, data.end_dim),
    );
    r.kv("doubled algebra dim", data.algebra.dim());
    r.kv("distinguished idempotent", data.distinguished.display());
    r.check(&CheckResult::pass(
        "corner recovers the input",
        format!("dimension {} and all products match", data.a_dim),
    ));
    Ok(r)
}

fn glue_report(alg: &AlgebraOpt, cap: &CapOpt) -> Result<Report> {
    let l = load_algebra(&alg.algebra)?;
    let Some((sub, incl)) = &l.subalgebra else {
        return Err(CliError::Input(format!(
            "glue needs a [subalgebra] section in {}",
            alg.algebra.display()
        )));
    };
    let mut r = Report::new();
    r.kv("subcommand", "glue");
    r.kv("algebra", &l.name);
    r.kv("ambient dim", l.algebra.dim());
    r.kv("subalgebra dim", sub.dim());
    match minors::subhereditary_glue(sub, &l.algebra, incl) {
        Ok(data) => {
            r.kv("conductor dim", data.conductor_dim);
            r.kv("glued algebra dim", data.algebra.dim());
            r.kv("trace ideal dim", data.trace_dim);
            r.kv("quotient dim", data.quotient.dim());
            r.check(&CheckResult::pass(
                "gluing quotient semisimple",
                format!("dim {}", data.quotient.dim()),
            ));
            let g = homalg::global_dim(&data.algebra, cap.cap).map_err(math)?;
            r.kv("glued global dimension", g);
            r.check(&CheckResult::of(
                "glued global dimension at most two",
                g.le(Dim::Finite(2)) == Some(true),
                format!("{g} <= 2"),
            ));
        }
        Err(e @ MinorsError::QuotientNotSemisimple { .. }) => {
            r.check(&CheckResult::fail("gluing quotient semisimple", e.to_string()));
        }
        Err(e) => return Err(math(e)),
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Curve subcommands
// ---------------------------------------------------------------------------

fn curve_header(r: &mut Report, sub: &str, curve: &WeightedP1) {
    r.kv("subcommand", sub);
    r.kv("rank", curve.rank());
    r.kv("base point", curve.base());
    r.kv("special points", curve.points().len());
}

fn curve_error(e: HcurveError) -> CliError {
    CliError::Input(e.to_string())
}

fn curve_hom_table_report(curve: &CurveOpt) -> Result<Report> {
    let (curve, _) = load_curve(&curve.curve)?;
    let objects = hcurve::tilting_set(&curve);
    let mut r = Report::new();
    curve_header(&mut r, "curve-hom-table", &curve);
    let labels: Vec<String> = objects.iter().map(|(l, _)| l.clone()).collect();
    r.kv("objects", labels.join(", "));

    let mut hom_rows = vec![];
    let mut ext_rows = vec![];
    let mut head = vec!["src\\tgt".to_string()];
    head.extend(labels.iter().cloned());
    hom_rows.push(head.clone());
    ext_rows.push(head);
    let mut ext_total = 0usize;
    let mut defect_failure: Option<String> = None;
    for (lu, u) in &objects {
        let mut h0_row = vec![lu.clone()];
        let mut h1_row = vec![lu.clone()];
        for (lv, v) in &objects {
            let (h0, h1) = hcurve::hom_and_ext_dims(u, v).map_err(curve_error)?;
            h0_row.push(h0.to_string());
            h1_row.push(h1.to_string());
            ext_total += h1;
            let fwd = hcurve::hom_divisor(u, v).map_err(curve_error)?.degree();
            let bwd = hcurve::hom_divisor(v, u).map_err(curve_error)?.degree();
            let expected_zero = u.chain() == v.chain();
            if (fwd + bwd > 0) || ((fwd + bwd == 0) != expected_zero) {
                defect_failure.get_or_insert(format!("{lu} vs {lv}"));
            }
        }
        hom_rows.push(h0_row);
        ext_rows.push(h1_row);
    }
    r.table("hom dimensions", &hom_rows);
    r.table("ext dimensions", &ext_rows);
    let pairs = objects.len() * objects.len();
    r.check(&CheckResult::of(
        "ext vanishing",
        ext_total == 0,
        format!("{pairs} pairs"),
    ));
    r.check(&match defect_failure {
        None => CheckResult::pass("hom duality defect", format!("{pairs} pairs")),
        Some(w) => CheckResult::fail("hom duality defect", w),
    });
    Ok(r)
}

fn curve_tilting_report(curve: &CurveOpt) -> Result<Report> {
    let (curve, _) = load_curve(&curve.curve)?;
    let mut r = Report::new();
    curve_header(&mut r, "curve-tilting", &curve);
    let labels: Vec<String> =
        hcurve::tilting_set(&curve).iter().map(|(l, _)| l.clone()).collect();
    r.kv("objects", labels.join(", "));
    match hcurve::tilting_endomorphism_algebra(&curve) {
        Ok((endt, _)) => {
            r.kv("endomorphism algebra dim", endt.dim());
            r.kv("endomorphism radical dim", endt.radical().len());
            r.check(&CheckResult::pass(
                "tilting endomorphism algebra valid",
                format!("associativity and unit verified on {} basis elements", endt.dim()),
            ));
        }
        Err(HcurveError::TiltingObstruction(src, tgt, d)) => {
            r.check(&CheckResult::fail(
                "tilting endomorphism algebra valid",
                format!("ext({src}, {tgt}) has dimension {d}"),
            ));
        }
        Err(e) => return Err(curve_error(e)),
    }
    Ok(r)
}

fn curve_local_order_report(curve: &CurveOpt) -> Result<Report> {
    let (curve, _) = load_curve(&curve.curve)?;
    let mut r = Report::new();
    curve_header(&mut r, "curve-local-order", &curve);
    for (j, p) in curve.points().iter().enumerate() {
        let tag = format!("point x{}", j + 1);
        r.kv(&tag, &p.xi);
        let comp: Vec<String> = p.composition.iter().map(|n| n.to_string()).collect();
        r.kv(&format!("{tag} composition"), comp.join(", "));
        let order = hcurve::local_order(&p.composition).map_err(curve_error)?;
        let rows: Vec<Vec<String>> = order
            .valuation_pattern()
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        r.table(&format!("{tag} valuation pattern"), &rows);
        let morita = hcurve::morita_canonical_form(&p.composition).map_err(curve_error)?;
        let morita: Vec<String> = morita.iter().map(|n| n.to_string()).collect();
        r.kv(&format!("{tag} morita form"), morita.join(", "));
        let simples = order.chain_simples();
        r.kv(&format!("{tag} global dimension"), order.global_dim());
        r.check(&CheckResult::of(
            &format!("{tag} simples have projective dimension one"),
            simples.iter().all(|s| s.proj_dim == 1),
            format!("{} simples", simples.len()),
        ));
    }
    Ok(r)
}

fn canonical_report(curve: &CurveOpt) -> Result<Report> {
    let (curve, _) = load_curve(&curve.curve)?;
    let mut r = Report::new();
    curve_header(&mut r, "canonical", &curve);
    let (endt, objects) = match hcurve::tilting_endomorphism_algebra(&curve) {
        Ok(x) => x,
        Err(HcurveError::TiltingObstruction(src, tgt, d)) => {
            r.check(&CheckResult::fail(
                "matches a canonical algebra",
                format!("tilting fails first: ext({src}, {tgt}) has dimension {d}"),
            ));
            return Ok(r);
        }
        Err(e) => return Err(curve_error(e)),
    };
    r.kv("endomorphism algebra dim", endt.dim());
    match hcurve::match_canonical(&endt, &objects) {
        Ok(m) => {
            let weights: Vec<String> = m.weights.iter().map(|w| w.to_string()).collect();
            r.kv("weights", weights.join(", "));
            if m.lambdas.is_empty() {
                r.kv("lambdas", "none");
            } else {
                let ls: Vec<String> = m.lambdas.iter().map(|x| x.to_string()).collect();
                r.kv("lambdas", ls.join(", "));
            }
            r.kv("canonical algebra dim", m.algebra.algebra.dim());
            r.kv("canonical relations", m.canonical.presentation.relations.len());
            r.check(&CheckResult::pass(
                "matches a canonical algebra",
                format!("bijective homomorphism on {} basis elements", endt.dim()),
            ));
        }
        Err(HcurveError::NotCanonicalShape(w)) => {
            r.check(&CheckResult::fail("matches a canonical algebra", w));
        }
        Err(e) => return Err(curve_error(e)),
    }
    Ok(r)
}
