//! The `conformal` command-line tool, as a library so it can be driven from
//! tests. [`run`] never touches the process's stdout or exit status.
//!
//! Exit codes: 0 ok, 2 parse or usage error, 3 resonant weight,
//! 4 not invariant, 5 empty classification, 6 I/O error.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::action::{BilinearContext, LinearContext};
use crate::bilinear::{classify_bilinear, table_latex, table_text, verify_invariance, BilinearOperator, CoeffTable};
use crate::conformal::{Signature, Weight};
use crate::error::Error;
use crate::linear::{classify_linear, LinearOperatorSymbol};
use crate::oracle::{apply_bilinear, oracle_residual_all, DensityPoly, ResidualRecord};
use crate::poly::{Family, SymbolPoly};
use crate::rational::{format_rational, latex_rational, parse_rational, Rational};
use crate::transvectant::{apply_transvectant, sl2_residual, transvectant_coefficients, Poly1D};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESONANT: i32 = 3;
pub const EXIT_NOT_INVARIANT: i32 = 4;
pub const EXIT_EMPTY: i32 = 5;
pub const EXIT_IO: i32 = 6;

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResonantWeight { .. } => EXIT_RESONANT,
        Error::InconsistentSystem(_) => EXIT_NOT_INVARIANT,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_PARSE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "conformal", version, about = "Conformally invariant (bi)linear operators on tensor densities")]
struct Cli {
    /// Report wall-clock time on stderr.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build B_2k from the coefficient recurrences.
    ConstructBilinear {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        mu: Weight,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant linear operators F_λ → F_μ of order at most --max-order.
    ClassifyLinear {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        mu: Weight,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant bilinear operators F_λ ⊗ F_μ → F_ν up to level --k-max.
    ClassifyBilinear {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        mu: Weight,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        nu: Weight,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Check an operator file (stdin if no --input) for invariance.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also apply the operator to test densities.
        #[arg(long)]
        oracle: bool,
        /// Degree bound for the oracle's test monomials; default 2k+2.
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Apply an operator file, or the constructed B_2k, to two densities.
    Apply {
        #[arg(long, conflicts_with_all = ["k", "lambda", "mu"])]
        input: Option<PathBuf>,
        #[command(flatten)]
        space: Space,
        #[arg(long, requires_all = ["lambda", "mu"])]
        k: Option<usize>,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        lambda: Option<Weight>,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        mu: Option<Weight>,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        out: Output,
    },
    /// One-dimensional transvectant coefficients, optionally applied.
    Transvectant {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        mu: Weight,
        #[arg(long, requires = "g", allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, requires = "f", allow_hyphen_values = true)]
        g: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Kernel dimension at ν = λ + μ + j/n for j = 0..=2 k_max.
    Scan {
        #[command(flatten)]
        space: Space,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        lambda: Weight,
        #[arg(long, value_parser = weight, allow_hyphen_values = true)]
        mu: Weight,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Space {
    /// Dimension; the signature defaults to (n,0).
    #[arg(long)]
    n: Option<usize>,
    /// `p,q`.
    #[arg(long)]
    signature: Option<Signature>,
}

impl Space {
    fn resolve(&self) -> Result<Signature, Error> {
        match (self.n, self.signature) {
            (_, Some(sig)) if self.n.is_some_and(|n| n != sig.dimension()) => {
                Err(Error::Parse(format!("--n {} does not match --signature {sig}", self.n.unwrap())))
            }
            (_, Some(sig)) => Ok(sig),
            (Some(n), None) => Signature::new(n, 0),
            (None, None) => Err(Error::Parse("one of --n or --signature is required".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn weight(text: &str) -> Result<Weight, String> {
    parse_rational(text).map(Weight).map_err(|e| e.to_string())
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(err: &Error) -> Self {
        Outcome { code: exit_code(err), stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

/// Rendered output and its exit status, before routing to a file.
struct Report {
    code: i32,
    body: String,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { code: EXIT_OK, body }
    }
}

/// Runs one invocation. `args` includes the program name; `stdin` is read
/// only by `verify` without `--input`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    let (report, out) = match dispatch(cli.command, stdin) {
        Ok(pair) => pair,
        Err(err) => return Outcome::error(&err),
    };
    let mut stderr = String::new();
    if cli.timing {
        writeln!(stderr, "elapsed: {} ms", start.elapsed().as_millis()).unwrap();
    }
    let stdout = match &out.output {
        Some(path) => match std::fs::write(path, &report.body) {
            Ok(()) => String::new(),
            Err(e) => return Outcome::error(&Error::Io(e)),
        },
        None => report.body,
    };
    Outcome { code: report.code, stdout, stderr }
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Result<(Report, Output), Error> {
    Ok(match command {
        Command::ConstructBilinear { space, k, lambda, mu, out } => {
            let op = BilinearOperator::construct(space.resolve()?, k, lambda, mu)?;
            (Report::ok(emit_operator(&op, out.format)), out)
        }
        Command::ClassifyLinear { space, lambda, mu, max_order, out } => {
            let ctx = LinearContext::new(space.resolve()?, lambda, mu);
            (linear_report(&ctx, max_order, out.format)?, out)
        }
        Command::ClassifyBilinear { space, lambda, mu, nu, k_max, out } => {
            let ctx = BilinearContext::new(space.resolve()?, lambda, mu, nu);
            (bilinear_report(&ctx, k_max, out.format)?, out)
        }
        Command::Verify { input, oracle, degree, out } => {
            let text = read_input(input.as_ref(), stdin)?;
            let op = BilinearOperator::from_json(&text)?;
            (verify_report(&op, oracle, degree, out.format)?, out)
        }
        Command::Apply { input, space, k, lambda, mu, f, g, out } => {
            let op = match (input, k, lambda, mu) {
                (Some(path), ..) => BilinearOperator::from_json(&std::fs::read_to_string(path)?)?,
                (None, Some(k), Some(l), Some(m)) => BilinearOperator::construct(space.resolve()?, k, l, m)?,
                _ => return Err(Error::Parse("apply needs --input or --k, --lambda and --mu".into())),
            };
            (apply_report(&op, &f, &g, out.format)?, out)
        }
        Command::Transvectant { k, lambda, mu, f, g, out } => {
            let pair = match (f, g) {
                (Some(f), Some(g)) => Some((parse_1d(&f)?, parse_1d(&g)?)),
                _ => None,
            };
            (transvectant_report(k, &lambda, &mu, pair, out.format), out)
        }
        Command::Scan { space, lambda, mu, k_max, out } => {
            (scan_report(space.resolve()?, &lambda, &mu, k_max, out.format)?, out)
        }
    })
}

fn read_input(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, Error> {
    match path {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn emit_operator(op: &BilinearOperator, format: Format) -> String {
    match format {
        Format::Json => with_newline(op.to_json()),
        Format::Latex => with_newline(op.to_latex()),
        Format::Text => {
            let ctx = &op.ctx;
            let mut s = format!(
                "signature ({}), lambda {}, mu {}, nu {}, k {}\n",
                ctx.signature,
                ctx.lambda,
                ctx.mu,
                ctx.nu,
                op.k()
            );
            s.push_str(&op.to_text());
            s
        }
    }
}

#[derive(Serialize)]
struct LinearTerm {
    k: usize,
    c: String,
}

#[derive(Serialize)]
struct LinearDoc {
    n: usize,
    signature: [usize; 2],
    lambda: String,
    mu: String,
    max_order: usize,
    dimension: usize,
    basis: Vec<Vec<LinearTerm>>,
}

/// `Σ c_k Δ^k` in the given notation; `"0"` for the empty sum.
fn laplacian_sum(op: &LinearOperatorSymbol, latex: bool) -> String {
    let mut out = String::new();
    for (k, c) in op.coefficients().collect::<Vec<_>>().into_iter().rev() {
        let negative = c < &Rational::zero();
        let magnitude = if negative { -c } else { c.clone() };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        let number = if latex { latex_rational(&magnitude) } else { format_rational(&magnitude) };
        let power = match (k, latex) {
            (0, _) => String::new(),
            (1, true) => "\\Delta".into(),
            (1, false) => "Δ".into(),
            (_, true) => format!("\\Delta^{{{k}}}"),
            (_, false) => format!("Δ^{k}"),
        };
        match (power.is_empty(), magnitude.is_one()) {
            (true, _) => out.push_str(&number),
            (false, true) => out.push_str(&power),
            (false, false) => write!(out, "{number} {power}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn linear_report(ctx: &LinearContext, max_order: usize, format: Format) -> Result<Report, Error> {
    let found = classify_linear(ctx, max_order / 2)?;
    let body = match format {
        Format::Json => json(&LinearDoc {
            n: ctx.dimension(),
            signature: [ctx.signature.p(), ctx.signature.q()],
            lambda: ctx.lambda.to_string(),
            mu: ctx.mu.to_string(),
            max_order,
            dimension: found.dimension(),
            basis: found
                .basis
                .iter()
                .map(|b| b.coefficients().map(|(k, c)| LinearTerm { k, c: format_rational(c) }).collect())
                .collect(),
        }),
        Format::Latex => found.basis.iter().map(|b| laplacian_sum(b, true) + "\n").collect(),
        Format::Text => {
            let mut s = format!("dimension {}\n", found.dimension());
            for b in &found.basis {
                writeln!(s, "  {}", laplacian_sum(b, false)).unwrap();
            }
            s
        }
    };
    let code = if found.dimension() == 0 { EXIT_EMPTY } else { EXIT_OK };
    Ok(Report { code, body })
}

#[derive(Serialize)]
struct TableTerm {
    r: usize,
    s: usize,
    t: usize,
    c: String,
}

fn table_terms(table: &CoeffTable) -> Vec<TableTerm> {
    table
        .entries()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| TableTerm { r: m.r, s: m.s, t: m.t, c: format_rational(&c) })
        .collect()
}

#[derive(Serialize)]
struct BilinearDoc {
    n: usize,
    signature: [usize; 2],
    lambda: String,
    mu: String,
    nu: String,
    k_max: usize,
    dimension: usize,
    basis: Vec<BasisDoc>,
}

#[derive(Serialize)]
struct BasisDoc {
    k: usize,
    coefficients: Vec<TableTerm>,
}

fn bilinear_report(ctx: &BilinearContext, k_max: usize, format: Format) -> Result<Report, Error> {
    let found = classify_bilinear(ctx, k_max)?;
    let body = match format {
        Format::Json => json(&BilinearDoc {
            n: ctx.dimension(),
            signature: [ctx.signature.p(), ctx.signature.q()],
            lambda: ctx.lambda.to_string(),
            mu: ctx.mu.to_string(),
            nu: ctx.nu.to_string(),
            k_max,
            dimension: found.dimension(),
            basis: found.basis.iter().map(|t| BasisDoc { k: t.k(), coefficients: table_terms(t) }).collect(),
        }),
        Format::Latex => found.basis.iter().map(|t| table_latex(t) + "\n").collect(),
        Format::Text => {
            let mut s = format!("dimension {}\n", found.dimension());
            for t in &found.basis {
                writeln!(s, "k = {}", t.k()).unwrap();
                s.push_str(&table_text(t));
            }
            s
        }
    };
    let code = if found.dimension() == 0 { EXIT_EMPTY } else { EXIT_OK };
    Ok(Report { code, body })
}

#[derive(Serialize)]
struct SymbolicRecord {
    generator: String,
    residual: String,
}

#[derive(Serialize)]
struct VerifyDoc {
    status: &'static str,
    homogeneity: bool,
    symbolic: Vec<SymbolicRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<ResidualRecord>>,
}

fn verify_report(op: &BilinearOperator, oracle: bool, degree: Option<u32>, format: Format) -> Result<Report, Error> {
    let report = verify_invariance(op)?;
    let symbolic: Vec<SymbolicRecord> = report
        .nonzero()
        .map(|r| SymbolicRecord { generator: r.generator.to_string(), residual: r.residual.to_string() })
        .collect();
    let oracle = if oracle {
        let degree = degree.unwrap_or(2 * op.k() as u32 + 2);
        Some(oracle_residual_all(op, degree)?)
    } else {
        None
    };
    let invariant = symbolic.is_empty() && oracle.as_ref().is_none_or(Vec::is_empty);
    let doc = VerifyDoc {
        status: if invariant { "ok" } else { "not-invariant" },
        homogeneity: op.homogeneity_holds(),
        symbolic,
        oracle,
    };
    let body = match format {
        Format::Json => json(&doc),
        Format::Text | Format::Latex => {
            let mut s = format!("status {}\nhomogeneity {}\n", doc.status, doc.homogeneity);
            for r in &doc.symbolic {
                writeln!(s, "symbolic {}: {}", r.generator, r.residual).unwrap();
            }
            if let Some(records) = &doc.oracle {
                writeln!(s, "oracle residuals {}", records.len()).unwrap();
                for r in records {
                    writeln!(s, "oracle {} f={} g={}: {}", r.generator, r.f, r.g, r.residual).unwrap();
                }
            }
            s
        }
    };
    let code = if invariant { EXIT_OK } else { EXIT_NOT_INVARIANT };
    Ok(Report { code, body })
}

#[derive(Serialize)]
struct ApplyDoc {
    result: String,
    weight: String,
}

fn apply_report(op: &BilinearOperator, f: &str, g: &str, format: Format) -> Result<Report, Error> {
    let n = op.ctx.dimension();
    let f = DensityPoly::new(SymbolPoly::parse(f, n)?, op.ctx.lambda.clone())?;
    let g = DensityPoly::new(SymbolPoly::parse(g, n)?, op.ctx.mu.clone())?;
    let out = apply_bilinear(op, &f, &g)?;
    let doc = ApplyDoc { result: out.coeff().to_string(), weight: out.weight().to_string() };
    Ok(Report::ok(match format {
        Format::Json => json(&doc),
        _ => format!("{}\n", doc.result),
    }))
}

/// A univariate polynomial in `x` (or `x1`).
fn parse_1d(text: &str) -> Result<Poly1D, Error> {
    let mut normalized = String::with_capacity(text.len() + 4);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        normalized.push(c);
        if c == 'x' && !chars.peek().is_some_and(|d| d.is_ascii_digit()) {
            normalized.push('1');
        }
    }
    let p = SymbolPoly::parse(&normalized, 1)?;
    if p.involves(Family::Xi) || p.involves(Family::Eta) {
        return Err(Error::Parse(format!("not a polynomial in x: {text:?}")));
    }
    let degree = p.degree().unwrap_or(0) as usize;
    let mut coefficients = vec![Rational::zero(); degree + 1];
    for (m, c) in p.terms() {
        coefficients[m.degree() as usize] = c.clone();
    }
    Ok(Poly1D::new(coefficients))
}

#[derive(Serialize)]
struct TransvectantDoc {
    k: usize,
    lambda: String,
    mu: String,
    nu: String,
    coefficients: Vec<String>,
    invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<String>,
}

fn transvectant_report(
    k: usize,
    lambda: &Weight,
    mu: &Weight,
    pair: Option<(Poly1D, Poly1D)>,
    format: Format,
) -> Report {
    let coefficients = transvectant_coefficients(k, lambda, mu);
    let invariant = sl2_residual(k, lambda, mu).is_empty();
    let result = pair.map(|(f, g)| apply_transvectant(k, lambda, mu, &f, &g).to_string());
    let doc = TransvectantDoc {
        k,
        lambda: lambda.to_string(),
        mu: mu.to_string(),
        nu: (lambda.value() + mu.value() + Rational::from_integer(k.into())).to_string(),
        coefficients: coefficients.iter().map(format_rational).collect(),
        invariant,
        result,
    };
    let body = match format {
        Format::Json => json(&doc),
        Format::Latex => {
            let mut s = String::new();
            for (i, c) in coefficients.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let negative = c < &Rational::zero();
                match (s.is_empty(), negative) {
                    (true, true) => s.push('-'),
                    (false, true) => s.push_str(" - "),
                    (false, false) => s.push_str(" + "),
                    (true, false) => {}
                }
                let magnitude = if negative { -c } else { c.clone() };
                if !magnitude.is_one() {
                    write!(s, "{} ", latex_rational(&magnitude)).unwrap();
                }
                write!(s, "f^{{({i})}} g^{{({})}}", k - i).unwrap();
            }
            if s.is_empty() {
                s.push('0');
            }
            s + "\n"
        }
        Format::Text => {
            let mut s = format!("k {}, lambda {}, mu {}, nu {}\n", doc.k, doc.lambda, doc.mu, doc.nu);
            let width = doc.coefficients.iter().map(String::len).max().unwrap_or(0);
            for (i, c) in doc.coefficients.iter().enumerate() {
                writeln!(s, "{c:>width$}  f^({i}) g^({})", k - i).unwrap();
            }
            writeln!(s, "invariant {}", doc.invariant).unwrap();
            if let Some(r) = &doc.result {
                writeln!(s, "result {r}").unwrap();
            }
            s
        }
    };
    let code = if invariant { EXIT_OK } else { EXIT_NOT_INVARIANT };
    Report { code, body }
}

#[derive(Serialize)]
struct ScanRow {
    j: usize,
    nu: String,
    dimension: usize,
}

fn scan_report(sig: Signature, lambda: &Weight, mu: &Weight, k_max: usize, format: Format) -> Result<Report, Error> {
    let n = sig.dimension();
    let rows = (0..=2 * k_max)
        .map(|j| {
            let nu = Weight(lambda.value() + mu.value() + Rational::new(j.into(), n.into()));
            let ctx = BilinearContext::new(sig, lambda.clone(), mu.clone(), nu.clone());
            Ok(ScanRow { j, nu: nu.to_string(), dimension: classify_bilinear(&ctx, k_max)?.dimension() })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let body = match format {
        Format::Json => json(&rows),
        _ => {
            let width = rows.iter().map(|r| r.nu.len()).max().unwrap_or(0).max(2);
            let mut s = format!(" j  {:>width$}  dimension\n", "nu");
            for r in &rows {
                writeln!(s, "{:>2}  {:>width$}  {}", r.j, r.nu, r.dimension).unwrap();
            }
            s
        }
    };
    Ok(Report::ok(body))
}
