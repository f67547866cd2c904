//! Command-line front end for the m1jacobi library: polynomial evaluation,
//! verification suites, Gram matrix export, degeneration tables, weight
//! symmetry reports, and support geometry.
//!
//! Structured output is JSON by default (CSV for `gram`); `--out` redirects
//! it to a file. Progress notes and warnings go to stderr so stdout stays
//! machine-readable. Exit status: 0 on success and, for `verify`, only when
//! every requested suite passes; 1 on runtime failure; 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use m1jacobi::bigm1::{bigm1_coeffs, UniParams};
use m1jacobi::bigq::biv_limit_deviation;
use m1jacobi::bivariate::{
    biv_coeffs, pearson_grid_points, pearson_residuals, recurrence_deviations, triangle_vertices,
    BivIndex, BivParams, BivRegime, CoeffSource, WeightPerturbation,
};
use m1jacobi::exact::ExactScalar;
use m1jacobi::laurent::{RatPoly1, RatPoly2};
use m1jacobi::quad::QuadratureSpec;
use m1jacobi::verify::{biv_gram_rows, run_suites, uni_gram_rows, SuiteConfig, SUITE_NAMES};

#[derive(Parser)]
#[command(
    name = "m1j",
    version,
    about = "Construction and verification toolkit for one- and two-variable Big -1 Jacobi polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print values or coefficients of one family member
    Eval(EvalArgs),
    /// Run verification suites and report their worst residuals
    Verify(VerifyArgs),
    /// Export a Gram matrix with expected diagonal entries
    Gram(GramArgs),
    /// Tabulate coefficient deviations along the q -> -1 degeneration path
    Limit(LimitArgs),
    /// Report weight symmetry-equation residuals on an interior grid
    Pearson(PearsonArgs),
    /// Export the triangles forming the orthogonality support
    Domain(DomainArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    /// One-variable family J_n(x)
    Uni,
    /// Two-variable family J_{n,k}(x, y)
    Biv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Parameters of the two-variable family.
#[derive(Args, Clone)]
struct BivOpts {
    /// Edge exponent parameter, "p/q" or integer
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Inner edge exponent parameter, "p/q" or integer
    #[arg(long, default_value = "1/2")]
    beta: String,
    /// Band exponent parameter, "p/q" or integer
    #[arg(long, default_value = "1/2")]
    gamma: String,
    /// Inner vertex location; |delta| < 1 selects the bounded support,
    /// |delta| > 1 the unbounded one
    #[arg(long, default_value = "1/5")]
    delta: String,
}

impl BivOpts {
    fn build(&self) -> Result<BivParams, CliError> {
        BivParams::new(
            parse_scalar("alpha", &self.alpha)?,
            parse_scalar("beta", &self.beta)?,
            parse_scalar("gamma", &self.gamma)?,
            parse_scalar("delta", &self.delta)?,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Parameters of the one-variable family.
#[derive(Args, Clone)]
struct UniOpts {
    /// Exponent parameter a > -1, "p/q" or integer
    #[arg(long, default_value = "1/2")]
    a: String,
    /// Exponent parameter b > -1, "p/q" or integer
    #[arg(long, default_value = "3/4")]
    b: String,
    /// Deformation point c with |c| != 1; |c| < 1 selects the bounded
    /// support, |c| > 1 the unbounded one
    #[arg(long, default_value = "1/5")]
    c: String,
}

impl UniOpts {
    fn build(&self) -> Result<UniParams, CliError> {
        UniParams::new(
            parse_scalar("a", &self.a)?,
            parse_scalar("b", &self.b)?,
            parse_scalar("c", &self.c)?,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Output format; json unless noted otherwise
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Which family to evaluate
    #[arg(long, value_enum)]
    family: Family,
    /// Degree index n
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Section index k, 0 <= k <= n (two-variable family only)
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Print the coefficient list instead of the rendered polynomial
    #[arg(long)]
    coeffs: bool,
    /// Evaluate at this x instead of printing the polynomial
    #[arg(long)]
    x: Option<f64>,
    /// Evaluate at this y (two-variable family only)
    #[arg(long)]
    y: Option<f64>,
    #[command(flatten)]
    uni: UniOpts,
    #[command(flatten)]
    biv: BivOpts,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite names, repeatable or comma separated; "all" runs every suite
    #[arg(long = "suite", value_delimiter = ',', default_value = "all")]
    suites: Vec<String>,
    /// Largest degree exercised by the suites
    #[arg(long = "n-max", default_value_t = 8)]
    n_max: u32,
    /// Side length of the interior sample grid for the pearson suite
    #[arg(long, default_value_t = 10)]
    grid: u32,
    /// Check the published closed-form recurrence tables instead of the
    /// expansion-derived coefficients
    #[arg(long = "use-paper-formulas")]
    use_paper_formulas: bool,
    #[command(flatten)]
    uni: UniOpts,
    #[command(flatten)]
    biv: BivOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct GramArgs {
    /// Which family's Gram matrix to compute
    #[arg(long, value_enum, default_value_t = Family::Biv)]
    family: Family,
    /// Largest degree included in the matrix
    #[arg(long = "n-max", default_value_t = 4)]
    n_max: u32,
    #[command(flatten)]
    uni: UniOpts,
    #[command(flatten)]
    biv: BivOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest degree tabulated
    #[arg(long = "n-max", default_value_t = 3)]
    n_max: u32,
    #[command(flatten)]
    biv: BivOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct PearsonArgs {
    /// Side length of the interior sample grid
    #[arg(long, default_value_t = 10)]
    grid: u32,
    #[command(flatten)]
    biv: BivOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct DomainArgs {
    #[command(flatten)]
    biv: BivOpts,
    #[command(flatten)]
    output: OutputOpts,
}

enum CliError {
    Usage(String),
    Run(String),
}

impl From<m1jacobi::Error> for CliError {
    fn from(e: m1jacobi::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

fn parse_scalar(label: &str, raw: &str) -> Result<ExactScalar, CliError> {
    if let Ok(v) = ExactScalar::parse(raw) {
        return Ok(v);
    }
    let x: f64 = raw.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "--{label}: expected a rational like \"3/4\" or a number, got '{raw}'"
        ))
    })?;
    // Decimals have no exact decimal meaning in binary; the nearest double is
    // used exactly, so downstream residuals measure that value, not the
    // literal decimal.
    eprintln!(
        "warning: --{label} {raw} is not a ratio; using its closest binary value, \
         so results are numeric-grade only"
    );
    ExactScalar::from_f64_exact(x).map_err(|e| CliError::Usage(format!("--{label}: {e}")))
}

fn quad_spec_from_env() -> Result<QuadratureSpec, CliError> {
    let mut spec = QuadratureSpec { abs_tol: 1e-11, rel_tol: 1e-9, level_max: 12 };
    if let Ok(v) = std::env::var("M1J_QUAD_TOL") {
        let tol: f64 = v
            .parse()
            .map_err(|_| CliError::Usage(format!("M1J_QUAD_TOL must be a number, got '{v}'")))?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("M1J_QUAD_TOL must be positive, got {tol}")));
        }
        spec.abs_tol = tol;
        spec.rel_tol = tol * 100.0;
    }
    Ok(spec)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_csv<T: serde::Serialize>(rows: &[T], columns: &[&str]) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let value = serde_json::to_value(row)
            .map_err(|e| CliError::Run(format!("serialization failed: {e}")))?;
        let obj = value.as_object().expect("rows serialize to objects");
        let mut fields = Vec::with_capacity(columns.len());
        for col in columns {
            let cell = match obj.get(*col) {
                None | Some(serde_json::Value::Null) => String::new(),
                Some(serde_json::Value::String(s)) => csv_field(s),
                Some(v) => v.to_string(),
            };
            fields.push(cell);
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn to_json<T: serde::Serialize>(rows: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(rows)
        .map_err(|e| CliError::Run(format!("serialization failed: {e}")))
}

/// Renders nonzero terms in ascending exponent order with exact coefficients.
fn render_terms(terms: Vec<(String, ExactScalar)>) -> String {
    let mut out = String::new();
    for (mono, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs().to_string();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn monomial1(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "x".into(),
        _ => format!("x^{e}"),
    }
}

fn monomial2(ex: i64, ey: i64) -> String {
    let x = monomial1(ex);
    let y = match ey {
        0 => String::new(),
        1 => "y".into(),
        _ => format!("y^{ey}"),
    };
    match (x.is_empty(), y.is_empty()) {
        (true, true) => String::new(),
        (false, true) => x,
        (true, false) => y,
        (false, false) => format!("{x}*{y}"),
    }
}

fn render_poly1(f: &RatPoly1) -> String {
    render_terms(f.terms().map(|(e, c)| (monomial1(e), c.clone())).collect())
}

fn render_poly2(f: &RatPoly2) -> String {
    let mut terms: Vec<((i64, i64), ExactScalar)> =
        f.terms().map(|(e, c)| (e, c.clone())).collect();
    // Ascending by total degree, then x exponent, so constants print first.
    terms.sort_by_key(|&((ex, ey), _)| (ex + ey, ex));
    render_terms(terms.into_iter().map(|((ex, ey), c)| (monomial2(ex, ey), c)).collect())
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    match args.family {
        Family::Uni => {
            if args.k != 0 {
                return Err(CliError::Usage("--k applies only to the two-variable family".into()));
            }
            if args.y.is_some() {
                return Err(CliError::Usage("--y applies only to the two-variable family".into()));
            }
            let p = args.uni.build()?;
            let poly = bigm1_coeffs(args.n, &p)?;
            if args.coeffs {
                let top = poly.degree().unwrap_or(0).max(args.n as i64);
                let list: Vec<String> =
                    (0..=top).map(|e| poly.coefficient(e).to_string()).collect();
                println!("{}", list.join(", "));
            } else if let Some(x) = args.x {
                println!("{}", poly.to_num().evaluate(x)?);
            } else {
                println!("{}", render_poly1(&poly));
            }
        }
        Family::Biv => {
            if args.k > args.n {
                return Err(CliError::Usage(format!(
                    "section index k = {} must not exceed degree n = {}",
                    args.k, args.n
                )));
            }
            let p = args.biv.build()?;
            let poly = biv_coeffs(BivIndex { n: args.n, k: args.k }, &p)?;
            if args.coeffs {
                let mut terms: Vec<((i64, i64), ExactScalar)> =
                    poly.terms().map(|(e, c)| (e, c.clone())).collect();
                terms.sort_by_key(|&((ex, ey), _)| (ex + ey, ex));
                for ((ex, ey), c) in terms {
                    println!("{ex} {ey} {c}");
                }
            } else {
                match (args.x, args.y) {
                    (Some(x), Some(y)) => println!("{}", poly.to_num().evaluate(x, y)?),
                    (None, None) => println!("{}", render_poly2(&poly)),
                    _ => {
                        return Err(CliError::Usage(
                            "two-variable evaluation needs both --x and --y".into(),
                        ))
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    for name in &args.suites {
        if name != "all" && !SUITE_NAMES.contains(&name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown suite '{name}'; valid: all, {}",
                SUITE_NAMES.join(", ")
            )));
        }
    }
    let cfg = SuiteConfig {
        uni: args.uni.build()?,
        biv: args.biv.build()?,
        n_max: args.n_max,
        spec: quad_spec_from_env()?,
        grid: args.grid,
        source: if args.use_paper_formulas {
            CoeffSource::ClosedForm
        } else {
            CoeffSource::Expansion
        },
    };
    let reports = run_suites(&args.suites, &cfg);
    for r in &reports {
        eprintln!(
            "{:<16} {}  max residual {:.3e}  ({} ms)",
            r.check_name,
            if r.pass { "pass" } else { "FAIL" },
            r.max_residual,
            r.elapsed_ms
        );
    }
    if reports.iter().any(|r| r.check_name == "biv-recurrence") {
        write_deviations(&cfg)?;
    }
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            to_csv(&reports, &["check_name", "max_residual", "witness", "pass", "elapsed_ms"])?
        }
    };
    emit(&args.output.out, &content)?;
    Ok(reports.iter().all(|r| r.pass))
}

/// Machine-readable record of closed-form vs expansion coefficient
/// disagreements, refreshed on every run of the biv-recurrence suite.
fn write_deviations(cfg: &SuiteConfig) -> Result<(), CliError> {
    let n_max = cfg.n_max.min(3);
    let deviations = recurrence_deviations(&cfg.biv, n_max)?;
    let report = serde_json::json!({
        "params": {
            "alpha": cfg.biv.alpha.to_string(),
            "beta": cfg.biv.beta.to_string(),
            "gamma": cfg.biv.gamma.to_string(),
            "delta": cfg.biv.delta.to_string(),
        },
        "n_max": n_max,
        "deviations": deviations,
    });
    let path = PathBuf::from("DEVIATIONS.json");
    emit(&Some(path), &to_json(&report)?)?;
    eprintln!("deviations report written to DEVIATIONS.json ({} entries)", deviations.len());
    Ok(())
}

fn cmd_gram(args: &GramArgs) -> Result<(), CliError> {
    let spec = quad_spec_from_env()?;
    let rows = match args.family {
        Family::Uni => uni_gram_rows(&args.uni.build()?, args.n_max, &spec)?,
        Family::Biv => {
            let p = args.biv.build()?;
            let regime = if p.delta.abs() < ExactScalar::one() {
                BivRegime::Inside
            } else {
                BivRegime::Outside
            };
            biv_gram_rows(&p, regime, args.n_max, &spec)?
        }
    };
    let content = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&rows, &["n1", "k1", "n2", "k2", "value", "expected", "abs_err"])?,
        Format::Json => to_json(&rows)?,
    };
    emit(&args.output.out, &content)
}

#[derive(serde::Serialize)]
struct LimitRow {
    n: u32,
    k: u32,
    eps: f64,
    deviation: f64,
    /// Empirical convergence order against the previous epsilon; first-order
    /// degeneration shows values near 1.
    order: Option<f64>,
}

fn cmd_limit(args: &LimitArgs) -> Result<(), CliError> {
    let p = args.biv.build()?;
    let eps_seq = [1e-2, 1e-3, 1e-4];
    let mut rows = Vec::new();
    for n in 0..=args.n_max {
        for k in 0..=n {
            let idx = BivIndex { n, k };
            let mut prev: Option<f64> = None;
            for &eps in &eps_seq {
                let deviation = biv_limit_deviation(idx, &p, eps)?;
                let order =
                    prev.filter(|&d| d > 0.0 && deviation > 0.0).map(|d| (d / deviation).log10());
                rows.push(LimitRow { n, k, eps, deviation, order });
                prev = Some(deviation);
            }
        }
    }
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows, &["n", "k", "eps", "deviation", "order"])?,
    };
    emit(&args.output.out, &content)
}

#[derive(serde::Serialize)]
struct PearsonRow {
    equation: String,
    max_residual: f64,
    witness_x: f64,
    witness_y: f64,
}

fn cmd_pearson(args: &PearsonArgs) -> Result<(), CliError> {
    let p = args.biv.build()?;
    let points = pearson_grid_points(&p, args.grid)?;
    let rows: Vec<PearsonRow> = pearson_residuals(&p, WeightPerturbation::None, &points)?
        .into_iter()
        .map(|r| PearsonRow {
            equation: r.equation.to_string(),
            max_residual: r.max_residual,
            witness_x: r.witness.0,
            witness_y: r.witness.1,
        })
        .collect();
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows, &["equation", "max_residual", "witness_x", "witness_y"])?,
    };
    emit(&args.output.out, &content)
}

#[derive(serde::Serialize)]
struct TriangleRow {
    triangle: usize,
    vertices: [(f64, f64); 3],
}

fn cmd_domain(args: &DomainArgs) -> Result<(), CliError> {
    let p = args.biv.build()?;
    let regime =
        if p.delta.abs() < ExactScalar::one() { BivRegime::Inside } else { BivRegime::Outside };
    // At delta = 0 the inner vertices meet at the origin and the four
    // triangles merge pairwise into two.
    let triangles: Vec<[(f64, f64); 3]> = if p.delta.is_zero() {
        vec![[(-1.0, 1.0), (1.0, 1.0), (0.0, 0.0)], [(1.0, -1.0), (-1.0, -1.0), (0.0, 0.0)]]
    } else {
        triangle_vertices(&p, regime)?.to_vec()
    };
    let rows: Vec<TriangleRow> = triangles
        .into_iter()
        .enumerate()
        .map(|(triangle, vertices)| TriangleRow { triangle, vertices })
        .collect();
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("triangle,vertex,x,y\n");
            for row in &rows {
                for (vertex, (x, y)) in row.vertices.iter().enumerate() {
                    out.push_str(&format!("{},{vertex},{x},{y}\n", row.triangle));
                }
            }
            out
        }
    };
    emit(&args.output.out, &content)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args).map(|()| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Gram(args) => cmd_gram(args).map(|()| true),
        Command::Limit(args) => cmd_limit(args).map(|()| true),
        Command::Pearson(args) => cmd_pearson(args).map(|()| true),
        Command::Domain(args) => cmd_domain(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
