//! `gjms` command-line front end. Each subcommand calls into the library and
//! renders; no numerics live here.
//!
//! Exit codes: 0 success, 1 cross-check failure or non-convergence, 2 invalid
//! input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::central::central_t;
use crate::closed_form::{f_value, logdet_gjms};
use crate::error::GjmsError;
use crate::exact::BigRational;
use crate::norlund::DTable;
use crate::precision::{evaluate, PrecisionContext, DIGITS_ENV};
use crate::product_rules::{product_rule, render_rule, rule_exponents};
use crate::quadrature::{
    logdet_factor_sum, logdet_quadrature, QuadResult, QuadratureConfig, Scheme,
};
use crate::survey::{crosscheck, sweep_fixed_d, sweep_fixed_k, SweepPoint, CROSSCHECK_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Significant digits shown for numeric values unless `--digits` says otherwise.
pub const DEFAULT_SHOWN_DIGITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Latex,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "gjms",
    version,
    about = "Log-determinants of GJMS operators on odd spheres"
)]
pub struct Cli {
    /// Write output to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact closed form of log det P_{2k}(d) and its value
    Logdet(LogdetArgs),
    /// Compare closed form, quadrature, product rule and factor sum for all d <= d_max
    Crosscheck(CrosscheckArgs),
    /// logdet over k at fixed d, or over d at fixed k (CSV by default)
    Sweep(SweepArgs),
    /// Nörlund numbers, f_m values, or central factorial coefficients
    Tables(TablesArgs),
    /// Direct quadrature of log det P_{2k}(d)
    Quad(QuadArgs),
    /// Symbolic product rule for P_{2k}
    Rule(RuleArgs),
}

#[derive(Debug, Args)]
pub struct LogdetArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: OutputFormat,
    /// Significant digits shown
    #[arg(long, default_value_t = DEFAULT_SHOWN_DIGITS)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct CrosscheckArgs {
    #[arg(long)]
    pub d_max: i64,
    /// Largest accepted pairwise deviation
    #[arg(long, default_value_t = CROSSCHECK_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["fixed_d", "fixed_k"])))]
pub struct SweepArgs {
    /// Sweep k = k_min..k_max at this dimension
    #[arg(long, allow_hyphen_values = true)]
    pub fixed_d: Option<i64>,
    /// Sweep odd d = d_min..d_max at this order
    #[arg(long, allow_hyphen_values = true)]
    pub fixed_k: Option<i64>,
    #[arg(long, requires = "fixed_d")]
    pub k_min: Option<i64>,
    #[arg(long, requires = "fixed_d")]
    pub k_max: Option<i64>,
    #[arg(long, requires = "fixed_k", allow_hyphen_values = true)]
    pub d_min: Option<i64>,
    #[arg(long, requires = "fixed_k")]
    pub d_max: Option<i64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    #[arg(long, default_value_t = DEFAULT_SHOWN_DIGITS)]
    pub digits: u32,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("table").required(true).args(["d_norlund", "f", "central"])))]
pub struct TablesArgs {
    /// D^{(m)}_{2k} for m = 1..M, k = 0..K
    #[arg(long, num_args = 2, value_names = ["M", "K"])]
    pub d_norlund: Option<Vec<u32>>,
    /// f_0..f_N
    #[arg(long, value_name = "N")]
    pub f: Option<u32>,
    /// t(n, k) for odd n <= N
    #[arg(long, value_name = "N")]
    pub central: Option<u32>,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: OutputFormat,
    #[arg(long, default_value_t = DEFAULT_SHOWN_DIGITS)]
    pub digits: u32,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// gauss-kronrod (gk) or tanh-sinh (ts)
    #[arg(long, default_value = "gauss-kronrod")]
    pub scheme: Scheme,
    /// Sum the k single-factor integrals instead
    #[arg(long)]
    pub factor_sum: bool,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: OutputFormat,
}

/// Rendered output plus exit code; failures that still produce a report
/// (a failed cross-check) carry both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, msg: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

impl From<GjmsError> for Outcome {
    fn from(e: GjmsError) -> Self {
        let code = match e {
            GjmsError::NotConverged { .. } => EXIT_FAILED,
            _ => EXIT_INVALID,
        };
        Outcome::error(code, e)
    }
}

/// Parse and run, capturing output. `--out` is honoured here.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut outcome = run(&cli.command);
    if let Some(path) = &cli.out {
        if !outcome.stdout.is_empty() {
            if let Err(e) = std::fs::write(path, &outcome.stdout) {
                return Outcome::error(
                    EXIT_FAILED,
                    format!("cannot write {}: {e}", path.display()),
                );
            }
            outcome.stdout.clear();
        }
    }
    outcome
}

/// Entry point for the binary: runs and writes to the real streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = execute(args);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    outcome.code
}

pub fn run(command: &Command) -> Outcome {
    let result = match command {
        Command::Logdet(a) => cmd_logdet(a),
        Command::Crosscheck(a) => return cmd_crosscheck(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Quad(a) => cmd_quad(a),
        Command::Rule(a) => cmd_rule(a),
    };
    match result {
        Ok(s) => Outcome::ok(s),
        Err(o) => o,
    }
}

type CmdResult = std::result::Result<String, Outcome>;

/// Evaluation precision: `GJMS_DIGITS` (default 50), raised to cover the
/// digits shown.
fn precision_for(shown: u32) -> std::result::Result<PrecisionContext, Outcome> {
    if shown == 0 {
        return Err(Outcome::error(EXIT_INVALID, "--digits must be positive"));
    }
    let ctx = PrecisionContext::from_env()
        .map_err(|e| Outcome::error(EXIT_INVALID, format!("{e} (from {DIGITS_ENV})")))?;
    if ctx.decimal_digits() < shown + 10 {
        Ok(PrecisionContext::new(shown + 10)?)
    } else {
        Ok(ctx)
    }
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialise")
}

pub fn cmd_logdet(a: &LogdetArgs) -> CmdResult {
    let expr = logdet_gjms(a.d, a.k)?;
    let ctx = precision_for(a.digits)?;
    let value = evaluate(&expr, &ctx).to_significant(a.digits);
    let (d, k2) = (a.d, 2 * a.k);
    Ok(match a.format {
        OutputFormat::Plain => format!("log det P_{k2}({d}) = {expr}\n  ≈ {value}\n"),
        OutputFormat::Latex => format!(
            "\\log\\det P_{{{k2}}}({d}) = {} \\approx {value}\n",
            expr.to_latex()
        ),
        OutputFormat::Json => format!(
            "{{\"d\":{d},\"k\":{},\"expr\":{},\"value\":{}}}\n",
            a.k,
            expr.to_json(),
            json_string(&value)
        ),
        OutputFormat::Csv => format!(
            "d,k,expr,value\n{d},{},{},{value}\n",
            a.k,
            csv_quote(&expr.to_string())
        ),
    })
}

pub fn cmd_crosscheck(a: &CrosscheckArgs) -> Outcome {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Outcome::error(EXIT_INVALID, "--tol must be positive");
    }
    let ctx = match precision_for(DEFAULT_SHOWN_DIGITS) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let rows = match crosscheck(a.d_max, &QuadratureConfig::default(), &ctx) {
        Ok(r) => r,
        Err(e) => return e.into(),
    };
    let all_pass = rows.iter().all(|r| r.passes(a.tol));
    let mut out = String::new();
    match a.format {
        OutputFormat::Csv => {
            out.push_str("d,k,closed_form,quadrature,product_rule,factor_sum,max_deviation,pass\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.3e},{}",
                    r.d,
                    r.k,
                    r.closed_form,
                    r.quadrature,
                    r.product_rule,
                    r.factor_sum,
                    r.max_deviation(),
                    r.passes(a.tol)
                );
            }
        }
        OutputFormat::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{{\"d\":{},\"k\":{},\"closed_form\":{:e},\"quadrature\":{:e},\"product_rule\":{:e},\"factor_sum\":{:e},\"max_deviation\":{:e},\"pass\":{}}}",
                        r.d, r.k, r.closed_form, r.quadrature, r.product_rule, r.factor_sum,
                        r.max_deviation(), r.passes(a.tol)
                    )
                })
                .collect();
            let _ = writeln!(out, "[{}]", items.join(","));
        }
        OutputFormat::Plain | OutputFormat::Latex => {
            let _ = writeln!(
                out,
                "{:>3} {:>3} {:>22} {:>22} {:>22} {:>22} {:>10}  status",
                "d", "k", "closed form", "quadrature", "product rule", "factor sum", "max dev"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>3} {:>22.15e} {:>22.15e} {:>22.15e} {:>22.15e} {:>10.2e}  {}",
                    r.d,
                    r.k,
                    r.closed_form,
                    r.quadrature,
                    r.product_rule,
                    r.factor_sum,
                    r.max_deviation(),
                    if r.passes(a.tol) { "ok" } else { "FAIL" }
                );
            }
            let failed = rows.iter().filter(|r| !r.passes(a.tol)).count();
            let _ = writeln!(
                out,
                "{} cases, {failed} failed (tolerance {:e})",
                rows.len(),
                a.tol
            );
        }
    }
    Outcome {
        code: if all_pass { EXIT_OK } else { EXIT_FAILED },
        stdout: out,
        stderr: if all_pass {
            String::new()
        } else {
            "error: cross-check deviation above tolerance\n".to_string()
        },
    }
}

fn render_sweep(points: &[SweepPoint], format: OutputFormat, digits: u32) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Json => {
            let items: Vec<String> = points
                .iter()
                .map(|p| {
                    format!(
                        "{{\"d\":{},\"k\":{},\"logdet\":{}}}",
                        p.d,
                        p.k,
                        json_string(&p.logdet.to_significant(digits))
                    )
                })
                .collect();
            let _ = writeln!(out, "[{}]", items.join(","));
        }
        OutputFormat::Plain | OutputFormat::Latex => {
            for p in points {
                let _ = writeln!(
                    out,
                    "{:>3} {:>3}  {}",
                    p.d,
                    p.k,
                    p.logdet.to_significant(digits)
                );
            }
        }
        OutputFormat::Csv => {
            out.push_str("d,k,logdet\n");
            for p in points {
                let _ = writeln!(out, "{},{},{}", p.d, p.k, p.logdet.to_significant(digits));
            }
        }
    }
    out
}

pub fn cmd_sweep(a: &SweepArgs) -> CmdResult {
    let ctx = precision_for(a.digits)?;
    let points = match (a.fixed_d, a.fixed_k) {
        (Some(d), None) => {
            let k_max = a.k_max.unwrap_or((d - 1) / 2);
            sweep_fixed_d(d, a.k_min.unwrap_or(1), k_max, &ctx)?
        }
        (None, Some(k)) => {
            let d_min = a.d_min.unwrap_or(2 * k + 1);
            let d_max = a
                .d_max
                .ok_or_else(|| Outcome::error(EXIT_INVALID, "--fixed-k needs --d-max"))?;
            sweep_fixed_k(k, d_min, d_max, &ctx)?
        }
        _ => {
            return Err(Outcome::error(
                EXIT_INVALID,
                "give exactly one of --fixed-d, --fixed-k",
            ))
        }
    };
    Ok(render_sweep(&points, a.format, a.digits))
}

/// Grid rendering shared by the rational tables.
fn render_grid(
    corner: &str,
    col_labels: &[String],
    rows: &[(String, Vec<String>)],
    format: OutputFormat,
) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            let _ = writeln!(out, "{corner},{}", col_labels.join(","));
            for (label, cells) in rows {
                let _ = writeln!(out, "{label},{}", cells.join(","));
            }
        }
        OutputFormat::Latex => {
            let _ = writeln!(
                out,
                "\\begin{{tabular}}{{r|{}}}",
                "r".repeat(col_labels.len())
            );
            let _ = writeln!(out, "${corner}$ & {} \\\\ \\hline", col_labels.join(" & "));
            for (label, cells) in rows {
                let cells: Vec<String> = cells.iter().map(|c| latex_rational(c)).collect();
                let _ = writeln!(out, "{label} & {} \\\\", cells.join(" & "));
            }
            out.push_str("\\end{tabular}\n");
        }
        OutputFormat::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|(label, cells)| {
                    let cells: Vec<String> = cells.iter().map(|c| json_string(c)).collect();
                    format!(
                        "{{\"row\":{},\"values\":[{}]}}",
                        json_string(label),
                        cells.join(",")
                    )
                })
                .collect();
            let _ = writeln!(out, "[{}]", items.join(","));
        }
        OutputFormat::Plain => {
            let mut widths: Vec<usize> = col_labels.iter().map(String::len).collect();
            for (_, cells) in rows {
                for (w, c) in widths.iter_mut().zip(cells) {
                    *w = (*w).max(c.len());
                }
            }
            let lw = rows
                .iter()
                .map(|(l, _)| l.len())
                .max()
                .unwrap_or(0)
                .max(corner.len());
            let _ = write!(out, "{corner:>lw$}");
            for (w, c) in widths.iter().zip(col_labels) {
                let _ = write!(out, "  {c:>w$}");
            }
            out.push('\n');
            for (label, cells) in rows {
                let _ = write!(out, "{label:>lw$}");
                for (w, c) in widths.iter().zip(cells) {
                    let _ = write!(out, "  {c:>w$}");
                }
                out.push('\n');
            }
        }
    }
    out
}

fn latex_rational(s: &str) -> String {
    match s.split_once('/') {
        Some((p, q)) => match p.strip_prefix('-') {
            Some(p) => format!("-\\frac{{{p}}}{{{q}}}"),
            None => format!("\\frac{{{p}}}{{{q}}}"),
        },
        None => s.to_string(),
    }
}

pub fn cmd_tables(a: &TablesArgs) -> CmdResult {
    if let Some(v) = &a.d_norlund {
        let (m_max, k_max) = (v[0], v[1]);
        if m_max == 0 {
            return Err(Outcome::error(EXIT_INVALID, "m_max must be at least 1"));
        }
        let mut table = DTable::new();
        let cols: Vec<String> = (0..=k_max).map(|k| k.to_string()).collect();
        let rows: Vec<(String, Vec<String>)> = (1..=m_max)
            .map(|m| {
                let row = table.row(m, k_max as usize);
                (
                    m.to_string(),
                    row.iter().map(BigRational::to_string).collect(),
                )
            })
            .collect();
        return Ok(render_grid("m\\k", &cols, &rows, a.format));
    }
    if let Some(n_max) = a.f {
        let ctx = precision_for(a.digits)?;
        let mut out = String::new();
        if a.format == OutputFormat::Csv {
            out.push_str("m,exact,value\n");
        }
        if a.format == OutputFormat::Latex {
            out.push_str("\\begin{tabular}{r|l|l}\n$m$ & $f_m$ & \\\\ \\hline\n");
        }
        let mut json = Vec::new();
        for m in 0..=n_max {
            let e = f_value(m);
            let v = evaluate(&e, &ctx).to_significant(a.digits);
            match a.format {
                OutputFormat::Plain => {
                    let _ = writeln!(out, "f_{m} = {e}  ≈ {v}");
                }
                OutputFormat::Latex => {
                    let _ = writeln!(out, "{m} & ${}$ & {v} \\\\", e.to_latex());
                }
                OutputFormat::Csv => {
                    let _ = writeln!(out, "{m},{},{v}", csv_quote(&e.to_string()));
                }
                OutputFormat::Json => json.push(format!(
                    "{{\"m\":{m},\"expr\":{},\"value\":{}}}",
                    e.to_json(),
                    json_string(&v)
                )),
            }
        }
        if a.format == OutputFormat::Latex {
            out.push_str("\\end{tabular}\n");
        }
        if a.format == OutputFormat::Json {
            let _ = writeln!(out, "[{}]", json.join(","));
        }
        return Ok(out);
    }
    if let Some(n_max) = a.central {
        if n_max == 0 {
            return Err(Outcome::error(EXIT_INVALID, "n_max must be at least 1"));
        }
        let odd: Vec<u32> = (1..=n_max).step_by(2).collect();
        let cols: Vec<String> = odd.iter().map(|k| k.to_string()).collect();
        let rows: Vec<(String, Vec<String>)> = odd
            .iter()
            .map(|&n| {
                let cells = odd
                    .iter()
                    .map(|&k| {
                        if k <= n {
                            central_t(n, k).to_string()
                        } else {
                            String::new()
                        }
                    })
                    .collect();
                (n.to_string(), cells)
            })
            .collect();
        return Ok(render_grid("n\\k", &cols, &rows, a.format));
    }
    Err(Outcome::error(
        EXIT_INVALID,
        "choose one of --d-norlund, --f, --central",
    ))
}

fn render_quad(a: &QuadArgs, r: &QuadResult) -> String {
    match a.format {
        OutputFormat::Plain | OutputFormat::Latex => format!(
            "value = {:.16e}\nerror_estimate = {:.3e}\nevaluations = {}\n",
            r.value, r.error_estimate, r.evaluations
        ),
        OutputFormat::Csv => format!(
            "d,k,value,error_estimate,evaluations\n{},{},{:.16e},{:.3e},{}\n",
            a.d, a.k, r.value, r.error_estimate, r.evaluations
        ),
        OutputFormat::Json => format!(
            "{{\"d\":{},\"k\":{},\"value\":{:e},\"error_estimate\":{:e},\"evaluations\":{}}}\n",
            a.d, a.k, r.value, r.error_estimate, r.evaluations
        ),
    }
}

pub fn cmd_quad(a: &QuadArgs) -> CmdResult {
    let cfg = QuadratureConfig {
        abs_tol: a.tol,
        scheme: a.scheme,
        ..QuadratureConfig::default()
    };
    let r = if a.factor_sum {
        logdet_factor_sum(a.d, a.k, &cfg)?
    } else {
        logdet_quadrature(a.d, a.k, &cfg)?
    };
    Ok(render_quad(a, &r))
}

pub fn cmd_rule(a: &RuleArgs) -> CmdResult {
    let latex = match a.format {
        OutputFormat::Plain => false,
        OutputFormat::Latex => true,
        _ => {
            return Err(Outcome::error(
                EXIT_INVALID,
                "rule supports --format plain or latex",
            ))
        }
    };
    let text = match a.d {
        Some(d) => {
            let rule = product_rule(d, a.k)?;
            if latex {
                rule.to_latex()
            } else {
                rule.to_string()
            }
        }
        None => {
            if a.k < 1 {
                return Err(GjmsError::InvalidOrder { k: a.k }.into());
            }
            let k = u32::try_from(a.k).map_err(|_| Outcome::error(EXIT_INVALID, "k too large"))?;
            render_rule(k, &rule_exponents(k)?, None, latex)
        }
    };
    Ok(format!("{text}\n"))
}
