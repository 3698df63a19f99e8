//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 configuration error,
//! 3 enumeration budget exceeded, 4 purity, normalization or model error.
//! Data goes to stdout or `--out`; diagnostics go to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entropy::{shannon_limit, shannon_renyi, stabilizer_renyi, EntropyKind, EntropyResult, LimitTarget, Subject};
use crate::error::{Error, Result};
use crate::identities::{run_suite, suite_passed, SuiteConfig, SuiteSelection, VerificationReport};
use crate::matrix::{read_matrix_text, write_matrix_text, Matrix, SkewMatrix, TextMatrix};
use crate::minors::{Budget, MinorEngine};
use crate::models::{Boundary, Family, ModelSpec};
use crate::scaling::{
    entropy_series, fit_scaling, fit_window, write_series_rows, ScalingFit, SeriesPoint, Source, DEFAULT_FIT_MIN_L,
    SERIES_CSV_HEADER,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "magic-minors", version, about = "Exact stabilizer and Shannon-Renyi entropies of free-fermion Gaussian states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Cap on enumerated terms; overrides MAGIC_MINORS_MAX_TERMS.
    #[arg(long = "max-terms", global = true)]
    pub max_terms: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizer Renyi entropy M_alpha of a correlation-matrix model.
    Sre(EntropyArgs),
    /// Shannon-Renyi entropy H_alpha of the XX chain.
    Sr(EntropyArgs),
    /// Shannon (alpha = 1) limit of either entropy.
    Shannon(ShannonArgs),
    /// Check identities by brute force.
    Verify(VerifyArgs),
    /// Entropy series and fit to m L + b ln L - c.
    Scaling(ScalingArgs),
    /// Build or re-emit matrices in the text format.
    #[command(subcommand)]
    Matrix(MatrixCommand),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// tfi, xx, zn+1 or chiral.
    #[arg(long, default_value = "tfi")]
    pub model: String,
    #[arg(long, default_value = "pbc")]
    pub bc: Boundary,
    /// Exponent of z^n + 1.
    #[arg(long)]
    pub n: Option<usize>,
    /// Exponent of z^m + z^-m.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Sizes: a list like 2,4,6 or a range a..b[:step].
    #[arg(long = "L")]
    pub sizes: Option<String>,
    /// Read G (sre) or R (sr) from a matrix text file instead of a model.
    #[arg(long, conflicts_with = "sizes")]
    pub matrix: Option<PathBuf>,
    /// Renyi indices, comma separated.
    #[arg(long, default_value = "2")]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct ShannonArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "L")]
    pub sizes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Theorem1,
    XxTfi,
    Blocks,
    Gf,
    Table2,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub which: Which,
    /// Matrix sizes for theorem1.
    #[arg(long = "M")]
    pub matrix_sizes: Option<String>,
    #[arg(long = "L")]
    pub sizes: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub bc: Option<Boundary>,
    /// zn+1 or chiral, for blocks and gf.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of random matrices for theorem1.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replace every report's tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "L")]
    pub sizes: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value = "closed")]
    pub source: Source,
    /// Smallest size kept in the fit (default 20 for closed forms, none for brute force).
    #[arg(long = "min-L")]
    pub min_l: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// Print G (or R for the XX chain) of a model.
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "L")]
        size: usize,
    },
    /// Read a matrix file and print it in canonical form.
    Dump { input: PathBuf },
}

/// `2,4,6`, `2..8`, `200..2000:200` or a mix of these.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = |part: &str| Error::Parse(format!("invalid size list entry {part:?} (expected n, a..b or a..b:step)"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((h, st)) => (h, st.trim().parse::<usize>().map_err(|_| bad(part))?),
                None => (rest, 1),
            };
            let lo = lo.trim().parse::<usize>().map_err(|_| bad(part))?;
            let hi = hi.trim().parse::<usize>().map_err(|_| bad(part))?;
            if step == 0 || hi < lo {
                return Err(bad(part));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse::<usize>().map_err(|_| bad(part))?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty size list".into()));
    }
    Ok(out)
}

/// Comma-separated reals; `p/q` fractions are accepted.
pub fn parse_alphas(s: &str) -> Result<Vec<f64>> {
    let bad = |part: &str| Error::Parse(format!("invalid alpha {part:?}"));
    let out = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|part| {
            let v = match part.split_once('/') {
                Some((p, q)) => {
                    p.trim().parse::<f64>().map_err(|_| bad(part))? / q.trim().parse::<f64>().map_err(|_| bad(part))?
                }
                None => part.parse::<f64>().map_err(|_| bad(part))?,
            };
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!("alpha must be positive and finite, got {part}")))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    if out.is_empty() {
        return Err(Error::Parse("empty alpha list".into()));
    }
    Ok(out)
}

fn parse_family(name: &str, n: Option<usize>, m: Option<usize>) -> Result<Family> {
    match name.to_ascii_lowercase().as_str() {
        "tfi" => Ok(Family::Tfi),
        "xx" => Ok(Family::Xx),
        "zn+1" => n.map(|n| Family::ZnPlusOne { n }).ok_or_else(|| Error::Parse("zn+1 needs --n".into())),
        "chiral" => m.map(|m| Family::Chiral { m }).ok_or_else(|| Error::Parse("chiral needs --m".into())),
        other => Err(Error::Parse(format!("unknown model {other:?} (expected tfi, xx, zn+1 or chiral)"))),
    }
}

impl ModelArgs {
    fn family(&self) -> Result<Family> {
        parse_family(&self.model, self.n, self.m)
    }

    fn specs(&self, sizes: &[usize]) -> Result<Vec<ModelSpec>> {
        let family = self.family()?;
        sizes.iter().map(|&l| ModelSpec::new(family, self.bc, l)).collect()
    }
}

#[derive(Serialize)]
struct EntropyOutput<'a> {
    schema_version: u32,
    command: &'a str,
    results: &'a [EntropyResult],
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema_version: u32,
    command: &'a str,
    suite: &'a str,
    pass: bool,
    reports: &'a [VerificationReport],
}

#[derive(Serialize)]
struct ScalingRun {
    alpha: f64,
    boundary: Boundary,
    family: Family,
    source: Source,
    series: Vec<SeriesPoint>,
    fit: Option<ScalingFit>,
}

#[derive(Serialize)]
struct ScalingOutput<'a> {
    schema_version: u32,
    command: &'a str,
    runs: &'a [ScalingRun],
}

struct Outcome {
    data: String,
    exit: i32,
}

impl Outcome {
    fn ok(data: String) -> Self {
        Self { data, exit: 0 }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn entropy_of_matrix(engine: &MinorEngine, path: &std::path::Path, alpha: f64, amplitude: bool) -> Result<EntropyResult> {
    fn one<T: crate::matrix::Scalar>(engine: &MinorEngine, m: Matrix<T>, alpha: f64, amplitude: bool) -> Result<EntropyResult> {
        if amplitude {
            let r = SkewMatrix::new(m)?;
            if alpha == 1.0 {
                shannon_limit(engine, LimitTarget::ShannonRenyi(&r))
            } else {
                shannon_renyi(engine, &r, alpha)
            }
        } else if alpha == 1.0 {
            shannon_limit(engine, LimitTarget::Stabilizer(&m))
        } else {
            stabilizer_renyi(engine, &m, alpha)
        }
    }
    match read_matrix_text(&std::fs::read_to_string(path)?)? {
        TextMatrix::Real(m) => one(engine, m, alpha, amplitude),
        TextMatrix::Complex(m) => one(engine, m, alpha, amplitude),
    }
}

fn entropy_of_model(engine: &MinorEngine, spec: &ModelSpec, alpha: f64, amplitude: bool) -> Result<EntropyResult> {
    let r = if amplitude {
        let r = spec.amplitude_matrix()?;
        if alpha == 1.0 {
            shannon_limit(engine, LimitTarget::ShannonRenyi(&r))?
        } else {
            shannon_renyi(engine, &r, alpha)?
        }
    } else {
        let g = spec.correlation_matrix()?;
        if alpha == 1.0 {
            shannon_limit(engine, LimitTarget::Stabilizer(&g))?
        } else {
            stabilizer_renyi(engine, &g, alpha)?
        }
    };
    Ok(r.with_model(*spec))
}

fn entropy_command(engine: &MinorEngine, args: &EntropyArgs, amplitude: bool, format: Format) -> Result<Outcome> {
    let alphas = parse_alphas(&args.alpha)?;
    let mut results = Vec::new();
    match (&args.matrix, &args.sizes) {
        (Some(path), None) => {
            for &alpha in &alphas {
                results.push(entropy_of_matrix(engine, path, alpha, amplitude)?);
            }
        }
        (None, Some(sizes)) => {
            for spec in &args.model.specs(&parse_sizes(sizes)?)? {
                for &alpha in &alphas {
                    results.push(entropy_of_model(engine, spec, alpha, amplitude)?);
                }
            }
        }
        _ => return Err(Error::Parse("give exactly one of --L (with model flags) or --matrix".into())),
    }
    render_entropies(if amplitude { "sr" } else { "sre" }, &results, format)
}

fn shannon_command(engine: &MinorEngine, args: &ShannonArgs, format: Format) -> Result<Outcome> {
    let specs = args.model.specs(&parse_sizes(&args.sizes)?)?;
    let results = specs
        .iter()
        .map(|spec| entropy_of_model(engine, spec, 1.0, !spec.family.has_correlation_matrix()))
        .collect::<Result<Vec<_>>>()?;
    render_entropies("shannon", &results, format)
}

fn describe(r: &EntropyResult) -> (String, String, String) {
    match r.subject {
        Subject::Model(spec) => (spec.family.to_string(), spec.boundary.to_string(), spec.size.to_string()),
        Subject::Raw { dim } => ("matrix".into(), String::new(), dim.to_string()),
    }
}

fn render_entropies(command: &str, results: &[EntropyResult], format: Format) -> Result<Outcome> {
    let data = match format {
        Format::Json => to_json(&EntropyOutput { schema_version: SCHEMA_VERSION, command, results })?,
        Format::Csv => {
            let mut s = String::from("kind,model,boundary,L,alpha,value\n");
            for r in results {
                let kind = match r.kind {
                    EntropyKind::Stabilizer => "stabilizer",
                    EntropyKind::ShannonRenyi => "shannon_renyi",
                };
                let (model, bc, size) = describe(r);
                let _ = writeln!(s, "{kind},{model},{bc},{size},{},{:.17e}", r.alpha, r.value);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in results {
                let symbol = if r.kind == EntropyKind::Stabilizer { "M" } else { "H" };
                let (model, bc, size) = describe(r);
                let _ = writeln!(s, "{symbol}_{}({model}, {bc}, L={size}) = {:.15}", r.alpha, r.value);
            }
            s
        }
    };
    Ok(Outcome::ok(data))
}

fn block_family(args: &VerifyArgs) -> Result<Option<Family>> {
    match &args.family {
        None => Ok(None),
        Some(name) => {
            let f = parse_family(name, args.n, args.m)?;
            if matches!(f, Family::Tfi | Family::Xx) {
                return Err(Error::Parse(format!("--family must be zn+1 or chiral, got {name}")));
            }
            Ok(Some(f))
        }
    }
}

fn suite_config(args: &VerifyArgs) -> Result<SuiteConfig> {
    let mut c = SuiteConfig::default();
    if let Some(seed) = args.seed {
        c.seed = seed;
    }
    if args.which == Which::All {
        return Ok(c);
    }
    let sizes = args.sizes.as_deref().map(parse_sizes).transpose()?;
    let alphas = args.alpha.as_deref().map(parse_alphas).transpose()?;
    if let Some(bc) = args.bc {
        c.boundaries = vec![bc];
    }
    match args.which {
        Which::Theorem1 => {
            if let Some(m) = args.matrix_sizes.as_deref() {
                c.theorem1_sizes = parse_sizes(m)?;
            }
            if let Some(a) = alphas {
                c.theorem1_alphas = a;
            }
            if let Some(n) = args.count {
                c.theorem1_count = n;
            }
        }
        Which::XxTfi => {
            if let Some(s) = sizes {
                c.obc_reading_sizes = s.clone();
                c.xx_sizes = s;
            }
            if let Some(a) = alphas {
                c.xx_alphas = a;
            }
        }
        Which::Blocks => {
            let family = block_family(args)?;
            c.block_cases = match (family, sizes) {
                (Some(f), Some(s)) => s.into_iter().map(|l| (f, l)).collect(),
                (Some(f), None) => c.block_cases.into_iter().filter(|(g, _)| *g == f).collect(),
                (None, Some(s)) => c.block_cases.into_iter().filter(|(_, l)| s.contains(l)).collect(),
                (None, None) => c.block_cases,
            };
        }
        Which::Gf => {
            let family = block_family(args)?;
            if family.is_some() || sizes.is_some() || alphas.is_some() {
                let families = family.map(|f| vec![f]).unwrap_or_else(|| vec![Family::ZnPlusOne { n: 2 }, Family::Chiral { m: 1 }]);
                let sizes = sizes.unwrap_or_else(|| vec![8]);
                let alphas = alphas.unwrap_or_else(|| vec![2.0, 4.0]);
                c.gf_cases.clear();
                for &f in &families {
                    for &l in &sizes {
                        c.gf_cases.extend(alphas.iter().map(|&a| (f, l, a)));
                    }
                }
            }
        }
        Which::Table2 => {
            if let Some(s) = sizes {
                c.table2_pbc_sizes = s.clone();
                c.table2_obc_sizes = s;
            }
        }
        Which::All => unreachable!(),
    }
    Ok(c)
}

fn which_name(w: Which) -> &'static str {
    match w {
        Which::Theorem1 => "theorem1",
        Which::XxTfi => "xx-tfi",
        Which::Blocks => "blocks",
        Which::Gf => "gf",
        Which::Table2 => "table2",
        Which::All => "all",
    }
}

fn verify_command(engine: &MinorEngine, args: &VerifyArgs, format: Format) -> Result<Outcome> {
    let config = suite_config(args)?;
    let selection = match args.which {
        Which::Theorem1 => SuiteSelection::Theorem1,
        Which::XxTfi => SuiteSelection::XxTfi,
        Which::Blocks => SuiteSelection::Blocks,
        Which::Gf => SuiteSelection::Gf,
        Which::Table2 => SuiteSelection::Table2,
        Which::All => SuiteSelection::All,
    };
    let mut reports = run_suite(engine, selection, &config)?;
    if let Some(t) = args.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be nonnegative, got {t}")));
        }
        for r in &mut reports {
            r.tolerance = t;
            r.pass = r.max_rel_error.is_finite() && r.max_rel_error <= t;
        }
    }
    let pass = suite_passed(&reports);
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass && !r.informational).map(|r| r.identity_name.as_str()).collect();
    eprintln!("verify {}: {} reports, {} failed", which_name(args.which), reports.len(), failed.len());
    for name in &failed {
        eprintln!("  FAIL {name}");
    }
    let data = match format {
        Format::Json => to_json(&VerifyOutput {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            suite: which_name(args.which),
            pass,
            reports: &reports,
        })?,
        Format::Csv => {
            let mut s = String::from("identity_name,pass,informational,max_rel_error,tolerance\n");
            for r in &reports {
                let _ = writeln!(s, "{},{},{},{:e},{:e}", r.identity_name, r.pass, r.informational, r.max_rel_error, r.tolerance);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let status = match (r.pass, r.informational) {
                    (true, _) => "PASS",
                    (false, true) => "NOTE",
                    (false, false) => "FAIL",
                };
                let _ = writeln!(s, "{status} {} max_rel_error={:e} tolerance={:e}", r.identity_name, r.max_rel_error, r.tolerance);
            }
            s
        }
    };
    Ok(Outcome { data, exit: if pass { 0 } else { EXIT_VERIFICATION_FAILED } })
}

fn scaling_command(engine: &MinorEngine, args: &ScalingArgs, format: Format) -> Result<Outcome> {
    let family = args.model.family()?;
    if family == Family::Xx {
        return Err(Error::InvalidModel("scaling works on correlation-matrix models; the XX chain maps to tfi".into()));
    }
    let sizes = parse_sizes(&args.sizes)?;
    let alphas = parse_alphas(&args.alpha)?;
    if alphas.contains(&1.0) {
        return Err(Error::Domain("alpha = 1 is excluded from scaling fits".into()));
    }
    let mut runs = Vec::new();
    for &alpha in &alphas {
        let series = entropy_series(engine, family, args.model.bc, alpha, &sizes, args.source)?;
        let fit = if family == Family::Tfi {
            let min_l = args.min_l.unwrap_or(if args.source == Source::Closed { DEFAULT_FIT_MIN_L } else { 0 });
            Some(fit_scaling(alpha, args.model.bc, &fit_window(&series, min_l))?)
        } else {
            eprintln!("scaling: {family} is a multiple of the TFI series; no separate fit");
            None
        };
        if let Some(f) = &fit {
            eprintln!(
                "scaling alpha={alpha} {}: m={:.6} b={:.6} c={:.6} (predicted b={}, c={})",
                args.model.bc,
                f.m_alpha,
                f.b_alpha,
                f.c_alpha,
                f.predicted.b,
                f.predicted.c.map_or("none".to_string(), |c| format!("{c:.6}"))
            );
            if f.finite_size_caveat {
                eprintln!("scaling: largest L is small; coefficients carry finite-size corrections");
            }
        }
        runs.push(ScalingRun { alpha, boundary: args.model.bc, family, source: args.source, series, fit });
    }
    let data = match format {
        Format::Json => to_json(&ScalingOutput { schema_version: SCHEMA_VERSION, command: "scaling", runs: &runs })?,
        Format::Csv => {
            let mut buf = format!("{SERIES_CSV_HEADER}\n").into_bytes();
            for r in &runs {
                write_series_rows(&mut buf, r.alpha, r.boundary, &r.series, r.source)?;
            }
            String::from_utf8(buf).expect("ascii output")
        }
        Format::Text => {
            let mut s = String::new();
            for r in &runs {
                for p in &r.series {
                    let _ = writeln!(s, "alpha={} L={} M={:.15}", r.alpha, p.l, p.value);
                }
                if let Some(f) = &r.fit {
                    let _ = writeln!(
                        s,
                        "fit alpha={} m={:.12} b={:.12} c={:.12} rms={:e}",
                        f.alpha, f.m_alpha, f.b_alpha, f.c_alpha, f.residual_rms
                    );
                }
            }
            s
        }
    };
    Ok(Outcome::ok(data))
}

fn matrix_command(cmd: &MatrixCommand) -> Result<Outcome> {
    match cmd {
        MatrixCommand::Build { model, size } => {
            let spec = ModelSpec::new(model.family()?, model.bc, *size)?;
            let text = if spec.family.has_correlation_matrix() {
                write_matrix_text(&spec.correlation_matrix()?)
            } else {
                write_matrix_text(spec.amplitude_matrix()?.as_matrix())
            };
            Ok(Outcome::ok(text))
        }
        MatrixCommand::Dump { input } => {
            let text = std::fs::read_to_string(input)?;
            let out = match read_matrix_text(&text)? {
                TextMatrix::Real(m) => {
                    eprintln!("{}x{} real, max |entry| {:e}", m.rows(), m.cols(), m.max_abs());
                    write_matrix_text(&m)
                }
                TextMatrix::Complex(m) => {
                    eprintln!("{}x{} complex, max |entry| {:e}", m.rows(), m.cols(), m.max_abs());
                    write_matrix_text(&m)
                }
            };
            Ok(Outcome::ok(out))
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(w) = cli.global.workers {
        if w == 0 {
            return Err(Error::Parse("--workers must be at least 1".into()));
        }
        // A pool may already exist when called more than once in-process; the
        // reduction order does not depend on it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let budget = match cli.global.max_terms {
        Some(n) => Budget::with_max_terms(n),
        None => Budget::from_env()?,
    };
    let engine = MinorEngine::new(budget);
    let fmt = |default: Format| cli.global.format.unwrap_or(default);
    let outcome = match &cli.command {
        Command::Sre(a) => entropy_command(&engine, a, false, fmt(Format::Json))?,
        Command::Sr(a) => entropy_command(&engine, a, true, fmt(Format::Json))?,
        Command::Shannon(a) => shannon_command(&engine, a, fmt(Format::Json))?,
        Command::Verify(a) => verify_command(&engine, a, fmt(Format::Json))?,
        Command::Scaling(a) => scaling_command(&engine, a, fmt(Format::Json))?,
        Command::Matrix(m) => matrix_command(m)?,
    };
    match &cli.global.out {
        Some(path) => std::fs::write(path, &outcome.data)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.data.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(outcome.exit)
}

/// Parses `args` (including the program name) and runs one command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("2,4,6").unwrap(), vec![2, 4, 6]);
        assert_eq!(parse_sizes("200..1000:200").unwrap(), vec![200, 400, 600, 800, 1000]);
        assert_eq!(parse_sizes("2..4, 8").unwrap(), vec![2, 3, 4, 8]);
        for bad in ["", "a", "4..2", "2..8:0", "1..x"] {
            assert!(parse_sizes(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn alpha_lists() {
        assert_eq!(parse_alphas("0.5,1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_alphas("1/2").unwrap(), vec![0.5]);
        assert!(matches!(parse_alphas("-1"), Err(Error::Domain(_))));
        assert!(parse_alphas("x").is_err());
    }

    #[test]
    fn families() {
        assert_eq!(parse_family("zn+1", Some(2), None).unwrap(), Family::ZnPlusOne { n: 2 });
        assert!(parse_family("zn+1", None, None).is_err());
        assert!(parse_family("heisenberg", None, None).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["magic-minors", "frobnicate"]), 2);
        assert_eq!(run(["magic-minors", "sre", "--alpha", "2"]), 2);
        assert_eq!(run(["magic-minors", "sre", "--model", "xx", "--L", "4"]), 2);
        assert_eq!(run(["magic-minors", "sre", "--model", "zn+1", "--n", "3", "--L", "8"]), 2);
        assert_eq!(run(["magic-minors", "scaling", "--alpha", "1", "--L", "20..80:20"]), 2);
    }

    #[test]
    fn capacity_exit_three() {
        assert_eq!(run(["magic-minors", "--max-terms", "10", "sre", "--L", "4", "--alpha", "2"]), 3);
    }
}
