//! Command-line front end.
//!
//! Every command writes a table (CSV by default) whose first line is
//! `# gwtree <args>`: the fully resolved configuration. Running `gwtree`
//! with those arguments reproduces the output byte for byte.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use crate::analytic::{lambert_w0, survival_prob};
use crate::error::Error;
use crate::exact::{
    complex_decay, default_cap, disc_bound_check, eval_series, exact_prob, series_coeffs, series_nmax_for,
    Precision, DISC_SAMPLES,
};
use crate::fit::DecayFit;
use crate::montecarlo::{estimate_prob, even_level_tail, sym_diff_decay, Execution};
use crate::property::{parse_property, truncate, LevelConvention, Property, TautProperty, Truncation};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Exact probability intervals of a truncated property.
    Exact,
    /// Monte Carlo estimates of a truncated property.
    Mc,
    /// Exact probability intervals over a lambda range.
    Sweep,
    /// Monte Carlo decay of P(A_k △ A_K*).
    Decay,
    /// Power-series coefficients, or the series evaluated at --z.
    Series,
    /// Series modulus on the complex disc against the real bound.
    Disc,
    /// Disc suprema of consecutive truncation differences.
    Cdecay,
    /// Survival probability by fixed point and by Lambert W.
    Survival,
    /// Principal branch of Lambert W.
    Lambertw,
    /// Monte Carlo estimate of few even-level nodes among the first k.
    Evenlevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruncationArg {
    /// Witness truncation for monotone properties, the property itself when
    /// it is decided within k nodes, size truncation otherwise.
    Auto,
    Witness,
    Size,
    Determined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    RootZero,
    RootOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "gwtree", version, about = "Tree-property probabilities on Poisson Galton-Watson trees")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// root1, even1, flevel2:<even|odd|prime|list:3,5>, size-lt:n, size-eq:n, size-ge:n, true, false; unions with `+`.
    #[arg(long)]
    pub property: Option<String>,
    /// A value or `min:max:steps`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// A value or `min:max:step`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Per-node child-count cap for exact computations.
    #[arg(long)]
    pub cap: Option<u32>,
    /// Highest series coefficient (default chosen from --tol).
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Master RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Ground-truth horizon K* for `decay` (default 5 * max k).
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum, default_value_t = TruncationArg::Auto)]
    pub truncation: TruncationArg,
    /// Complex point `re,im` for `series`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// A value or `min:max:steps` for `lambertw`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Largest acceptable series remainder.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Level of the root.
    #[arg(long, value_enum, default_value_t = ConventionArg::RootZero)]
    pub convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for Monte Carlo (does not change results).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CoefficientOverflow { .. } | Error::BelowResolution => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Output table with leading comment lines.
#[derive(Debug, Default)]
pub struct Table {
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        match format {
            Format::Csv => {
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
            }
            Format::Text => {
                let mut width: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
                for row in &self.rows {
                    for (w, cell) in width.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&width)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let _ = writeln!(out, "{}", line(self.columns.clone()));
                for row in &self.rows {
                    let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
                }
            }
        }
        out
    }
}

/// Floats carry 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| usage(format!("--{what}: cannot parse {s:?} as a number")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| usage(format!("--{what}: cannot parse {s:?} as a non-negative integer")))
}

/// `v` or `min:max:steps` (inclusive, evenly spaced).
pub fn parse_real_range(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts[..] {
        [v] => Ok(vec![parse_f64(v, what)?]),
        [lo, hi, steps] => {
            let (lo, hi) = (parse_f64(lo, what)?, parse_f64(hi, what)?);
            let steps = parse_usize(steps, what)?;
            if steps < 2 || lo >= hi {
                return Err(usage(format!("--{what}: range {s:?} needs min < max and at least 2 steps")));
            }
            Ok((0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (steps - 1) as f64
                    }
                })
                .collect())
        }
        _ => Err(usage(format!("--{what}: expected a value or min:max:steps, got {s:?}"))),
    }
}

/// `v` or `min:max:step` (inclusive).
pub fn parse_int_range(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts[..] {
        [v] => Ok(vec![parse_usize(v, what)?]),
        [lo, hi, step] => {
            let (lo, hi, step) = (parse_usize(lo, what)?, parse_usize(hi, what)?, parse_usize(step, what)?);
            if step == 0 || lo >= hi {
                return Err(usage(format!("--{what}: range {s:?} needs min < max and a positive step")));
            }
            Ok((lo..=hi).step_by(step).collect())
        }
        _ => Err(usage(format!("--{what}: expected a value or min:max:step, got {s:?}"))),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    Ok(Complex64::new(parse_f64(re, "z")?, parse_f64(im, "z")?))
}

/// Collects the resolved arguments that make up the header line.
struct Header(Vec<String>);

impl Header {
    fn new(command: Command) -> Self {
        let name = command.to_possible_value().expect("named command");
        Header(vec![name.get_name().to_string()])
    }

    fn flag(&mut self, name: &str, value: impl ToString) {
        self.0.push(format!("--{name}"));
        self.0.push(value.to_string());
    }

    fn line(&self) -> String {
        format!("gwtree {}", self.0.join(" "))
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("named value").get_name().to_string()
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    header: Header,
}

impl<'a> Ctx<'a> {
    fn property(&mut self) -> Result<(String, Property), CliError> {
        let spec = self
            .cfg
            .property
            .clone()
            .ok_or_else(|| usage("--property is required for this command"))?;
        let convention = match self.cfg.convention {
            ConventionArg::RootZero => LevelConvention::RootZero,
            ConventionArg::RootOne => LevelConvention::RootOne,
        };
        let prop = parse_property(&spec, convention)?;
        self.header.flag("property", &spec);
        self.header.flag("convention", value_name(self.cfg.convention));
        Ok((spec, prop))
    }

    /// Resolves `--truncation` for horizons of at least `min_k`.
    fn truncation(&mut self, prop: &Property, min_k: usize) -> Result<Truncation, CliError> {
        let mode = match self.cfg.truncation {
            TruncationArg::Auto if prop.is_monotone() => Truncation::Witness,
            TruncationArg::Auto if prop.horizon().is_some_and(|h| h <= min_k) => Truncation::Determined,
            TruncationArg::Auto | TruncationArg::Size => Truncation::Size,
            TruncationArg::Witness => Truncation::Witness,
            TruncationArg::Determined => Truncation::Determined,
        };
        let arg = match mode {
            Truncation::Witness => TruncationArg::Witness,
            Truncation::Size => TruncationArg::Size,
            Truncation::Determined => TruncationArg::Determined,
        };
        self.header.flag("truncation", value_name(arg));
        Ok(mode)
    }

    fn lambdas(&mut self) -> Result<Vec<f64>, CliError> {
        let s = self.cfg.lambda.as_deref().ok_or_else(|| usage("--lambda is required"))?;
        let values = parse_real_range(s, "lambda")?;
        if let Some(bad) = values.iter().find(|&&l| l <= 0.0) {
            return Err(usage(format!("--lambda must be positive, got {bad}")));
        }
        self.header.flag("lambda", s);
        Ok(values)
    }

    fn lambda(&mut self) -> Result<f64, CliError> {
        let values = self.lambdas()?;
        match values[..] {
            [l] => Ok(l),
            _ => Err(usage("--lambda must be a single value for this command")),
        }
    }

    fn ks(&mut self) -> Result<Vec<usize>, CliError> {
        let s = self.cfg.k.as_deref().ok_or_else(|| usage("--k is required"))?;
        let values = parse_int_range(s, "k")?;
        if values.contains(&0) {
            return Err(usage("--k must be at least 1"));
        }
        self.header.flag("k", s);
        Ok(values)
    }

    fn k(&mut self) -> Result<usize, CliError> {
        let values = self.ks()?;
        match values[..] {
            [k] => Ok(k),
            _ => Err(usage("--k must be a single value for this command")),
        }
    }

    fn samples_and_seed(&mut self) -> Result<(u64, u64), CliError> {
        if self.cfg.samples == 0 {
            return Err(usage("--samples must be positive"));
        }
        self.header.flag("samples", self.cfg.samples);
        self.header.flag("seed", self.cfg.seed);
        eprintln!("rng seed: {}", self.cfg.seed);
        Ok((self.cfg.samples, self.cfg.seed))
    }

    fn epsilon(&mut self) -> Result<f64, CliError> {
        if !(self.cfg.epsilon.is_finite() && self.cfg.epsilon > 0.0) {
            return Err(usage("--epsilon must be positive"));
        }
        self.header.flag("epsilon", self.cfg.epsilon);
        Ok(self.cfg.epsilon)
    }

    fn tol(&mut self) -> Result<f64, CliError> {
        if self.cfg.tol.is_nan() || self.cfg.tol <= 0.0 {
            return Err(usage("--tol must be positive"));
        }
        self.header.flag("tol", self.cfg.tol);
        Ok(self.cfg.tol)
    }
}

/// Runs a command and returns the rendered output.
pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let mut ctx = Ctx {
        cfg,
        header: Header::new(cfg.command),
    };
    let mut table = match cfg.command {
        Command::Exact | Command::Sweep => cmd_exact(&mut ctx)?,
        Command::Mc => cmd_mc(&mut ctx)?,
        Command::Decay => cmd_decay(&mut ctx)?,
        Command::Series => cmd_series(&mut ctx)?,
        Command::Disc => cmd_disc(&mut ctx)?,
        Command::Cdecay => cmd_cdecay(&mut ctx)?,
        Command::Survival => cmd_survival(&mut ctx)?,
        Command::Lambertw => cmd_lambertw(&mut ctx)?,
        Command::Evenlevel => cmd_evenlevel(&mut ctx)?,
    };
    ctx.header.flag("format", value_name(cfg.format));
    table.notes.insert(0, ctx.header.line());
    Ok(table.render(cfg.format))
}

fn cmd_exact(ctx: &mut Ctx) -> Result<Table, CliError> {
    let (spec, prop) = ctx.property()?;
    let ks = ctx.ks()?;
    let mode = ctx.truncation(&prop, ks[0])?;
    let lambdas = ctx.lambdas()?;
    let cap = ctx.cfg.cap;
    if cap == Some(0) {
        return Err(usage("--cap must be at least 1"));
    }
    if let Some(cap) = cap {
        ctx.header.flag("cap", cap);
    }
    let mut table = Table::new(&["property", "k", "lambda", "lower", "upper", "tail_mass"]);
    for &k in &ks {
        let p = truncate(&prop, k, mode)?;
        for &lambda in &lambdas {
            let interval = exact_prob(&p, lambda, cap.unwrap_or_else(|| default_cap(lambda)))?;
            if interval.precision == Precision::CapTooSmall {
                eprintln!("warning: cap too small at k = {k}, lambda = {lambda}: tail mass {}", interval.tail_mass);
            }
            table.rows.push(vec![
                spec.clone(),
                k.to_string(),
                num(lambda),
                num(interval.lower),
                num(interval.upper),
                num(interval.tail_mass),
            ]);
        }
    }
    Ok(table)
}

/// Runs `f` on a pool of `--workers` threads when given.
fn with_workers<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match cfg.workers {
        None => Ok(f()),
        Some(0) => Err(usage("--workers must be positive")),
        #[cfg(feature = "parallel")]
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}"))),
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f()),
    }
}

fn cmd_mc(ctx: &mut Ctx) -> Result<Table, CliError> {
    let (_, prop) = ctx.property()?;
    let k = ctx.k()?;
    let mode = ctx.truncation(&prop, k)?;
    let lambdas = ctx.lambdas()?;
    let (n, seed) = ctx.samples_and_seed()?;
    let p = truncate(&prop, k, mode)?;
    let mut table = Table::new(&["lambda", "p_hat", "ci_low", "ci_high"]);
    for lambda in lambdas {
        let e = with_workers(ctx.cfg, || estimate_prob(&p, lambda, n, seed, Execution::default()))??;
        table
            .rows
            .push(vec![num(lambda), num(e.p_hat), num(e.ci_low), num(e.ci_high)]);
    }
    Ok(table)
}

fn fit_note(fit: &Result<DecayFit, Error>) -> String {
    match fit {
        Ok(f) => format!(
            "fit: c_hat={} C_hat={} r_squared={} points={}",
            num(f.c_hat),
            num(f.big_c_hat),
            num(f.r_squared),
            f.used
        ),
        Err(e) => format!("fit: {e}"),
    }
}

fn decay_row(k: usize, e: &crate::montecarlo::MCEstimate) -> Vec<String> {
    vec![
        k.to_string(),
        num(e.p_hat),
        num(e.ci_low),
        num(e.ci_high),
        e.n_samples.to_string(),
    ]
}

fn cmd_decay(ctx: &mut Ctx) -> Result<Table, CliError> {
    let (_, prop) = ctx.property()?;
    let ks = ctx.ks()?;
    let mode = ctx.truncation(&prop, ks[0])?;
    let lambda = ctx.lambda()?;
    let horizon = ctx.cfg.horizon.unwrap_or(5 * ks.last().copied().unwrap_or(1));
    ctx.header.flag("horizon", horizon);
    let (n, seed) = ctx.samples_and_seed()?;
    let d = with_workers(ctx.cfg, || {
        sym_diff_decay(&prop, mode, lambda, &ks, horizon, n, seed, Execution::default())
    })??;
    let mut table = Table::new(&["k", "estimate", "ci_low", "ci_high", "n_samples"]);
    table.notes.push(fit_note(&d.fit));
    let bias = d
        .horizon_bias()
        .map_or_else(|| "unavailable".to_string(), num);
    table.notes.push(format!(
        "ground truth is the verdict at horizon {horizon}; its bias is at most P(A △ A_{horizon}), extrapolated {bias}"
    ));
    table.rows = d.rows.iter().map(|(k, e)| decay_row(*k, e)).collect();
    Ok(table)
}

fn cmd_evenlevel(ctx: &mut Ctx) -> Result<Table, CliError> {
    let lambda = ctx.lambda()?;
    let ks = ctx.ks()?;
    let (n, seed) = ctx.samples_and_seed()?;
    let mut table = Table::new(&["k", "estimate", "ci_low", "ci_high", "n_samples"]);
    let mut estimates = Vec::new();
    for &k in &ks {
        let r = with_workers(ctx.cfg, || even_level_tail(lambda, k, n, seed, Execution::default()))??;
        table.notes.push(format!(
            "k={k} threshold={} P(|T|>=k)={}",
            r.threshold,
            num(r.reaches_k.p_hat)
        ));
        estimates.push(r.tail.p_hat);
        table.rows.push(decay_row(k, &r.tail));
    }
    if ks.len() > 1 {
        table.notes.push(fit_note(&DecayFit::fit(&ks, &estimates)));
    }
    Ok(table)
}

fn cmd_series(ctx: &mut Ctx) -> Result<Table, CliError> {
    let (_, prop) = ctx.property()?;
    let k = ctx.k()?;
    let mode = ctx.truncation(&prop, k)?;
    let p = truncate(&prop, k, mode)?;
    let z = ctx.cfg.z.as_deref().map(parse_complex).transpose()?;
    let tol = ctx.tol()?;
    let nmax = match (ctx.cfg.nmax, z) {
        (Some(n), _) => n,
        (None, Some(z)) => {
            let (abs, re) = (z.norm(), z.re);
            series_nmax_for(k, (abs + re) / 2.0, (abs - re) / 2.0, tol)
        }
        (None, None) => series_nmax_for(k, 1.0, 0.0, tol),
    };
    ctx.header.flag("nmax", nmax);
    let coeffs = series_coeffs(&p, nmax)?;
    match z {
        None => {
            let mut table = Table::new(&["n", "a_n"]);
            table.rows = match coeffs.exact() {
                Some(exact) => exact
                    .iter()
                    .enumerate()
                    .map(|(n, a)| vec![n.to_string(), a.to_string()])
                    .collect(),
                None => coeffs
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(n, &a)| vec![n.to_string(), num(a)])
                    .collect(),
            };
            Ok(table)
        }
        Some(z) => {
            ctx.header.flag("z", format!("{},{}", z.re, z.im));
            let v = eval_series(&coeffs, z);
            if v.remainder > tol {
                return Err(CliError::Numeric(format!(
                    "series remainder {} exceeds --tol {tol}; raise --nmax",
                    v.remainder
                )));
            }
            let mut table = Table::new(&["re_z", "im_z", "re_f", "im_f", "remainder"]);
            table.rows.push(vec![
                num(z.re),
                num(z.im),
                num(v.value.re),
                num(v.value.im),
                num(v.remainder),
            ]);
            Ok(table)
        }
    }
}

fn cmd_disc(ctx: &mut Ctx) -> Result<Table, CliError> {
    let (_, prop) = ctx.property()?;
    let k = ctx.k()?;
    let mode = ctx.truncation(&prop, k)?;
    let lambda = ctx.lambda()?;
    let epsilon = ctx.epsilon()?;
    let p = truncate(&prop, k, mode)?;
    let r = disc_bound_check(&p, lambda, epsilon, DISC_SAMPLES)?;
    let mut table = Table::new(&["re_z", "im_z", "re_f", "im_f", "remainder", "bound", "ratio"]);
    table.notes.push(format!(
        "delta={} nmax={} max_ratio={} rigorous_bound={} max_rigorous_ratio={}",
        num(r.delta),
        r.nmax,
        num(r.max_ratio),
        num(r.rigorous_bound),
        num(r.max_rigorous_ratio)
    ));
    table.rows = r
        .points
        .iter()
        .map(|pt| {
            vec![
                num(pt.z.re),
                num(pt.z.im),
                num(pt.value.re),
                num(pt.value.im),
                num(pt.remainder),
                num(r.bound),
                num(pt.ratio),
            ]
        })
        .collect();
    if r.max_ratio > 1.0 + 1e-8 {
        eprintln!("warning: disc bound exceeded, max ratio {}", r.max_ratio);
    }
    Ok(table)
}

fn cmd_cdecay(ctx: &mut Ctx) -> Result<Table, CliError> {
    let (_, prop) = ctx.property()?;
    let ks = ctx.ks()?;
    let mode = ctx.truncation(&prop, ks[0])?;
    let lambda = ctx.lambda()?;
    let epsilon = ctx.epsilon()?;
    let family = |k: usize| -> crate::Result<TautProperty> { truncate(&prop, k, mode) };
    let rows = complex_decay(family, lambda, epsilon, &ks)?;
    let mut table = Table::new(&["k", "sup_abs", "remainder", "real_value", "lower", "upper"]);
    let sups: Vec<f64> = rows.iter().map(|r| r.sup_abs).collect();
    table.notes.push(fit_note(&DecayFit::fit(&ks, &sups)));
    table.rows = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                num(r.sup_abs),
                num(r.remainder),
                num(r.real_value),
                num(r.exact.lower),
                num(r.exact.upper),
            ]
        })
        .collect();
    Ok(table)
}

fn cmd_survival(ctx: &mut Ctx) -> Result<Table, CliError> {
    let lambdas = ctx.lambdas()?;
    let mut table = Table::new(&["lambda", "s_fixed_point", "s_lambert", "residual"]);
    for lambda in lambdas {
        let s = survival_prob(lambda)?;
        table
            .rows
            .push(vec![num(lambda), num(s.s_fixed_point), num(s.s_lambert), num(s.residual)]);
    }
    Ok(table)
}

fn cmd_lambertw(ctx: &mut Ctx) -> Result<Table, CliError> {
    let s = ctx.cfg.x.as_deref().ok_or_else(|| usage("--x is required"))?;
    let xs = parse_real_range(s, "x")?;
    ctx.header.flag("x", s);
    let mut table = Table::new(&["x", "w"]);
    for x in xs {
        table.rows.push(vec![num(x), num(lambert_w0(x)?)]);
    }
    Ok(table)
}

/// Parses the process arguments, runs, writes the output and returns the
/// exit code.
pub fn main() -> i32 {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = run(&cfg).and_then(|out| {
        match &cfg.output {
            Some(path) => std::fs::write(path, out)?,
            None => std::io::stdout().lock().write_all(out.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("run `gwtree --help` for usage");
            }
            e.exit_code()
        }
    }
}
