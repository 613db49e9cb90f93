//! Command-line front end for the `polya` binary.
//!
//! Exit codes: 0 when everything checked passes, 1 on a failed or tied
//! verdict or a lemma violation, 2 on a configuration error.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::special::EvalPolicy;
use crate::spectra::{
    self, ball_weyl_coefficient, Bc, DomainSpec, Regime, Shape, SweepResult, SweepRow, Verdict,
};
use crate::sum_lemmas::{run_campaign, CampaignConfig, CampaignSummary, LemmaVerdict};
use crate::zeros::ZeroCache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable naming the zero-table cache directory.
pub const CACHE_ENV: &str = "POLYA_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "polya",
    version,
    about = "Eigenvalue counts and Polya inequalities for sectors, disks and balls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Polya inequality at every eigenvalue up to the given bound.
    VerifyPolya(PolyaArgs),
    /// Run the randomized sum-inequality campaign and the deterministic lemma grids.
    VerifyLemmas(LemmaArgs),
    /// Print the numerical constants of the ball argument and the Weyl coefficients.
    Constants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Dirichlet,
    Neumann,
}

impl From<BcArg> for Bc {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Dirichlet => Bc::Dirichlet,
            BcArg::Neumann => Bc::Neumann,
        }
    }
}

#[derive(Debug, Args)]
pub struct PolyaArgs {
    /// `disk`, `ball:d` or `sector:α` (α may be written like `3pi/2`); repeatable.
    #[arg(long = "domain", required = true, value_parser = parse_shape)]
    pub domains: Vec<Shape>,
    #[arg(long, value_enum)]
    pub bc: BcArg,
    #[arg(long)]
    pub lambda_max: f64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Directory for the per-domain CSV files and `summary.jsonl`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Do not count tied verdicts as failures.
    #[arg(long)]
    pub allow_ties: bool,
    /// Allow Neumann balls in dimension ≥ 3; only their bound sums are compared.
    #[arg(long)]
    pub unproven: bool,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Samples per theorem.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Directory for `campaign.jsonl` and `summary.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `disk`, `ball:d` or `sector:α`.
pub fn parse_shape(s: &str) -> Result<Shape, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("disk") {
        return Ok(Shape::Ball(2));
    }
    if let Some(d) = s.strip_prefix("ball:") {
        let d: u32 = d
            .trim()
            .parse()
            .map_err(|_| format!("bad ball dimension in {s:?}"))?;
        return Ok(Shape::Ball(d));
    }
    if let Some(a) = s.strip_prefix("sector:") {
        return parse_angle(a).map(Shape::Sector);
    }
    Err(format!(
        "unknown domain {s:?}; expected disk, ball:d or sector:α"
    ))
}

/// A real number or a multiple of π: `1.5`, `pi`, `3pi/2`, `2*pi`, `π/4`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s
        .trim()
        .to_ascii_lowercase()
        .replace('π', "pi")
        .replace(' ', "");
    let bad = || format!("cannot parse angle {s:?}");
    let Some((pre, post)) = t.split_once("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let pre = pre.strip_suffix('*').unwrap_or(pre);
    let factor = if pre.is_empty() {
        1.0
    } else {
        pre.parse::<f64>().map_err(|_| bad())?
    };
    let divisor = match post {
        "" => 1.0,
        p => p
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    let v = factor * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Format with 17 significant digits; non-finite values become `null`.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

/// Run the binary with the given arguments, writing reports to `stdout` and
/// diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::VerifyPolya(a) => cmd_verify_polya(&a, stdout, stderr),
        Command::VerifyLemmas(a) => cmd_verify_lemmas(&a, stdout, stderr),
        Command::Constants => cmd_constants(stdout).map(|_| EXIT_OK).map_err(CliError::Io),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Compute(_) => EXIT_FAIL,
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))
}

fn zero_cache() -> Result<ZeroCache, CliError> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => {
            ZeroCache::with_dir(EvalPolicy::default(), PathBuf::from(dir))
                .map_err(|e| CliError::Config(format!("{CACHE_ENV}: {e}")))
        }
        _ => Ok(ZeroCache::default()),
    }
}

fn prepare_out(out: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    Ok(())
}

/// File-name stem for a domain, e.g. `sector_1.5707963267948966_dirichlet`.
pub fn file_stem(spec: &DomainSpec) -> String {
    let shape = match spec.shape() {
        Shape::Sector(a) => format!("sector_{a}"),
        Shape::Ball(2) => "disk".to_string(),
        Shape::Ball(d) => format!("ball{d}"),
    };
    format!("{shape}_{}", spec.bc())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("lambda,count,weyl,margin,verdict\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(r.lambda),
            r.count,
            num(r.weyl),
            num(r.margin),
            r.verdict.as_str()
        );
    }
    s
}

pub fn sweep_summary_json(res: &SweepResult) -> String {
    let outside = res
        .rows
        .iter()
        .filter(|r| r.regime == Regime::OutsideProvenRegime)
        .count();
    format!(
        "{{\"domain\":\"{}\",\"bc\":\"{}\",\"lambda_max\":{},\"min_margin\":{},\"jump_count\":{},\"ties\":{},\"failures\":{},\"rows_outside_proven_regime\":{}}}",
        res.spec.shape(),
        res.spec.bc(),
        num(res.lambda_max),
        num(res.min_margin()),
        res.jump_count,
        res.ties,
        res.failures(),
        outside
    )
}

/// Bound-sum comparison for domains without exact counting: on a grid of
/// `Λ` values the Neumann lower bound `Σ w [F/π + 3/4]` is compared with the
/// Weyl term.
fn bound_sum_sweep(spec: &DomainSpec, lambda_max: f64) -> Result<SweepResult, CliError> {
    let steps = 1000usize;
    let mut rows = Vec::with_capacity(steps);
    for i in 1..=steps {
        let lambda = lambda_max * i as f64 / steps as f64;
        let b = spectra::bound_sum_neumann(spec, lambda)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        let weyl =
            spectra::weyl_term(spec, lambda).map_err(|e| CliError::Compute(e.to_string()))?;
        let margin = b.value as f64 - weyl;
        let verdict = if b.near_ties > 0 || margin.abs() <= spectra::VERDICT_TIE_TOL * weyl.max(1.0)
        {
            Verdict::TieAmbiguous
        } else if margin > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        rows.push(SweepRow {
            lambda,
            count: b.value.max(0) as u64,
            weyl,
            margin,
            verdict,
            regime: Regime::OutsideProvenRegime,
        });
    }
    let ties = rows
        .iter()
        .filter(|r| r.verdict == Verdict::TieAmbiguous)
        .count();
    Ok(SweepResult {
        spec: *spec,
        lambda_max,
        rows,
        jump_count: 0,
        ties,
    })
}

pub fn cmd_verify_polya(
    a: &PolyaArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    if !(a.lambda_max.is_finite() && a.lambda_max >= 0.0) {
        return Err(CliError::Config(format!(
            "--lambda-max must be finite and >= 0, got {}",
            a.lambda_max
        )));
    }
    let bc: Bc = a.bc.into();
    let specs = a
        .domains
        .iter()
        .map(|&shape| {
            if a.unproven {
                DomainSpec::new_unproven(shape, bc)
            } else {
                DomainSpec::new(shape, bc)
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    prepare_out(&a.out)?;
    let cache = zero_cache()?;
    let pool = pool(a.workers)?;
    let mut summaries = String::new();
    let mut code = EXIT_OK;
    for spec in &specs {
        let counted = !matches!((spec.shape(), spec.bc()), (Shape::Ball(d), Bc::Neumann) if d >= 3);
        let res = if counted {
            pool.install(|| spectra::verify_polya(spec, &cache, a.lambda_max))
                .map_err(|e| CliError::Compute(format!("{}: {e}", spec.shape())))?
        } else {
            pool.install(|| bound_sum_sweep(spec, a.lambda_max))?
        };
        let line = sweep_summary_json(&res);
        writeln!(stdout, "{line}")?;
        summaries.push_str(&line);
        summaries.push('\n');
        if let Some(dir) = &a.out {
            fs::write(
                dir.join(format!("{}.csv", file_stem(spec))),
                sweep_csv(&res.rows),
            )?;
        }
        if res.failures() > 0 {
            let first = res
                .rows
                .iter()
                .find(|r| r.verdict == Verdict::Fail)
                .unwrap();
            writeln!(
                stderr,
                "{} {}: fails at lambda={} count={} weyl={}",
                spec.shape(),
                spec.bc(),
                num(first.lambda),
                first.count,
                num(first.weyl)
            )?;
            code = EXIT_FAIL;
        } else if res.ties > 0 && !a.allow_ties {
            writeln!(
                stderr,
                "{} {}: {} tied verdicts",
                spec.shape(),
                spec.bc(),
                res.ties
            )?;
            code = EXIT_FAIL;
        }
    }
    if let Some(dir) = &a.out {
        fs::write(dir.join("summary.jsonl"), summaries)?;
    }
    Ok(code)
}

/// Outcome of one deterministic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// First failing point, if any.
    pub witness: Option<String>,
}

impl GridCheck {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failed: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }
}

pub const LEMMA57_LAMBDAS: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];
pub const LEMMA54_LAMBDAS: [f64; 5] = [1.0, 10.0, 100.0, 1000.0, 10_000.0];

/// The multiplicity identity, the two integral inequalities for the weight
/// `f` and the Gamma-function simplification, on fixed grids.
pub fn lemma_grids() -> Vec<GridCheck> {
    let mut l57 = GridCheck::new("lemma57");
    for d in 3..=8 {
        for &lambda in &LEMMA57_LAMBDAS {
            let r = spectra::lemma57_sides(d, lambda);
            let ok = matches!(&r, Ok(c) if c.holds());
            l57.record(ok, || format!("d={d} lambda={lambda}: {r:?}"));
        }
    }
    let mut l52 = GridCheck::new("lemma52");
    for d in 3..=8 {
        for i in 0..=3000 {
            let t = i as f64 * 0.01;
            let (lhs, rhs) = spectra::lemma52_sides(d, t);
            l52.record(lhs <= rhs + 1e-12 * rhs.max(1e-300), || {
                format!("d={d} t={t}: {lhs} > {rhs}")
            });
        }
    }
    let mut l54 = GridCheck::new("lemma54");
    for d in 3..=8 {
        for &lambda in &LEMMA54_LAMBDAS {
            let r = spectra::lemma54_sides(d, lambda);
            let ok = matches!(r, Ok((lhs, rhs)) if lhs <= rhs + 1e-10 * rhs.abs().max(1.0));
            l54.record(ok, || format!("d={d} lambda={lambda}: {r:?}"));
        }
    }
    let mut e56 = GridCheck::new("eq56");
    for d in 3..=12 {
        for lambda in [1.0, 10.0, 100.0] {
            let r = spectra::eq56_sides(d, lambda);
            let ok = matches!(r, Ok((lhs, rhs)) if (lhs - rhs).abs() <= 1e-12 * rhs.abs());
            e56.record(ok, || format!("d={d} lambda={lambda}: {r:?}"));
        }
    }
    vec![l57, l52, l54, e56]
}

fn grids_json(grids: &[GridCheck]) -> String {
    let mut s = String::from("{");
    for (i, g) in grids.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "\"{}\":{{\"checked\":{},\"failed\":{}}}",
            g.name, g.checked, g.failed
        );
    }
    s.push('}');
    s
}

pub fn cmd_verify_lemmas(
    a: &LemmaArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    prepare_out(&a.out)?;
    let pool = pool(a.workers)?;
    let cfg = CampaignConfig::new(a.seed, a.samples);
    let records = pool
        .install(|| run_campaign(&cfg))
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let summary = CampaignSummary::from_records(&records);
    let grids = lemma_grids();
    let grid_failures: usize = grids.iter().map(|g| g.failed).sum();
    let violations = summary.violations() + grid_failures;
    let report = format!(
        "{{\"seed\":{},\"samples_per_theorem\":{},\"campaign\":{},\"grids\":{},\"violations\":{}}}",
        a.seed,
        a.samples,
        summary.to_json(),
        grids_json(&grids),
        violations
    );
    writeln!(stdout, "{report}")?;
    if let Some(dir) = &a.out {
        let mut lines = String::with_capacity(records.len() * 160);
        for r in &records {
            lines.push_str(&r.to_json_line());
            lines.push('\n');
        }
        fs::write(dir.join("campaign.jsonl"), lines)?;
        fs::write(dir.join("summary.json"), format!("{report}\n"))?;
    }
    for r in records
        .iter()
        .filter(|r| r.outcome.verdict == LemmaVerdict::Violated)
    {
        writeln!(stderr, "violation: {}", r.to_json_line())?;
    }
    for g in grids.iter().filter(|g| g.failed > 0) {
        writeln!(
            stderr,
            "violation: {} {}",
            g.name,
            g.witness.as_deref().unwrap_or("")
        )?;
    }
    Ok(if violations == 0 { EXIT_OK } else { EXIT_FAIL })
}

/// The angle used to split the ball argument.
pub const SIGMA: f64 = 3.0 * PI / 20.0;

/// `π / (4 (sin σ − σ cos σ))`.
pub fn dirichlet_threshold_constant() -> f64 {
    PI / (4.0 * (SIGMA.sin() - SIGMA * SIGMA.cos()))
}

/// `15π / (6√3 − 8π + 6π cos σ)`.
pub fn neumann_threshold_constant() -> f64 {
    15.0 * PI / (6.0 * 3f64.sqrt() - 8.0 * PI + 6.0 * PI * SIGMA.cos())
}

pub fn cmd_constants(out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "sigma {}", num(SIGMA))?;
    writeln!(
        out,
        "dirichlet_threshold {}",
        num(dirichlet_threshold_constant())
    )?;
    writeln!(
        out,
        "neumann_threshold {}",
        num(neumann_threshold_constant())
    )?;
    for d in 2..=8 {
        writeln!(
            out,
            "weyl_coefficient d={d} {}",
            num(ball_weyl_coefficient(d))
        )?;
    }
    Ok(())
}
