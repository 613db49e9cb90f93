//! Zeros `j_{ν,k}` of `J_ν` and `j'_{ν,k}` of `J'_ν`, memoised per order.
//!
//! Zeros are located by scanning sign changes on a fixed grid and refined
//! with a bracketed Newton iteration. For Neumann data the order-zero table
//! starts with `j'_{0,1} = 0`, the constant eigenfunction.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::special::{bessel_j_and_prime, bessel_j_second, EvalPolicy, SpecialError};

/// Grid step of the sign-change scan.
pub const SCAN_STEP: f64 = 0.25;
/// Relative distance below which a zero and a threshold are called a tie.
pub const TIE_REL_TOL: f64 = 1e-9;
/// The scan always runs this far past the requested end.
const SCAN_PAD: f64 = 1e-6;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroError {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("invalid zero-table request: {0}")]
    InvalidInput(String),
    #[error("zero refinement did not converge in [{lo}, {hi}] (nu = {nu})")]
    NonConvergence { nu: f64, lo: f64, hi: f64 },
    #[error(
        "suspicious gap between zeros {lo} and {hi} of order {nu}: a zero may have been missed"
    )]
    SuspectGap { nu: f64, lo: f64, hi: f64 },
    #[error("zero {zero} (k = {k}) of order {nu} is within tie tolerance of x = {x}")]
    AmbiguousTie {
        nu: f64,
        k: usize,
        zero: f64,
        x: f64,
        /// The count under the `≤` convention, for callers that only report.
        count: usize,
    },
    #[error("zero cache file {path}: {reason}")]
    Cache { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, ZeroError>;

/// Which function's zeros a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroKind {
    /// Zeros of `J_ν`.
    Dirichlet,
    /// Zeros of `J'_ν`, with `j'_{0,1} = 0`.
    Neumann,
}

impl ZeroKind {
    pub fn tag(self) -> char {
        match self {
            ZeroKind::Dirichlet => 'D',
            ZeroKind::Neumann => 'N',
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "D" => Some(ZeroKind::Dirichlet),
            "N" => Some(ZeroKind::Neumann),
            _ => None,
        }
    }
}

impl fmt::Display for ZeroKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Count of zeros `≤ x` together with the closest approach `min |z² − x²|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountWithMargin {
    pub count: usize,
    pub min_gap: f64,
}

/// Refined zeros of one order, complete on `[0, complete_to]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    nu: f64,
    kind: ZeroKind,
    zeros: Vec<f64>,
    refined_to: f64,
    complete_to: f64,
}

impl ZeroTable {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn kind(&self) -> ZeroKind {
        self.kind
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Largest absolute refinement step accepted for any entry.
    pub fn refined_to(&self) -> f64 {
        self.refined_to
    }

    /// Every zero in `[0, complete_to]` is present.
    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Number of zeros `≤ x`. Fails with [`ZeroError::AmbiguousTie`] when some
    /// zero sits within `1e-9·max(1, x)` of `x`.
    pub fn count_leq(&self, x: f64) -> Result<CountWithMargin> {
        if !x.is_finite() || x < 0.0 {
            return Err(ZeroError::InvalidInput(format!(
                "threshold must be finite and >= 0, got {x}"
            )));
        }
        if x > self.complete_to {
            return Err(ZeroError::InvalidInput(format!(
                "table for nu = {} is complete only up to {}, asked for {x}",
                self.nu, self.complete_to
            )));
        }
        let count = self.zeros.partition_point(|&z| z <= x);
        let min_gap = self
            .zeros
            .iter()
            .map(|&z| (z * z - x * x).abs())
            .fold(f64::INFINITY, f64::min);
        let tol = TIE_REL_TOL * x.max(1.0);
        // only the neighbours of x can be within tolerance
        let lo = count.saturating_sub(1);
        let hi = (count + 1).min(self.zeros.len());
        for (offset, &z) in self.zeros[lo..hi].iter().enumerate() {
            // the conventional zero at the origin is exact, never a tie
            if z != 0.0 && (z - x).abs() < tol {
                return Err(ZeroError::AmbiguousTie {
                    nu: self.nu,
                    k: lo + offset + 1,
                    zero: z,
                    x,
                    count,
                });
            }
        }
        Ok(CountWithMargin { count, min_gap })
    }

    /// Write the table in the line-oriented cache format.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let io_err = |e: std::io::Error| ZeroError::Cache {
            path: path.display().to_string(),
            reason: e.to_string(),
        };
        let mut out = BufWriter::new(fs::File::create(path).map_err(io_err)?);
        writeln!(
            out,
            "nu={:.16e} kind={} tol={:.16e}",
            self.nu,
            self.kind.tag(),
            self.refined_to
        )
        .map_err(io_err)?;
        for (k, z) in self.zeros.iter().enumerate() {
            writeln!(out, "{}\t{:.16e}", k + 1, z).map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }

    /// Read a cache file. The table is treated as complete up to its last zero.
    pub fn read_from(path: &Path) -> Result<Self> {
        let bad = |reason: String| ZeroError::Cache {
            path: path.display().to_string(),
            reason,
        };
        let file = fs::File::open(path).map_err(|e| bad(e.to_string()))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .map_err(|e| bad(e.to_string()))?;
        let mut nu = None;
        let mut kind = None;
        let mut tol = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("nu", v)) => nu = v.parse::<f64>().ok(),
                Some(("kind", v)) => kind = ZeroKind::from_tag(v),
                Some(("tol", v)) => tol = v.parse::<f64>().ok(),
                _ => return Err(bad(format!("unexpected header field {field:?}"))),
            }
        }
        let (nu, kind, tol) = match (nu, kind, tol) {
            (Some(n), Some(k), Some(t)) => (n, k, t),
            _ => return Err(bad(format!("malformed header {header:?}"))),
        };
        let mut zeros = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| bad(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (k, z) = line
                .split_once('\t')
                .ok_or_else(|| bad(format!("line {} is not `k<TAB>zero`", i + 2)))?;
            let k: usize = k
                .parse()
                .map_err(|_| bad(format!("bad index on line {}", i + 2)))?;
            let z: f64 = z
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad zero on line {}", i + 2)))?;
            if k != zeros.len() + 1 {
                return Err(bad(format!("indices not consecutive at line {}", i + 2)));
            }
            if zeros.last().is_some_and(|&prev| z <= prev) {
                return Err(bad(format!("zeros not increasing at line {}", i + 2)));
            }
            zeros.push(z);
        }
        let complete_to = zeros.last().copied().unwrap_or(0.0);
        Ok(ZeroTable {
            nu,
            kind,
            zeros,
            refined_to: tol,
            complete_to,
        })
    }
}

fn validate_request(nu: f64, x_max: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(ZeroError::Special(SpecialError::InvalidOrder(nu)));
    }
    if !x_max.is_finite() || x_max < 0.0 {
        return Err(ZeroError::InvalidInput(format!(
            "x_max must be finite and >= 0, got {x_max}"
        )));
    }
    Ok(())
}

/// The function whose zeros we want and its derivative.
fn target(nu: f64, kind: ZeroKind, x: f64, policy: &EvalPolicy) -> Result<(f64, f64)> {
    let (j, jp) = bessel_j_and_prime(nu, x, policy)?;
    Ok(match kind {
        ZeroKind::Dirichlet => (j, jp),
        ZeroKind::Neumann => (jp, bessel_j_second(nu, x, j, jp)),
    })
}

/// Bracketed Newton: Newton steps that leave `[lo, hi]` are replaced by
/// bisection. Returns the root and the size of the last step.
fn refine(
    nu: f64,
    kind: ZeroKind,
    mut lo: f64,
    mut hi: f64,
    policy: &EvalPolicy,
) -> Result<(f64, f64)> {
    let (f_lo, _) = target(nu, kind, lo, policy)?;
    let sign_lo = f_lo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_MAX_ITER {
        let (f, df) = target(nu, kind, x, policy)?;
        if f == 0.0 {
            return Ok((x, 0.0));
        }
        if f.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let last_step = (next - x).abs();
        x = next;
        let tol = 4.0 * f64::EPSILON * x.max(1.0);
        if last_step <= tol || hi - lo <= tol {
            return Ok((x, last_step));
        }
    }
    Err(ZeroError::NonConvergence { nu, lo, hi })
}

/// Largest admissible distance between consecutive zeros near `z`: the
/// asymptotic spacing `π + 1`, widened by the local phase speed
/// `z / sqrt(z² − ν²)` near the turning point.
fn max_gap(nu: f64, z: f64) -> f64 {
    let speed = if z > nu {
        (z * z - nu * nu).sqrt() / z
    } else {
        0.0
    };
    if speed <= 0.0 {
        f64::INFINITY
    } else {
        (PI + 1.0) / speed.min(1.0)
    }
}

/// Scan `(from, to]` (or `[from, to]` when `closed`) for sign changes.
fn scan(
    nu: f64,
    kind: ZeroKind,
    from: f64,
    to: f64,
    closed: bool,
    policy: &EvalPolicy,
    out: &mut Vec<f64>,
    refined: &mut f64,
) -> Result<()> {
    if to <= from {
        return Ok(());
    }
    let mut x_prev = from;
    let (mut f_prev, _) = target(nu, kind, from, policy)?;
    if closed && f_prev == 0.0 && from > 0.0 {
        out.push(from);
    }
    let steps = ((to - from) / SCAN_STEP).ceil() as usize;
    for i in 1..=steps {
        let x = if i == steps {
            to
        } else {
            from + i as f64 * SCAN_STEP
        };
        let (f, _) = target(nu, kind, x, policy)?;
        if f == 0.0 {
            out.push(x);
        } else if f_prev != 0.0 && f.signum() != f_prev.signum() {
            let (z, step) = refine(nu, kind, x_prev, x, policy)?;
            *refined = refined.max(step);
            out.push(z);
        }
        x_prev = x;
        f_prev = f;
    }
    Ok(())
}

/// All zeros `≤ x_max` of `J_ν` (Dirichlet) or `J'_ν` (Neumann).
pub fn zeros_up_to(nu: f64, kind: ZeroKind, x_max: f64, policy: &EvalPolicy) -> Result<ZeroTable> {
    validate_request(nu, x_max)?;
    let mut zeros = Vec::new();
    let mut refined = 0.0_f64;
    let end = x_max + SCAN_PAD * x_max.max(1.0);
    // No zero of J_ν lies in (0, ν], and J'_ν > 0 on (0, ν] for ν > 0.
    let start = match kind {
        ZeroKind::Neumann if nu == 0.0 => {
            zeros.push(0.0);
            SCAN_STEP.min(end)
        }
        _ => nu,
    };
    scan(
        nu,
        kind,
        start,
        end,
        nu > 0.0,
        policy,
        &mut zeros,
        &mut refined,
    )?;
    check_gaps(nu, &zeros)?;
    Ok(ZeroTable {
        nu,
        kind,
        zeros,
        refined_to: refined,
        complete_to: end,
    })
}

/// Extend an existing table so that it is complete up to `x_max`.
pub fn extend_table(table: &ZeroTable, x_max: f64, policy: &EvalPolicy) -> Result<ZeroTable> {
    validate_request(table.nu, x_max)?;
    if x_max <= table.complete_to {
        return Ok(table.clone());
    }
    if table.zeros.is_empty() && table.complete_to <= table.nu {
        return zeros_up_to(table.nu, table.kind, x_max, policy);
    }
    let mut zeros = table.zeros.clone();
    let mut refined = table.refined_to;
    let end = x_max + SCAN_PAD * x_max.max(1.0);
    // step off a zero that sits exactly at the old boundary
    let from = table.complete_to + SCAN_PAD * table.complete_to.max(1.0);
    let mut fresh = Vec::new();
    scan(
        table.nu,
        table.kind,
        from,
        end,
        false,
        policy,
        &mut fresh,
        &mut refined,
    )?;
    for z in fresh {
        match zeros.last() {
            Some(&last) if (z - last).abs() < TIE_REL_TOL * z.max(1.0) => {}
            _ => zeros.push(z),
        }
    }
    zeros.sort_by(f64::total_cmp);
    check_gaps(table.nu, &zeros)?;
    Ok(ZeroTable {
        nu: table.nu,
        kind: table.kind,
        zeros,
        refined_to: refined,
        complete_to: end,
    })
}

fn check_gaps(nu: f64, zeros: &[f64]) -> Result<()> {
    for pair in zeros.windows(2) {
        if pair[0] > 0.0 && pair[1] - pair[0] > max_gap(nu, pair[0]) {
            return Err(ZeroError::SuspectGap {
                nu,
                lo: pair[0],
                hi: pair[1],
            });
        }
    }
    Ok(())
}

/// Memoised zero tables keyed by `(ν, kind)`.
///
/// Tables are immutable once published; extending one replaces the shared
/// `Arc`. Readers never block each other, inserts take the write lock.
#[derive(Debug)]
pub struct ZeroCache {
    policy: EvalPolicy,
    tables: RwLock<HashMap<(u64, ZeroKind), Arc<ZeroTable>>>,
    dir: Option<PathBuf>,
}

impl Default for ZeroCache {
    fn default() -> Self {
        Self::new(EvalPolicy::default())
    }
}

impl ZeroCache {
    pub fn new(policy: EvalPolicy) -> Self {
        Self {
            policy,
            tables: RwLock::new(HashMap::new()),
            dir: None,
        }
    }

    /// Persist tables as text files under `dir` (created if missing).
    pub fn with_dir(policy: EvalPolicy, dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| ZeroError::Cache {
            path: dir.display().to_string(),
            reason: e.to_string(),
        })?;
        Ok(Self {
            policy,
            tables: RwLock::new(HashMap::new()),
            dir: Some(dir),
        })
    }

    pub fn policy(&self) -> &EvalPolicy {
        &self.policy
    }

    pub fn cache_file(&self, nu: f64, kind: ZeroKind) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}_{:016x}.txt", kind.tag(), nu.to_bits())))
    }

    /// Number of tables currently memoised.
    pub fn len(&self) -> usize {
        self.tables.read().map(|t| t.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A table for `(ν, kind)` complete at least up to `x_max`.
    pub fn table(&self, nu: f64, kind: ZeroKind, x_max: f64) -> Result<Arc<ZeroTable>> {
        validate_request(nu, x_max)?;
        let key = (nu.to_bits(), kind);
        let existing = {
            let guard = self.tables.read().expect("zero cache lock poisoned");
            guard.get(&key).cloned()
        };
        if let Some(t) = &existing {
            if t.complete_to >= x_max {
                return Ok(t.clone());
            }
        }
        let base = match existing {
            Some(t) => Some((*t).clone()),
            None => self.load(nu, kind),
        };
        let built = match base {
            Some(t) => extend_table(&t, x_max, &self.policy)?,
            None => zeros_up_to(nu, kind, x_max, &self.policy)?,
        };
        let built = Arc::new(built);
        let published = {
            let mut guard = self.tables.write().expect("zero cache lock poisoned");
            let slot = guard.entry(key).or_insert_with(|| built.clone());
            if slot.complete_to < built.complete_to {
                *slot = built.clone();
            }
            slot.clone()
        };
        if Arc::ptr_eq(&published, &built) {
            if let Some(path) = self.cache_file(nu, kind) {
                // a failed write only costs a recomputation next run
                let _ = built.write_to(&path);
            }
        }
        Ok(published)
    }

    fn load(&self, nu: f64, kind: ZeroKind) -> Option<ZeroTable> {
        let path = self.cache_file(nu, kind)?;
        let table = ZeroTable::read_from(&path).ok()?;
        (table.nu.to_bits() == nu.to_bits() && table.kind == kind).then_some(table)
    }

    /// Count zeros `≤ x` (see [`ZeroTable::count_leq`]).
    pub fn count_zeros_leq(&self, nu: f64, kind: ZeroKind, x: f64) -> Result<CountWithMargin> {
        self.table(nu, kind, x)?.count_leq(x)
    }
}
