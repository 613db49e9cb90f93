//! Exact eigenvalue counting for sectors, the disk and balls, the Weyl terms,
//! the bracket-sum majorants and minorants, and the Pólya verdicts.
//!
//! Eigenvalues come from separation of variables: every "channel" is a Bessel
//! order `ν` with a multiplicity weight, and contributes its squared zeros.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::phase::{self, floor_checked, PhaseContext, PhaseError};
use crate::special::{binomial, factorial, gamma_fn, SpecialError};
use crate::zeros::{ZeroCache, ZeroError, ZeroKind, TIE_REL_TOL};

/// Disk Neumann inequality is proven only from this `Λ` on.
pub const NEUMANN_DISK_PROVEN_FROM: f64 = 531.0;
/// Verdict margins within `VERDICT_TIE_TOL·max(1, W)` of zero are ties.
pub const VERDICT_TIE_TOL: f64 = 1e-9;
/// Eigenvalues closer than this (relative) are merged into one cluster.
pub const CLUSTER_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid spectral parameter: {0}")]
    InvalidLambda(String),
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

pub type Result<T> = std::result::Result<T, SpectraError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl Bc {
    pub fn zero_kind(self) -> ZeroKind {
        match self {
            Bc::Dirichlet => ZeroKind::Dirichlet,
            Bc::Neumann => ZeroKind::Neumann,
        }
    }
}

impl fmt::Display for Bc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bc::Dirichlet => "dirichlet",
            Bc::Neumann => "neumann",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// Circular sector `{0 < r < 1, 0 < φ < α}`.
    Sector(f64),
    /// Unit ball in `R^d`; `d = 2` is the disk.
    Ball(u32),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Sector(a) => write!(f, "sector:{a}"),
            Shape::Ball(2) => f.write_str("disk"),
            Shape::Ball(d) => write!(f, "ball:{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    shape: Shape,
    bc: Bc,
    unproven: bool,
}

impl DomainSpec {
    /// Validated domain. Neumann balls with `d ≥ 3` are refused.
    pub fn new(shape: Shape, bc: Bc) -> Result<Self> {
        Self::build(shape, bc, false)
    }

    /// Like [`DomainSpec::new`] but lets Neumann balls through for bound-sum
    /// experiments. Exact counting stays unavailable for them.
    pub fn new_unproven(shape: Shape, bc: Bc) -> Result<Self> {
        Self::build(shape, bc, true)
    }

    fn build(shape: Shape, bc: Bc, unproven: bool) -> Result<Self> {
        match shape {
            Shape::Sector(a) => {
                if !(a.is_finite() && a > 0.0 && a <= 2.0 * PI) {
                    return Err(SpectraError::InvalidDomain(format!(
                        "sector angle must lie in (0, 2pi], got {a}"
                    )));
                }
            }
            Shape::Ball(d) => {
                if d < 2 {
                    return Err(SpectraError::InvalidDomain(format!(
                        "ball dimension must be >= 2, got {d}"
                    )));
                }
                if d > 64 {
                    return Err(SpectraError::InvalidDomain(format!(
                        "ball dimension {d} is too large"
                    )));
                }
                if d >= 3 && bc == Bc::Neumann && !unproven {
                    return Err(SpectraError::Unsupported(format!(
                        "Neumann ball in dimension {d} is outside the proven results (use --unproven for bound sums)"
                    )));
                }
            }
        }
        Ok(Self {
            shape,
            bc,
            unproven,
        })
    }

    pub fn sector(alpha: f64, bc: Bc) -> Result<Self> {
        Self::new(Shape::Sector(alpha), bc)
    }

    pub fn disk(bc: Bc) -> Self {
        Self {
            shape: Shape::Ball(2),
            bc,
            unproven: false,
        }
    }

    pub fn ball(d: u32, bc: Bc) -> Result<Self> {
        Self::new(Shape::Ball(d), bc)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn is_unproven(&self) -> bool {
        self.unproven
    }

    /// Spatial dimension.
    pub fn dim(&self) -> u32 {
        match self.shape {
            Shape::Sector(_) => 2,
            Shape::Ball(d) => d,
        }
    }

    /// Coefficient `c` of the Weyl term `c·Λ^{d/2}`.
    pub fn weyl_coefficient(&self) -> f64 {
        match self.shape {
            Shape::Sector(a) => a / (8.0 * PI),
            Shape::Ball(d) => ball_weyl_coefficient(d),
        }
    }

    fn exact_counting_supported(&self) -> Result<()> {
        if matches!(self.shape, Shape::Ball(d) if d >= 3) && self.bc == Bc::Neumann {
            return Err(SpectraError::Unsupported(
                "exact Neumann counting in balls of dimension >= 3 is not implemented".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.shape, self.bc)
    }
}

/// `1 / (2^d Γ((d+2)/2)²)`.
pub fn ball_weyl_coefficient(d: u32) -> f64 {
    let g = gamma_fn((d as f64 + 2.0) / 2.0).expect("positive argument");
    1.0 / (2f64.powi(d as i32) * g * g)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(SpectraError::InvalidLambda(format!(
            "Lambda must be finite and >= 0, got {lambda}"
        )));
    }
    Ok(())
}

pub fn weyl_term(spec: &DomainSpec, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(spec.weyl_coefficient() * lambda.powf(spec.dim() as f64 / 2.0))
}

/// Dimension `κ_m` of the degree-`m` spherical harmonics on `S^{d−1}`.
pub fn kappa(d: u32, m: u64) -> u64 {
    let (d, m) = (d as i64, m as i64);
    let v = binomial(m + d - 1, d - 1) - binomial(m + d - 3, d - 1);
    u64::try_from(v).expect("kappa fits in u64")
}

/// `f(t) = C([t + d/2 − 1], d − 2)`.
pub fn f_weight(d: u32, t: f64) -> u64 {
    let top = (t + d as f64 / 2.0 - 1.0).floor();
    if top < 0.0 {
        return 0;
    }
    u64::try_from(binomial(top as i64, d as i64 - 2)).expect("weight fits in u64")
}

/// One separated angular mode: Bessel order and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub m: u64,
    pub nu: f64,
    pub weight: u64,
}

/// All channels that can carry eigenvalues `≤ Λ` (orders `ν ≤ √Λ`).
pub fn channels(spec: &DomainSpec, lambda: f64) -> Result<Vec<Channel>> {
    check_lambda(lambda)?;
    let r = lambda.sqrt();
    let mut out = Vec::new();
    match spec.shape {
        Shape::Sector(a) => {
            let first = if spec.bc == Bc::Dirichlet { 1 } else { 0 };
            let last = (a * r / PI).floor() as u64;
            for m in first..=last {
                out.push(Channel {
                    m,
                    nu: m as f64 * PI / a,
                    weight: 1,
                });
            }
        }
        Shape::Ball(2) => {
            for m in 0..=(r.floor() as u64) {
                out.push(Channel {
                    m,
                    nu: m as f64,
                    weight: if m == 0 { 1 } else { 2 },
                });
            }
        }
        Shape::Ball(d) => {
            let shift = d as f64 / 2.0 - 1.0;
            let mut m = 0u64;
            while m as f64 + shift <= r {
                out.push(Channel {
                    m,
                    nu: m as f64 + shift,
                    weight: kappa(d, m),
                });
                m += 1;
            }
        }
    }
    Ok(out)
}

/// A zero that sat within tie tolerance of `√Λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tie {
    pub nu: f64,
    pub k: usize,
}

/// `N(Λ)` with the Weyl term and the tie diagnostics at one `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub lambda: f64,
    pub bc: Bc,
    pub exact_count: u64,
    pub weyl: f64,
    /// `weyl − count` for Dirichlet, `count − weyl` for Neumann.
    pub margin: f64,
    pub ties: Vec<Tie>,
}

impl CountReport {
    pub fn recomputed_margin(&self) -> f64 {
        signed_margin(self.bc, self.exact_count, self.weyl)
    }
}

fn signed_margin(bc: Bc, count: u64, weyl: f64) -> f64 {
    match bc {
        Bc::Dirichlet => weyl - count as f64,
        Bc::Neumann => count as f64 - weyl,
    }
}

/// Exact `N(Λ)` for any supported domain. Ties do not abort the count: the
/// `≤` convention is used and the offending zeros are listed.
pub fn count(spec: &DomainSpec, cache: &ZeroCache, lambda: f64) -> Result<CountReport> {
    spec.exact_counting_supported()?;
    let chans = channels(spec, lambda)?;
    let x = lambda.sqrt();
    let kind = spec.bc.zero_kind();
    let per_channel: Vec<(u64, Option<Tie>)> = chans
        .par_iter()
        .map(|c| match cache.count_zeros_leq(c.nu, kind, x) {
            Ok(cm) => Ok((c.weight * cm.count as u64, None)),
            Err(ZeroError::AmbiguousTie { nu, k, count, .. }) => {
                Ok((c.weight * count as u64, Some(Tie { nu, k })))
            }
            Err(e) => Err(SpectraError::from(e)),
        })
        .collect::<Result<_>>()?;
    let exact_count = per_channel.iter().map(|(n, _)| n).sum();
    let ties = per_channel.iter().filter_map(|(_, t)| *t).collect();
    let weyl = weyl_term(spec, lambda)?;
    Ok(CountReport {
        lambda,
        bc: spec.bc,
        exact_count,
        weyl,
        margin: signed_margin(spec.bc, exact_count, weyl),
        ties,
    })
}

pub fn count_sector(alpha: f64, bc: Bc, cache: &ZeroCache, lambda: f64) -> Result<CountReport> {
    count(&DomainSpec::sector(alpha, bc)?, cache, lambda)
}

pub fn count_disk(bc: Bc, cache: &ZeroCache, lambda: f64) -> Result<CountReport> {
    count(&DomainSpec::disk(bc), cache, lambda)
}

pub fn count_ball(d: u32, cache: &ZeroCache, lambda: f64) -> Result<CountReport> {
    if d < 3 {
        return Err(SpectraError::InvalidDomain(format!(
            "count_ball needs d >= 3, got {d}"
        )));
    }
    count(&DomainSpec::ball(d, Bc::Dirichlet)?, cache, lambda)
}

/// Eigenvalues `≤ Λ_max` with multiplicities, sorted ascending.
pub fn spectrum(spec: &DomainSpec, cache: &ZeroCache, lambda_max: f64) -> Result<Vec<(f64, u64)>> {
    spec.exact_counting_supported()?;
    let chans = channels(spec, lambda_max)?;
    let x = lambda_max.sqrt();
    let kind = spec.bc.zero_kind();
    let lists: Vec<Vec<(f64, u64)>> = chans
        .par_iter()
        .map(|c| {
            let table = cache.table(c.nu, kind, x)?;
            Ok(table
                .zeros()
                .iter()
                .take_while(|&&z| z <= x)
                .map(|&z| (z * z, c.weight))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<(f64, u64)> = lists.into_iter().flatten().collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(all)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    TieAmbiguous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::TieAmbiguous => "tie_ambiguous",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Proven,
    OutsideProvenRegime,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Proven => "proven",
            Regime::OutsideProvenRegime => "outside_proven_regime",
        }
    }
}

/// Whether `Λ` lies in the range where the inequality is proven.
pub fn regime(spec: &DomainSpec, lambda: f64) -> Regime {
    let outside = spec.unproven
        || (spec.bc == Bc::Dirichlet && lambda == 0.0)
        || (spec.shape == Shape::Ball(2)
            && spec.bc == Bc::Neumann
            && lambda < NEUMANN_DISK_PROVEN_FROM);
    if outside {
        Regime::OutsideProvenRegime
    } else {
        Regime::Proven
    }
}

fn judge(margin: f64, weyl: f64) -> Verdict {
    let tol = VERDICT_TIE_TOL * weyl.abs().max(1.0);
    if margin > tol {
        Verdict::Pass
    } else if margin < -tol {
        Verdict::Fail
    } else {
        Verdict::TieAmbiguous
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub regime: Regime,
    pub report: CountReport,
}

/// Pointwise verdict at one `Λ`: strict inequality with margin beyond the tie
/// tolerance. A zero tie makes the verdict ambiguous.
pub fn polya_verdict(spec: &DomainSpec, cache: &ZeroCache, lambda: f64) -> Result<VerdictReport> {
    let report = count(spec, cache, lambda)?;
    let verdict = if report.ties.is_empty() {
        judge(report.margin, report.weyl)
    } else {
        Verdict::TieAmbiguous
    };
    Ok(VerdictReport {
        verdict,
        regime: regime(spec, lambda),
        report,
    })
}

/// One checked point of an eigenvalue-driven sweep.
///
/// Dirichlet rows sit at a jump `λ` and carry `N(λ)`. Neumann rows sit at the
/// right end `μ` of a plateau and carry the plateau value `N(μ−0)`; the final
/// row is the value at `Λ_max` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub count: u64,
    pub weyl: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: DomainSpec,
    pub lambda_max: f64,
    pub rows: Vec<SweepRow>,
    /// Number of distinct eigenvalue clusters `≤ Λ_max`.
    pub jump_count: usize,
    /// Tie rows plus eigenvalues within tie tolerance of `Λ_max`.
    pub ties: usize,
}

impl SweepResult {
    pub fn min_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn failures(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .count()
    }

    pub fn tie_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::TieAmbiguous)
            .count()
    }

    pub fn all_pass(&self) -> bool {
        self.ties == 0 && self.rows.iter().all(|r| r.verdict == Verdict::Pass)
    }
}

struct Cluster {
    lo: f64,
    hi: f64,
    weight: u64,
}

fn clusters(eigs: &[(f64, u64)]) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for &(l, w) in eigs {
        match out.last_mut() {
            Some(c) if l - c.hi <= CLUSTER_REL_TOL * l.max(1.0) => {
                c.hi = l;
                c.weight += w;
            }
            _ => out.push(Cluster {
                lo: l,
                hi: l,
                weight: w,
            }),
        }
    }
    out
}

/// Verify the Pólya inequality on all of `[0, Λ_max]` by checking each jump
/// (Dirichlet) or each plateau end (Neumann).
///
/// Near-degenerate eigenvalues are merged conservatively: a Dirichlet cluster
/// is checked at its lowest member with its full weight, a Neumann plateau is
/// checked against the Weyl term at the highest member of the next cluster.
pub fn verify_polya(spec: &DomainSpec, cache: &ZeroCache, lambda_max: f64) -> Result<SweepResult> {
    check_lambda(lambda_max)?;
    let eigs = spectrum(spec, cache, lambda_max)?;
    let cl = clusters(&eigs);
    let coeff = spec.weyl_coefficient();
    let half_dim = spec.dim() as f64 / 2.0;
    let w = |l: f64| coeff * l.powf(half_dim);
    let mut rows = Vec::with_capacity(cl.len() + 1);
    let mut push = |lambda: f64, count: u64, weyl: f64, strict_margin: f64| {
        rows.push(SweepRow {
            lambda,
            count,
            weyl,
            margin: strict_margin,
            verdict: judge(strict_margin, weyl),
            regime: regime(spec, lambda),
        });
    };
    let mut cumulative = 0u64;
    match spec.bc {
        Bc::Dirichlet => {
            for c in &cl {
                cumulative += c.weight;
                let weyl = w(c.lo);
                push(c.lo, cumulative, weyl, weyl - cumulative as f64);
            }
            let weyl = w(lambda_max);
            push(lambda_max, cumulative, weyl, weyl - cumulative as f64);
        }
        Bc::Neumann => {
            for (i, c) in cl.iter().enumerate() {
                cumulative += c.weight;
                // the plateau [c, next) must satisfy N ≥ W(next−0); on the last
                // plateau N > W(Λ_max) strictly
                let (end, count) = match cl.get(i + 1) {
                    Some(next) => (next.hi, cumulative),
                    None => (lambda_max, cumulative),
                };
                let weyl = w(end);
                push(end, count, weyl, count as f64 - weyl);
            }
            if cl.is_empty() {
                let weyl = w(lambda_max);
                push(lambda_max, 0, weyl, -weyl);
            }
        }
    }
    let x = lambda_max.sqrt();
    let boundary_ties = eigs
        .iter()
        .filter(|&&(l, _)| l > 0.0 && (l.sqrt() - x).abs() < TIE_REL_TOL * x.max(1.0))
        .count();
    let tie_rows = rows
        .iter()
        .filter(|r| r.verdict == Verdict::TieAmbiguous)
        .count();
    Ok(SweepResult {
        spec: *spec,
        lambda_max,
        rows,
        jump_count: cl.len(),
        ties: tie_rows + boundary_ties,
    })
}

/// Integer-valued bracket sum with the number of near-integer brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundSum {
    pub value: i64,
    pub near_ties: usize,
}

fn bracket_terms(spec: &DomainSpec, lambda: f64, shift: f64) -> Result<BoundSum> {
    check_lambda(lambda)?;
    let ctx = PhaseContext::new(lambda)?;
    let r = ctx.sqrt_lambda();
    let first_sector = if shift < 0.5 { 1 } else { 0 };
    let terms: Vec<(f64, u64)> = match spec.shape {
        Shape::Sector(a) => (first_sector..=(a * r / PI).floor() as u64)
            .map(|m| (m as f64 * PI / a, 1))
            .collect(),
        Shape::Ball(2) => (0..=r.floor() as u64)
            .map(|m| (m as f64, if m == 0 { 1 } else { 2 }))
            .collect(),
        Shape::Ball(d) => {
            let shift_nu = d as f64 / 2.0 - 1.0;
            let top = (r - shift_nu).floor();
            if top < 0.0 {
                Vec::new()
            } else {
                (0..=top as u64)
                    .map(|m| (m as f64 + shift_nu, kappa(d, m)))
                    .collect()
            }
        }
    };
    let mut value = 0i64;
    let mut near_ties = 0;
    for (t, weight) in terms {
        let b = floor_checked(ctx.eval_g_ext(t)? + shift);
        value += weight as i64 * b.value;
        near_ties += usize::from(b.near_tie);
    }
    Ok(BoundSum { value, near_ties })
}

/// The majorant `Σ w_m [G(ν_m) + 1/4]` of the Dirichlet count.
pub fn bound_sum_dirichlet(spec: &DomainSpec, lambda: f64) -> Result<BoundSum> {
    if spec.bc != Bc::Dirichlet {
        return Err(SpectraError::InvalidDomain(
            "bound_sum_dirichlet needs a Dirichlet domain".into(),
        ));
    }
    bracket_terms(spec, lambda, 0.25)
}

/// The minorant `Σ w_m [G(ν_m) + 3/4]` of the Neumann count (from `m = 0`).
pub fn bound_sum_neumann(spec: &DomainSpec, lambda: f64) -> Result<BoundSum> {
    if spec.bc != Bc::Neumann {
        return Err(SpectraError::InvalidDomain(
            "bound_sum_neumann needs a Neumann domain".into(),
        ));
    }
    bracket_terms(spec, lambda, 0.75)
}

/// Both sides of the rearrangement identity for the ball majorant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: i128,
    pub rhs: i128,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluate `Σ κ_m B_m` and `Σ C(m+d−3, d−3)(B_m + 2Σ_{n} B_{m+n+1})` with the
/// shared brackets `B_m = [G(m + d/2 − 1) + 1/4]`.
pub fn lemma57_sides(d: u32, lambda: f64) -> Result<IdentityCheck> {
    if d < 3 {
        return Err(SpectraError::InvalidDomain(format!(
            "the identity needs d >= 3, got {d}"
        )));
    }
    let ctx = PhaseContext::new(lambda)?;
    let shift = d as f64 / 2.0 - 1.0;
    let top = (ctx.sqrt_lambda() - shift).floor();
    if top < 0.0 {
        return Ok(IdentityCheck { lhs: 0, rhs: 0 });
    }
    let top = top as usize;
    let brackets: Vec<i128> = (0..=top)
        .map(|m| Ok(floor_checked(ctx.eval_g_ext(m as f64 + shift)? + 0.25).value as i128))
        .collect::<Result<_>>()?;
    let d = d as i64;
    let lhs: i128 = (0..=top)
        .map(|m| kappa(d as u32, m as u64) as i128 * brackets[m])
        .sum();
    let mut rhs = 0i128;
    for m in 0..=top {
        let tail: i128 = brackets[m + 1..].iter().sum();
        rhs += binomial(m as i64 + d - 3, d - 3) as i128 * (brackets[m] + 2 * tail);
    }
    Ok(IdentityCheck { lhs, rhs })
}

pub fn lemma57_identity_check(d: u32, lambda: f64) -> Result<bool> {
    Ok(lemma57_sides(d, lambda)?.holds())
}

/// `∫_0^t f(s) ds`, exact for the step function `f`.
pub fn f_weight_integral(d: u32, t: f64) -> f64 {
    let shift = d as f64 / 2.0 - 1.0;
    let mut total = 0.0;
    let mut m = 0u64;
    loop {
        let lo = m as f64 + shift;
        if lo >= t {
            break;
        }
        let hi = (lo + 1.0).min(t);
        total += (hi - lo) * binomial(m as i64 + d as i64 - 2, d as i64 - 2) as f64;
        m += 1;
    }
    total
}

/// `(∫_0^t f, t^{d−1}/(d−1)!)`.
pub fn lemma52_sides(d: u32, t: f64) -> (f64, f64) {
    (
        f_weight_integral(d, t),
        t.powi(d as i32 - 1) / factorial(d - 1),
    )
}

/// `(∫_0^{√Λ} f·G, (1/(d−2)!) ∫_0^{√Λ} t^{d−2} G)`; the left side uses the
/// closed-form antiderivative of `G` on each step of `f`.
pub fn lemma54_sides(d: u32, lambda: f64) -> Result<(f64, f64)> {
    let ctx = PhaseContext::new(lambda)?;
    let r = ctx.sqrt_lambda();
    let shift = d as f64 / 2.0 - 1.0;
    let mut lhs = 0.0;
    let mut m = 0u64;
    while m as f64 + shift < r {
        let lo = m as f64 + shift;
        let hi = (lo + 1.0).min(r);
        let w = binomial(m as i64 + d as i64 - 2, d as i64 - 2) as f64;
        lhs += w * ctx.integral_g_between(lo, hi)?;
        m += 1;
    }
    let rhs = phase::moment_integral(lambda, d as f64 - 2.0)? / factorial(d - 2);
    Ok((lhs, rhs))
}

/// The two ends of the Gamma-function simplification that turns the moment
/// integral into the ball's Weyl term.
pub fn eq56_sides(d: u32, lambda: f64) -> Result<(f64, f64)> {
    let df = d as f64;
    let lhs = gamma_fn((df - 1.0) / 2.0)? * lambda.powf(df / 2.0)
        / (2.0 * df * PI.sqrt() * factorial(d - 2) * gamma_fn((df + 2.0) / 2.0)?);
    Ok((lhs, ball_weyl_coefficient(d) * lambda.powf(df / 2.0)))
}
