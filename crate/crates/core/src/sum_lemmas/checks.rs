//! Hypothesis checks, cut points and the inequality checks themselves.
//!
//! Every check first verifies the hypotheses of its statement on the sample
//! and only then compares the two sides. Lemmas about a block `[A, B)` are run
//! on every admissible block of the sample and report the tightest one.

use std::fmt;

use crate::phase::floor_checked;

use super::sample::ConvexSample;

/// `|lhs − rhs|` below this is reported as equality.
pub const EQUALITY_TOL: f64 = 1e-8;
/// Bracket arguments this close to an integer count as ties in the oracle.
pub const ORACLE_TIE_TOL: f64 = 1e-9;

/// The statements exercised by the campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    T33,
    T37,
    T63a,
    T63b,
    T67,
    Lemma31,
    Lemma32,
    Lemma34,
    Lemma35,
    Lemma61,
    Lemma615,
    Lemma62a,
    Lemma62b,
    Lemma66,
}

impl Theorem {
    pub const ALL: [Theorem; 14] = [
        Theorem::T33,
        Theorem::T37,
        Theorem::T63a,
        Theorem::T63b,
        Theorem::T67,
        Theorem::Lemma31,
        Theorem::Lemma32,
        Theorem::Lemma34,
        Theorem::Lemma35,
        Theorem::Lemma61,
        Theorem::Lemma615,
        Theorem::Lemma62a,
        Theorem::Lemma62b,
        Theorem::Lemma66,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::T33 => "t33",
            Theorem::T37 => "t37",
            Theorem::T63a => "t63a",
            Theorem::T63b => "t63b",
            Theorem::T67 => "t67",
            Theorem::Lemma31 => "lemma31",
            Theorem::Lemma32 => "lemma32",
            Theorem::Lemma34 => "lemma34",
            Theorem::Lemma35 => "lemma35",
            Theorem::Lemma61 => "lemma61",
            Theorem::Lemma615 => "lemma615",
            Theorem::Lemma62a => "lemma62a",
            Theorem::Lemma62b => "lemma62b",
            Theorem::Lemma66 => "lemma66",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    /// Stable small integer used to derive per-sample seeds.
    pub fn id(self) -> u64 {
        Self::ALL.iter().position(|&t| t == self).unwrap() as u64
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaVerdict {
    Holds,
    HoldsAtEquality,
    Violated,
    HypothesisViolation,
}

impl LemmaVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaVerdict::Holds => "holds",
            LemmaVerdict::HoldsAtEquality => "holds_at_equality",
            LemmaVerdict::Violated => "violated",
            LemmaVerdict::HypothesisViolation => "hypothesis_violation",
        }
    }
}

impl fmt::Display for LemmaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one check. `margin ≥ 0` means the inequality holds; for
/// hypothesis violations the numbers are NaN and `note` says why.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub verdict: LemmaVerdict,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub note: Option<String>,
}

impl CheckOutcome {
    fn compared(lhs: f64, rhs: f64, margin: f64) -> Self {
        let verdict = if margin.is_nan() {
            LemmaVerdict::Violated
        } else if margin.abs() < EQUALITY_TOL {
            LemmaVerdict::HoldsAtEquality
        } else if margin > 0.0 {
            LemmaVerdict::Holds
        } else {
            LemmaVerdict::Violated
        };
        Self {
            verdict,
            lhs,
            rhs,
            margin,
            note: None,
        }
    }

    fn rejected(reason: impl Into<String>) -> Self {
        Self {
            verdict: LemmaVerdict::HypothesisViolation,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            note: Some(reason.into()),
        }
    }

    /// `lhs ≤ rhs` is the claim.
    fn upper(lhs: f64, rhs: f64) -> Self {
        Self::compared(lhs, rhs, rhs - lhs)
    }

    /// `lhs ≥ rhs` is the claim.
    fn lower(lhs: f64, rhs: f64) -> Self {
        Self::compared(lhs, rhs, lhs - rhs)
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == LemmaVerdict::Violated
    }
}

/// Prefix of the note given when a sample has no block to check.
pub const NO_INSTANCE: &str = "no admissible";

/// Keep the tightest of several instances.
fn worst(instances: impl IntoIterator<Item = CheckOutcome>, what: &str) -> CheckOutcome {
    instances
        .into_iter()
        .min_by(|x, y| x.margin.total_cmp(&y.margin))
        .unwrap_or_else(|| CheckOutcome::rejected(format!("{NO_INSTANCE} {what}")))
}

/// What a statement requires of `g`.
#[derive(Debug, Clone, Copy)]
struct Needs {
    /// left end of the interval the statement looks at
    start: f64,
    decreasing: bool,
    /// bound on `|g'|`, if the statement has a slope condition
    cap: Option<f64>,
    nonneg: bool,
    zero_at_b: bool,
    /// `g(a) ≥ 1/4`
    quarter_at_a: bool,
}

impl Needs {
    fn on(s: &ConvexSample, lead: f64) -> Self {
        Self {
            start: s.a() as f64 - lead,
            decreasing: true,
            cap: Some(0.5),
            nonneg: true,
            zero_at_b: true,
            quarter_at_a: false,
        }
    }
}

const HYP_TOL: f64 = 1e-11;
const SLOPE_TOL: f64 = 1e-9;
const MAX_GRID: usize = 2048;

fn hypotheses(s: &ConvexSample, needs: Needs) -> Result<(), String> {
    let end = s.b() as f64;
    if s.domain_start() > needs.start + 1e-12 {
        return Err(format!(
            "g is defined only from {}, the statement needs {}",
            s.domain_start(),
            needs.start
        ));
    }
    if let Some(cap) = needs.cap {
        if !(s.slope_bound() <= cap + 1e-15) {
            return Err(format!(
                "declared slope bound {} exceeds {cap}",
                s.slope_bound()
            ));
        }
    }
    let n = (((end - needs.start) * 4.0).ceil() as usize).clamp(8, MAX_GRID);
    let h = (end - needs.start) / n as f64;
    let ts: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                end
            } else {
                needs.start + i as f64 * h
            }
        })
        .collect();
    let vs: Vec<f64> = ts.iter().map(|&t| s.eval(t)).collect();
    let scale = vs[0].abs().max(1.0);
    let tol = HYP_TOL * scale;
    for i in 0..=n {
        if needs.nonneg && vs[i] < -tol {
            return Err(format!("g({}) = {} < 0", ts[i], vs[i]));
        }
        if needs.cap.is_some() {
            let d = s.deriv(ts[i]);
            if d < -s.slope_bound() - 1e-12 || d > 1e-12 {
                return Err(format!(
                    "g'({}) = {d} is outside the slope bound [-{}, 0]",
                    ts[i],
                    s.slope_bound()
                ));
            }
        }
        if i < n {
            let diff = vs[i + 1] - vs[i];
            if needs.decreasing && diff > tol {
                return Err(format!("g increases on [{}, {}]", ts[i], ts[i + 1]));
            }
            if needs.cap.is_some() && -diff / h > s.slope_bound() + SLOPE_TOL {
                return Err(format!(
                    "difference quotient {} on [{}, {}] exceeds the slope bound {}",
                    -diff / h,
                    ts[i],
                    ts[i + 1],
                    s.slope_bound()
                ));
            }
        }
        if i > 0 && i < n {
            let second = vs[i - 1] - 2.0 * vs[i] + vs[i + 1];
            if second < -tol {
                return Err(format!("g is not convex near {}", ts[i]));
            }
        }
    }
    if needs.zero_at_b && s.eval(end).abs() > 1e-12 {
        return Err(format!("g(b) = {} is not 0", s.eval(end)));
    }
    if needs.quarter_at_a && s.eval(s.a() as f64) < 0.25 {
        return Err(format!("g(a) = {} < 1/4", s.eval(s.a() as f64)));
    }
    Ok(())
}

/// Integer values of `g` on `[a, b]` with bracket and prefix-sum helpers.
struct Values<'s> {
    s: &'s ConvexSample,
    v: Vec<f64>,
}

impl<'s> Values<'s> {
    fn new(s: &'s ConvexSample) -> Self {
        Self {
            s,
            v: s.integer_values(),
        }
    }

    fn g(&self, m: i64) -> f64 {
        self.v[(m - self.s.a()) as usize]
    }

    /// `Σ_{m=from}^{to} [g(m) + shift]`, empty when `to < from`.
    fn brackets(&self, from: i64, to: i64, shift: f64) -> f64 {
        (from..=to).map(|m| (self.g(m) + shift).floor()).sum()
    }

    fn sum(&self, from: i64, to: i64) -> f64 {
        (from..=to).map(|m| self.g(m)).sum()
    }

    /// First `m ≥ from` in `[a, b]` with `g(m) < thr` (or `≤` when not strict);
    /// `b + 1` if there is none.
    fn first_below(&self, from: i64, thr: f64, strict: bool) -> i64 {
        (from..=self.s.b())
            .find(|&m| {
                let g = self.g(m);
                if strict {
                    g < thr
                } else {
                    g <= thr
                }
            })
            .unwrap_or(self.s.b() + 1)
    }
}

/// The quantities `m_0`, `b_0`, `m_n`, `N`, `t_*` and `K` of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPoints {
    /// `min{m : g(m) < 1/4}`.
    pub m0: i64,
    /// `min{t : g(t) = 0}`.
    pub b0: f64,
    /// `m_n = min{m : g(m) < n + 1/4}` for `n = 0..=N`.
    pub m_n: Vec<i64>,
    /// `N = [g(a) + 3/4]`.
    pub n_top: i64,
    /// Point with `g'(t_*) = −1/3`, present when `g'(a) < −1/3`.
    pub t_star: Option<f64>,
    /// `max([g(t_*) − 1/4], 0)`.
    pub k: Option<i64>,
}

pub fn cut_points(s: &ConvexSample) -> CutPoints {
    cut_points_with(&Values::new(s))
}

fn cut_points_with(vals: &Values<'_>) -> CutPoints {
    let s = vals.s;
    let a = s.a();
    let n_top = (vals.g(a) + 0.75).floor() as i64;
    let m_n: Vec<i64> = (0..=n_top.max(0))
        .map(|n| vals.first_below(a, n as f64 + 0.25, true))
        .collect();
    let b0 = s.b0();
    let t_star = find_t_star(s, b0);
    let k = t_star.map(|t| ((s.eval(t) - 0.25).floor() as i64).max(0));
    CutPoints {
        m0: m_n[0],
        b0,
        m_n,
        n_top,
        t_star,
        k,
    }
}

/// Root of `g' + 1/3` on `[a, b_0]` by bisection (`g'` is non-decreasing).
fn find_t_star(s: &ConvexSample, b0: f64) -> Option<f64> {
    let third = -1.0 / 3.0;
    let mut lo = s.a() as f64;
    if !(s.deriv(lo) < third) {
        return None;
    }
    let mut hi = b0.max(lo);
    if s.deriv(hi) < third {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if s.deriv(mid) < third {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Blocks `[m_{n+1}, m_n)` with `m_n = min{m : g(m) ≤ n}`, `n < [g(a)] + 1`.
fn blocks_le(vals: &Values<'_>) -> Vec<(i64, i64, i64)> {
    let a = vals.s.a();
    let top = vals.g(a).floor() as i64 + 1;
    let m: Vec<i64> = (0..=top)
        .map(|n| vals.first_below(a, n as f64, false))
        .collect();
    (0..top)
        .map(|n| (m[n as usize + 1], m[n as usize], n))
        .filter(|&(lo, hi, _)| lo < hi)
        .collect()
}

/// Blocks `[m_{n+1}, m_n)` of the quarter-shifted decomposition, returned with
/// the level `n + 1` that the block condition uses.
fn blocks_quarter(vals: &Values<'_>, cp: &CutPoints) -> Vec<(i64, i64, i64)> {
    (0..cp.n_top)
        .map(|n| (cp.m_n[n as usize + 1], cp.m_n[n as usize], n + 1))
        .filter(|&(lo, hi, _)| lo < hi && hi <= vals.s.b())
        .collect()
}

fn guard(s: &ConvexSample, needs: Needs) -> Option<CheckOutcome> {
    hypotheses(s, needs).err().map(CheckOutcome::rejected)
}

/// `Σ_{m=a}^{b} [g(m) + 1/4] ≤ ∫_{a−1/2}^{b} g`.
pub fn check_thm33(s: &ConvexSample) -> CheckOutcome {
    if let Some(r) = guard(s, Needs::on(s, 0.5)) {
        return r;
    }
    let vals = Values::new(s);
    let lhs = vals.brackets(s.a(), s.b(), 0.25);
    let rhs = s.integral(s.a() as f64 - 0.5, s.b() as f64);
    CheckOutcome::upper(lhs, rhs)
}

/// `½[g(a) + 1/4] + Σ_{m=a+1}^{b} [g(m) + 1/4] ≤ ∫_a^b g`.
pub fn check_thm37(s: &ConvexSample) -> CheckOutcome {
    if let Some(r) = guard(s, Needs::on(s, 0.0)) {
        return r;
    }
    let vals = Values::new(s);
    let lhs = 0.5 * (vals.g(s.a()) + 0.25).floor() + vals.brackets(s.a() + 1, s.b(), 0.25);
    let rhs = s.integral(s.a() as f64, s.b() as f64);
    CheckOutcome::upper(lhs, rhs)
}

/// `∫_C^{B−1/2} g̃ ≥ 0` for `g̃ = g − g(B−1)`, at `C = A − 1/2` and
/// `C = B − 3/2`, for `A = a` and every `B` in `(a, b]`.
pub fn check_lemma31(s: &ConvexSample) -> CheckOutcome {
    let needs = Needs {
        cap: None,
        nonneg: false,
        zero_at_b: false,
        ..Needs::on(s, 0.5)
    };
    if let Some(r) = guard(s, needs) {
        return r;
    }
    let vals = Values::new(s);
    let a = s.a();
    let mut out = Vec::new();
    for big_b in a + 1..=s.b() {
        let shift = vals.g(big_b - 1);
        let top = big_b as f64 - 0.5;
        for c in [a as f64 - 0.5, big_b as f64 - 1.5] {
            let val = s.integral(c, top) - shift * (top - c);
            out.push(CheckOutcome::lower(val, 0.0));
        }
    }
    worst(out, "interval")
}

/// Block inequality `Σ_{m=A}^{B−1} [g(m) + 1/4] ≤ ∫_{A−1/2}^{B−1/2} g`.
pub fn check_lemma32(s: &ConvexSample) -> CheckOutcome {
    if let Some(r) = guard(s, Needs::on(s, 0.5)) {
        return r;
    }
    let vals = Values::new(s);
    let out = blocks_le(&vals).into_iter().map(|(lo, hi, n)| {
        let nf = n as f64;
        if !(vals.g(lo) <= nf + 1.0 && vals.g(hi - 1) >= nf && vals.g(hi) <= nf) {
            return CheckOutcome::rejected(format!(
                "block [{lo}, {hi}) does not straddle level {n}"
            ));
        }
        let lhs = vals.brackets(lo, hi - 1, 0.25);
        let rhs = s.integral(lo as f64 - 0.5, hi as f64 - 0.5);
        CheckOutcome::upper(lhs, rhs)
    });
    worst(out, "block")
}

/// Half-weighted block inequality on every block starting at some `A` with
/// `g(A)` in the window the lemma allows. `top_gap` is the distance from the
/// level `n` to the upper end of that window.
fn half_block_check(s: &ConvexSample, lemma34: bool) -> CheckOutcome {
    if let Some(r) = guard(s, Needs::on(s, 0.0)) {
        return r;
    }
    let vals = Values::new(s);
    let mut out = Vec::new();
    for big_a in s.a()..s.b() {
        let ga = vals.g(big_a);
        let n = if lemma34 {
            // n + 1/8 ≤ g(A) ≤ n + 1
            let n = ga.ceil() - 1.0;
            if n < 0.0 || ga < n + 0.125 {
                continue;
            }
            n
        } else {
            // n + 1 ≤ g(A) ≤ n + 2
            let n = ga.ceil() - 2.0;
            if n < 0.0 {
                continue;
            }
            n
        };
        let big_b = vals.first_below(big_a + 1, n, false);
        if big_b > s.b() {
            continue;
        }
        let lhs = 0.5 * (ga + 0.25).floor() + vals.brackets(big_a + 1, big_b - 1, 0.25);
        let rhs = s.integral(big_a as f64, big_b as f64 - 0.5);
        out.push(CheckOutcome::upper(lhs, rhs));
    }
    worst(out, "block")
}

/// `½[g(A)+1/4] + Σ_{A+1}^{B−1} [g(m)+1/4] ≤ ∫_A^{B−1/2} g` with
/// `n + 1 ≥ g(A) ≥ n + 1/8`.
pub fn check_lemma34(s: &ConvexSample) -> CheckOutcome {
    half_block_check(s, true)
}

/// The same inequality with `n + 2 ≥ g(A) ≥ n + 1`.
pub fn check_lemma35(s: &ConvexSample) -> CheckOutcome {
    half_block_check(s, false)
}

/// `Σ_{m=A}^{B−1} g(m) ≤ (B−A+1)/2·g(A) + (B−A−1)/2·g(B)` for `A = a` with
/// every `B`, and for every `A` with `B = b`.
pub fn check_lemma61(s: &ConvexSample) -> CheckOutcome {
    let needs = Needs {
        decreasing: false,
        cap: None,
        nonneg: false,
        zero_at_b: false,
        ..Needs::on(s, 0.0)
    };
    if let Some(r) = guard(s, needs) {
        return r;
    }
    let vals = Values::new(s);
    let (a, b) = (s.a(), s.b());
    // B = A + 1 is an identity
    let pairs = (a + 2..=b)
        .map(|hi| (a, hi))
        .chain((a + 1..b - 1).map(|lo| (lo, b)));
    let out = pairs.map(|(lo, hi)| {
        let len = (hi - lo) as f64;
        let lhs = vals.sum(lo, hi - 1);
        let rhs = (len + 1.0) / 2.0 * vals.g(lo) + (len - 1.0) / 2.0 * vals.g(hi);
        CheckOutcome::upper(lhs, rhs)
    });
    worst(out, "interval")
}

fn six_needs(s: &ConvexSample, cap: Option<f64>) -> Needs {
    Needs {
        cap,
        quarter_at_a: true,
        ..Needs::on(s, 0.0)
    }
}

/// `½g(a) + Σ_{a+1}^{m_0−1} g(m) ≥ ∫_a^{b_0} g − [m_0 < b_0]·(b_0 − m_0 + 1)/8`.
pub fn check_lemma615(s: &ConvexSample) -> CheckOutcome {
    let needs = Needs {
        decreasing: false,
        ..six_needs(s, None)
    };
    if let Some(r) = guard(s, needs) {
        return r;
    }
    let vals = Values::new(s);
    let cp = cut_points_with(&vals);
    let m0 = cp.m0 as f64;
    let lhs = 0.5 * vals.g(s.a()) + vals.sum(s.a() + 1, cp.m0 - 1);
    let mut rhs = s.integral(s.a() as f64, cp.b0);
    if m0 < cp.b0 {
        rhs -= (cp.b0 - m0 + 1.0) / 8.0;
    }
    CheckOutcome::lower(lhs, rhs)
}

fn lemma62(s: &ConvexSample, third: bool) -> CheckOutcome {
    let cap = if third { 1.0 / 3.0 } else { 0.5 };
    if let Some(r) = guard(s, six_needs(s, Some(cap))) {
        return r;
    }
    let vals = Values::new(s);
    let cp = cut_points_with(&vals);
    let bonus = if third { 0.25 } else { 0.0 };
    let out = blocks_quarter(&vals, &cp).into_iter().map(|(lo, hi, n)| {
        if let Some(r) = star6(&vals, lo, hi, n) {
            return r;
        }
        let lhs = vals.brackets(lo, hi - 1, 0.75);
        let rhs = bonus + vals.sum(lo, hi - 1);
        CheckOutcome::lower(lhs, rhs)
    });
    worst(out, "block")
}

/// Block condition `n + 1/4 > g(A) ≥ … ≥ g(B−1) ≥ n − 3/4 ≥ g(B)`.
fn star6(vals: &Values<'_>, lo: i64, hi: i64, n: i64) -> Option<CheckOutcome> {
    let nf = n as f64;
    let ok = vals.g(lo) < nf + 0.25 && vals.g(hi - 1) >= nf - 0.75 && nf - 0.75 >= vals.g(hi);
    (!ok).then(|| {
        CheckOutcome::rejected(format!(
            "block [{lo}, {hi}) violates the level-{n} condition"
        ))
    })
}

/// `Σ_{A}^{B−1} [g(m) + 3/4] ≥ Σ_{A}^{B−1} g(m)` on every block, slopes in `[−1/2, 0]`.
pub fn check_lemma62a(s: &ConvexSample) -> CheckOutcome {
    lemma62(s, false)
}

/// `Σ_{A}^{B−1} [g(m) + 3/4] ≥ 1/4 + Σ_{A}^{B−1} g(m)`, slopes in `[−1/3, 0]`.
pub fn check_lemma62b(s: &ConvexSample) -> CheckOutcome {
    lemma62(s, true)
}

/// `½[g(A)+3/4] + Σ_{A+1}^{B−1}[g(m)+3/4] ≥ ½g(A) + Σ_{A+1}^{B−1} g(m) + 1/8`.
pub fn check_lemma66(s: &ConvexSample) -> CheckOutcome {
    if let Some(r) = guard(s, six_needs(s, Some(0.5))) {
        return r;
    }
    let vals = Values::new(s);
    let cp = cut_points_with(&vals);
    let out = blocks_quarter(&vals, &cp).into_iter().map(|(lo, hi, n)| {
        if let Some(r) = star6(&vals, lo, hi, n) {
            return r;
        }
        let lhs = 0.5 * (vals.g(lo) + 0.75).floor() + vals.brackets(lo + 1, hi - 1, 0.75);
        let rhs = 0.5 * vals.g(lo) + vals.sum(lo + 1, hi - 1) + 0.125;
        CheckOutcome::lower(lhs, rhs)
    });
    worst(out, "block")
}

fn thm63(s: &ConvexSample, third: bool) -> CheckOutcome {
    let cap = if third { 1.0 / 3.0 } else { 0.5 };
    if let Some(r) = guard(s, six_needs(s, Some(cap))) {
        return r;
    }
    let vals = Values::new(s);
    let cp = cut_points_with(&vals);
    let (m0, b0) = (cp.m0 as f64, cp.b0);
    let ga = vals.g(s.a());
    let lhs = vals.brackets(s.a(), s.b(), 0.75);
    let integral = s.integral(s.a() as f64, b0);
    let rhs = if !third {
        let slack = if m0 >= b0 { 0.0 } else { (b0 - m0 + 1.0) / 8.0 };
        0.5 * ga + integral - slack
    } else {
        let slack = if m0 >= b0 {
            1.0 / 16.0
        } else {
            (2.0 * b0 - 2.0 * m0 + 3.0) / 16.0
        };
        0.75 * ga + integral - slack
    };
    CheckOutcome::lower(lhs, rhs)
}

/// Lower bound for `Σ [g(m) + 3/4]` under slopes in `[−1/2, 0]`.
pub fn check_thm63a(s: &ConvexSample) -> CheckOutcome {
    thm63(s, false)
}

/// Lower bound for `Σ [g(m) + 3/4]` under slopes in `[−1/3, 0]`.
pub fn check_thm63b(s: &ConvexSample) -> CheckOutcome {
    thm63(s, true)
}

/// `½[g(a)+3/4] + Σ_{a+1}^{b}[g(m)+3/4] ≥ ∫_a^{b_0} g − (b_0 − m_0)/8 + ¼max(g(t_*) − 5/4, 0)`.
pub fn check_thm67(s: &ConvexSample) -> CheckOutcome {
    if let Some(r) = guard(s, six_needs(s, Some(0.5))) {
        return r;
    }
    let vals = Values::new(s);
    let a = s.a();
    if !(s.deriv(a as f64) < -1.0 / 3.0) {
        return CheckOutcome::rejected(format!("g'(a) = {} is not < -1/3", s.deriv(a as f64)));
    }
    let cp = cut_points_with(&vals);
    let (m0, b0) = (cp.m0 as f64, cp.b0);
    if !(m0 < b0) {
        return CheckOutcome::rejected(format!("m_0 = {m0} is not < b_0 = {b0}"));
    }
    let Some(t_star) = cp.t_star else {
        return CheckOutcome::rejected("no point with g' = -1/3");
    };
    let lhs = 0.5 * (vals.g(a) + 0.75).floor() + vals.brackets(a + 1, s.b(), 0.75);
    let rhs = s.integral(a as f64, b0) - (b0 - m0) / 8.0 + 0.25 * (s.eval(t_star) - 1.25).max(0.0);
    CheckOutcome::lower(lhs, rhs)
}

/// Run the check for `theorem`.
pub fn check(theorem: Theorem, s: &ConvexSample) -> CheckOutcome {
    match theorem {
        Theorem::T33 => check_thm33(s),
        Theorem::T37 => check_thm37(s),
        Theorem::T63a => check_thm63a(s),
        Theorem::T63b => check_thm63b(s),
        Theorem::T67 => check_thm67(s),
        Theorem::Lemma31 => check_lemma31(s),
        Theorem::Lemma32 => check_lemma32(s),
        Theorem::Lemma34 => check_lemma34(s),
        Theorem::Lemma35 => check_lemma35(s),
        Theorem::Lemma61 => check_lemma61(s),
        Theorem::Lemma615 => check_lemma615(s),
        Theorem::Lemma62a => check_lemma62a(s),
        Theorem::Lemma62b => check_lemma62b(s),
        Theorem::Lemma66 => check_lemma66(s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weights {
    Uniform,
    /// The first term carries weight 1/2.
    HalfFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketSum {
    pub value: f64,
    /// Terms whose argument sat within rounding noise of an integer.
    pub near_ties: usize,
}

/// `Σ_{m=a}^{b} w_m [g(m) + s]`.
pub fn bracket_sum(s: &ConvexSample, shift: f64, weights: Weights) -> BracketSum {
    let mut value = 0.0;
    let mut near_ties = 0;
    for m in s.a()..=s.b() {
        let f = floor_checked(s.eval(m as f64) + shift);
        let w = if m == s.a() && weights == Weights::HalfFirst {
            0.5
        } else {
            1.0
        };
        value += w * f.value as f64;
        near_ties += usize::from(f.near_tie);
    }
    BracketSum { value, near_ties }
}

/// Independent recomputation of [`bracket_sum`]: each integer part is found
/// by bisection over the integers on the predicate `g(m) ≥ k − s`, never by
/// rounding. `ties` counts terms within `1e-9` of a breakpoint.
pub fn oracle_bracket_sum(s: &ConvexSample, shift: f64, weights: Weights) -> BracketSum {
    let mut value = 0.0;
    let mut ties = 0;
    for m in s.a()..=s.b() {
        let g = s.eval(m as f64);
        let reaches = |k: i64| g >= k as f64 - shift;
        let mut lo: i64 = 0;
        while !reaches(lo) {
            lo = if lo == 0 { -1 } else { lo * 2 };
        }
        let mut hi: i64 = lo.max(0) + 1;
        while reaches(hi) {
            hi *= 2;
        }
        // reaches(lo) && !reaches(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if reaches(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let near = |k: i64| (g - (k as f64 - shift)).abs() < ORACLE_TIE_TOL;
        if near(lo) || near(lo + 1) {
            ties += 1;
        }
        let w = if m == s.a() && weights == Weights::HalfFirst {
            0.5
        } else {
            1.0
        };
        value += w * lo as f64;
    }
    BracketSum {
        value,
        near_ties: ties,
    }
}
