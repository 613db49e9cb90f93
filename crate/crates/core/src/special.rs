//! Real-order Bessel functions of the first kind and gamma-function utilities.
//!
//! `J_ν(x)` is evaluated in one of three regimes:
//!
//! * the ascending power series while `x² ≤ 12(ν + 1)`, where the alternating
//!   terms cancel by at most a few hundred;
//! * the Hankel large-argument expansion once `x ≥ series_cutoff · max(1, ν)`
//!   and the expansion actually reaches the requested accuracy;
//! * Miller's backward recurrence, normalised with the Neumann series
//!   `(x/2)^μ / Γ(μ+1) = J_μ + Σ_{k≥1} (μ+2k) Γ(μ+k)/(k! Γ(μ+1)) J_{μ+2k}`,
//!   everywhere else (this covers the transition zone `x ≈ ν`).
//!
//! Half-integer orders go through the same code paths as every other order.

use std::f64::consts::PI;

use thiserror::Error;

/// Errors raised by the special-function layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("Bessel order must be a finite non-negative number, got {0}")]
    InvalidOrder(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{method} evaluation did not converge within {terms} terms (nu = {nu}, x = {x})")]
    NonConvergence {
        method: &'static str,
        nu: f64,
        x: f64,
        terms: usize,
    },
    #[error("invalid evaluation policy: {0}")]
    InvalidPolicy(String),
}

pub type Result<T> = std::result::Result<T, SpecialError>;

/// Accuracy and regime controls for Bessel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    /// Hankel expansion is attempted for `x ≥ series_cutoff · max(1, ν)`.
    pub series_cutoff: f64,
    pub target_rel_err: f64,
    pub max_terms: usize,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            series_cutoff: 12.0,
            target_rel_err: 1e-12,
            max_terms: 400,
        }
    }
}

impl EvalPolicy {
    pub fn new(series_cutoff: f64, target_rel_err: f64, max_terms: usize) -> Result<Self> {
        let policy = Self {
            series_cutoff,
            target_rel_err,
            max_terms,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.series_cutoff > 0.0) || !self.series_cutoff.is_finite() {
            return Err(SpecialError::InvalidPolicy(format!(
                "series_cutoff must be positive, got {}",
                self.series_cutoff
            )));
        }
        if !(self.target_rel_err >= 8.0 * f64::EPSILON) || !self.target_rel_err.is_finite() {
            return Err(SpecialError::InvalidPolicy(format!(
                "target_rel_err must be at least 8 eps, got {}",
                self.target_rel_err
            )));
        }
        if self.max_terms == 0 {
            return Err(SpecialError::InvalidPolicy(
                "max_terms must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Evaluation route for [`bessel_j_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Series,
    Hankel,
    Recurrence,
}

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(SpecialError::InvalidOrder(nu));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(SpecialError::InvalidArgument(format!(
            "Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}

/// `J_ν(x)` for real `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64, policy: &EvalPolicy) -> Result<f64> {
    bessel_j_with(nu, x, Method::Auto, policy)
}

/// `J_ν(x)` through an explicitly chosen route. Used to cross-check regimes.
pub fn bessel_j_with(nu: f64, x: f64, method: Method, policy: &EvalPolicy) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    match method {
        Method::Series => series(nu, x, policy),
        Method::Recurrence => Ok(miller(nu, x).1),
        Method::Hankel => hankel(nu, x, policy).ok_or(SpecialError::NonConvergence {
            method: "Hankel",
            nu,
            x,
            terms: policy.max_terms,
        }),
        Method::Auto => auto(nu, x, policy),
    }
}

fn series_regime(nu: f64, x: f64) -> bool {
    x * x <= 12.0 * (nu + 1.0)
}

fn auto(nu: f64, x: f64, policy: &EvalPolicy) -> Result<f64> {
    if series_regime(nu, x) {
        return series(nu, x, policy);
    }
    if x >= policy.series_cutoff * nu.max(1.0) {
        if let Some(v) = hankel(nu, x, policy) {
            return Ok(v);
        }
    }
    Ok(miller(nu, x).1)
}

/// `(J_{ν-1}, J_ν, J_{ν+1})` at `x > 0`; the first entry is NaN when `ν < 1`.
fn triple(nu: f64, x: f64, policy: &EvalPolicy) -> Result<(f64, f64, f64)> {
    let use_series = series_regime(nu, x);
    let use_hankel = !use_series && x >= policy.series_cutoff * nu.max(1.0);
    if !use_series && !use_hankel {
        return Ok(miller(nu, x));
    }
    let one = |order: f64| -> Result<f64> {
        if use_series {
            series(order, x, policy)
        } else {
            match hankel(order, x, policy) {
                Some(v) => Ok(v),
                None => Ok(miller(order, x).1),
            }
        }
    };
    let prev = if nu >= 1.0 { one(nu - 1.0)? } else { f64::NAN };
    Ok((prev, one(nu)?, one(nu + 1.0)?))
}

/// `J'_ν(x)`: `(J_{ν-1} - J_{ν+1})/2` for `ν ≥ 1`, `-J_1` for `ν = 0`, and
/// `(ν/x) J_ν - J_{ν+1}` for `0 < ν < 1` (which is `+∞` at `x = 0`).
pub fn bessel_j_prime(nu: f64, x: f64, policy: &EvalPolicy) -> Result<f64> {
    Ok(bessel_j_and_prime(nu, x, policy)?.1)
}

/// `(J_ν(x), J'_ν(x))` from a single evaluation pass.
pub fn bessel_j_and_prime(nu: f64, x: f64, policy: &EvalPolicy) -> Result<(f64, f64)> {
    check_args(nu, x)?;
    if x == 0.0 {
        let value = if nu == 0.0 { 1.0 } else { 0.0 };
        let deriv = if nu == 0.0 || nu > 1.0 {
            0.0
        } else if nu == 1.0 {
            0.5
        } else {
            f64::INFINITY
        };
        return Ok((value, deriv));
    }
    let (prev, cur, next) = triple(nu, x, policy)?;
    let deriv = if nu == 0.0 {
        -next
    } else if nu >= 1.0 {
        0.5 * (prev - next)
    } else {
        nu / x * cur - next
    };
    Ok((cur, deriv))
}

/// `J''_ν(x)` from Bessel's equation, given `J_ν` and `J'_ν` at `x > 0`.
pub fn bessel_j_second(nu: f64, x: f64, value: f64, deriv: f64) -> f64 {
    -deriv / x - (1.0 - nu * nu / (x * x)) * value
}

/// `(x/2)^ν / Γ(ν+1)`, built as a product so that large orders neither
/// overflow the gamma function nor lose accuracy to `exp(lgamma)`.
fn series_prefactor(nu: f64, x: f64) -> f64 {
    let n = nu.floor();
    let mu = nu - n;
    let half = 0.5 * x;
    let mut pref = if mu == 0.0 {
        1.0
    } else {
        half.powf(mu) / gamma_fn(mu + 1.0).unwrap_or(1.0)
    };
    let mut j = 1.0;
    while j <= n {
        pref *= half / (mu + j);
        if pref == 0.0 {
            break;
        }
        j += 1.0;
    }
    pref
}

fn series(nu: f64, x: f64, policy: &EvalPolicy) -> Result<f64> {
    let pref = series_prefactor(nu, x);
    if pref == 0.0 {
        return Ok(0.0);
    }
    let q = -0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut peak = 1.0_f64;
    let stop_rel = policy.target_rel_err * 1e-4;
    for k in 1..=policy.max_terms {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        peak = peak.max(term.abs());
        if term.abs() <= stop_rel * sum.abs() || term.abs() <= 1e-2 * f64::EPSILON * peak {
            return Ok(pref * sum);
        }
    }
    Err(SpecialError::NonConvergence {
        method: "power series",
        nu,
        x,
        terms: policy.max_terms,
    })
}

/// Hankel asymptotic expansion; `None` when it cannot reach the target
/// accuracy at this `(ν, x)`.
fn hankel(nu: f64, x: f64, policy: &EvalPolicy) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0_f64;
    let mut q = 0.0_f64;
    let mut term = 1.0_f64;
    let mut peak = 1.0_f64;
    let tol = policy.target_rel_err * 1e-4;
    let mut converged = false;
    for k in 1..=policy.max_terms {
        let odd = (2 * k - 1) as f64;
        let factor = (mu - odd * odd) / (8.0 * k as f64 * x);
        if odd * odd > mu && factor.abs() >= 1.0 {
            return None;
        }
        term *= factor;
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        peak = peak.max(term.abs());
        if peak > 1e2 {
            return None;
        }
        if term.abs() <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

const RESCALE_AT: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// Miller's backward recurrence. Returns `(J_{ν-1}, J_ν, J_{ν+1})`, the first
/// entry NaN when `ν < 1`.
fn miller(nu: f64, x: f64) -> (f64, f64, f64) {
    let n = nu.floor() as usize;
    let mu = nu - n as f64;
    let top = x.max((n + 1) as f64);
    let mut start = (top + 16.0 * (0.5 * top).cbrt() + 20.0).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let half = start / 2;
    // s_k = Γ(μ+k) / (k! Γ(μ+1))
    let mut s = vec![0.0_f64; half + 1];
    if half >= 1 {
        s[1] = 1.0;
    }
    for k in 2..=half {
        s[k] = s[k - 1] * (mu + (k - 1) as f64) / k as f64;
    }

    let mut rescales = 0_i32;
    // (value, rescale count at capture) for orders n-1, n, n+1
    let mut captured: [Option<(f64, i32)>; 3] = [None; 3];
    let mut f_next = 0.0_f64;
    let mut f_cur = 1e-30_f64;
    let mut norm = 0.0_f64;
    let mut j = start;
    loop {
        if j.is_multiple_of(2) {
            let weight = if j == 0 {
                1.0
            } else {
                (mu + j as f64) * s[j / 2]
            };
            norm += weight * f_cur;
        }
        if j == n + 1 {
            captured[2] = Some((f_cur, rescales));
        } else if j == n {
            captured[1] = Some((f_cur, rescales));
        } else if n >= 1 && j == n - 1 {
            captured[0] = Some((f_cur, rescales));
        }
        if j == 0 {
            break;
        }
        let f_prev = 2.0 * (mu + j as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        j -= 1;
        if f_cur.abs() > RESCALE_AT {
            f_cur *= RESCALE_BY;
            f_next *= RESCALE_BY;
            norm *= RESCALE_BY;
            rescales += 1;
        }
    }

    let pref = if mu == 0.0 {
        1.0
    } else {
        (0.5 * x).powf(mu) / gamma_fn(mu + 1.0).unwrap_or(1.0)
    };
    let resolve = |slot: Option<(f64, i32)>| -> f64 {
        match slot {
            None => f64::NAN,
            Some((value, at)) => {
                let mut v = value / norm * pref;
                for _ in at..rescales {
                    v *= RESCALE_BY;
                    if v == 0.0 {
                        break;
                    }
                }
                v
            }
        }
    };
    (
        resolve(captured[0]),
        resolve(captured[1]),
        resolve(captured[2]),
    )
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Euler's gamma function for `x > 0` (Lanczos, g = 7, nine terms).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialError::InvalidArgument(format!(
            "gamma_fn requires a finite positive argument, got {x}"
        )));
    }
    if x < 0.5 {
        // reflection
        return Ok(PI / ((PI * x).sin() * gamma_fn(1.0 - x)?));
    }
    if x == x.floor() && x <= 21.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half_pow = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half_pow * (half_pow * (-t).exp()) * lanczos_sum(z))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialError::InvalidArgument(format!(
            "ln_gamma requires a finite positive argument, got {x}"
        )));
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// `n!` as a float (exact up to 22!).
pub fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient with the convention `C(n, k) = 0` for `n < k`
/// (and for negative `n`).
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0.0, 0.0, &pol()).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0, &pol()).unwrap(), 0.0);
        assert_eq!(bessel_j(2.5, 0.0, &pol()).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(0.0, 0.0, &pol()).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1.0, 0.0, &pol()).unwrap(), 0.5);
    }

    #[test]
    fn rejects_negative_order_and_argument() {
        assert!(matches!(
            bessel_j(-0.5, 1.0, &pol()),
            Err(SpecialError::InvalidOrder(_))
        ));
        assert!(matches!(
            bessel_j(0.5, -1.0, &pol()),
            Err(SpecialError::InvalidArgument(_))
        ));
        assert!(bessel_j(f64::NAN, 1.0, &pol()).is_err());
    }

    #[test]
    fn policy_invariants() {
        assert!(EvalPolicy::new(12.0, 1e-12, 400).is_ok());
        assert!(EvalPolicy::new(0.0, 1e-12, 400).is_err());
        assert!(EvalPolicy::new(12.0, f64::EPSILON, 400).is_err());
        assert!(EvalPolicy::new(12.0, 1e-12, 0).is_err());
    }

    #[test]
    fn series_reports_non_convergence() {
        let tight = EvalPolicy::new(12.0, 1e-12, 3).unwrap();
        assert!(matches!(
            bessel_j_with(0.0, 3.0, Method::Series, &tight),
            Err(SpecialError::NonConvergence { .. })
        ));
    }

    #[test]
    fn half_order_is_elementary() {
        // J_{1/2}(x) = sqrt(2/(πx)) sin x
        for &x in &[0.3, 1.0, 3.0, 7.5, 20.0, 55.0, 140.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x, &pol()).unwrap();
            assert!((got - exact).abs() <= 1e-13, "x={x}: {got} vs {exact}");
        }
    }

    #[test]
    fn first_zero_of_j1_prime_is_below_two() {
        let at1 = bessel_j_prime(1.0, 1.0, &pol()).unwrap();
        let at2 = bessel_j_prime(1.0, 2.0, &pol()).unwrap();
        assert!(at1 > 0.0);
        assert!(at2 < 0.0);
        let lo = bessel_j_prime(1.0, 1.8, &pol()).unwrap();
        let hi = bessel_j_prime(1.0, 1.9, &pol()).unwrap();
        assert!(lo > 0.0 && hi < 0.0);
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_fn(2.5).unwrap() - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert_eq!(gamma_fn(6.0).unwrap(), 120.0);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.0).is_err());
        let x: f64 = 7.3;
        assert!((ln_gamma(x).unwrap() - gamma_fn(x).unwrap().ln()).abs() < 1e-13);
    }

    #[test]
    fn gamma_duplication_at_five() {
        // √π Γ(d−1) = 2^{d−2} Γ((d−1)/2) Γ(d/2), both sides 6√π at d = 5
        let lhs = PI.sqrt() * gamma_fn(4.0).unwrap();
        let rhs = 8.0 * gamma_fn(2.0).unwrap() * gamma_fn(2.5).unwrap();
        assert!((lhs - 6.0 * PI.sqrt()).abs() < 1e-13);
        assert!((rhs - 6.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(56, 11), 148_902_215_280);
    }
}
