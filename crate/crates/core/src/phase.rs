//! The phase `F_ν`, the curve `G`, the comparison points `a_k`, the zero-count
//! bounds built on them and the moment integrals of `G`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::special::{gamma_fn, SpecialError};

/// Domain violations up to this (relative) size are absorbed by clamping.
pub const DOMAIN_SLACK: f64 = 1e-12;
/// A floor argument this close to an integer is reported as a near tie.
pub const FLOOR_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("root solve for a_k did not converge (nu = {nu}, k = {k})")]
    NonConvergence { nu: f64, k: u64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

pub type Result<T> = std::result::Result<T, PhaseError>;

/// Integer part with a flag for values that sit within rounding noise of an
/// integer. The raw floor is kept; the flag only surfaces the doubt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Floor {
    pub value: i64,
    pub near_tie: bool,
}

pub fn floor_checked(v: f64) -> Floor {
    let f = v.floor();
    let tol = FLOOR_TIE_TOL * v.abs().max(1.0);
    let near_tie = v - f < tol || f + 1.0 - v < tol;
    Floor {
        value: f as i64,
        near_tie,
    }
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(-1.0, 1.0)
}

/// `F_ν(x) = √(x²−ν²) − ν·arccos(ν/x)` for `x ≥ ν`.
pub fn eval_f(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || nu < 0.0 || !x.is_finite() {
        return Err(PhaseError::Domain(format!(
            "F needs finite nu >= 0 and x, got nu = {nu}, x = {x}"
        )));
    }
    if x < nu - DOMAIN_SLACK * nu.max(1.0) {
        return Err(PhaseError::Domain(format!(
            "F_nu(x) needs x >= nu, got nu = {nu}, x = {x}"
        )));
    }
    if x <= nu || x == 0.0 {
        return Ok(0.0);
    }
    let root = ((x - nu) * (x + nu)).sqrt();
    Ok((root - nu * clamp_unit(nu / x).acos()).max(0.0))
}

/// `F'_ν(x) = √(x²−ν²)/x`.
pub fn eval_f_deriv(nu: f64, x: f64) -> Result<f64> {
    eval_f(nu, x)?;
    if x <= nu || x == 0.0 {
        return Ok(0.0);
    }
    Ok(((x - nu) * (x + nu)).sqrt() / x)
}

/// The spectral parameter `Λ` with its square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseContext {
    lambda: f64,
    sqrt_lambda: f64,
}

impl PhaseContext {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(PhaseError::Domain(format!(
                "Lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            sqrt_lambda: lambda.sqrt(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sqrt_lambda(&self) -> f64 {
        self.sqrt_lambda
    }

    fn check(&self, t: f64) -> Result<f64> {
        let r = self.sqrt_lambda;
        if !t.is_finite() || t < -DOMAIN_SLACK * r.max(1.0) || t > r + DOMAIN_SLACK * r.max(1.0) {
            return Err(PhaseError::Domain(format!(
                "G needs t in [0, {r}], got {t}"
            )));
        }
        Ok(t.clamp(0.0, r))
    }

    /// `G(t) = (1/π)(√(Λ−t²) − t·arccos(t/√Λ))` on `[0, √Λ]`.
    pub fn eval_g(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        Ok(self.g_unchecked(t))
    }

    /// `G` extended by zero beyond `√Λ`.
    pub fn eval_g_ext(&self, t: f64) -> Result<f64> {
        if t.is_finite() && t > self.sqrt_lambda {
            return Ok(0.0);
        }
        self.eval_g(t)
    }

    /// `G'(t) = −arccos(t/√Λ)/π`.
    pub fn eval_g_deriv(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        if self.sqrt_lambda == 0.0 {
            return Ok(0.0);
        }
        Ok(-clamp_unit(t / self.sqrt_lambda).acos() / PI)
    }

    fn g_unchecked(&self, t: f64) -> f64 {
        let r = self.sqrt_lambda;
        if t >= r {
            return 0.0;
        }
        let root = ((r - t) * (r + t)).sqrt();
        ((root - t * clamp_unit(t / r).acos()) / PI).max(0.0)
    }

    /// `∫_0^s G(t) dt` in closed form, with `G` zero-extended beyond `√Λ`.
    pub fn integral_g(&self, s: f64) -> Result<f64> {
        if !s.is_finite() || s < -DOMAIN_SLACK * self.sqrt_lambda.max(1.0) {
            return Err(PhaseError::Domain(format!(
                "integral of G needs s >= 0, got {s}"
            )));
        }
        let r = self.sqrt_lambda;
        if r == 0.0 {
            return Ok(0.0);
        }
        let s = s.clamp(0.0, r);
        let root = ((r - s) * (r + s)).sqrt();
        let u = clamp_unit(s / r);
        let v = 0.75 * s * root + 0.25 * self.lambda * u.asin() - 0.5 * s * s * u.acos();
        Ok(v / PI)
    }

    /// `∫_lo^hi G`, zero-extended.
    pub fn integral_g_between(&self, lo: f64, hi: f64) -> Result<f64> {
        Ok(self.integral_g(hi)? - self.integral_g(lo)?)
    }
}

/// The unique `x ≥ ν` with `F_ν(x) = πk − π/4`.
pub fn a_k(nu: f64, k: u64) -> Result<f64> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(PhaseError::Domain(format!(
            "a_k needs finite nu >= 0, got {nu}"
        )));
    }
    if k == 0 {
        return Err(PhaseError::Domain("a_k needs k >= 1".into()));
    }
    let target = PI * k as f64 - PI / 4.0;
    if nu == 0.0 {
        return Ok(target);
    }
    // F_ν(x) ≤ x and F_ν(x) ≥ x − ν(1 + π/2)
    let mut lo = nu.max(target);
    let mut hi = target + nu * (1.0 + PI / 2.0) + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if eval_f(nu, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(PhaseError::NonConvergence { nu, k })
}

/// `[F_ν(√Λ)/π + 1/4]`, an upper bound for `#{k : j_{ν,k} ≤ √Λ}`.
pub fn dirichlet_zero_bound(nu: f64, lambda: f64) -> Result<Floor> {
    zero_bound(nu, lambda, 0.25)
}

/// `[F_ν(√Λ)/π + 3/4]`, a lower bound for `#{k : j'_{ν,k} ≤ √Λ}`.
///
/// At `ν = Λ = 0` this returns 1, the zero `j'_{0,1} = 0` itself.
pub fn neumann_zero_bound(nu: f64, lambda: f64) -> Result<Floor> {
    if nu == 0.0 && lambda == 0.0 {
        return Ok(Floor {
            value: 1,
            near_tie: false,
        });
    }
    zero_bound(nu, lambda, 0.75)
}

fn zero_bound(nu: f64, lambda: f64, shift: f64) -> Result<Floor> {
    let ctx = PhaseContext::new(lambda)?;
    if !nu.is_finite() || nu < 0.0 {
        return Err(PhaseError::Domain(format!(
            "nu must be finite and >= 0, got {nu}"
        )));
    }
    let x = ctx.sqrt_lambda();
    if x <= nu {
        return Ok(Floor {
            value: 0,
            near_tie: false,
        });
    }
    Ok(floor_checked(eval_f(nu, x)? / PI + shift))
}

/// `∫_0^{√Λ} t^m G(t) dt = Γ((m+1)/2) Λ^{(m+2)/2} / (4√π (m+2) Γ((m+4)/2))`.
pub fn moment_integral(lambda: f64, m: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(PhaseError::Domain(format!(
            "Lambda must be finite and >= 0, got {lambda}"
        )));
    }
    if !m.is_finite() || m < 0.0 {
        return Err(PhaseError::Domain(format!(
            "moment order must be finite and >= 0, got {m}"
        )));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let num = gamma_fn((m + 1.0) / 2.0)? * lambda.powf((m + 2.0) / 2.0);
    let den = 4.0 * PI.sqrt() * (m + 2.0) * gamma_fn((m + 4.0) / 2.0)?;
    Ok(num / den)
}
