//! Decreasing convex test functions `g` on an integer interval `[a, b]`.

use std::fmt;

use crate::phase::PhaseContext;
use crate::quad::adaptive_simpson_split;

use super::{LemmaError, Result};

/// Shape of a sample and the parameters that define it.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleKind {
    /// `g(t) = G((t − origin)/stretch)` for the curve `G` of parameter
    /// `lambda`, zero beyond `origin + stretch·√Λ`.
    FromG {
        lambda: f64,
        stretch: f64,
        origin: f64,
    },
    /// `g'` is piecewise linear through `(knots[i], slopes[i])`, non-decreasing
    /// and ending at 0; `g` vanishes from the last knot on.
    PiecewiseQuadratic { knots: Vec<f64>, slopes: Vec<f64> },
    /// `g(t) = slope·(b − t)`.
    Linear { slope: f64 },
}

impl SampleKind {
    pub fn name(&self) -> &'static str {
        match self {
            SampleKind::FromG { .. } => "from_g",
            SampleKind::PiecewiseQuadratic { .. } => "piecewise_quadratic",
            SampleKind::Linear { .. } => "linear",
        }
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sampled function with its integer domain and slope certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSample {
    a: i64,
    b: i64,
    kind: SampleKind,
    slope_bound: f64,
    ctx: Option<PhaseContext>,
    // g at the knots of a piecewise-quadratic sample
    knot_values: Vec<f64>,
}

impl ConvexSample {
    /// `G(·/c)` started at `origin`, on `[a, b]` with `b = [origin + c√Λ] + 1`.
    pub fn from_g(lambda: f64, stretch: f64, origin: f64, a: i64) -> Result<Self> {
        let ctx =
            PhaseContext::new(lambda).map_err(|e| LemmaError::InvalidSample(e.to_string()))?;
        if !stretch.is_finite() || stretch < 1.0 {
            return Err(LemmaError::InvalidSample(format!(
                "stretch must be >= 1, got {stretch}"
            )));
        }
        if !origin.is_finite() {
            return Err(LemmaError::InvalidSample("origin must be finite".into()));
        }
        let b = (origin + stretch * ctx.sqrt_lambda()).floor() as i64 + 1;
        Ok(Self {
            a,
            b: b.max(a + 1),
            kind: SampleKind::FromG {
                lambda,
                stretch,
                origin,
            },
            slope_bound: 0.5 / stretch,
            ctx: Some(ctx),
            knot_values: Vec::new(),
        })
    }

    /// Piecewise-quadratic sample; `slopes` must end with 0.
    pub fn piecewise_quadratic(a: i64, b: i64, knots: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != slopes.len() {
            return Err(LemmaError::InvalidSample(
                "need at least two knots and one slope per knot".into(),
            ));
        }
        if knots.iter().chain(&slopes).any(|v| !v.is_finite()) {
            return Err(LemmaError::InvalidSample(
                "knots and slopes must be finite".into(),
            ));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LemmaError::InvalidSample(
                "knots must be strictly increasing".into(),
            ));
        }
        if *slopes.last().unwrap() != 0.0 {
            return Err(LemmaError::InvalidSample("the last slope must be 0".into()));
        }
        let mut knot_values = vec![0.0; knots.len()];
        for i in (0..knots.len() - 1).rev() {
            knot_values[i] =
                knot_values[i + 1] - (knots[i + 1] - knots[i]) * (slopes[i] + slopes[i + 1]) / 2.0;
        }
        let slope_bound = slopes.iter().fold(0.0_f64, |m, s| m.max(-s));
        Ok(Self {
            a,
            b,
            kind: SampleKind::PiecewiseQuadratic { knots, slopes },
            slope_bound,
            ctx: None,
            knot_values,
        }
        .checked_range()?)
    }

    /// `g(t) = slope·(b − t)` on `[a, b]`.
    pub fn linear(a: i64, b: i64, slope: f64) -> Result<Self> {
        if !slope.is_finite() || slope < 0.0 {
            return Err(LemmaError::InvalidSample(format!(
                "slope must be finite and >= 0, got {slope}"
            )));
        }
        Ok(Self {
            a,
            b,
            kind: SampleKind::Linear { slope },
            slope_bound: slope,
            ctx: None,
            knot_values: Vec::new(),
        }
        .checked_range()?)
    }

    fn checked_range(self) -> Result<Self> {
        if self.a >= self.b {
            return Err(LemmaError::InvalidSample(format!(
                "need a < b, got [{}, {}]",
                self.a, self.b
            )));
        }
        Ok(self)
    }

    /// Replace the integer interval.
    pub fn with_range(mut self, a: i64, b: i64) -> Result<Self> {
        self.a = a;
        self.b = b;
        self.checked_range()
    }

    /// Replace the slope certificate. The hypothesis checks compare it with
    /// the actual derivative, so a forged value is caught there.
    pub fn with_slope_bound(mut self, bound: f64) -> Self {
        self.slope_bound = bound;
        self
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn kind(&self) -> &SampleKind {
        &self.kind
    }

    pub fn slope_bound(&self) -> f64 {
        self.slope_bound
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, SampleKind::Linear { .. })
    }

    /// Left end of the interval on which `g` is defined.
    pub fn domain_start(&self) -> f64 {
        match &self.kind {
            SampleKind::FromG { origin, .. } => *origin,
            SampleKind::PiecewiseQuadratic { knots, .. } => knots[0],
            SampleKind::Linear { .. } => f64::NEG_INFINITY,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            SampleKind::FromG {
                stretch, origin, ..
            } => {
                let ctx = self.ctx.as_ref().expect("context present");
                let u = ((t - origin) / stretch).max(0.0);
                ctx.eval_g_ext(u).unwrap_or(0.0)
            }
            SampleKind::PiecewiseQuadratic { knots, slopes } => {
                let last = knots.len() - 1;
                if t >= knots[last] {
                    return 0.0;
                }
                if t <= knots[0] {
                    return self.knot_values[0] + slopes[0] * (t - knots[0]);
                }
                let i = knots.partition_point(|&k| k <= t) - 1;
                let s_t = pq_slope(knots, slopes, i, t);
                self.knot_values[i + 1] - (knots[i + 1] - t) * (s_t + slopes[i + 1]) / 2.0
            }
            SampleKind::Linear { slope } => {
                if t >= self.b as f64 {
                    0.0
                } else {
                    slope * (self.b as f64 - t)
                }
            }
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match &self.kind {
            SampleKind::FromG {
                stretch, origin, ..
            } => {
                let ctx = self.ctx.as_ref().expect("context present");
                let u = ((t - origin) / stretch).max(0.0);
                if u >= ctx.sqrt_lambda() {
                    0.0
                } else {
                    ctx.eval_g_deriv(u).unwrap_or(0.0) / stretch
                }
            }
            SampleKind::PiecewiseQuadratic { knots, slopes } => {
                let last = knots.len() - 1;
                if t >= knots[last] {
                    return 0.0;
                }
                if t <= knots[0] {
                    return slopes[0];
                }
                let i = knots.partition_point(|&k| k <= t) - 1;
                pq_slope(knots, slopes, i, t)
            }
            SampleKind::Linear { slope } => {
                if t >= self.b as f64 {
                    0.0
                } else {
                    -slope
                }
            }
        }
    }

    /// `∫_lo^hi g`. Closed form for `FromG` and linear samples; Simpson with
    /// a split at every knot (exact on quadratic pieces) otherwise.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi < lo {
            return -self.integral(hi, lo);
        }
        match &self.kind {
            SampleKind::FromG {
                stretch, origin, ..
            } => {
                let ctx = self.ctx.as_ref().expect("context present");
                let u_lo = ((lo - origin) / stretch).max(0.0);
                let u_hi = ((hi - origin) / stretch).max(0.0);
                stretch * ctx.integral_g_between(u_lo, u_hi).unwrap_or(f64::NAN)
            }
            SampleKind::PiecewiseQuadratic { knots, .. } => {
                adaptive_simpson_split(|t| self.eval(t), lo, hi, knots, 1e-13, 40)
            }
            SampleKind::Linear { slope } => {
                let b = self.b as f64;
                let (l, h) = (lo.min(b), hi.min(b));
                slope * ((b - l) * (b - l) - (b - h) * (b - h)) / 2.0
            }
        }
    }

    /// `b_0 = min{t ≥ a : g(t) = 0}`, known in closed form for every kind.
    pub fn b0(&self) -> f64 {
        let a = self.a as f64;
        let raw = match &self.kind {
            SampleKind::FromG {
                stretch, origin, ..
            } => origin + stretch * self.ctx.as_ref().expect("context present").sqrt_lambda(),
            SampleKind::PiecewiseQuadratic { knots, .. } => {
                let j = self
                    .knot_values
                    .iter()
                    .position(|&v| v <= 0.0)
                    .unwrap_or(knots.len() - 1);
                knots[j]
            }
            SampleKind::Linear { slope } => {
                if *slope > 0.0 {
                    self.b as f64
                } else {
                    a
                }
            }
        };
        raw.max(a)
    }

    /// `g(m)` for `m = a..=b`.
    pub fn integer_values(&self) -> Vec<f64> {
        (self.a..=self.b).map(|m| self.eval(m as f64)).collect()
    }
}

fn pq_slope(knots: &[f64], slopes: &[f64], i: usize, t: f64) -> f64 {
    let w = (t - knots[i]) / (knots[i + 1] - knots[i]);
    slopes[i] + (slopes[i + 1] - slopes[i]) * w
}
