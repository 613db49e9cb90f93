//! Adaptive Simpson quadrature with Richardson-corrected panels.

/// Integrate `f` over `[lo, hi]` to absolute tolerance `abs_tol`.
///
/// Panels are bisected until `|S(left) + S(right) − S(whole)| ≤ 15·tol`
/// (the classic Lyness criterion) or `max_depth` is reached.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    max_depth: u32,
) -> f64 {
    if hi == lo {
        return 0.0;
    }
    if hi < lo {
        return -adaptive_simpson(f, hi, lo, abs_tol, max_depth);
    }
    let mid = 0.5 * (lo + hi);
    let (f_lo, f_mid, f_hi) = (f(lo), f(mid), f(hi));
    let whole = simpson(lo, hi, f_lo, f_mid, f_hi);
    recurse(&f, lo, hi, f_lo, f_mid, f_hi, whole, abs_tol, max_depth)
}

/// Same as [`adaptive_simpson`] but splits at the given interior breakpoints
/// first (kinks of piecewise integrands).
pub fn adaptive_simpson_split<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    abs_tol: f64,
    max_depth: u32,
) -> f64 {
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    points.sort_by(f64::total_cmp);
    points.insert(0, lo);
    points.push(hi);
    let pieces = (points.len() - 1) as f64;
    points
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], abs_tol / pieces, max_depth))
        .sum()
}

fn simpson(lo: f64, hi: f64, f_lo: f64, f_mid: f64, f_hi: f64) -> f64 {
    (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_mid: f64,
    f_hi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let left_mid = 0.5 * (lo + mid);
    let right_mid = 0.5 * (mid + hi);
    let f_lm = f(left_mid);
    let f_rm = f(right_mid);
    let left = simpson(lo, mid, f_lo, f_lm, f_mid);
    let right = simpson(mid, hi, f_mid, f_rm, f_hi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || mid <= lo || mid >= hi {
        return left + right + delta / 15.0;
    }
    recurse(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1)
        + recurse(f, mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1)
}
