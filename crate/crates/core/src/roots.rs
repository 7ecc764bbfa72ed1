//! Sign-scan root isolation followed by bisection.

use crate::error::{numeric, Result};

/// Scan step used for polynomials of degree `degree` on the grid of
/// length `n`: zeros are separated by the mass points `2/n` apart, so a
/// step proportional to `1/(n * degree)` resolves them.
pub fn scan_step(n: usize, degree: usize) -> f64 {
    let denom = 20.0 * n.max(1) as f64 * degree.max(1) as f64;
    (2.0 / denom).min(1e-3)
}

/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite
/// sign (or one of them zero). Stops once the bracket is narrower than `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return numeric(format!("no sign change on [{lo}, {hi}]"));
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Brackets of sign changes of `f` on the open interval `(lo, hi)`,
/// sampled with spacing at most `step`, listed left to right. A sample at
/// which `f` vanishes exactly is returned as a degenerate bracket.
pub fn sign_brackets<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)> {
    let steps = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / steps as f64;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev = f(lo);
    for j in 1..=steps {
        let x = if j == steps { hi } else { lo + j as f64 * h };
        let v = f(x);
        if v == 0.0 && j < steps {
            out.push((x, x));
        } else if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev = v;
    }
    out
}

/// Isolates exactly `expected` roots of `f` inside `(lo, hi)`: a first scan
/// at `step`, one retry ten times finer, then bisection of every bracket.
pub fn isolate_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    step: f64,
    expected: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let mut brackets = sign_brackets(&f, lo, hi, step);
    if brackets.len() != expected {
        brackets = sign_brackets(&f, lo, hi, step / 10.0);
    }
    if brackets.len() != expected {
        return numeric(format!(
            "expected {expected} roots in ({lo}, {hi}), found {}",
            brackets.len()
        ));
    }
    brackets
        .into_iter()
        .map(|(a, b)| if a == b { Ok(a) } else { bisect(&f, a, b, tol) })
        .collect()
}

/// Largest root of `f` in `(lo, hi)`, scanning downward from `hi`.
/// `f(hi)` must be nonzero.
pub fn greatest_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Result<f64> {
    for scan in [step, step / 10.0] {
        let steps = ((hi - lo) / scan).ceil().max(1.0) as usize;
        let h = (hi - lo) / steps as f64;
        let mut prev_x = hi;
        let mut prev = f(hi);
        for j in 1..=steps {
            let x = if j == steps { lo } else { hi - j as f64 * h };
            let v = f(x);
            if v == 0.0 {
                return Ok(x);
            }
            if prev.signum() != v.signum() {
                return bisect(&f, x, prev_x, tol);
            }
            prev_x = x;
            prev = v;
        }
    }
    numeric(format!("no root found in ({lo}, {hi})"))
}
