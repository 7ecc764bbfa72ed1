//! Binary-only tools for designs whose inner products are confined to a
//! window `[ell, s]`: `gamma_0 M` on the even branch, the `xi` lower bound
//! for `ell`, the strength-2 estimates of `ell` and `s`, and the resulting
//! lower and upper energy bounds.

use serde::{Deserialize, Serialize};

use crate::bounds::Branch;
use crate::error::{domain, numeric, Result};
use crate::poly::{hermite_interpolate, HermiteNode, Poly};
use crate::polyengine::{kernel_t, SpaceParams};
use crate::potential::Potential;
use crate::quadrature::{rule, QuadratureRule};
use crate::roots::bisect;
use crate::ulb::{lp_lower_value_from, lp_upper_value, ulb_from_rule, BoundReport, Method};
use crate::Tolerances;

/// Which parity case of the minimum (or maximum) distance an estimate assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    /// The weaker of the two cases; sound without knowing the design.
    Conservative,
}

impl std::str::FromStr for Parity {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            "conservative" => Ok(Parity::Conservative),
            _ => domain(format!("unknown parity '{s}' (even, odd, conservative)")),
        }
    }
}

/// Estimated window for binary 2-designs of cardinality `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignWindow {
    pub n: usize,
    pub m: u64,
    pub ell: f64,
    pub s: f64,
    pub ell_parity: Parity,
    pub s_parity: Parity,
}

fn binary(n: usize) -> Result<SpaceParams> {
    SpaceParams::new(n, 2)
}

fn even_rule(n: usize, m: u64, tol: &Tolerances) -> Result<QuadratureRule> {
    let r = rule(binary(n)?, m, tol)?;
    match r.branch {
        Branch::Even(_) => Ok(r),
        Branch::Odd(_) => domain(format!(
            "M = {m} lies on an odd branch for n = {n}; an even strength 2k with R(n,2k) < M is required"
        )),
    }
}

/// `gamma_0 M` from the kernel: with `T = T_k`,
/// `gamma_0 = T(s,1) / (T(-1,-1) T(s,1) - T(-1,1) T(s,-1))`.
pub fn gamma0_kernel(space: SpaceParams, k: usize, s: f64, m: f64) -> Result<f64> {
    let ts1 = kernel_t(space, k, s, 1.0)?;
    let tsm = kernel_t(space, k, s, -1.0)?;
    let tmm = kernel_t(space, k, -1.0, -1.0)?;
    let tm1 = kernel_t(space, k, -1.0, 1.0)?;
    Ok(m * ts1 / (tmm * ts1 - tm1 * tsm))
}

/// `gamma_0 M` for `M` strictly inside an even interval `(R(n,2k), R(n,2k+1))`,
/// computed from the quadrature weight and checked against the kernel form.
pub fn gamma0m(n: usize, m: u64, tol: &Tolerances) -> Result<f64> {
    let r = even_rule(n, m, tol)?;
    gamma0m_of_rule(&r)
}

fn gamma0m_of_rule(r: &QuadratureRule) -> Result<f64> {
    let (lo, hi) = crate::bounds::interval(r.space, r.tau(), &Tolerances::default())?;
    if r.s <= lo || r.s >= hi {
        return domain(format!(
            "M = {} sits at an endpoint of the even interval; gamma_0 M is 0 or 1 there",
            r.m
        ));
    }
    let from_weight = r.m * r.weights[0];
    let from_kernel = gamma0_kernel(r.space, r.branch.k(), r.s, r.m)?;
    if (from_weight - from_kernel).abs() > 1e-8 {
        return numeric(format!(
            "gamma_0 M disagrees: weight gives {from_weight}, kernel gives {from_kernel}"
        ));
    }
    Ok(from_weight)
}

/// Smallest root `xi` in `(-1, beta_1)` of
/// `prod (t - beta_i)^2 = gamma_0 M prod (-1 - beta_i)^2`; a lower bound on
/// the smallest inner product of any even-strength design of size `m`.
pub fn xi_lower(n: usize, m: u64, tol: &Tolerances) -> Result<f64> {
    let r = even_rule(n, m, tol)?;
    let g = gamma0m_of_rule(&r)?;
    let betas = &r.nodes[1..];
    let phi = |t: f64| {
        betas
            .iter()
            .map(|&b| ((t - b) / (-1.0 - b)).powi(2))
            .product::<f64>()
            - g
    };
    let (lo, hi) = (-1.0, betas[0]);
    if !(phi(lo) > 0.0 && phi(hi) < 0.0) {
        return numeric(format!("no sign change for xi on (-1, {hi})"));
    }
    bisect(phi, lo, hi, 1e-15)
}

/// Lower estimate of the smallest inner product of a binary 2-design, for
/// any `m` (no range check).
pub fn ell_formula(n: usize, m: f64, parity: Parity) -> f64 {
    let nf = n as f64;
    let even = 1.0 - (2.0 * m / nf).sqrt();
    let odd = 1.0 - (2.0 * (nf * m - 2.0)).max(0.0).sqrt() / nf;
    match parity {
        Parity::Even => even,
        Parity::Odd => odd,
        Parity::Conservative => even.min(odd),
    }
}

/// Upper estimate of the largest inner product of a binary 2-design, for
/// any `m >= 2` (no range check).
pub fn s_formula(n: usize, m: f64, parity: Parity) -> f64 {
    let nf = n as f64;
    let even = -1.0 + (2.0 * (m - 2.0) / nf).max(0.0).sqrt();
    let odd = -1.0 + (2.0 * (m - 2.0) * (nf * m - 2.0) / m).max(0.0).sqrt() / nf;
    match parity {
        Parity::Even => even,
        Parity::Odd => odd,
        Parity::Conservative => even.max(odd),
    }
}

fn check_2design_range(n: usize, m: u64) -> Result<()> {
    if n < 2 {
        return domain("n must be at least 2");
    }
    if m < n as u64 + 1 || m > 2 * n as u64 {
        return domain(format!("M = {m} outside [n+1, 2n] = [{}, {}]", n + 1, 2 * n));
    }
    Ok(())
}

pub fn ell_lower_2designs(n: usize, m: u64, parity: Parity) -> Result<f64> {
    check_2design_range(n, m)?;
    Ok(ell_formula(n, m as f64, parity))
}

pub fn s_upper_2designs(n: usize, m: u64, parity: Parity) -> Result<f64> {
    check_2design_range(n, m)?;
    Ok(s_formula(n, m as f64, parity))
}

pub fn design_window(n: usize, m: u64, ell_parity: Parity, s_parity: Parity) -> Result<DesignWindow> {
    Ok(DesignWindow {
        n,
        m,
        ell: ell_lower_2designs(n, m, ell_parity)?,
        s: s_upper_2designs(n, m, s_parity)?,
        ell_parity,
        s_parity,
    })
}

/// Lower energy bound for binary 2-designs from a quadratic through
/// `(ell, h(ell))` tangent to `h` at `a_0`.
pub fn lower_2design(n: usize, m: u64, pot: &Potential, tol: &Tolerances) -> Result<BoundReport> {
    let ell = ell_lower_2designs(n, m, Parity::Conservative)?;
    let (nf, mf) = (n as f64, m as f64);
    let denom_a = nf * (mf * ell + 1.0 - ell);
    let denom = mf * (1.0 + nf * ell * ell) - nf * (1.0 - ell).powi(2);
    if denom_a.abs() < 1e-300 || denom.abs() < 1e-12 {
        return numeric(format!("degenerate strength-2 lower bound at n = {n}, M = {m}"));
    }
    let a0 = (nf * (1.0 - ell) - mf) / denom_a;
    let h = |t: f64, order: usize| pot.eval_n(n, t, order);
    let value = (nf * (mf * ell + 1.0 - ell).powi(2) * h(a0, 0)? + mf * (mf - nf - 1.0) * h(ell, 0)?)
        / denom;

    let f = hermite_interpolate(&[
        HermiteNode::simple(ell, h(ell, 0)?),
        HermiteNode::double(a0, h(a0, 0)?, h(a0, 1)?),
    ])?;
    let mut report = lp_lower_value_from(&f, binary(n)?, m, pot, Some(2), ell, tol)?;
    if (report.value - value).abs() > 1e-8 * value.abs().max(1.0) {
        report.note(format!("certificate value {} differs from closed form", report.value));
    }
    report.value = value;
    report.method = Method::WindowLower;
    report.note(format!("ell = {ell}, a_0 = {a0}"));
    Ok(report)
}

/// Even-branch certificate interpolating `h` at `ell` and tangent to `h` at
/// `beta_1..beta_k`. Beats the ULB whenever `ell > -1`.
pub fn strict_even_bound(
    n: usize,
    m: u64,
    pot: &Potential,
    ell: f64,
    tol: &Tolerances,
) -> Result<BoundReport> {
    if ell <= -1.0 {
        return domain("ell must exceed -1 for a strict improvement");
    }
    let r = even_rule(n, m, tol)?;
    let betas = &r.nodes[1..];
    if ell >= betas[0] {
        return domain(format!("ell = {ell} must lie below beta_1 = {}", betas[0]));
    }
    let h = |t: f64, order: usize| pot.eval_n(n, t, order);
    let mut nodes = vec![HermiteNode::simple(ell, h(ell, 0)?)];
    for &b in betas {
        nodes.push(HermiteNode::double(b, h(b, 0)?, h(b, 1)?));
    }
    let g = hermite_interpolate(&nodes)?;
    let mut report = lp_lower_value_from(&g, r.space, m, pot, Some(r.tau()), ell, tol)?;
    let base = ulb_from_rule(&r, pot)?.value;
    report.method = Method::WindowLower;
    report.note(format!(
        "ell = {ell}, ULB = {base}, gain = {}",
        report.value - base
    ));
    report.rule = Some(r);
    Ok(report)
}

/// Chord of `h` through `(ell, h(ell))` and `(s, h(s))`.
fn chord(pot: &Potential, n: usize, ell: f64, s: f64) -> Result<Poly> {
    let (hl, hs) = (pot.eval_n(n, ell, 0)?, pot.eval_n(n, s, 0)?);
    let slope = (hs - hl) / (s - ell);
    Ok(Poly::new(vec![hl - slope * ell, slope]))
}

/// Upper energy bound for binary 2-designs from the chord of `h` over the
/// estimated window.
pub fn upper_2design(n: usize, m: u64, pot: &Potential, tol: &Tolerances) -> Result<BoundReport> {
    let ell = ell_lower_2designs(n, m, Parity::Conservative)?;
    let s = s_upper_2designs(n, m, Parity::Conservative)?;
    if s <= ell {
        return domain(format!("empty window: s = {s} <= ell = {ell}"));
    }
    let (hl, hs) = (pot.eval_n(n, ell, 0)?, pot.eval_n(n, s, 0)?);
    let mf = m as f64;
    let value = ((mf - 1.0) * (s * hl - ell * hs) + hl - hs) / (s - ell);
    let g = chord(pot, n, ell, s)?;
    let mut report = lp_upper_value(&g, binary(n)?, m, 2, pot, (ell, s), tol)?;
    if (report.value - value).abs() > 1e-8 * value.abs().max(1.0) {
        report.note(format!("certificate value {} differs from closed form", report.value));
    }
    report.value = value;
    report.method = Method::WindowUpper;
    report.note(format!("window [{ell}, {s}]"));
    Ok(report)
}

/// Limits of the strength-2 strip as `n -> inf` with `M = xi n`:
/// lower bound `~ lower_slope n`, upper bound `~ c1 n + c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripAsymptotic {
    pub lower_slope: f64,
    pub c1: f64,
    pub c2: f64,
}

pub fn strip_asymptotic(xi: f64, pot: &Potential) -> Result<StripAsymptotic> {
    if !(xi > 1.0 && xi < 2.0) {
        return domain(format!("xi = {xi} must lie in (1, 2)"));
    }
    let r = (2.0 * xi).sqrt();
    let hl = pot.eval_free(1.0 - r, 0)?;
    let hs = pot.eval_free(r - 1.0, 0)?;
    Ok(StripAsymptotic {
        lower_slope: pot.eval_free(0.0, 0)? * xi,
        c1: xi * ((r - 1.0) * hl - (1.0 - r) * hs) / (2.0 * (r - 1.0)),
        c2: ((2.0 - r) * hl - r * hs) / (2.0 * (r - 1.0)),
    })
}
