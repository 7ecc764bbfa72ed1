//! Improvements over the universal bound.
//!
//! * Test functions `P_j(n,s) = 1/M + sum_i w_i Q_j(node_i)`: a negative
//!   value for some `j > tau` is exactly the condition under which a
//!   degree-`j` certificate beats the ULB.
//! * The constructive degree-`j` certificate `f = eps Q_j + g`, with `g`
//!   the Hermite interpolant of `h - eps Q_j` at the quadrature nodes.
//! * Pair covering: Hermite tangency at an off-grid node is replaced by
//!   interpolation at the two neighbouring points of `T_n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Result};
use crate::poly::{hermite_interpolate, HermiteNode, Poly};
use crate::polyengine::{kraw_poly, kraw_values, SpaceParams};
use crate::potential::Potential;
use crate::quadrature::{rule, QuadratureRule};
use crate::ulb::{hermite_nodes, lp_lower_value, ulb_from_rule, BoundReport, Method};
use crate::Tolerances;

/// Test-function values `P_j` for `tau < j <= j_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionScan {
    pub tau: usize,
    pub values: Vec<(usize, f64)>,
    /// Smallest `j` with `P_j < -tol`.
    pub first_negative: Option<usize>,
}

/// `P_j` for the given rule.
pub fn test_function_for_rule(rule: &QuadratureRule, j: usize) -> Result<f64> {
    if j > rule.space.n {
        return domain(format!("test function degree {j} exceeds n = {}", rule.space.n));
    }
    Ok(rule.apply(|t| kraw_values(rule.space, j, t)[j]))
}

/// `P_j(n,s)` for the rule attached to cardinality `m`.
pub fn test_function(space: SpaceParams, m: u64, j: usize, tol: &Tolerances) -> Result<f64> {
    test_function_for_rule(&rule(space, m, tol)?, j)
}

pub fn scan_rule(rule: &QuadratureRule, j_max: usize, tol: &Tolerances) -> Result<TestFunctionScan> {
    if j_max > rule.space.n {
        return domain(format!("j_max = {j_max} exceeds n = {}", rule.space.n));
    }
    let tau = rule.tau();
    let values = (tau + 1..=j_max)
        .map(|j| test_function_for_rule(rule, j).map(|p| (j, p)))
        .collect::<Result<Vec<_>>>()?;
    let first_negative = values.iter().find(|(_, p)| *p < -tol.check).map(|(j, _)| *j);
    Ok(TestFunctionScan {
        tau,
        values,
        first_negative,
    })
}

/// All `P_j` with `tau < j <= j_max`; no negative value certifies that no
/// certificate of degree up to `j_max` staying below `h` on `[-1,1]` beats
/// the ULB.
pub fn scan_test_functions(
    space: SpaceParams,
    m: u64,
    j_max: usize,
    tol: &Tolerances,
) -> Result<TestFunctionScan> {
    scan_rule(&rule(space, m, tol)?, j_max, tol)
}

const CHEB_POINTS: usize = 64;
const RIGHT_END: f64 = 1.0 - 1e-6;

/// Chebyshev-Lobatto points of `[-1, RIGHT_END]`.
fn chebyshev_points() -> Vec<f64> {
    let (a, b) = (-1.0, RIGHT_END);
    (0..CHEB_POINTS)
        .map(|i| {
            let x = (std::f64::consts::PI * i as f64 / (CHEB_POINTS - 1) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * x
        })
        .collect()
}

/// Whether `h - eps Q_j` has nonnegative derivatives of orders `0..=j` on
/// the sample points.
fn shifted_is_monotone(
    derivs_h: &[Vec<f64>],
    derivs_q: &[Vec<f64>],
    eps: f64,
) -> bool {
    derivs_h
        .iter()
        .zip(derivs_q)
        .all(|(h, q)| h.iter().zip(q).all(|(a, b)| a - eps * b >= 0.0))
}

/// Largest admissible `eps`: geometric search over `2^-m`, then bisection
/// between the first admissible power and its double.
fn max_epsilon(space: SpaceParams, pot: &Potential, qj: &Poly, j: usize) -> Result<Option<f64>> {
    let pts = chebyshev_points();
    let mut derivs_h = Vec::with_capacity(j + 1);
    let mut derivs_q = Vec::with_capacity(j + 1);
    for order in 0..=j {
        let dq = qj.derivative_n(order);
        derivs_q.push(pts.iter().map(|&t| dq.eval(t)).collect::<Vec<_>>());
        derivs_h.push(
            pts.iter()
                .map(|&t| pot.eval_n(space.n, t, order))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let ok = |eps: f64| shifted_is_monotone(&derivs_h, &derivs_q, eps);
    let Some(m) = (0..64).find(|&m| ok(2f64.powi(-m))) else {
        return Ok(None);
    };
    let mut lo = 2f64.powi(-m);
    let mut hi = 2.0 * lo;
    if m == 0 {
        // Expand upward until the condition fails.
        while ok(hi) && hi < 1e12 {
            lo = hi;
            hi *= 2.0;
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Degree-`j` certificate `eps Q_j + g` for a given `eps`; the bound is
/// `ULB - M eps P_j`. With `eps = 0` this is the Hermite certificate.
pub fn higher_degree_with_epsilon(
    space: SpaceParams,
    m: u64,
    pot: &Potential,
    j: usize,
    eps: f64,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let rule = rule(space, m, tol)?;
    let p_j = test_function_for_rule(&rule, j)?;
    let qj = kraw_poly(space, j)?;
    let nodes = hermite_nodes(&rule, |t, order| {
        Ok(pot.eval_n(space.n, t, order)? - eps * qj.derivative_n(order).eval(t))
    })?;
    let g = hermite_interpolate(&nodes)?;
    let f = qj.scale(eps).add(&g);

    let base = ulb_from_rule(&rule, pot)?.value;
    let mut report = lp_lower_value(&f, space, m, pot, None, tol)?;
    let certified = report.value;
    report.value = base - m as f64 * eps * p_j;
    report.method = Method::HigherDegree;
    report.notes = format!(
        "j = {j}, eps = {eps:e}, P_j = {p_j:e}, ULB = {base}, certificate f_0 M - f(1) = {certified}{}{}",
        if report.notes.is_empty() { "" } else { "; " },
        report.notes
    );
    report.rule = Some(rule);
    Ok(report)
}

/// Constructive improvement of the ULB by a polynomial of degree exactly
/// `j`, available whenever `P_j(n,s) < 0`.
pub fn higher_degree_bound(
    space: SpaceParams,
    m: u64,
    pot: &Potential,
    j: usize,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let p_j = test_function(space, m, j, tol)?;
    if p_j >= 0.0 {
        return domain(format!("P_{j}(n,s) = {p_j:e} is not negative; no degree-{j} improvement"));
    }
    let qj = kraw_poly(space, j)?;
    let eps = max_epsilon(space, pot, &qj, j)?.ok_or_else(|| {
        crate::Error::Numeric(format!(
            "no eps in [2^-63, 1] keeps h - eps Q_{j} absolutely monotone on the sample grid"
        ))
    })?;
    higher_degree_with_epsilon(space, m, pot, j, eps, tol)
}

/// Pair-covering certificate: every off-grid node `alpha in (t_j, t_{j+1})`
/// contributes interpolation at `t_j` and `t_{j+1}`; a grid point claimed
/// twice (shared bracket end or a node on the grid) carries value and slope.
/// On the even branch `beta_0 = -1` stays a simple node.
pub fn pair_covering(space: SpaceParams, m: u64, pot: &Potential, tol: &Tolerances) -> Result<BoundReport> {
    let rule = rule(space, m, tol)?;
    let n = space.n;
    let on_grid = 1e-10;
    let mut claims: BTreeMap<usize, usize> = BTreeMap::new();
    let mut strict = false;
    for (i, &x) in rule.nodes.iter().enumerate() {
        if i == 0 && rule.branch.is_even() {
            *claims.entry(0).or_default() += 1;
            continue;
        }
        let pos = (x + 1.0) * n as f64 / 2.0;
        let nearest = pos.round();
        if (pos - nearest).abs() < on_grid {
            *claims.entry(nearest as usize).or_default() += 2;
        } else {
            strict = true;
            let j = pos.floor() as usize;
            *claims.entry(j).or_default() += 1;
            *claims.entry(j + 1).or_default() += 1;
        }
    }
    if claims.keys().any(|&j| j >= n) {
        return numeric("a pair-covering bracket reaches t = 1");
    }
    let mut nodes = Vec::with_capacity(claims.len());
    for (&j, &mult) in &claims {
        let t = space.grid_point(j);
        let node = match mult {
            1 => HermiteNode::simple(t, pot.eval_n(n, t, 0)?),
            2 => HermiteNode::double(t, pot.eval_n(n, t, 0)?, pot.eval_n(n, t, 1)?),
            _ => return numeric(format!("grid point {t} claimed {mult} times")),
        };
        nodes.push(node);
    }
    let f = hermite_interpolate(&nodes)?;
    let mut report = lp_lower_value(&f, space, m, pot, None, tol)?;
    if report.a1_ok != crate::ulb::Check::Pass {
        return numeric(format!("pair-covering certificate violates A1: {}", report.notes));
    }
    report.method = Method::PairCover;
    let mut notes = vec![if strict {
        "some node lies off T_n: strict improvement over the ULB"
    } else {
        "all nodes lie on T_n: equals the ULB"
    }
    .to_string()];
    if !report.notes.is_empty() {
        notes.push(report.notes.clone());
    }
    notes.push("A2 is checked numerically, not guaranteed".into());
    report.notes = notes.join("; ");
    report.rule = Some(rule);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::rule_at_s;
    use crate::ulb::ulb;

    fn sp(n: usize, q: u32) -> SpaceParams {
        SpaceParams::new(n, q).unwrap()
    }

    #[test]
    fn test_function_vanishes_up_to_tau() {
        let tol = Tolerances::default();
        let r = rule(sp(10, 2), 40, &tol).unwrap();
        assert!((test_function_for_rule(&r, 0).unwrap() - 1.0).abs() < 1e-9);
        for j in 1..=r.tau() {
            assert!(test_function_for_rule(&r, j).unwrap().abs() < 1e-9);
        }
        assert!(test_function_for_rule(&r, 11).is_err());
    }

    #[test]
    fn scan_examples() {
        let tol = Tolerances::default();
        let scan = scan_test_functions(sp(10, 2), 40, 10, &tol).unwrap();
        assert!(scan.first_negative.is_some());
        let scan = scan_test_functions(sp(9, 2), 128, 9, &tol).unwrap();
        assert!(scan.values.last().unwrap().1 < 0.0);
        let scan = scan_test_functions(sp(9, 2), 128, 5, &tol).unwrap();
        assert!(scan.values.is_empty() && scan.first_negative.is_none());
    }

    #[test]
    fn p5_negative_for_n6_even_branch() {
        let tol = Tolerances::default();
        let s = sp(6, 2);
        let (lo, hi) = crate::bounds::interval(s, 2, &tol).unwrap();
        let r = rule_at_s(s, 2, 0.5 * (lo + hi), &tol).unwrap();
        assert!(test_function_for_rule(&r, 5).unwrap() < 0.0);
    }

    #[test]
    fn zero_epsilon_recovers_ulb() {
        let tol = Tolerances::default();
        let pot = Potential::riesz(1.0).unwrap();
        let base = ulb(sp(9, 2), 128, &pot, &tol).unwrap().value;
        let r = higher_degree_with_epsilon(sp(9, 2), 128, &pot, 9, 0.0, &tol).unwrap();
        assert_eq!(r.value, base);
    }

    #[test]
    fn higher_degree_identity_and_bracket() {
        let tol = Tolerances::default();
        let pot = Potential::riesz(1.0).unwrap();
        let r = higher_degree_bound(sp(9, 2), 128, &pot, 9, &tol).unwrap();
        assert!(r.value > 31.440 && r.value <= 31.525 + 5e-3, "{}", r.value);
        let kraw = r.kraw.as_ref().unwrap();
        let certified = kraw.f0() * 128.0 - kraw.value_at_one();
        assert!((certified - r.value).abs() < 1e-9 * r.value);
        assert!(r.valid(), "{}", r.notes);
    }

    #[test]
    fn pair_covering_on_grid_node_equals_ulb() {
        let tol = Tolerances::default();
        let pot = Potential::exponential(1.0).unwrap();
        let pc = pair_covering(sp(3, 2), 4, &pot, &tol).unwrap();
        let base = ulb(sp(3, 2), 4, &pot, &tol).unwrap();
        assert!((pc.value - base.value).abs() < 1e-12);
    }

    #[test]
    fn pair_covering_n10_m40() {
        let tol = Tolerances::default();
        let pot = Potential::riesz(1.0).unwrap();
        let pc = pair_covering(sp(10, 2), 40, &pot, &tol).unwrap();
        assert!((pc.value - 8.0857).abs() < 5e-4, "{}", pc.value);
    }

    fn p_2k3_negative_on_interval(k: usize, n: usize, tau: usize) {
        let tol = Tolerances::default();
        let s = sp(n, 2);
        let (lo, hi) = crate::bounds::interval(s, tau, &tol).unwrap();
        for i in 1..=10 {
            let x = lo + (hi - lo) * i as f64 / 11.0;
            let r = rule_at_s(s, tau, x, &tol).unwrap();
            let p = test_function_for_rule(&r, 2 * k + 3).unwrap();
            assert!(p < 0.0, "k={k} n={n} s={x} P={p}");
        }
    }

    #[test]
    fn binary_even_branch_ranges() {
        for k in 1..=3 {
            for n in 2 * k + 3..=k * k + 4 * k + 2 {
                p_2k3_negative_on_interval(k, n, 2 * k);
            }
        }
    }

    #[test]
    fn binary_odd_branch_ranges() {
        for k in [5usize, 6] {
            let kf = k as f64;
            let bound = (kf * kf + 8.0 * kf + 1.0
                + ((kf * kf + 4.0 * kf + 5.0) * (kf * kf - 4.0 * kf - 3.0)).sqrt())
                / 4.0;
            let n_max = bound.floor() as usize;
            assert_eq!(n_max, if k == 5 { 19 } else { 27 });
            for n in 2 * k + 3..=n_max {
                p_2k3_negative_on_interval(k, n, 2 * k - 1);
            }
        }
    }

    #[test]
    fn p5_negative_n6_integer_m() {
        let tol = Tolerances::default();
        for m in 8..=12 {
            let r = rule(sp(6, 2), m, &tol).unwrap();
            assert_eq!(r.tau(), 2);
            assert!(test_function_for_rule(&r, 5).unwrap() < 0.0, "M={m}");
        }
    }
}
