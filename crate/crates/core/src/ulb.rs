//! The universal lower bound `M sum_i w_i h(node_i)`, its Hermite
//! certificate, and evaluation of arbitrary linear-programming
//! certificates against the conditions
//!
//! * A1: `f(t) <= h(t)` on `T_n` (distinct points never have `t = 1`),
//! * A2: `f_i >= 0` for `i >= 1` (A2': only `i >= tau+1` for designs),
//! * B1: `g(t) >= h(t)` on `T_n` restricted to a window `[ell, s]`,
//! * B2: `g_i <= 0` for `i >= tau+1`.
//!
//! A certificate `f` yields the bound `f_0 M - f(1)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::poly::{hermite_interpolate, HermiteNode, Poly};
use crate::polyengine::{project, KrawExpansion, SpaceParams};
use crate::potential::Potential;
use crate::quadrature::{rule, QuadratureRule};
use crate::Tolerances;

/// Outcome of a condition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    NotChecked,
}

impl Check {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ulb,
    PairCover,
    HigherDegree,
    LpGeneric,
    WindowLower,
    WindowUpper,
}

/// A bound value together with whatever certifies it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub method: Method,
    pub certificate: Option<Poly>,
    pub kraw: Option<KrawExpansion>,
    /// A1 for lower bounds, B1 for upper bounds.
    pub a1_ok: Check,
    /// A2/A2' for lower bounds, B2 for upper bounds.
    pub a2_ok: Check,
    pub rule: Option<QuadratureRule>,
    pub notes: String,
}

impl BoundReport {
    pub(crate) fn bare(value: f64, method: Method) -> Self {
        BoundReport {
            value,
            method,
            certificate: None,
            kraw: None,
            a1_ok: Check::NotChecked,
            a2_ok: Check::NotChecked,
            rule: None,
            notes: String::new(),
        }
    }

    pub(crate) fn note(&mut self, text: impl AsRef<str>) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
    }

    /// Both condition flags passed.
    pub fn valid(&self) -> bool {
        self.a1_ok == Check::Pass && self.a2_ok == Check::Pass
    }
}

/// Grid points of `T_n` other than `t = 1`.
pub(crate) fn proper_grid(space: SpaceParams) -> impl Iterator<Item = f64> {
    (0..space.n).map(move |i| space.grid_point(i))
}

/// `10 n` equally spaced points of `[-1, 1)`.
pub(crate) fn dense_grid(space: SpaceParams) -> impl Iterator<Item = f64> {
    let count = 10 * space.n;
    (0..count).map(move |j| -1.0 + 2.0 * j as f64 / count as f64)
}

/// Largest violation `f(t) - h(t)` over the points (0 when none).
pub(crate) fn max_excess<I: Iterator<Item = f64>>(
    f: &Poly,
    pot: &Potential,
    space: SpaceParams,
    points: I,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in points {
        let h = pot.eval_n(space.n, t, 0)?;
        worst = worst.max(f.eval(t) - h);
    }
    Ok(worst)
}

/// Universal lower bound `M sum_i w_i h(node_i)`; it bounds the energy of
/// every code of size `M` and of every `tau`-design of size `M`.
pub fn ulb(space: SpaceParams, m: u64, pot: &Potential, tol: &Tolerances) -> Result<BoundReport> {
    let rule = rule(space, m, tol)?;
    ulb_from_rule(&rule, pot)
}

pub fn ulb_from_rule(rule: &QuadratureRule, pot: &Potential) -> Result<BoundReport> {
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        sum += w * pot.eval_n(rule.space.n, x, 0)?;
    }
    let mut report = BoundReport::bare(rule.m * sum, Method::Ulb);
    report.rule = Some(rule.clone());
    if !pot.is_absolutely_monotone() {
        report.note("potential is not absolutely monotone");
    }
    Ok(report)
}

/// Hermite data of `h` at the rule's nodes: double at every node except
/// `beta_0 = -1` on the even branch, which is simple.
pub(crate) fn hermite_nodes<H: Fn(f64, usize) -> Result<f64>>(
    rule: &QuadratureRule,
    h: H,
) -> Result<Vec<HermiteNode>> {
    rule.nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i == 0 && rule.branch.is_even() {
                Ok(HermiteNode::simple(x, h(x, 0)?))
            } else {
                Ok(HermiteNode::double(x, h(x, 0)?, h(x, 1)?))
            }
        })
        .collect()
}

/// Builds the Hermite interpolant of `h` at the quadrature nodes and checks
/// it as a certificate. Its bound coincides with the ULB.
pub fn hermite_certificate(
    space: SpaceParams,
    m: u64,
    pot: &Potential,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let rule = rule(space, m, tol)?;
    let nodes = hermite_nodes(&rule, |t, order| pot.eval_n(space.n, t, order))?;
    let f = hermite_interpolate(&nodes)?;
    let mut report = lp_lower_value(&f, space, m, pot, None, tol)?;
    report.method = Method::Ulb;
    let dense = max_excess(&f, pot, space, dense_grid(space))?;
    report.note(if dense <= tol.check {
        "f <= h holds on the dense grid of [-1,1)".to_string()
    } else {
        format!("f exceeds h by {dense:e} on the dense grid of [-1,1)")
    });
    let direct = ulb_from_rule(&rule, pot)?.value;
    if (direct - report.value).abs() > 1e-9 * direct.abs().max(1.0) {
        report.note(format!("certificate value differs from quadrature value {direct}"));
    }
    report.rule = Some(rule);
    Ok(report)
}

/// Bound `f_0 M - f(1)` of a supplied lower-bound certificate, with A1 on
/// `T_n` and A2 (or A2' when `design_tau` is given) recorded in the flags.
pub fn lp_lower_value(
    f: &Poly,
    space: SpaceParams,
    m: u64,
    pot: &Potential,
    design_tau: Option<usize>,
    tol: &Tolerances,
) -> Result<BoundReport> {
    lp_lower_value_from(f, space, m, pot, design_tau, -1.0, tol)
}

/// As [`lp_lower_value`], with A1 only required on `T_n` from `ell` up;
/// valid for codes whose inner products are known to be at least `ell`.
pub fn lp_lower_value_from(
    f: &Poly,
    space: SpaceParams,
    m: u64,
    pot: &Potential,
    design_tau: Option<usize>,
    ell: f64,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let kraw = project(f, space);
    let value = kraw.f0() * m as f64 - kraw.value_at_one();
    let mut report = BoundReport::bare(value, Method::LpGeneric);
    let excess = max_excess(f, pot, space, proper_grid(space).filter(|&t| t >= ell - 1e-12))?;
    report.a1_ok = Check::from_bool(excess <= tol.check);
    if excess > tol.check {
        report.note(format!("A1 violated by {excess:e}"));
    }
    let from = design_tau.map_or(1, |tau| tau + 1);
    let worst = kraw.f.iter().skip(from).fold(0.0f64, |w, &c| w.min(c));
    report.a2_ok = Check::from_bool(worst >= -tol.check);
    if worst < -tol.check {
        report.note(format!("coefficient {worst:e} below zero at index >= {from}"));
    }
    report.certificate = Some(f.clone());
    report.kraw = Some(kraw);
    Ok(report)
}

/// Bound `g_0 M - g(1)` of an upper-bound certificate for `tau`-designs
/// whose inner products lie in `[ell, s]`, with B1 and B2 in the flags.
pub fn lp_upper_value(
    g: &Poly,
    space: SpaceParams,
    m: u64,
    tau: usize,
    pot: &Potential,
    window: (f64, f64),
    tol: &Tolerances,
) -> Result<BoundReport> {
    let (ell, s) = window;
    if !(-1.0..1.0).contains(&ell) || !(-1.0..1.0).contains(&s) || ell > s {
        return domain(format!("window [{ell}, {s}] is not inside [-1, 1)"));
    }
    let kraw = project(g, space);
    let value = kraw.f0() * m as f64 - kraw.value_at_one();
    let mut report = BoundReport::bare(value, Method::LpGeneric);
    let slack = 1e-12;
    let mut deficit: f64 = 0.0;
    for t in proper_grid(space).filter(|&t| t >= ell - slack && t <= s + slack) {
        deficit = deficit.max(pot.eval_n(space.n, t, 0)? - g.eval(t));
    }
    report.a1_ok = Check::from_bool(deficit <= tol.check);
    if deficit > tol.check {
        report.note(format!("B1 violated by {deficit:e}"));
    }
    let worst = kraw.f.iter().skip(tau + 1).fold(0.0f64, |w, &c| w.max(c));
    report.a2_ok = Check::from_bool(worst <= tol.check);
    if worst > tol.check {
        report.note(format!("coefficient {worst:e} above zero at index >= {}", tau + 1));
    }
    report.certificate = Some(g.clone());
    report.kraw = Some(kraw);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, q: u32) -> SpaceParams {
        SpaceParams::new(n, q).unwrap()
    }

    #[test]
    fn even_full_space_n2() {
        let tol = Tolerances::default();
        for pot in [Potential::riesz(1.0).unwrap(), Potential::exponential(0.7).unwrap()] {
            let v = ulb(sp(2, 2), 4, &pot, &tol).unwrap().value;
            let want = pot.eval_n(2, -1.0, 0).unwrap() + 2.0 * pot.eval_n(2, 0.0, 0).unwrap();
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_certificate_n3() {
        let tol = Tolerances::default();
        let pot = Potential::unit_riesz(1.0).unwrap();
        let r = hermite_certificate(sp(3, 2), 4, &pot, &tol).unwrap();
        let f = r.certificate.as_ref().unwrap();
        assert!((f.coeffs[0] - 15.0 / 16.0).abs() < 1e-12);
        assert!((f.coeffs[1] - 9.0 / 16.0).abs() < 1e-12);
        assert!((r.value - 2.25).abs() < 1e-12);
        assert!(r.valid());
    }

    #[test]
    fn constant_certificate() {
        let tol = Tolerances::default();
        let s = sp(10, 2);
        let pot = Potential::riesz(1.0).unwrap();
        let c = 0.05;
        let r = lp_lower_value(&Poly::constant(c), s, 40, &pot, None, &tol).unwrap();
        assert!((r.value - c * 39.0).abs() < 1e-12);
        assert!(r.valid());
        let g = lp_upper_value(&Poly::constant(1.0), s, 40, 2, &pot, (-0.6, 0.2), &tol).unwrap();
        assert!((g.value - 39.0).abs() < 1e-12);
        assert!(g.valid());
    }

    #[test]
    fn negative_linear_coefficient_fails_a2() {
        let tol = Tolerances::default();
        let pot = Potential::exponential(1.0).unwrap();
        let f = Poly::new(vec![0.1, -0.05]);
        let r = lp_lower_value(&f, sp(6, 2), 20, &pot, None, &tol).unwrap();
        assert_eq!(r.a2_ok, Check::Fail);
        let r = lp_lower_value(&f, sp(6, 2), 20, &pot, Some(1), &tol).unwrap();
        assert_eq!(r.a2_ok, Check::Pass);
    }

    #[test]
    fn chord_is_an_upper_certificate_and_hermite_is_not() {
        let tol = Tolerances::default();
        let s = sp(9, 2);
        let pot = Potential::riesz(1.0).unwrap();
        let (ell, top) = (-7.0 / 9.0, 5.0 / 9.0);
        let (hl, hs) = (pot.eval_n(9, ell, 0).unwrap(), pot.eval_n(9, top, 0).unwrap());
        let slope = (hs - hl) / (top - ell);
        let chord = Poly::new(vec![hl - slope * ell, slope]);
        let r = lp_upper_value(&chord, s, 16, 2, &pot, (ell, top), &tol).unwrap();
        assert_eq!(r.a1_ok, Check::Pass);

        let cert = hermite_certificate(s, 16, &pot, &tol).unwrap();
        let f = cert.certificate.unwrap();
        let r = lp_upper_value(&f, s, 16, 2, &pot, (ell, top), &tol).unwrap();
        assert_eq!(r.a1_ok, Check::Fail);
    }
}
