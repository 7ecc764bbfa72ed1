//! Rao and Levenshtein bounds, the partition of `[-1,1)` into the
//! intervals `I_tau`, and the map from a cardinality `M` to the strength
//! `tau(n,M)` and the end node `s` of its quadrature.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Result};
use crate::polyengine::{
    adjacent_eval, big_to_f64, greatest_zero, kraw_eval, weighted_binomial_sum, Family,
    SpaceParams,
};
use crate::roots;
use crate::Tolerances;

/// Parity split of a strength: `tau = 2k-1` or `tau = 2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "parity", content = "k", rename_all = "lowercase")]
pub enum Branch {
    Odd(usize),
    Even(usize),
}

impl Branch {
    pub fn from_tau(tau: usize) -> Self {
        if tau % 2 == 1 {
            Branch::Odd((tau + 1) / 2)
        } else {
            Branch::Even(tau / 2)
        }
    }

    pub fn tau(&self) -> usize {
        match *self {
            Branch::Odd(k) => 2 * k - 1,
            Branch::Even(k) => 2 * k,
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            Branch::Odd(k) | Branch::Even(k) => k,
        }
    }

    pub fn is_even(&self) -> bool {
        matches!(self, Branch::Even(_))
    }

    /// Number of quadrature nodes: `k` (odd) or `k+1` (even).
    pub fn node_count(&self) -> usize {
        match *self {
            Branch::Odd(k) => k,
            Branch::Even(k) => k + 1,
        }
    }
}

/// Strength assigned to a cardinality, with the interval `I_tau` that
/// contains the matching end node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthAssignment {
    pub tau: usize,
    pub branch: Branch,
    pub interval: (f64, f64),
}

/// Rao bound `R(n, tau)` on the size of a `tau`-design, exactly.
pub fn rao(space: SpaceParams, tau: usize) -> Result<BigUint> {
    if tau < 1 || tau > 2 * space.n {
        return domain(format!("strength {tau} outside 1..=2n = {}", 2 * space.n));
    }
    let (n, q) = (space.n, space.q);
    Ok(match Branch::from_tau(tau) {
        Branch::Odd(k) => BigUint::from(q) * weighted_binomial_sum(n - 1, k - 1, q),
        Branch::Even(k) => weighted_binomial_sum(n, k, q),
    })
}

/// `I_{2k-1} = [t_{k-1}^{1,1}, t_k^{1,0}]`, `I_{2k} = [t_k^{1,0}, t_k^{1,1}]`.
pub fn interval(space: SpaceParams, tau: usize, tol: &Tolerances) -> Result<(f64, f64)> {
    if tau < 1 || tau > 2 * space.n - 2 {
        return domain(format!(
            "strength {tau} has no Levenshtein interval for n = {}",
            space.n
        ));
    }
    match Branch::from_tau(tau) {
        Branch::Odd(k) => Ok((
            greatest_zero(space, Family::OneOne, k - 1, tol)?,
            greatest_zero(space, Family::OneZero, k, tol)?,
        )),
        Branch::Even(k) => Ok((
            greatest_zero(space, Family::OneZero, k, tol)?,
            greatest_zero(space, Family::OneOne, k, tol)?,
        )),
    }
}

/// The unique `tau` with `M in (R(n,tau), R(n,tau+1)]`.
pub fn tau_for(space: SpaceParams, m: u64, tol: &Tolerances) -> Result<StrengthAssignment> {
    let tau = strength_of_cardinality(space, m)?;
    Ok(StrengthAssignment {
        tau,
        branch: Branch::from_tau(tau),
        interval: interval(space, tau, tol)?,
    })
}

/// Integer part of [`tau_for`]: locates `M` among the Rao values without
/// computing interval endpoints.
pub fn strength_of_cardinality(space: SpaceParams, m: u64) -> Result<usize> {
    if m <= space.q as u64 {
        return domain(format!("M must exceed q (got M = {m}, q = {})", space.q));
    }
    let mb = BigUint::from(m);
    if mb > space.size() {
        return domain(format!("M = {m} exceeds q^n"));
    }
    // R(n, 2n-1) = q^n, so the search stops at tau <= 2n-2.
    let mut tau = 1;
    while rao(space, tau + 1)? < mb {
        tau += 1;
    }
    Ok(tau)
}

/// Levenshtein's bound `L_tau(n,s)` without checking `s in I_tau`.
pub fn lev_unchecked(space: SpaceParams, tau: usize, s: f64) -> Result<f64> {
    let (n, q) = (space.n, space.q);
    match Branch::from_tau(tau) {
        Branch::Odd(k) => {
            let num = adjacent_eval(space, Family::OneZero, k - 1, s)?;
            let den = kraw_eval(space, k, s, true)?;
            let sum = big_to_f64(&weighted_binomial_sum(n, k - 1, q));
            Ok((1.0 - num / den) * sum)
        }
        Branch::Even(k) => {
            let num = adjacent_eval(space, Family::OneOne, k - 1, s)?;
            let den = adjacent_eval(space, Family::ZeroOne, k, s)?;
            let sum = big_to_f64(&weighted_binomial_sum(n - 1, k - 1, q));
            Ok(q as f64 * (1.0 - num / den) * sum)
        }
    }
}

/// Levenshtein's bound `L_tau(n,s)` for `s in I_tau`.
pub fn lev(space: SpaceParams, tau: usize, s: f64, tol: &Tolerances) -> Result<f64> {
    let (lo, hi) = interval(space, tau, tol)?;
    let slack = 1e3 * tol.root;
    if s < lo - slack || s > hi + slack {
        return domain(format!("s = {s} lies outside I_{tau} = [{lo}, {hi}]"));
    }
    lev_unchecked(space, tau, s)
}

/// Strength for `M` and the end node `s in I_tau` with `L_tau(n,s) = M`.
pub fn solve_s(space: SpaceParams, m: u64, tol: &Tolerances) -> Result<(StrengthAssignment, f64)> {
    let assignment = tau_for(space, m, tol)?;
    let (lo, hi) = assignment.interval;
    let target = m as f64;
    let tau = assignment.tau;
    if rao(space, tau + 1)? == BigUint::from(m) {
        return Ok((assignment, hi));
    }
    let f = |s: f64| lev_unchecked(space, tau, s).map(|v| v - target).unwrap_or(f64::NAN);
    let mut s = roots::bisect(f, lo, hi, tol.root)?;
    // Tighten to machine precision if the M residual is not yet met.
    if f(s).abs() > 1e-9 * target {
        s = roots::bisect(f, lo, hi, 0.0)?;
    }
    let residual = f(s).abs();
    if residual > 1e-9 * target {
        return numeric(format!(
            "L_{tau}(n,s) = M not met: residual {residual:e} at s = {s}"
        ));
    }
    Ok((assignment, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, q: u32) -> SpaceParams {
        SpaceParams::new(n, q).unwrap()
    }

    fn rao_u(n: usize, q: u32, tau: usize) -> u64 {
        rao(sp(n, q), tau).unwrap().try_into().unwrap()
    }

    #[test]
    fn rao_examples() {
        assert_eq!(rao_u(10, 2, 3), 20);
        assert_eq!(rao_u(10, 2, 4), 56);
        assert_eq!(rao_u(9, 2, 5), 74);
        assert_eq!(rao_u(9, 2, 6), 130);
        for (n, q) in [(1, 2), (5, 3), (12, 4)] {
            assert_eq!(rao_u(n, q, 1), q as u64);
            // R(n, 2n-1) = q^n
            assert_eq!(rao(sp(n, q), 2 * n - 1).unwrap(), sp(n, q).size());
        }
        assert!(rao(sp(3, 2), 0).is_err());
        assert!(rao(sp(3, 2), 7).is_err());
    }

    #[test]
    fn tau_examples() {
        let tol = Tolerances::default();
        assert_eq!(tau_for(sp(10, 2), 40, &tol).unwrap().tau, 3);
        assert_eq!(tau_for(sp(9, 2), 128, &tol).unwrap().tau, 5);
        assert_eq!(tau_for(sp(2, 2), 4, &tol).unwrap().tau, 2);
        assert!(tau_for(sp(10, 2), 2, &tol).is_err());
        assert!(tau_for(sp(3, 2), 9, &tol).is_err());
    }

    #[test]
    fn tau_steps_exactly_at_rao_values() {
        let s = sp(7, 3);
        for tau in 1..12 {
            let r: u64 = rao(s, tau + 1).unwrap().try_into().unwrap();
            let r_prev: u64 = rao(s, tau).unwrap().try_into().unwrap();
            if r > r_prev {
                assert_eq!(strength_of_cardinality(s, r).unwrap(), tau);
            }
            if r + 1 <= 3u64.pow(7) {
                assert_eq!(strength_of_cardinality(s, r + 1).unwrap(), tau + 1);
            }
        }
    }

    #[test]
    fn lev_examples() {
        let tol = Tolerances::default();
        assert!((lev(sp(3, 2), 1, -1.0 / 3.0, &tol).unwrap() - 4.0).abs() < 1e-12);
        let s = sp(10, 2);
        let t = greatest_zero(s, Family::OneZero, 2, &tol).unwrap();
        assert!((lev(s, 3, t, &tol).unwrap() - 56.0).abs() < 1e-9 * 56.0);
        let s = sp(9, 2);
        let t = greatest_zero(s, Family::OneOne, 2, &tol).unwrap();
        assert!((lev(s, 4, t, &tol).unwrap() - 74.0).abs() < 1e-9 * 74.0);
        assert!(lev(sp(10, 2), 3, 0.9, &tol).is_err());
    }

    #[test]
    fn solve_s_examples() {
        let tol = Tolerances::default();
        let (a, s) = solve_s(sp(3, 2), 4, &tol).unwrap();
        assert_eq!(a.tau, 1);
        assert!((s + 1.0 / 3.0).abs() < 1e-12);

        let (a, s) = solve_s(sp(10, 2), 40, &tol).unwrap();
        assert_eq!(a.tau, 3);
        assert!((lev_unchecked(sp(10, 2), 3, s).unwrap() - 40.0).abs() < 1e-9 * 40.0);

        let (a, s) = solve_s(sp(10, 2), 56, &tol).unwrap();
        assert_eq!(a.tau, 3);
        let t = greatest_zero(sp(10, 2), Family::OneZero, 2, &tol).unwrap();
        assert!((s - t).abs() < 1e-9);
    }

    #[test]
    fn lev_increases_on_each_interval() {
        let tol = Tolerances::default();
        for (n, q) in [(10, 2), (8, 3)] {
            let s = sp(n, q);
            for tau in 1..=6 {
                let (lo, hi) = interval(s, tau, &tol).unwrap();
                let mut prev = f64::NEG_INFINITY;
                for j in 1..50 {
                    let x = lo + (hi - lo) * j as f64 / 50.0;
                    let v = lev_unchecked(s, tau, x).unwrap();
                    assert!(v > prev, "n={n} q={q} tau={tau}");
                    prev = v;
                }
            }
        }
    }
}
