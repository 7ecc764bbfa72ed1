//! The Levenshtein quadrature attached to a cardinality `M`:
//!
//! `f_0 = f(1)/M + sum_i w_i f(node_i)` for every polynomial of degree at
//! most `tau(n,M)`.
//!
//! On the odd branch `tau = 2k-1` the `k` nodes are the roots of
//! `P_k(t)P_{k-1}(s) - P_k(s)P_{k-1}(t)` with `P_i = Q_i^{(1,0)}`; on the
//! even branch `tau = 2k` the same bracket with `P_i = Q_i^{(1,1)}` gives
//! `beta_1..beta_k` and `beta_0 = -1` is fixed. In both cases the largest
//! node is `s`, the solution of `L_tau(n,s) = M`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use crate::bounds::Branch;
use crate::bounds::{lev, solve_s};
use crate::error::{domain, numeric, Result};
use crate::poly::Poly;
use crate::polyengine::{adjacent_eval, kraw_values, project, Family, SpaceParams};
use crate::roots;
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub space: SpaceParams,
    /// Cardinality `L_tau(n,s)`; an integer unless the rule was built
    /// directly from `s`.
    pub m: f64,
    pub branch: Branch,
    /// The largest node, solving `L_tau(n,s) = M`.
    pub s: f64,
    /// Strictly increasing nodes in `[-1, 1)`.
    pub nodes: Vec<f64>,
    /// Positive weights, one per node.
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn tau(&self) -> usize {
        self.branch.tau()
    }

    /// `f(1)/M + sum_i w_i f(node_i)`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        f(1.0) / self.m + self.interior_sum(f)
    }

    /// `sum_i w_i f(node_i)`.
    pub fn interior_sum<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Builds the quadrature rule for cardinality `m`.
pub fn rule(space: SpaceParams, m: u64, tol: &Tolerances) -> Result<QuadratureRule> {
    let (assignment, s) = solve_s(space, m, tol)?;
    build(space, assignment.branch, s, m as f64, tol)
}

/// Builds the rule whose end node is `s in I_tau`; the cardinality is
/// `L_tau(n,s)`, generally not an integer.
pub fn rule_at_s(space: SpaceParams, tau: usize, s: f64, tol: &Tolerances) -> Result<QuadratureRule> {
    let m = lev(space, tau, s, tol)?;
    build(space, Branch::from_tau(tau), s, m, tol)
}

fn build(space: SpaceParams, branch: Branch, s: f64, m: f64, tol: &Tolerances) -> Result<QuadratureRule> {
    let k = branch.k();
    let family = if branch.is_even() {
        Family::OneOne
    } else {
        Family::OneZero
    };

    let p = |i: usize, t: f64| adjacent_eval(space, family, i, t).unwrap_or(f64::NAN);
    let (pk_s, pk1_s) = (p(k, s), p(k - 1, s));
    let bracket = |t: f64| p(k, t) * pk1_s - pk_s * p(k - 1, t);

    // The bracket has degree k and vanishes at s; its other k-1 roots lie
    // in (-1, s), separated from s and from each other by grid points.
    let step = roots::scan_step(space.n, k);
    let hi = s - 0.5 * step;
    let mut nodes = if k > 1 {
        if hi <= -1.0 {
            return numeric("end node too close to -1 for the remaining nodes");
        }
        // Start just left of -1: at the left end of an odd interval the
        // smallest node is exactly -1.
        let mut r = roots::isolate_roots(bracket, -1.0 - step, hi, step, k - 1, tol.root)?;
        if r[0] < -1.0 {
            if r[0] < -1.0 - 1e-9 {
                return numeric(format!("node {} lies below -1", r[0]));
            }
            r[0] = -1.0;
        }
        r
    } else {
        Vec::new()
    };
    nodes.push(s);
    if branch.is_even() {
        nodes.insert(0, -1.0);
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) || nodes[0] < -1.0 {
        return numeric(format!("quadrature nodes not strictly increasing: {nodes:?}"));
    }

    let mut weights = solve_weights(space, m, &nodes)?;
    if branch.is_even() && weights[0] < 0.0 && at_even_left_end(space, k, s) {
        // gamma_0 vanishes at the left end but is steep in s there, so a
        // root error near 1e-13 leaves a visible negative weight. Drop it.
        let mut rest = solve_weights(space, m, &nodes[1..])?;
        rest.insert(0, 0.0);
        weights = rest;
    }
    // At an interval endpoint one weight vanishes; allow it to sit at roundoff.
    let scale = weights.iter().fold(1.0 / m, |a, w| a.max(w.abs()));
    if let Some(w) = weights.iter().find(|w| **w < -1e-9 * scale) {
        return numeric(format!("negative quadrature weight {w}"));
    }
    Ok(QuadratureRule {
        space,
        m,
        branch,
        s,
        nodes,
        weights,
    })
}

/// Whether `s` sits on the greatest zero of `Q_k^{1,0}` up to root accuracy.
fn at_even_left_end(space: SpaceParams, k: usize, s: f64) -> bool {
    let g = |t: f64| adjacent_eval(space, Family::OneZero, k, t).unwrap_or(f64::NAN);
    let d = 1e-11 * s.abs().max(1.0);
    let (a, b) = (g(s - d), g(s + d));
    a == 0.0 || b == 0.0 || a.signum() != b.signum()
}

/// Exactness against `Q_0..Q_{K-1}`: `sum_i w_i Q_j(x_i) = delta_{j0} - 1/M`.
fn solve_weights(space: SpaceParams, m: f64, nodes: &[f64]) -> Result<Vec<f64>> {
    let count = nodes.len();
    let columns: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| kraw_values(space, count - 1, x))
        .collect();
    let a = DMatrix::from_fn(count, count, |j, i| columns[i][j]);
    let mut rhs = DVector::from_element(count, -1.0 / m);
    rhs[0] += 1.0;
    match a.lu().solve(&rhs) {
        Some(w) if w.iter().all(|x| x.is_finite()) => Ok(w.iter().copied().collect()),
        _ => numeric("singular quadrature weight system"),
    }
}

/// `|f_0 - f(1)/M - sum_i w_i f(node_i)|`. Zero up to roundoff when
/// `deg f <= tau`; for `f = Q_j` with `j > tau` it is `|P_j(n,s)|`.
pub fn verify_rule(rule: &QuadratureRule, f: &Poly) -> Result<f64> {
    let cap = rule.tau().max(rule.space.n);
    if f.degree() > cap {
        return domain(format!(
            "degree {} exceeds max(tau, n) = {cap}",
            f.degree()
        ));
    }
    let f0 = project(f, rule.space).f0();
    Ok((f0 - rule.apply(|t| f.eval(t))).abs())
}

/// Closed-form `rho_0 M` for binary odd rules:
/// `-prod_{i>=1}(1 - a_i^2) / (a_0 prod_{i>=1}(a_0^2 - a_i^2))`.
/// It follows from exactness on `t, t^3, ..., t^{2k-1}` and holds only when
/// the odd moments of `mu_n` vanish, i.e. for `q = 2`.
pub fn rho0_m_closed_form(rule: &QuadratureRule) -> Result<f64> {
    if rule.space.q != 2 || rule.branch.is_even() {
        return domain("the product formula for rho_0 M needs q = 2 and an odd rule");
    }
    let a0 = rule.nodes[0];
    let (num, den) = rule.nodes[1..]
        .iter()
        .fold((1.0, a0), |(num, den), &a| (num * (1.0 - a * a), den * (a0 * a0 - a * a)));
    Ok(-num / den)
}
