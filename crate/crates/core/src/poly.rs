//! Dense real polynomials in the monomial basis and Hermite interpolation
//! by divided differences with repeated abscissae.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A real polynomial, `coeffs[i]` multiplying `t^i`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    /// Builds a polynomial and strips trailing zero coefficients.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `t`.
    pub fn identity() -> Self {
        Poly::new(vec![0.0, 1.0])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Derivative of the given order.
    pub fn derivative_n(&self, order: usize) -> Poly {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, factor: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Poly::new((0..len).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Multiplies by `(t - root)`.
    pub fn mul_linear(&self, root: f64) -> Poly {
        self.mul(&Poly::new(vec![-root, 1.0]))
    }
}

/// One interpolation abscissa together with the function value and the
/// derivatives that must be matched there. `derivs[0]` is the value,
/// `derivs[m]` the m-th derivative; the multiplicity is `derivs.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteNode {
    pub x: f64,
    pub derivs: Vec<f64>,
}

impl HermiteNode {
    pub fn simple(x: f64, value: f64) -> Self {
        HermiteNode {
            x,
            derivs: vec![value],
        }
    }

    pub fn double(x: f64, value: f64, slope: f64) -> Self {
        HermiteNode {
            x,
            derivs: vec![value, slope],
        }
    }
}

/// Hermite interpolant through the given nodes, built from the Newton
/// divided-difference table with repeated abscissae and returned in the
/// monomial basis. The degree is at most (total multiplicity - 1).
pub fn hermite_interpolate(nodes: &[HermiteNode]) -> Result<Poly> {
    // Expanded abscissae z_0..z_{N-1}; each node repeated by its multiplicity.
    let mut zs = Vec::new();
    let mut owner = Vec::new();
    for (idx, node) in nodes.iter().enumerate() {
        if node.derivs.is_empty() {
            return domain("interpolation node without data");
        }
        for _ in 0..node.derivs.len() {
            zs.push(node.x);
            owner.push(idx);
        }
    }
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            if a.x == b.x {
                return domain(format!("duplicate interpolation abscissa {}", a.x));
            }
        }
    }
    let count = zs.len();
    if count == 0 {
        return Ok(Poly::zero());
    }

    // table[i] holds f[z_i, ..., z_{i+level}] at the current level.
    let mut table: Vec<f64> = owner.iter().map(|&o| nodes[o].derivs[0]).collect();
    let mut newton = vec![table[0]];
    let mut factorial = 1.0;
    for level in 1..count {
        factorial *= level as f64;
        let mut next = Vec::with_capacity(count - level);
        for i in 0..count - level {
            let (lo, hi) = (zs[i], zs[i + level]);
            if lo == hi {
                // Confluent block: the divided difference is a scaled derivative.
                let node = &nodes[owner[i]];
                match node.derivs.get(level) {
                    Some(d) => next.push(d / factorial),
                    None => return domain("inconsistent multiplicity in Hermite data"),
                }
            } else {
                next.push((table[i + 1] - table[i]) / (hi - lo));
            }
        }
        newton.push(next[0]);
        table = next;
    }

    // Nested multiplication from the innermost coefficient outward.
    let mut poly = Poly::constant(newton[count - 1]);
    for i in (0..count - 1).rev() {
        poly = poly.mul_linear(zs[i]).add(&Poly::constant(newton[i]));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        let p = Poly::new(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 9.0);
        assert_eq!(p.derivative().coeffs, vec![-2.0, 6.0]);
        assert_eq!(p.derivative_n(3), Poly::zero());
        assert_eq!(Poly::new(vec![1.0, 0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn lagrange_through_three_points() {
        let f = |x: f64| x * x - 3.0 * x + 1.0;
        let nodes: Vec<_> = [-1.0, 0.5, 2.0]
            .iter()
            .map(|&x| HermiteNode::simple(x, f(x)))
            .collect();
        let p = hermite_interpolate(&nodes).unwrap();
        for (a, b) in p.coeffs.iter().zip([1.0, -3.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_reproduces_cubic() {
        // Double nodes at -1 and 1 determine a cubic exactly.
        let f = |x: f64| 2.0 * x.powi(3) - x + 0.5;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let nodes = vec![
            HermiteNode::double(-1.0, f(-1.0), df(-1.0)),
            HermiteNode::double(1.0, f(1.0), df(1.0)),
        ];
        let p = hermite_interpolate(&nodes).unwrap();
        for x in [-0.7, 0.0, 0.3, 0.9] {
            assert!((p.eval(x) - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_matches_exp_data() {
        let nodes = vec![
            HermiteNode::simple(-1.0, (-1.0f64).exp()),
            HermiteNode::double(0.2, 0.2f64.exp(), 0.2f64.exp()),
            HermiteNode::double(0.6, 0.6f64.exp(), 0.6f64.exp()),
        ];
        let p = hermite_interpolate(&nodes).unwrap();
        assert_eq!(p.degree(), 4);
        assert!((p.eval(-1.0) - (-1.0f64).exp()).abs() < 1e-12);
        let dp = p.derivative();
        for x in [0.2f64, 0.6] {
            assert!((p.eval(x) - x.exp()).abs() < 1e-12);
            assert!((dp.eval(x) - x.exp()).abs() < 1e-11);
        }
    }

    #[test]
    fn duplicate_abscissa_rejected() {
        let nodes = vec![HermiteNode::simple(0.0, 1.0), HermiteNode::simple(0.0, 2.0)];
        assert!(hermite_interpolate(&nodes).is_err());
    }
}
