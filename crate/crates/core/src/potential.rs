//! Potential kernels `h(t)` with analytic derivatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::poly::Poly;
use crate::polyengine::SpaceParams;

/// A potential function of the inner product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `h(t) = (n(1-t)/2)^(-alpha) = z^(-alpha)`; depends on the word length.
    Riesz { alpha: f64 },
    /// `h(t) = (1-t)^(-alpha)`, the Riesz kernel with the length factored out.
    UnitRiesz { alpha: f64 },
    /// `h(t) = exp(alpha t)`.
    Exponential { alpha: f64 },
    /// Arbitrary polynomial; admitted for testing whether or not it is
    /// absolutely monotone.
    Polynomial { poly: Poly },
}

impl Potential {
    pub fn riesz(alpha: f64) -> Result<Self> {
        positive(alpha).map(|alpha| Potential::Riesz { alpha })
    }

    pub fn unit_riesz(alpha: f64) -> Result<Self> {
        positive(alpha).map(|alpha| Potential::UnitRiesz { alpha })
    }

    pub fn exponential(alpha: f64) -> Result<Self> {
        positive(alpha).map(|alpha| Potential::Exponential { alpha })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Potential::Polynomial {
            poly: Poly::new(coeffs),
        }
    }

    /// Whether evaluation needs the word length.
    pub fn depends_on_n(&self) -> bool {
        matches!(self, Potential::Riesz { .. })
    }

    /// Whether the kernel has a pole at `t = 1`.
    pub fn singular_at_one(&self) -> bool {
        matches!(self, Potential::Riesz { .. } | Potential::UnitRiesz { .. })
    }

    /// All derivatives nonnegative on `[-1,1)`. For polynomials this is
    /// read off the Taylor coefficients at `-1`.
    pub fn is_absolutely_monotone(&self) -> bool {
        match self {
            Potential::Polynomial { poly } => (0..=poly.degree())
                .all(|m| poly.derivative_n(m).eval(-1.0) >= 0.0),
            _ => true,
        }
    }

    /// Derivative of the given order (0 for the value) at `t`, for words
    /// of length `n`.
    pub fn eval_n(&self, n: usize, t: f64, order: usize) -> Result<f64> {
        match self {
            Potential::Riesz { alpha } => {
                let base = rising_over_gap(*alpha, t, order)?;
                Ok(base * (n as f64 / 2.0).powf(-alpha))
            }
            Potential::UnitRiesz { alpha } => rising_over_gap(*alpha, t, order),
            Potential::Exponential { alpha } => Ok(alpha.powi(order as i32) * (alpha * t).exp()),
            Potential::Polynomial { poly } => Ok(poly.derivative_n(order).eval(t)),
        }
    }

    /// Evaluation for kernels that do not depend on `n`.
    pub fn eval_free(&self, t: f64, order: usize) -> Result<f64> {
        if self.depends_on_n() {
            return domain("this potential depends on n; use unit-riesz for length-free limits");
        }
        self.eval_n(1, t, order)
    }
}

/// `d^m/dt^m (1-t)^(-alpha) = alpha(alpha+1)...(alpha+m-1) (1-t)^(-alpha-m)`.
fn rising_over_gap(alpha: f64, t: f64, order: usize) -> Result<f64> {
    if t >= 1.0 {
        return domain(format!("Riesz potential has a pole at t = 1 (got t = {t})"));
    }
    let rising: f64 = (0..order).map(|j| alpha + j as f64).product();
    Ok(rising * (1.0 - t).powf(-alpha - order as f64))
}

fn positive(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(alpha)
    } else {
        domain(format!("potential parameter must be positive (got {alpha})"))
    }
}

/// Value or derivative of `pot` at `t` in the space `space`.
pub fn potential_eval(pot: &Potential, space: SpaceParams, t: f64, order: usize) -> Result<f64> {
    pot.eval_n(space.n, t, order)
}

impl FromStr for Potential {
    type Err = Error;

    /// `riesz:<alpha>`, `unit-riesz:<alpha>`, `exp:<alpha>`, `poly:<c0,c1,...>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("potential `{s}` is not of the form kind:args")))?;
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad number `{x}` in potential `{s}`")))
        };
        match kind {
            "riesz" => Potential::riesz(num(arg)?),
            "unit-riesz" => Potential::unit_riesz(num(arg)?),
            "exp" => Potential::exponential(num(arg)?),
            "poly" => Ok(Potential::polynomial(
                arg.split(',').map(num).collect::<Result<Vec<_>>>()?,
            )),
            _ => domain(format!("unknown potential kind `{kind}`")),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Riesz { alpha } => write!(f, "riesz:{alpha}"),
            Potential::UnitRiesz { alpha } => write!(f, "unit-riesz:{alpha}"),
            Potential::Exponential { alpha } => write!(f, "exp:{alpha}"),
            Potential::Polynomial { poly } => {
                let parts: Vec<String> = poly.coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riesz_values() {
        let pot = Potential::riesz(1.0).unwrap();
        let s10 = SpaceParams::new(10, 2).unwrap();
        assert!((potential_eval(&pot, s10, -1.0, 0).unwrap() - 0.1).abs() < 1e-15);
        for t in [-0.6, 0.2, 0.8] {
            let h = potential_eval(&pot, s10, t, 0).unwrap();
            assert!((h - 1.0 / (5.0 * (1.0 - t))).abs() < 1e-14);
        }
        let s3 = SpaceParams::new(3, 2).unwrap();
        let t = -1.0 / 3.0;
        assert!((potential_eval(&pot, s3, t, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((potential_eval(&pot, s3, t, 1).unwrap() - 0.375).abs() < 1e-15);
        assert!(potential_eval(&pot, s3, 1.0, 0).is_err());
    }

    #[test]
    fn exponential_derivatives_at_zero() {
        let pot = Potential::exponential(1.7).unwrap();
        for m in 0..5 {
            assert!((pot.eval_free(0.0, m).unwrap() - 1.7f64.powi(m as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_and_display() {
        for s in ["riesz:1", "unit-riesz:0.5", "exp:2", "poly:1,0.5,0.25"] {
            let p: Potential = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("riesz:-1".parse::<Potential>().is_err());
        assert!("cube:1".parse::<Potential>().is_err());
        assert!("riesz".parse::<Potential>().is_err());
    }

    #[test]
    fn monotonicity_of_polynomials() {
        // 2 + 2t + t^2 = 1 + (t+1)^2
        assert!(Potential::polynomial(vec![2.0, 2.0, 1.0]).is_absolutely_monotone());
        // (t+1)^2 - (t+1) has a negative first Taylor coefficient at -1.
        assert!(!Potential::polynomial(vec![0.0, 1.0, 1.0]).is_absolutely_monotone());
        assert!(Potential::riesz(2.0).unwrap().eval_free(0.0, 0).is_err());
    }
}
