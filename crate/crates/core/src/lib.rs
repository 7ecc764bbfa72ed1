//! Universal lower bounds on the potential energy of codes and designs in
//! the Hamming space H(n,q), together with the machinery they rest on:
//! Krawtchouk and adjacent polynomials, the Rao and Levenshtein bounds, the
//! Levenshtein quadrature, and several refinements (pair covering, test
//! functions, higher-degree certificates, and window bounds for binary
//! 2-designs).
//!
//! Inner products are used in place of distances throughout:
//! `t = 1 - 2d/n`, so the possible values form the grid
//! `T_n = {-1 + 2i/n : i = 0..n}`.

pub mod asymptotics;
pub mod bounds;
pub mod codes;
pub mod error;
pub mod poly;
pub mod polyengine;
pub mod potential;
pub mod quadrature;
pub mod refine;
pub mod roots;
pub mod ulb;
pub mod window;

pub use error::{Error, Result};
pub use poly::Poly;
pub use polyengine::{Family, KrawExpansion, Measure, SpaceParams};
pub use potential::Potential;
pub use quadrature::{Branch, QuadratureRule};
pub use ulb::{BoundReport, Check, Method};

/// Numerical tolerances shared by the root finders and condition checks.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Absolute bisection tolerance on `t`.
    pub root: f64,
    /// Slack allowed when checking sign conditions (A1, A2, B1, B2).
    pub check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: 1e-12,
            check: 1e-9,
        }
    }
}
