//! Krawtchouk polynomials for H(n,q), Levenshtein's adjacent families, the
//! discrete orthogonality measure on `T_n`, expansion in the Krawtchouk
//! basis, and the Christoffel-Darboux kernel.
//!
//! Every evaluation at an inner product `t` goes through `z = n(1-t)/2`.
//! Binomial sums are formed in arbitrary precision and converted to `f64`
//! only at the end.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::poly::Poly;
use crate::roots;
use crate::Tolerances;

/// Word length and alphabet size of the Hamming space H(n,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceParams {
    pub n: usize,
    pub q: u32,
}

impl SpaceParams {
    pub fn new(n: usize, q: u32) -> Result<Self> {
        if n < 1 {
            return domain("word length n must be at least 1");
        }
        if q < 2 {
            return domain("alphabet size q must be at least 2");
        }
        Ok(SpaceParams { n, q })
    }

    /// `z = n(1-t)/2`.
    pub fn z_of(&self, t: f64) -> f64 {
        self.n as f64 * (1.0 - t) / 2.0
    }

    /// Inner product of two words at Hamming distance `d`.
    pub fn t_of_distance(&self, d: usize) -> f64 {
        1.0 - 2.0 * d as f64 / self.n as f64
    }

    /// `t_i = -1 + 2i/n`, strictly increasing.
    pub fn grid_point(&self, i: usize) -> f64 {
        -1.0 + 2.0 * i as f64 / self.n as f64
    }

    /// The grid `T_n` in increasing order.
    pub fn grid(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.grid_point(i)).collect()
    }

    /// `r_i = (q-1)^i C(n,i)` as an exact integer.
    pub fn r(&self, i: usize) -> BigUint {
        weighted_binomial(self.n, i, self.q)
    }

    pub fn r_f64(&self, i: usize) -> f64 {
        big_to_f64(&self.r(i))
    }

    /// `q^n`, the number of words.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.q).pow(self.n as u32)
    }
}

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `C(n, k) (q-1)^k`.
pub fn weighted_binomial(n: usize, k: usize, q: u32) -> BigUint {
    binomial(n, k) * BigUint::from(q - 1).pow(k as u32)
}

/// `sum_{j<=k} C(n, j) (q-1)^j`.
pub fn weighted_binomial_sum(n: usize, k: usize, q: u32) -> BigUint {
    (0..=k).map(|j| weighted_binomial(n, j, q)).sum()
}

pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `a / b` as a float without overflowing the intermediate conversions.
pub fn big_ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let bits = a.bits().max(b.bits());
    let shift = bits.saturating_sub(960);
    big_to_f64(&(a >> shift)) / big_to_f64(&(b >> shift))
}

/// Unnormalized Krawtchouk value `K_i^{(m,q)}(z)` for real `z`, by the
/// three-term recurrence from `K_0 = 1`, `K_1 = m(q-1) - qz`.
///
/// The recurrence stays well defined one step past `i = m`, which the
/// top-degree (1,1) family relies on.
pub fn kraw_unnormalized(m: usize, q: u32, i: usize, z: f64) -> f64 {
    let qf = q as f64;
    let mf = m as f64;
    let mut prev = 1.0;
    if i == 0 {
        return prev;
    }
    let mut cur = mf * (qf - 1.0) - qf * z;
    for j in 1..i {
        let jf = j as f64;
        let next = ((jf + (qf - 1.0) * (mf - jf) - qf * z) * cur
            - (qf - 1.0) * (mf - jf + 1.0) * prev)
            / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Q_0(t), ..., Q_max(t)` for the normalized Krawtchouk family of length
/// `m`, evaluated at `z`. Uses the recurrence divided through by `r_i`,
/// which keeps every term of order one.
fn kraw_normalized_all(m: usize, q: u32, max: usize, z: f64) -> Vec<f64> {
    let qf = q as f64;
    let mf = m as f64;
    let mut out = Vec::with_capacity(max + 1);
    out.push(1.0);
    if max == 0 {
        return out;
    }
    out.push((mf * (qf - 1.0) - qf * z) / (mf * (qf - 1.0)));
    for i in 1..max {
        let fi = i as f64;
        let a = fi + (qf - 1.0) * (mf - fi) - qf * z;
        let next = (a * out[i] - fi * out[i - 1]) / ((qf - 1.0) * (mf - fi));
        out.push(next);
    }
    out
}

/// Krawtchouk polynomial at inner product `t`: `K_i(z)` when
/// `normalized` is false, `Q_i(t) = K_i(z)/r_i` otherwise.
pub fn kraw_eval(space: SpaceParams, i: usize, t: f64, normalized: bool) -> Result<f64> {
    if i > space.n {
        return domain(format!("Krawtchouk degree {i} exceeds n = {}", space.n));
    }
    let z = space.z_of(t);
    if normalized {
        Ok(kraw_normalized_all(space.n, space.q, i, z)[i])
    } else {
        Ok(kraw_unnormalized(space.n, space.q, i, z))
    }
}

/// `Q_0(t), ..., Q_max(t)`; `max <= n` is the caller's responsibility.
pub fn kraw_values(space: SpaceParams, max: usize, t: f64) -> Vec<f64> {
    kraw_normalized_all(space.n, space.q, max, space.z_of(t))
}

/// `Q_j` in the monomial basis of `t`.
pub fn kraw_poly(space: SpaceParams, j: usize) -> Result<Poly> {
    if j > space.n {
        return domain(format!("Krawtchouk degree {j} exceeds n = {}", space.n));
    }
    let (n, q) = (space.n as f64, space.q as f64);
    // z = n/2 - (n/2) t
    let z = Poly::new(vec![n / 2.0, -n / 2.0]);
    let mut prev = Poly::constant(1.0);
    if j == 0 {
        return Ok(prev);
    }
    let mut cur = Poly::constant(n * (q - 1.0))
        .sub(&z.scale(q))
        .scale(1.0 / (n * (q - 1.0)));
    for i in 1..j {
        let fi = i as f64;
        let a = Poly::constant(fi + (q - 1.0) * (n - fi)).sub(&z.scale(q));
        let next = a
            .mul(&cur)
            .sub(&prev.scale(fi))
            .scale(1.0 / ((q - 1.0) * (n - fi)));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Levenshtein's adjacent polynomial families `Q_i^{(a,b,n,q)}`, orthogonal
/// with respect to `(1-t)^a (1+t)^b dmu_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// (a,b) = (1,0): `K_i^{(n-1)}(z-1) / sum_{j<=i} C(n,j)(q-1)^j`.
    OneZero,
    /// (a,b) = (1,1): `K_i^{(n-2)}(z-1) / sum_{j<=i} C(n-1,j)(q-1)^j`.
    OneOne,
    /// (a,b) = (0,1): `K_i^{(n-1)}(z) / (C(n-1,i)(q-1)^i)`.
    ZeroOne,
}

impl Family {
    pub fn from_ab(a: u8, b: u8) -> Result<Self> {
        match (a, b) {
            (1, 0) => Ok(Family::OneZero),
            (1, 1) => Ok(Family::OneOne),
            (0, 1) => Ok(Family::ZeroOne),
            _ => domain(format!("no adjacent family for (a,b) = ({a},{b})")),
        }
    }

    pub fn ab(&self) -> (u8, u8) {
        match self {
            Family::OneZero => (1, 0),
            Family::OneOne => (1, 1),
            Family::ZeroOne => (0, 1),
        }
    }

    /// Largest admissible degree. The (1,1) family admits one degree past
    /// `n-2`: `Q_{n-1}^{(1,1)}` vanishes at every interior grid point and
    /// closes the last even interval, the one that ends at `M = q^n`.
    pub fn max_degree(&self, n: usize) -> usize {
        match self {
            Family::OneZero | Family::ZeroOne => n - 1,
            Family::OneOne => n.saturating_sub(1),
        }
    }

    fn normalizer(&self, space: SpaceParams, i: usize) -> BigUint {
        let (n, q) = (space.n, space.q);
        match self {
            Family::OneZero => weighted_binomial_sum(n, i, q),
            Family::OneOne => weighted_binomial_sum(n - 1, i, q),
            Family::ZeroOne => weighted_binomial(n - 1, i, q),
        }
    }
}

/// Adjacent polynomial `Q_i^{(a,b,n,q)}(t)`. Every family is normalized
/// to equal 1 at `t = 1`.
pub fn adjacent_eval(space: SpaceParams, family: Family, i: usize, t: f64) -> Result<f64> {
    if i == 0 {
        return Ok(1.0);
    }
    if i > family.max_degree(space.n) {
        let (a, b) = family.ab();
        return domain(format!(
            "degree {i} out of range for the ({a},{b}) family with n = {}",
            space.n
        ));
    }
    let z = space.z_of(t);
    let (m, arg) = match family {
        Family::OneZero => (space.n - 1, z - 1.0),
        Family::OneOne => (space.n - 2, z - 1.0),
        Family::ZeroOne => (space.n - 1, z),
    };
    let k = kraw_unnormalized(m, space.q, i, arg);
    Ok(k / big_to_f64(&family.normalizer(space, i)))
}

/// Greatest zero `t_i^{a,b}` of the adjacent polynomial in `(-1, 1)`;
/// `t_0^{1,1} = -1` by convention.
pub fn greatest_zero(space: SpaceParams, family: Family, i: usize, tol: &Tolerances) -> Result<f64> {
    if i == 0 {
        return match family {
            Family::OneOne => Ok(-1.0),
            _ => domain("degree-0 greatest zero is only defined for the (1,1) family"),
        };
    }
    if i > family.max_degree(space.n) {
        let (a, b) = family.ab();
        return domain(format!(
            "degree {i} out of range for the ({a},{b}) family with n = {}",
            space.n
        ));
    }
    let f = |t: f64| adjacent_eval(space, family, i, t).unwrap_or(f64::NAN);
    roots::greatest_root(f, -1.0, 1.0, roots::scan_step(space.n, i), tol.root)
}

/// The orthogonality measure `mu_n` on `T_n`: a word at distance `d`
/// contributes `C(n,d)(q-1)^d / q^n` at `t = 1 - 2d/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub space: SpaceParams,
    /// Grid points in increasing order.
    pub points: Vec<f64>,
    /// Mass at each grid point.
    pub masses: Vec<f64>,
}

impl Measure {
    pub fn new(space: SpaceParams) -> Self {
        let total = space.size();
        let points = space.grid();
        let masses = (0..=space.n)
            .map(|j| {
                let d = space.n - j;
                big_ratio_f64(&space.r(d), &total)
            })
            .collect();
        Measure {
            space,
            points,
            masses,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `int f g dmu_n`.
    pub fn inner<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(&self, f: F, g: G) -> f64 {
        self.points
            .iter()
            .zip(&self.masses)
            .map(|(&t, &w)| f(t) * g(t) * w)
            .sum()
    }
}

/// Coefficients of a polynomial in the Krawtchouk basis:
/// `f(t) = sum_i f[i] Q_i(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrawExpansion {
    pub space: SpaceParams,
    pub f: Vec<f64>,
}

impl KrawExpansion {
    /// Synthesis `sum_i f_i Q_i(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        if self.f.is_empty() {
            return 0.0;
        }
        let q = kraw_values(self.space, self.f.len() - 1, t);
        self.f.iter().zip(q).map(|(a, b)| a * b).sum()
    }

    pub fn f0(&self) -> f64 {
        self.f.first().copied().unwrap_or(0.0)
    }

    /// `f(1) = sum_i f_i`, since every `Q_i(1) = 1`.
    pub fn value_at_one(&self) -> f64 {
        self.f.iter().sum()
    }
}

/// Krawtchouk coefficients `f_i = r_i <f, Q_i>` from the discrete inner
/// product on `T_n`.
pub fn expand(poly: &Poly, space: SpaceParams) -> Result<KrawExpansion> {
    let m = poly.degree();
    if m > space.n {
        return domain(format!(
            "degree {m} exceeds n = {}; the Krawtchouk expansion is not unique",
            space.n
        ));
    }
    Ok(project(poly, space))
}

/// Expansion of the restriction of `poly` to `T_n`, for any degree. Equals
/// [`expand`] when `deg <= n`; above that it is the unique degree-`<= n`
/// polynomial agreeing with `poly` on the grid, which is all the linear
/// program sees.
pub fn project(poly: &Poly, space: SpaceParams) -> KrawExpansion {
    // Horner in the Krawtchouk basis. Multiplication by t follows the
    // three-term recurrence; the Q_{n+1} term carries a factor n - i, so
    // it drops out at i = n and the result is exact on the grid.
    let (n, qf) = (space.n, space.q as f64);
    let nf = n as f64;
    let c = 2.0 / (qf * nf);
    let top = poly.degree().min(n);
    let mut g = vec![0.0; top + 1];
    for &a in poly.coeffs.iter().rev() {
        let mut next = vec![0.0; top + 1];
        for (i, &gi) in g.iter().enumerate() {
            if gi == 0.0 {
                continue;
            }
            let fi = i as f64;
            next[i] += gi * (1.0 - c * (fi + (qf - 1.0) * (nf - fi)));
            if i > 0 {
                next[i - 1] += gi * c * fi;
            }
            if i < n {
                next[i + 1] += gi * c * (qf - 1.0) * (nf - fi);
            }
        }
        next[0] += a;
        g = next;
    }
    KrawExpansion { space, f: g }
}

/// Christoffel-Darboux kernel `T_k(u,v) = sum_{i<=k} r_i Q_i(u) Q_i(v)`.
pub fn kernel_t(space: SpaceParams, k: usize, u: f64, v: f64) -> Result<f64> {
    if k + 1 > space.n {
        return domain(format!("kernel degree {k} must be at most n-1 = {}", space.n - 1));
    }
    let qu = kraw_values(space, k, u);
    let qv = kraw_values(space, k, v);
    Ok((0..=k).map(|i| space.r_f64(i) * qu[i] * qv[i]).sum())
}

/// Closed (ratio) form of the kernel for `u != v`:
/// `c (Q_{k+1}(u)Q_k(v) - Q_{k+1}(v)Q_k(u)) / (u - v)` with
/// `c = r_k * 2(q-1)(n-k)/(qn)`.
pub fn kernel_t_ratio(space: SpaceParams, k: usize, u: f64, v: f64) -> Result<f64> {
    if k + 1 > space.n {
        return domain(format!("kernel degree {k} must be at most n-1 = {}", space.n - 1));
    }
    if u == v {
        return domain("the ratio form of the kernel needs u != v");
    }
    let (n, q) = (space.n as f64, space.q as f64);
    let c = space.r_f64(k) * 2.0 * (q - 1.0) * (n - k as f64) / (q * n);
    let qu = kraw_values(space, k + 1, u);
    let qv = kraw_values(space, k + 1, v);
    Ok(c * (qu[k + 1] * qv[k] - qv[k + 1] * qu[k]) / (u - v))
}
