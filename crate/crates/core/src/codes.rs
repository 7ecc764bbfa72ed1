//! Explicit codes: parsing, distance distribution, energy, extreme inner
//! products and strength (as an orthogonal array).
//!
//! File format: an optional header line `n q M`, then one word per line.
//! For `q <= 10` a word is `n` contiguous digits, otherwise `n`
//! whitespace-separated integers. Lines starting with `#` and blank lines
//! are ignored.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::polyengine::{binomial, kraw_values, SpaceParams};
use crate::potential::Potential;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    pub space: SpaceParams,
    pub rows: Vec<Vec<u32>>,
}

impl Code {
    /// Validates symbol range, row length and distinctness.
    pub fn new(space: SpaceParams, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.is_empty() {
            return domain("a code needs at least one word");
        }
        let mut seen = HashMap::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != space.n {
                return domain(format!("word {i} has length {}, expected {}", row.len(), space.n));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= space.q) {
                return domain(format!("word {i} has symbol {x} >= q = {}", space.q));
            }
            if let Some(j) = seen.insert(row.clone(), i) {
                return domain(format!("words {j} and {i} coincide"));
            }
        }
        Ok(Code { space, rows })
    }

    /// Every word of `H(n,q)`; `q^n` must not exceed `limit`.
    pub fn full_space(space: SpaceParams, limit: usize) -> Result<Self> {
        let size = (space.q as usize)
            .checked_pow(space.n as u32)
            .filter(|&s| s <= limit)
            .ok_or_else(|| Error::Domain(format!("q^n exceeds {limit}")))?;
        let rows = (0..size).map(|idx| word_of_index(space, idx)).collect();
        Ok(Code { space, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn word_of_index(space: SpaceParams, mut idx: usize) -> Vec<u32> {
    let q = space.q as usize;
    let mut w = vec![0u32; space.n];
    for x in w.iter_mut().rev() {
        *x = (idx % q) as u32;
        idx /= q;
    }
    w
}

pub fn hamming_distance(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn parse_header(line: usize, text: &str) -> Result<(usize, u32, usize)> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let bad = || Error::Parse {
        line,
        msg: format!("malformed header '{text}', expected 'n q M'"),
    };
    let n = toks[0].parse::<usize>().map_err(|_| bad())?;
    let q = toks[1].parse::<u32>().map_err(|_| bad())?;
    let m = toks[2].parse::<usize>().map_err(|_| bad())?;
    Ok((n, q, m))
}

/// Parses a code file. Without a header, `known` supplies `(n, q)`; when
/// both are absent, `n` is the length of the first word and `q` is one
/// more than the largest digit (at least 2).
pub fn parse_code_with(text: &str, known: Option<SpaceParams>) -> Result<Code> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(&(first_no, first)) = lines.first() else {
        return parse_err(text.lines().count().max(1), "no words found");
    };
    let ambiguous = known.is_some_and(|s| s.q > 10 && s.n == 3);
    let (header, body) = if first.split_whitespace().count() == 3 && !ambiguous {
        (Some(parse_header(first_no, first)?), &lines[1..])
    } else {
        (None, &lines[..])
    };

    let space = match (header, known) {
        (Some((n, q, _)), k) => {
            let s = SpaceParams::new(n, q).map_err(|e| Error::Parse {
                line: first_no,
                msg: e.to_string(),
            })?;
            if let Some(k) = k.filter(|k| *k != s) {
                return parse_err(
                    first_no,
                    format!("header says n={n}, q={q} but n={}, q={} was requested", k.n, k.q),
                );
            }
            s
        }
        (None, Some(k)) => k,
        (None, None) => {
            let Some(&(no, w)) = body.first() else {
                return parse_err(first_no, "no words found");
            };
            if !w.chars().all(|c| c.is_ascii_digit()) {
                return parse_err(no, "without a header, words must be digit strings");
            }
            let q = body
                .iter()
                .flat_map(|(_, l)| l.chars())
                .filter_map(|c| c.to_digit(10))
                .max()
                .unwrap_or(0)
                + 1;
            SpaceParams::new(w.len(), q.max(2)).map_err(|e| Error::Parse {
                line: no,
                msg: e.to_string(),
            })?
        }
    };

    let mut rows = Vec::with_capacity(body.len());
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    for &(no, l) in body {
        let row: Vec<u32> = if space.q <= 10 {
            l.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d < space.q => Ok(d),
                    _ => parse_err(no, format!("symbol '{c}' is not a digit below q = {}", space.q)),
                })
                .collect::<Result<_>>()?
        } else {
            l.split_whitespace()
                .map(|tok| match tok.parse::<u32>() {
                    Ok(d) if d < space.q => Ok(d),
                    _ => parse_err(no, format!("symbol '{tok}' is not an integer below q = {}", space.q)),
                })
                .collect::<Result<_>>()?
        };
        if row.len() != space.n {
            return parse_err(no, format!("word has length {}, expected {}", row.len(), space.n));
        }
        if let Some(prev) = seen.insert(row.clone(), no) {
            return parse_err(no, format!("duplicate of the word on line {prev}"));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return parse_err(first_no, "no words found");
    }
    if let Some((_, _, m)) = header {
        if m != rows.len() {
            return parse_err(first_no, format!("header says M = {m} but {} words follow", rows.len()));
        }
    }
    Ok(Code { space, rows })
}

pub fn parse_code(text: &str) -> Result<Code> {
    parse_code_with(text, None)
}

/// Ordered-pair distance counts; `A_d = counts[d] / M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceDistribution {
    pub n: usize,
    pub m: usize,
    pub counts: Vec<u64>,
}

impl DistanceDistribution {
    pub fn a(&self, d: usize) -> f64 {
        self.counts[d] as f64 / self.m as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..=self.n).map(|d| self.a(d)).collect()
    }
}

pub fn distance_distribution(code: &Code) -> DistanceDistribution {
    let n = code.space.n;
    let mut counts = vec![0u64; n + 1];
    counts[0] = code.len() as u64;
    for (i, x) in code.rows.iter().enumerate() {
        for y in &code.rows[i + 1..] {
            counts[hamming_distance(x, y)] += 2;
        }
    }
    DistanceDistribution {
        n,
        m: code.len(),
        counts,
    }
}

/// `(1/M) sum_{x != y} h(<x,y>)`.
pub fn energy(code: &Code, pot: &Potential) -> Result<f64> {
    energy_from_distribution(&distance_distribution(code), pot)
}

pub fn energy_from_distribution(dist: &DistanceDistribution, pot: &Potential) -> Result<f64> {
    let mut total = 0.0;
    for d in 1..=dist.n {
        if dist.counts[d] > 0 {
            total += dist.a(d) * pot.eval_n(dist.n, 1.0 - 2.0 * d as f64 / dist.n as f64, 0)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeStats {
    pub distribution: DistanceDistribution,
    /// Largest inner product between distinct words.
    pub s: f64,
    /// Smallest inner product between distinct words.
    pub ell: f64,
    pub min_distance: usize,
    pub max_distance: usize,
}

pub fn inner_product_stats(code: &Code) -> Result<CodeStats> {
    if code.len() < 2 {
        return domain("inner-product statistics need at least two words");
    }
    let distribution = distance_distribution(code);
    let present: Vec<usize> = (1..=code.space.n).filter(|&d| distribution.counts[d] > 0).collect();
    let (dmin, dmax) = (present[0], *present.last().unwrap());
    Ok(CodeStats {
        s: code.space.t_of_distance(dmin),
        ell: code.space.t_of_distance(dmax),
        min_distance: dmin,
        max_distance: dmax,
        distribution,
    })
}

/// `K_i(d) = sum_j (-1)^j (q-1)^(i-j) C(d,j) C(n-d,i-j)`, exactly.
fn kraw_exact(n: usize, q: u32, i: usize, d: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=i.min(d) {
        if i - j > n - d {
            continue;
        }
        let term = BigInt::from(binomial(d, j))
            * BigInt::from(binomial(n - d, i - j))
            * BigInt::from(q - 1).pow((i - j) as u32);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `sum_d counts_d K_i(d)` for `i = 0..=n`; all are nonnegative, and
/// `B_i = 0` for `1 <= i <= tau` exactly when the code has strength `tau`.
pub fn dual_transform(dist: &DistanceDistribution, q: u32) -> Vec<BigInt> {
    (0..=dist.n)
        .map(|i| {
            (0..=dist.n)
                .filter(|&d| dist.counts[d] > 0)
                .map(|d| BigInt::from(dist.counts[d]) * kraw_exact(dist.n, q, i, d))
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrengthReport {
    pub tau: usize,
    pub dual_distance: Option<usize>,
    pub warning: Option<String>,
}

/// Largest `tau <= n` with vanishing transforms `1..=tau`, in exact integer
/// arithmetic.
pub fn strength(code: &Code) -> StrengthReport {
    let n = code.space.n;
    let b = dual_transform(&distance_distribution(code), code.space.q);
    debug_assert!(b.iter().all(|x| !x.is_negative()));
    let first = (1..=n).find(|&i| !b[i].is_zero());
    let tau = first.map_or(n, |i| i - 1);
    let index = num_bigint::BigUint::from(code.len());
    let qt = num_bigint::BigUint::from(code.space.q).pow(tau as u32);
    let warning = (tau > 0 && !(&index % &qt).is_zero()).then(|| {
        format!("M/q^tau = {}/{} is not an integer", code.len(), qt)
    });
    StrengthReport {
        tau,
        dual_distance: first,
        warning,
    }
}

/// Strength from the definition: `sum_{y in C} Q_r(<x,y>) = 0` for every
/// `x` in `H(n,q)` and `1 <= r <= tau`. Exhaustive; `q^n <= 4096` only.
pub fn strength_by_definition(code: &Code) -> Result<usize> {
    let space = code.space;
    let all = Code::full_space(space, 4096)?;
    let n = space.n;
    let mut ok = vec![true; n + 1];
    for x in &all.rows {
        let mut sums = vec![0.0; n + 1];
        for y in &code.rows {
            let t = space.t_of_distance(hamming_distance(x, y));
            for (r, v) in kraw_values(space, n, t).into_iter().enumerate() {
                sums[r] += v;
            }
        }
        for r in 1..=n {
            ok[r] &= sums[r].abs() <= 1e-8 * code.len() as f64;
        }
    }
    Ok((1..=n).find(|&r| !ok[r]).map_or(n, |r| r - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EVEN3: &str = "3 2 4\n000\n011\n101\n110\n";

    #[test]
    fn parse_even_weight() {
        let c = parse_code(EVEN3).unwrap();
        assert_eq!((c.space.n, c.space.q, c.len()), (3, 2, 4));
        let c2 = parse_code("# comment\n000\n011  \n\n101\n110").unwrap();
        assert_eq!(c2, c);
    }

    #[test]
    fn parse_errors_carry_lines() {
        match parse_code("3 2 2\n000\n012\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("'2'"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        match parse_code("3 2 3\n000\n# x\n011\n000\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("line 2"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_code("3 2 5\n000\n011\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code("3 x 2\n000\n011\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code("3 2 2\n000\n0111\n"), Err(Error::Parse { line: 3, .. })));
        assert!(parse_code("# only\n").is_err());
    }

    #[test]
    fn parse_large_alphabet() {
        let c = parse_code("2 12 3\n0 11\n5 3\n11 11\n").unwrap();
        assert_eq!(c.rows[0], vec![0, 11]);
        assert!(parse_code("2 12 1\n0 12\n").is_err());
        let known = SpaceParams::new(3, 11).unwrap();
        let c = parse_code_with("1 2 3\n4 5 6\n", Some(known)).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn energy_examples() {
        let c = parse_code(EVEN3).unwrap();
        let unit = Potential::unit_riesz(1.0).unwrap();
        assert!((energy(&c, &unit).unwrap() - 2.25).abs() < 1e-15);
        let full = Code::full_space(SpaceParams::new(2, 2).unwrap(), 16).unwrap();
        let pot = Potential::exponential(0.7).unwrap();
        let expected = 2.0 + (-0.7f64).exp();
        assert!((energy(&full, &pot).unwrap() - expected).abs() < 1e-15);
        let single = parse_code("000\n").unwrap();
        assert_eq!(energy(&single, &pot).unwrap(), 0.0);
    }

    #[test]
    fn stats_examples() {
        let s = inner_product_stats(&parse_code(EVEN3).unwrap()).unwrap();
        assert!((s.s + 1.0 / 3.0).abs() < 1e-15 && s.ell == s.s);
        assert_eq!(s.min_distance, 2);
        assert_eq!(s.distribution.values(), vec![1.0, 0.0, 3.0, 0.0]);
        let full = Code::full_space(SpaceParams::new(2, 2).unwrap(), 16).unwrap();
        let s = inner_product_stats(&full).unwrap();
        assert_eq!((s.s, s.ell, s.min_distance), (0.0, -1.0, 1));
        let rep = parse_code("00000\n11111\n").unwrap();
        let s = inner_product_stats(&rep).unwrap();
        assert_eq!((s.s, s.ell, s.min_distance), (-1.0, -1.0, 5));
        assert!(inner_product_stats(&parse_code("000\n").unwrap()).is_err());
    }

    #[test]
    fn strength_examples() {
        let even = parse_code(EVEN3).unwrap();
        assert_eq!(strength(&even).tau, 2);
        assert_eq!(strength_by_definition(&even).unwrap(), 2);
        let rep = parse_code("00000\n11111\n").unwrap();
        assert_eq!(strength(&rep).tau, 1);
        assert_eq!(strength_by_definition(&rep).unwrap(), 1);
        for (n, q) in [(3, 2), (2, 3), (4, 2)] {
            let full = Code::full_space(SpaceParams::new(n, q).unwrap(), 4096).unwrap();
            let r = strength(&full);
            assert_eq!((r.tau, r.dual_distance, r.warning), (n, None, None));
        }
        let odd = parse_code("000\n001\n011\n").unwrap();
        assert_eq!(strength(&odd).tau, 0);
        assert_eq!(strength_by_definition(&odd).unwrap(), 0);
    }

    #[test]
    fn kraw_exact_matches_float() {
        for d in 0..=7 {
            for i in 0..=7 {
                let exact = kraw_exact(7, 3, i, d).to_string().parse::<f64>().unwrap();
                let float = crate::polyengine::kraw_unnormalized(7, 3, i, d as f64);
                assert!((exact - float).abs() < 1e-9 * exact.abs().max(1.0), "{i} {d}");
            }
        }
    }
}
