#![allow(dead_code)]

use hamming_energy::bounds::rao;
use hamming_energy::codes::Code;
use hamming_energy::polyengine::big_to_f64;
use hamming_energy::SpaceParams;
use rand::seq::index::sample;
use rand::Rng;

pub fn sp(n: usize, q: u32) -> SpaceParams {
    SpaceParams::new(n, q).unwrap()
}

pub fn rao_u64(space: SpaceParams, tau: usize) -> u64 {
    let r = rao(space, tau).unwrap();
    let x = big_to_f64(&r);
    assert!(x < 9e15, "Rao value too large for u64 fixtures");
    r.to_string().parse().unwrap()
}

/// The sixteen words `x -> (a.x)_{a in S}` over `F_2^4` for nine distinct
/// nonzero `a`, including `e1, e2, e1+e2`: a strength-2 orthogonal array.
pub fn oa_16x9() -> Code {
    let cols: [u32; 9] = [1, 2, 4, 8, 3, 5, 9, 6, 10];
    let rows = (0u32..16)
        .map(|x| cols.iter().map(|a| (a & x).count_ones() % 2).collect())
        .collect();
    Code::new(sp(9, 2), rows).unwrap()
}

pub fn even_weight_3() -> Code {
    hamming_energy::codes::parse_code("3 2 4\n000\n011\n101\n110\n").unwrap()
}

/// Uniformly random set of `m` distinct binary words of length `n`.
pub fn random_binary_code<R: Rng>(rng: &mut R, n: usize, m: usize) -> Code {
    let rows = sample(rng, 1usize << n, m)
        .into_iter()
        .map(|x| (0..n).map(|b| ((x >> b) & 1) as u32).collect())
        .collect();
    Code::new(sp(n, 2), rows).unwrap()
}

/// Binary linear code spanned by the given generator words (as bit masks).
pub fn binary_span(n: usize, gens: &[usize]) -> Code {
    let mut words = vec![0usize];
    for &g in gens {
        if words.contains(&g) {
            continue;
        }
        let more: Vec<usize> = words.iter().map(|w| w ^ g).collect();
        words.extend(more);
    }
    let rows = words
        .into_iter()
        .map(|x| (0..n).map(|b| ((x >> b) & 1) as u32).collect())
        .collect();
    Code::new(sp(n, 2), rows).unwrap()
}

/// `(space, tau, M)` with one `M` inside each `(R(n,tau), R(n,tau+1)]` for
/// `q in {2,3,4}`, `n <= 16`, `tau <= 6`.
pub fn sweep() -> Vec<(SpaceParams, usize, u64)> {
    let mut out = Vec::new();
    for q in [2u32, 3, 4] {
        for n in 2..=16usize {
            let space = sp(n, q);
            for tau in 1..=6usize.min(2 * n - 2) {
                let lo = rao_u64(space, tau);
                let hi = rao_u64(space, tau + 1);
                if hi <= lo {
                    continue;
                }
                out.push((space, tau, lo + (hi - lo + 1) / 2));
            }
        }
    }
    out
}
