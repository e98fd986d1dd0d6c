use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::PartialPermutation;
use crate::error::{Error, Result};

/// Default cap on `N` for full enumeration of `S̃_N` (`|S̃_7| = 130922`).
pub const DEFAULT_LIMIT: usize = 7;

/// `|S̃_N| = Σ_{k=0}^{N} k! · C(N,k)²`.
pub fn count_all(n: usize) -> BigUint {
    // term_k = k!·C(n,k)² ; term_{k+1} = term_k · (n−k)² / (k+1)
    let mut term = BigUint::one();
    let mut total = BigUint::zero();
    for k in 0..=n {
        total += &term;
        if k < n {
            let nk = (n - k) as u64;
            term = term * (nk * nk) / (k as u64 + 1);
        }
    }
    total
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `|S̃_N| / (N! · sqrt(exp(4√N − 1) / (4π√N)))`.
pub fn asymptotic_estimate_ratio(n: usize) -> f64 {
    // count / N! in big integers with 40 guard digits
    let guard = BigUint::from(10u32).pow(40);
    let scaled = count_all(n) * &guard / factorial(n);
    let quotient = scaled.to_f64().unwrap_or(f64::INFINITY) / 1e40;
    let sn = (n as f64).sqrt();
    let estimate = ((4.0 * sn - 1.0).exp() / (4.0 * std::f64::consts::PI * sn)).sqrt();
    quotient / estimate
}

/// Lazily enumerates `S̃_N`, ordered by number of defined points and then
/// lexicographically on the image array.
pub struct Enumeration {
    n: usize,
    rank: usize,
    layer: std::vec::IntoIter<PartialPermutation>,
}

impl Iterator for Enumeration {
    type Item = PartialPermutation;

    fn next(&mut self) -> Option<PartialPermutation> {
        loop {
            if let Some(p) = self.layer.next() {
                return Some(p);
            }
            if self.rank > self.n {
                return None;
            }
            self.layer = rank_layer(self.n, self.rank).into_iter();
            self.rank += 1;
        }
    }
}

/// All partial permutations of `{1, …, n}` with exactly `k` defined points, lexicographic.
fn rank_layer(n: usize, k: usize) -> Vec<PartialPermutation> {
    fn go(n: usize, k: usize, pos: usize, defined: usize, used: &mut [bool], image: &mut Vec<usize>, out: &mut Vec<PartialPermutation>) {
        if pos == n {
            if defined == k {
                out.push(PartialPermutation { image: image.clone() });
            }
            return;
        }
        let remaining = n - pos;
        // undefined here, if enough positions remain to reach k
        if defined + remaining > k {
            image.push(0);
            go(n, k, pos + 1, defined, used, image, out);
            image.pop();
        }
        if defined < k {
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    image.push(v);
                    go(n, k, pos + 1, defined + 1, used, image, out);
                    image.pop();
                    used[v] = false;
                }
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, 0, &mut vec![false; n + 1], &mut Vec::with_capacity(n), &mut out);
    out
}

/// Every element of `S̃_N` exactly once, for `N ≤ limit`.
pub fn enumerate(n: usize, limit: usize) -> Result<Enumeration> {
    if n > limit {
        return Err(Error::LimitExceeded { requested: n, limit });
    }
    Ok(Enumeration { n, rank: 0, layer: Vec::new().into_iter() })
}
