//! Partial permutations of `{1, …, M}`: bijections between two subsets.
//!
//! A partial permutation is stored as its dense image array: entry `j − 1`
//! holds `σ(j)`, with `0` meaning undefined. Its matrix picture is the 0/1
//! matrix `u_ij(σ) = [σ(j) = i]`, which has at most one 1 in each row and
//! column, and composition corresponds to the boolean matrix product.

mod count;
mod semigroup;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::Execution;

pub use count::{asymptotic_estimate_ratio, count_all, enumerate, Enumeration, DEFAULT_LIMIT};
pub use semigroup::Semigroup;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialPermutation {
    image: Vec<usize>,
}

impl PartialPermutation {
    /// Builds `σ` from its image array (`0` = undefined), checking range and injectivity.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        let mut seen = vec![false; m + 1];
        for (j, &v) in image.iter().enumerate() {
            if v > m {
                return Err(Error::InvalidPermutation(format!("σ({}) = {v} is outside 1..={m}", j + 1)));
            }
            if v != 0 {
                if seen[v] {
                    return Err(Error::InvalidPermutation(format!("value {v} is hit twice")));
                }
                seen[v] = true;
            }
        }
        Ok(PartialPermutation { image })
    }

    pub fn identity(m: usize) -> Self {
        PartialPermutation { image: (1..=m).collect() }
    }

    /// The null map, defined nowhere.
    pub fn empty(m: usize) -> Self {
        PartialPermutation { image: vec![0; m] }
    }

    /// The identity restricted to the given 1-based points.
    pub fn partial_identity(m: usize, domain: &[usize]) -> Result<Self> {
        let mut image = vec![0; m];
        for &j in domain {
            if !(1..=m).contains(&j) {
                return Err(Error::IndexOutOfRange { index: j, bound: m });
            }
            image[j - 1] = j;
        }
        Ok(PartialPermutation { image })
    }

    /// Builds `σ` from `(j, σ(j))` pairs.
    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut image = vec![0; m];
        for &(j, i) in pairs {
            if !(1..=m).contains(&j) || !(1..=m).contains(&i) {
                return Err(Error::InvalidPermutation(format!("pair {j} -> {i} outside 1..={m}")));
            }
            if image[j - 1] != 0 {
                return Err(Error::InvalidPermutation(format!("{j} mapped twice")));
            }
            image[j - 1] = i;
        }
        Self::new(image)
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `σ(j)` for 1-based `j`, `None` when undefined or out of range.
    pub fn apply(&self, j: usize) -> Option<usize> {
        match self.image.get(j.wrapping_sub(1)) {
            Some(&v) if v != 0 => Some(v),
            _ => None,
        }
    }

    pub fn domain(&self) -> Vec<usize> {
        (1..=self.size()).filter(|&j| self.image[j - 1] != 0).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.image.iter().copied().filter(|&v| v != 0).collect();
        r.sort_unstable();
        r
    }

    /// Number of defined points.
    pub fn rank(&self) -> usize {
        self.image.iter().filter(|&&v| v != 0).count()
    }

    pub fn undefined_count(&self) -> usize {
        self.size() - self.rank()
    }

    pub fn is_total(&self) -> bool {
        self.undefined_count() == 0
    }

    pub fn is_idempotent(&self) -> bool {
        self.image.iter().enumerate().all(|(j, &v)| v == 0 || v == j + 1)
    }

    /// `(σ∘τ)(j) = σ(τ(j))` when both steps are defined, undefined otherwise.
    pub fn compose(&self, tau: &PartialPermutation) -> Result<PartialPermutation> {
        if self.size() != tau.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: tau.size() });
        }
        let image = tau
            .image
            .iter()
            .map(|&t| if t == 0 { 0 } else { self.image[t - 1] })
            .collect();
        Ok(PartialPermutation { image })
    }

    pub fn invert(&self) -> PartialPermutation {
        let mut image = vec![0; self.size()];
        for (j, &v) in self.image.iter().enumerate() {
            if v != 0 {
                image[v - 1] = j + 1;
            }
        }
        PartialPermutation { image }
    }

    /// The 0/1 matrix `u_ij(σ) = [σ(j) = i]`, 0-based storage.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let m = self.size();
        let mut u = vec![vec![false; m]; m];
        for (j, &v) in self.image.iter().enumerate() {
            if v != 0 {
                u[v - 1][j] = true;
            }
        }
        u
    }

    /// Extends `σ ∈ S̃_M` with at most `N − M` undefined values to a total
    /// permutation `σ'` of `{1, …, N}` with `σ'(j) = i ⟺ σ(j) = i` for `i, j ≤ M`.
    ///
    /// With `X^c = {x_1 < … < x_L}` the undefined points and
    /// `Y^c = {y_1 < … < y_L}` the points missed by the range:
    /// `x_r ↦ M + r`, `M + r ↦ y_r`, and every `i > M + L` is fixed.
    pub fn embed_total(&self, n: usize) -> Result<PartialPermutation> {
        let m = self.size();
        let undefined = self.undefined_count();
        if n < m || undefined > n - m {
            return Err(Error::TooManyUndefined { undefined, allowed: n.saturating_sub(m) });
        }
        let xs: Vec<usize> = (1..=m).filter(|&j| self.image[j - 1] == 0).collect();
        let mut hit = vec![false; m + 1];
        for &v in &self.image {
            hit[v] = true;
        }
        let ys: Vec<usize> = (1..=m).filter(|&i| !hit[i]).collect();
        let l = xs.len();
        let mut image = vec![0; n];
        image[..m].copy_from_slice(&self.image);
        for (r, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            image[x - 1] = m + r + 1;
            image[m + r] = y;
        }
        for i in (m + l + 1)..=n {
            image[i - 1] = i;
        }
        Ok(PartialPermutation { image })
    }
}

impl Ord for PartialPermutation {
    /// Size, then number of defined points, then lexicographic on the image array.
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then(self.rank().cmp(&other.rank()))
            .then_with(|| self.image.cmp(&other.image))
    }
}

impl PartialOrd for PartialPermutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PartialPermutation {
    /// `M: v1 v2 … vM` with `_` for undefined values.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.size())?;
        for &v in &self.image {
            if v == 0 {
                f.write_str(" _")?;
            } else {
                write!(f, " {v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialPermutation({self})")
    }
}

impl FromStr for PartialPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(0, format!("expected `M: v1 … vM`, got `{s}`")))?;
        let m: usize = m.trim().parse().map_err(|_| Error::parse(0, format!("bad size in `{s}`")))?;
        let image = rest
            .split_whitespace()
            .map(|t| if t == "_" { Ok(0) } else { t.parse() })
            .collect::<std::result::Result<Vec<usize>, _>>()
            .map_err(|_| Error::parse(0, format!("bad image value in `{s}`")))?;
        if image.len() != m {
            return Err(Error::parse(0, format!("expected {m} values in `{s}`")));
        }
        Self::new(image)
    }
}

/// Checks `Σ_{k,l} u_ki(σ) u_kl(σ) u_jl(σ) = u_ji(σ)` for every `σ ∈ S̃_M` and
/// all `i, j`, in exact integer arithmetic.
pub fn verify_subantipode(m: usize, limit: usize) -> Result<bool> {
    verify_subantipode_with(m, limit, Execution::default())
}

pub fn verify_subantipode_with(m: usize, limit: usize, exec: Execution) -> Result<bool> {
    let all: Vec<PartialPermutation> = enumerate(m, limit)?.collect();
    Ok(exec.all(&all, subantipode_holds_at))
}

/// The subantipode identity evaluated at a single point.
pub fn subantipode_holds_at(sigma: &PartialPermutation) -> bool {
    let u = sigma.matrix();
    let m = sigma.size();
    let at = |i: usize, j: usize| u[i][j] as u32;
    (0..m).all(|i| {
        (0..m).all(|j| {
            let lhs: u32 = (0..m)
                .flat_map(|k| (0..m).map(move |l| (k, l)))
                .map(|(k, l)| at(k, i) * at(k, l) * at(j, l))
                .sum();
            lhs == at(j, i)
        })
    })
}
