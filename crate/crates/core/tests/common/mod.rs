//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's counting, closure or determinant code.

#![allow(dead_code)]

use std::collections::HashSet;

use num_complex::Complex64;

/// Partial permutations of `{1..n}` counted by brute force over all maps `j ↦ σ(j) ∈ {0..n}`.
pub fn count_partial_brute(n: usize) -> u64 {
    fn go(n: usize, j: usize, used: &mut Vec<bool>) -> u64 {
        if j == n {
            return 1;
        }
        let mut total = go(n, j + 1, used);
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                total += go(n, j + 1, used);
                used[v] = false;
            }
        }
        total
    }
    go(n, 0, &mut vec![false; n])
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `|S̃_N| / N! = Σ_k C(N,k) / (N−k)!`, summed in floating point from logarithms.
pub fn count_over_factorial(n: usize) -> f64 {
    (0..=n)
        .map(|k| (ln_factorial(n) - ln_factorial(k) - 2.0 * ln_factorial(n - k)).exp())
        .sum()
}

/// `(στ)(j) = σ(τ(j))` on 1-based image arrays with 0 for undefined.
pub fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&x| if x == 0 { 0 } else { s[x - 1] }).collect()
}

/// Closure of a generating set under composition, by fixpoint iteration.
pub fn closure(gens: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let mut set: HashSet<Vec<usize>> = gens.iter().cloned().collect();
    loop {
        let snapshot: Vec<Vec<usize>> = set.iter().cloned().collect();
        let before = set.len();
        for a in &snapshot {
            for b in &snapshot {
                set.insert(compose(a, b));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

pub fn is_group(set: &HashSet<Vec<usize>>) -> bool {
    let Some(n) = set.iter().next().map(Vec::len) else {
        return false;
    };
    let id: Vec<usize> = (1..=n).collect();
    set.contains(&id)
        && set
            .iter()
            .all(|a| set.iter().any(|b| compose(a, b) == id && compose(b, a) == id))
}

/// Determinant of a matrix of `q`-th roots of unity `ζ^{e_rc}`, computed
/// exactly in `ℤ[x]/(x^q − 1)` by the Leibniz formula and only then evaluated.
pub fn leibniz_det(exponents: &[Vec<u64>], q: u64) -> Complex64 {
    let n = exponents.len();
    let mut coeffs = vec![0i64; q as usize];
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permutations(&mut perm, n, &mut |p| {
        let inversions = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| p[a] > p[b]).count();
        let e: u64 = (0..n).map(|r| exponents[r][p[r]]).sum::<u64>() % q;
        coeffs[e as usize] += if inversions % 2 == 0 { 1 } else { -1 };
    });
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * k as f64 / q as f64))
        .sum()
}

fn heap_permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(p);
        return;
    }
    heap_permutations(p, k - 1, visit);
    for i in 0..k - 1 {
        let swap = if k.is_multiple_of(2) { i } else { 0 };
        p.swap(swap, k - 1);
        heap_permutations(p, k - 1, visit);
    }
}

/// `e^(2πi·jk/n)` exponents of the Fourier matrix, 0-based `j, k`.
pub fn fourier_exponents(n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|j| (0..n).map(|k| ((j * k) % n) as u64).collect()).collect()
}
