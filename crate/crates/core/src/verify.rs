//! The property suites behind `parthad verify`.
//!
//! Each check is deterministic in [`Config::seed`] and returns an [`Outcome`]
//! with a one-line summary of what was measured.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exec::Execution;
use crate::hcompletion::{complete_row, gram_criterion, modulus_profile, weighted_criterion};
use crate::linalg::{self, CMatrix, CVector};
use crate::pperm::{self, PartialPermutation};
use crate::prelatin::PreLatinSquare;
use crate::submagic::{
    check_grid, classical_points, complete_2x2_to_4x4, complete_commuting, complete_last, grid_from_hadamard,
    pre_latin_from_rank_one, pre_latin_with_reference, random_grid, sum_bound_check, ProjGrid,
};
use crate::torus::{TorusMatrix, TorusScalar, DEFAULT_TOL};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "counting"),
    (2, "asymptotics"),
    (3, "fourier-pipeline"),
    (4, "deleted-row-completion"),
    (5, "criteria-concordance"),
    (6, "two-by-two-to-four-by-four"),
    (7, "subantipode"),
    (8, "tensor-semigroups"),
    (9, "two-row-family"),
    (10, "commuting-round-trip"),
];

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub seed: u64,
    pub exec: Execution,
    /// Positive and negative samples per `N` in the concordance suite.
    pub concordance_samples: usize,
    /// Random grids per dimension in the 2×2 completion suite.
    pub random_grids: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, exec: Execution::default(), concordance_samples: 100, random_grids: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, _)| run(id, cfg).expect("known id")).collect()
}

/// Runs one criterion by number; `None` for an unknown id.
pub fn run(id: u8, cfg: &Config) -> Option<Outcome> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let (passed, detail) = match id {
        1 => counting(),
        2 => asymptotics(),
        3 => fourier_pipeline(),
        4 => deleted_row(),
        5 => concordance(cfg),
        6 => two_by_two(cfg),
        7 => subantipode(cfg),
        8 => tensor_semigroups(cfg),
        9 => two_row_family_check(cfg),
        10 => commuting_round_trip(cfg),
        _ => return None,
    };
    Some(Outcome { id, name, passed, detail })
}

fn counting() -> (bool, String) {
    let expected = [1u64, 2, 7, 34, 209, 1546, 13327];
    let got: Vec<u64> = (0..=6).map(|n| pperm::count_all(n).to_u64().unwrap_or(0)).collect();
    let formula = got == expected;
    let enumerated = (0..=5).all(|n| {
        let all: Vec<PartialPermutation> = pperm::enumerate(n, n).expect("within limit").collect();
        let distinct: HashSet<&PartialPermutation> = all.iter().collect();
        all.len() as u64 == expected[n] && distinct.len() == all.len()
    });
    (formula && enumerated, format!("counts {got:?}, enumeration agrees for N <= 5: {enumerated}"))
}

fn asymptotics() -> (bool, String) {
    let start = Instant::now();
    let r: Vec<f64> = [25, 50, 100].iter().map(|&n| pperm::asymptotic_estimate_ratio(n)).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let in_band = (0.95..=1.05).contains(&r[2]);
    let decreasing = (r[0] - 1.0).abs() > (r[1] - 1.0).abs() && (r[1] - 1.0).abs() > (r[2] - 1.0).abs();
    let fast = elapsed < 1.0;
    (
        in_band && decreasing && fast,
        format!(
            "ratio {:.5} / {:.5} / {:.5} at N = 25/50/100; in [0.95, 1.05] at 100: {in_band}; |r-1| decreasing: {decreasing}; under 1 s: {fast}",
            r[0], r[1], r[2]
        ),
    )
}

fn fourier_rows(h: &TorusMatrix) -> Vec<CVector> {
    (1..=h.rows())
        .map(|i| CVector::from_vec(h.row(i).expect("row in range").iter().map(TorusScalar::to_complex).collect()))
        .collect()
}

fn fourier_pipeline() -> (bool, String) {
    let mut failures = Vec::new();
    for n in 2..=6 {
        let f = TorusMatrix::fourier(&[n]).expect("positive order");
        let ok = grid_from_hadamard(&f, DEFAULT_TOL).ok().is_some_and(|g| {
            let r = check_grid(&g, 1e-10);
            let natural = pre_latin_with_reference(&g, &fourier_rows(&f), 1e-10);
            let first_seen = pre_latin_from_rank_one(&g, n, 1e-10);
            match (natural, first_seen) {
                (Ok(natural), Ok(first_seen)) => {
                    let s = natural.square.semigroup();
                    r.submagic
                        && r.magic
                        && r.commuting
                        && natural.square == PreLatinSquare::cyclic(n)
                        && is_relabeling(&first_seen.square, &natural.square)
                        && s.order() == n
                        && s.is_group()
                }
                _ => false,
            }
        });
        if !ok {
            failures.push(n);
        }
    }
    (failures.is_empty(), format!("N = 2..6, failures at {failures:?}"))
}

/// True when `a` and `b` differ by a bijection of the alphabet.
fn is_relabeling(a: &PreLatinSquare, b: &PreLatinSquare) -> bool {
    if a.size() != b.size() || a.alphabet() != b.alphabet() {
        return false;
    }
    let mut map = vec![0; a.alphabet() + 1];
    let mut used = vec![false; a.alphabet() + 1];
    for (ra, rb) in a.rows().iter().zip(b.rows()) {
        for (&x, &y) in ra.iter().zip(&rb) {
            if map[x] == 0 {
                if used[y] {
                    return false;
                }
                map[x] = y;
                used[y] = true;
            } else if map[x] != y {
                return false;
            }
        }
    }
    true
}

fn deleted_row() -> (bool, String) {
    let tol = 1e-8;
    let mut worst_gram = 0.0_f64;
    let mut worst_phase = 0.0_f64;
    let mut errors = Vec::new();
    for n in 3..=8 {
        let f = TorusMatrix::fourier(&[n]).expect("positive order");
        let h = f.delete_row(n).expect("row in range");
        match complete_row(&h, tol) {
            Ok(full) => {
                let m = full.to_complex_matrix();
                let gram = &m * m.adjoint() - linalg::identity(n).scale(n as f64);
                worst_gram = worst_gram.max(gram.iter().map(|z| z.norm()).fold(0.0, f64::max));
                let new: Vec<Complex64> = full.row(n).expect("row").iter().map(TorusScalar::to_complex).collect();
                let old: Vec<Complex64> = f.row(n).expect("row").iter().map(TorusScalar::to_complex).collect();
                let unit = new[0] / old[0];
                let dev = new.iter().zip(&old).map(|(a, b)| (a / (unit * b)).arg().abs()).fold(0.0, f64::max);
                worst_phase = worst_phase.max(dev);
            }
            Err(e) => errors.push(format!("N={n}: {e}")),
        }
    }
    let passed = errors.is_empty() && worst_gram <= tol && worst_phase < tol;
    (
        passed,
        format!("N = 3..8, max |HH* - NI| = {worst_gram:.2e}, max phase deviation = {worst_phase:.2e}, errors {errors:?}"),
    )
}

/// `D1 · P1 · F_N · P2 · D2` with random phases and permutations.
pub fn randomized_fourier(n: usize, rng: &mut ChaCha8Rng) -> TorusMatrix {
    let f = TorusMatrix::fourier(&[n]).expect("positive order");
    let mut rows: Vec<usize> = (1..=n).collect();
    let mut cols: Vec<usize> = (1..=n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let d1: Vec<TorusScalar> = (0..n).map(|_| TorusScalar::from_angle(rng.random::<f64>() * TAU)).collect();
    let d2: Vec<TorusScalar> = (0..n).map(|_| TorusScalar::from_angle(rng.random::<f64>() * TAU)).collect();
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| d1[i].mul(f.entry(rows[i], cols[j])).mul(&d2[j]))
        .collect();
    TorusMatrix::new(n, n, entries).expect("shape")
}

/// Verdicts of the four completability tests on one `(N−1) × N` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub modulus_constant: bool,
    pub gram: bool,
    pub weighted: bool,
    pub complete_last: bool,
}

impl Verdicts {
    pub fn of(h: &TorusMatrix, tol: f64) -> Verdicts {
        Verdicts {
            modulus_constant: modulus_profile(h, tol).is_ok_and(|p| p.constant),
            gram: gram_criterion(h, tol).passes,
            weighted: weighted_criterion(h, tol).is_ok_and(|w| w.passes),
            complete_last: complete_last(&ProjGrid::from_row_quotients(h), tol).is_ok(),
        }
    }

    pub fn all(&self) -> bool {
        self.modulus_constant && self.gram && self.weighted && self.complete_last
    }

    pub fn none(&self) -> bool {
        !(self.modulus_constant || self.gram || self.weighted || self.complete_last)
    }
}

/// A completable instance and its perturbed negative, from the `k`-th stream for `N`.
pub fn concordance_pair(seed: u64, n: usize, k: usize) -> (TorusMatrix, TorusMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((n as u64) << 32 | k as u64);
    let full = randomized_fourier(n, &mut rng);
    let h = full.delete_row(rng.random_range(1..=n)).expect("row in range");
    let (r, c) = (rng.random_range(1..n), rng.random_range(1..=n));
    let mut entries = h.entries().to_vec();
    let idx = (r - 1) * n + (c - 1);
    entries[idx] = entries[idx].mul(&TorusScalar::from_angle(0.05));
    let neg = TorusMatrix::new(n - 1, n, entries).expect("shape");
    (h, neg)
}

fn concordance(cfg: &Config) -> (bool, String) {
    let tol = 1e-8;
    let mut summary = Vec::new();
    let mut passed = true;
    for n in 3..=6 {
        let verdicts = cfg.exec.map_range(cfg.concordance_samples, |k| {
            let (pos, neg) = concordance_pair(cfg.seed, n, k);
            (Verdicts::of(&pos, tol), Verdicts::of(&neg, tol))
        });
        let accepted = verdicts.iter().filter(|(p, _)| p.all()).count();
        let rejected = verdicts.iter().filter(|(_, q)| q.none()).count();
        let total = verdicts.len();
        passed &= total >= 100 && accepted == total && rejected == total;
        summary.push(format!("N={n}: {accepted}/{total} accepted, {rejected}/{total} rejected"));
    }
    (passed, summary.join("; "))
}

fn e1_counterexample() -> ProjGrid {
    let mut p = CMatrix::zeros(2, 2);
    p[(0, 0)] = Complex64::new(1.0, 0.0);
    let z = CMatrix::zeros(2, 2);
    ProjGrid::new(2, 2, vec![p.clone(), z.clone(), z, p]).expect("shape")
}

fn two_by_two(cfg: &Config) -> (bool, String) {
    let mut failures = 0;
    let mut total = 0;
    for d in [2, 4, 8] {
        let ok = cfg.exec.map_range(cfg.random_grids, |k| {
            let Ok(g) = random_grid(2, d, cfg.seed.wrapping_add(k as u64)) else {
                return false;
            };
            complete_2x2_to_4x4(&g, DEFAULT_TOL).is_ok_and(|full| full.extends(&g) && check_grid(&full, 1e-9).magic)
        });
        total += ok.len();
        failures += ok.iter().filter(|x| !**x).count();
    }
    let g = e1_counterexample();
    let no_3x3 = complete_last(&g, DEFAULT_TOL).is_err();
    let bound = sum_bound_check(&g, 3, DEFAULT_TOL);
    let bound_fails = !bound.passes && bound.lambda_min.abs() < 1e-12;
    (
        failures == 0 && total >= 600 && no_3x3 && bound_fails,
        format!(
            "{}/{total} random grids completed to magic 4x4; p=q counterexample: 3x3 refused {no_3x3}, lambda_min = {:.1e} (fails bound: {bound_fails})",
            total - failures,
            bound.lambda_min
        ),
    )
}

fn subantipode(cfg: &Config) -> (bool, String) {
    let results: Vec<bool> =
        (1..=4).map(|m| pperm::verify_subantipode_with(m, pperm::DEFAULT_LIMIT, cfg.exec).unwrap_or(false)).collect();
    (results.iter().all(|&b| b), format!("M = 1..4: {results:?}"))
}

fn semigroup_order(h: &TorusMatrix, seed: u64) -> Option<usize> {
    let g = grid_from_hadamard(h, DEFAULT_TOL).ok()?;
    let points = classical_points(&g, DEFAULT_TOL, seed).ok()?;
    Some(points.semigroup().ok()?.order())
}

fn tensor_semigroups(cfg: &Config) -> (bool, String) {
    let f = |n| TorusMatrix::fourier(&[n]).expect("positive order");
    let pairs: Vec<(usize, usize)> = (1..=4).flat_map(|m| (1..=4).map(move |n| (m, n))).collect();
    let checks = cfg.exec.map(&pairs, |&(m, n)| {
        let prod = semigroup_order(&f(m).tensor(&f(n)), cfg.seed);
        let (a, b) = (semigroup_order(&f(m), cfg.seed), semigroup_order(&f(n), cfg.seed));
        (prod, a.zip(b).map(|(a, b)| a * b))
    });
    let f2f2 = checks[pairs.iter().position(|&p| p == (2, 2)).expect("pair listed")].0;
    let bad: Vec<(usize, usize)> =
        pairs.iter().zip(&checks).filter(|(_, (p, q))| p.is_none() || p != q).map(|(pq, _)| *pq).collect();
    (f2f2 == Some(4) && bad.is_empty(), format!("|G(F2 x F2)| = {f2f2:?}; mismatched (m, n): {bad:?}"))
}

/// `[[1,1,1,1],[1,a1,a2,a3]]`-style rows with `Σa = 0` but generically `Σa² ≠ 0`.
pub fn random_two_row(rng: &mut ChaCha8Rng) -> TorusMatrix {
    let a1 = Complex64::from_polar(1.0, rng.random::<f64>() * TAU);
    let a2 = Complex64::from_polar(1.0, rng.random::<f64>() * TAU);
    let w = -(a1 + a2);
    // two unit vectors summing to w: w/2 ± i·(w/|w|)·sqrt(1 − |w|²/4)
    let half = (1.0 - w.norm_sqr() / 4.0).max(0.0).sqrt();
    let u = w / w.norm();
    let a3 = w / 2.0 + Complex64::i() * u * half;
    let a4 = w / 2.0 - Complex64::i() * u * half;
    let one = Complex64::new(1.0, 0.0);
    let values = [one, one, one, one, a1, a2, a3, a4];
    TorusMatrix::from_complex(2, 4, &values, 1e-12).expect("unit entries")
}

pub fn two_row_family() -> TorusMatrix {
    crate::torus::parse_phm("phm v1\n2 4\n1 1 1 1\n1 i -1 -i\n").expect("valid literal")
}

fn two_row_family_check(cfg: &Config) -> (bool, String) {
    let h = two_row_family();
    let row: Vec<Complex64> = h.row(2).expect("row").iter().map(TorusScalar::to_complex).collect();
    let s1: Complex64 = row.iter().sum();
    let s2: Complex64 = row.iter().map(|a| a * a).sum();
    let condition = s1.norm() < 1e-12 && s2.norm() < 1e-12;
    let Ok(g) = grid_from_hadamard(&h, DEFAULT_TOL) else {
        return (false, "family instance is not partial Hadamard".into());
    };
    let commuting = check_grid(&g, DEFAULT_TOL).commuting;
    let square = pre_latin_from_rank_one(&g, 4, DEFAULT_TOL).ok().map(|l| l.square);
    let square_ok = square.as_ref().is_some_and(|l| l.rows() == vec![vec![1, 2], vec![3, 1]]);
    let order = square.map(|l| l.semigroup().order());
    let noncommuting = cfg.exec.map_range(20, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        let h = random_two_row(&mut rng);
        grid_from_hadamard(&h, DEFAULT_TOL).is_ok_and(|g| !check_grid(&g, DEFAULT_TOL).commuting)
    });
    let nc = noncommuting.iter().filter(|b| **b).count();
    (
        condition && commuting && square_ok && order == Some(6) && nc == noncommuting.len(),
        format!(
            "sum conditions hold: {condition}; commuting: {commuting}; square [[1,2],[3,1]]: {square_ok}; semigroup order {order:?}; {nc}/{} random second rows non-commuting",
            noncommuting.len()
        ),
    )
}

fn commuting_round_trip(cfg: &Config) -> (bool, String) {
    let h = two_row_family();
    let run = || -> crate::Result<(bool, bool, bool)> {
        let g = grid_from_hadamard(&h, DEFAULT_TOL)?;
        let before = classical_points(&g, DEFAULT_TOL, cfg.seed)?;
        let full = complete_commuting(&g, 4, DEFAULT_TOL, cfg.seed)?;
        let report = check_grid(&full, DEFAULT_TOL);
        let after = classical_points(&full, DEFAULT_TOL, cfg.seed)?;
        let mut expected = before
            .multiset()
            .into_iter()
            .map(|(s, k)| Ok((s.embed_total(4)?, k)))
            .collect::<crate::Result<Vec<_>>>()?;
        expected.sort();
        Ok((report.magic && report.commuting, full.extends(&g), after.multiset() == expected))
    };
    match run() {
        Ok((magic, extends, points)) => (
            magic && extends && points,
            format!("commuting magic 4x4: {magic}; extends input: {extends}; points are the embedded points: {points}"),
        ),
        Err(e) => (false, format!("error: {e}")),
    }
}
