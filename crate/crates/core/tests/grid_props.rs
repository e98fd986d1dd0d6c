mod common;

use num_complex::Complex64;
use parthad::hcompletion::{complete_row, gram_criterion, kernel_vector, modulus_profile, weighted_criterion};
use parthad::linalg::{self, CMatrix, CVector};
use parthad::submagic::{
    check_grid, classical_points, complete_2x2_to_4x4, complete_commuting, complete_last, grid_from_hadamard,
    grid_from_pre_latin, parse_pgrid, pre_latin_from_rank_one, random_grid, to_pgrid, ProjGrid,
};
use parthad::torus::{TorusMatrix, TorusScalar, DEFAULT_TOL};
use parthad::verify;
use parthad::{PreLatinSquare, Semigroup};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn randomized_fourier(n: usize, seed: u64) -> TorusMatrix {
    verify::randomized_fourier(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn max_block_distance(a: &ProjGrid, b: &ProjGrid) -> f64 {
    a.blocks().iter().zip(b.blocks()).map(|(x, y)| linalg::op_norm(&(x - y))).fold(0.0, f64::max)
}

/// Random orthonormal basis of `ℂ^n`, columns of the QR factor of a seeded matrix.
fn random_basis(n: usize, seed: u64) -> Vec<CVector> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let q = g.qr().q();
    q.column_iter().map(|c| c.into_owned()).collect()
}

/// Random Latin square of order `n` (cyclic, rows and columns shuffled), cut to `m × m`.
fn pre_latin(n: usize, m: usize, seed: u64) -> PreLatinSquare {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut labels: Vec<usize> = (1..=n).collect();
    rows.shuffle(&mut rng);
    cols.shuffle(&mut rng);
    labels.shuffle(&mut rng);
    let square: Vec<Vec<usize>> =
        rows[..m].iter().map(|&i| cols[..m].iter().map(|&j| labels[(i + j) % n]).collect()).collect();
    PreLatinSquare::validate(&square, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hadamard_grids_are_submagic(n in 1usize..=6, m in 1usize..=6, seed in any::<u64>()) {
        let m = m.min(n);
        let h = randomized_fourier(n, seed).select_rows(&(1..=m).collect::<Vec<_>>())?;
        let r = check_grid(&grid_from_hadamard(&h, DEFAULT_TOL)?, 1e-10);
        prop_assert!(r.submagic, "{:?}", r.worst_violations);
    }

    #[test]
    fn complete_last_agrees_with_gram(n in 2usize..=6, seed in any::<u64>()) {
        let (pos, neg) = verify::concordance_pair(seed, n, 0);
        for h in [pos, neg] {
            let grid = ProjGrid::from_row_quotients(&h);
            prop_assert_eq!(complete_last(&grid, 1e-8).is_ok(), gram_criterion(&h, 1e-8).passes);
        }
    }

    #[test]
    fn completions_extend_exactly_and_are_magic(d in 1usize..=6, seed in any::<u64>()) {
        let g = random_grid(2, d, seed)?;
        let full = complete_2x2_to_4x4(&g, DEFAULT_TOL)?;
        prop_assert!(full.extends(&g));
        prop_assert!(check_grid(&full, 10.0 * DEFAULT_TOL).magic);

        let one = random_grid(1, d, seed)?;
        let two = complete_last(&one, DEFAULT_TOL)?;
        prop_assert!(two.extends(&one) && check_grid(&two, 10.0 * DEFAULT_TOL).magic);
    }

    #[test]
    fn full_hadamard_deleted_row_completes(n in 2usize..=6, seed in any::<u64>()) {
        let full = randomized_fourier(n, seed);
        let h = full.delete_row(n)?;
        let grid = grid_from_hadamard(&h, DEFAULT_TOL)?;
        let big = complete_last(&grid, DEFAULT_TOL)?;
        prop_assert!(big.extends(&grid) && check_grid(&big, 10.0 * DEFAULT_TOL).magic);
        let back = complete_row(&h, DEFAULT_TOL)?;
        prop_assert!(back.is_partial_hadamard(DEFAULT_TOL).ok);
        prop_assert!(back.entries().iter().all(|e| e.modulus_defect() <= 1e-9));
    }

    #[test]
    fn classical_points_rebuild_commuting_grids(n in 1usize..=6, m in 1usize..=6, seed in any::<u64>()) {
        // grids from a pre-Latin square over an orthonormal basis commute
        let m = m.min(n);
        let l = pre_latin(n, m, seed);
        let g = grid_from_pre_latin(&l, &random_basis(n, seed))?;
        let joint = classical_points(&g, DEFAULT_TOL, seed)?;
        prop_assert_eq!(joint.multiset().iter().map(|(_, k)| k).sum::<usize>(), n);
        prop_assert!(max_block_distance(&joint.regroup(), &g) < 1e-9);
    }

    #[test]
    fn rank_one_round_trip(n in 1usize..=6, m in 1usize..=6, seed in any::<u64>()) {
        let m = m.min(n);
        let g = grid_from_pre_latin(&pre_latin(n, m, seed), &random_basis(n, seed ^ 1))?;
        let labels = pre_latin_from_rank_one(&g, n, DEFAULT_TOL)?;
        let rebuilt = grid_from_pre_latin(&labels.square, &labels.basis)?;
        prop_assert!(max_block_distance(&rebuilt, &g) < 1e-9);
        let points = classical_points(&g, DEFAULT_TOL, seed)?;
        let from_points = Semigroup::generate(&points.distinct())?;
        let from_square = labels.square.semigroup();
        prop_assert_eq!(from_points.order(), from_square.order());
        prop_assert!(from_points.elements().all(|e| from_square.contains(e)));
    }

    #[test]
    fn commuting_completion_embeds_points(n in 1usize..=5, m in 1usize..=5, extra in 0usize..3, seed in any::<u64>()) {
        let m = m.min(n);
        let g = grid_from_pre_latin(&pre_latin(n, m, seed), &random_basis(n, seed))?;
        let target = m + (n - m) + extra;
        let full = complete_commuting(&g, target, DEFAULT_TOL, seed)?;
        let r = check_grid(&full, 10.0 * DEFAULT_TOL);
        prop_assert!(r.magic && r.commuting && full.extends(&g));
    }

    #[test]
    fn pgrid_round_trips(d in 1usize..=4, seed in any::<u64>()) {
        let g = random_grid(2, d, seed)?;
        prop_assert_eq!(parse_pgrid(&to_pgrid(&g))?, g);
    }

    #[test]
    fn kernel_is_orthogonal_and_matches_expansion(n in 2usize..=8, seed in any::<u64>()) {
        // exact Butson input: rows of F_n with permuted columns, one row deleted
        let f = TorusMatrix::fourier(&[n])?;
        let del = (seed % n as u64) as usize + 1;
        let h = f.delete_row(del)?;
        let k = kernel_vector(&h, DEFAULT_TOL)?;
        let scale = (n as f64).powf(n as f64 / 2.0);
        for i in 1..=h.rows() {
            let row: Vec<Complex64> = h.row(i)?.iter().map(TorusScalar::to_complex).collect();
            let ip: Complex64 = row.iter().zip(&k.z).map(|(a, z)| a * z.conj()).sum();
            prop_assert!(ip.norm() <= 1e-8 * scale);
        }
        if n <= 6 {
            let exps = common::fourier_exponents(n);
            for j in 1..=n {
                let minor: Vec<Vec<u64>> = exps.iter().enumerate().filter(|(r, _)| r + 1 != del)
                    .map(|(_, r)| r.iter().enumerate().filter(|(c, _)| c + 1 != j).map(|(_, &e)| e).collect())
                    .collect();
                prop_assert!((k.moduli[j - 1] - common::leibniz_det(&minor, n as u64).norm()).abs() < 1e-10);
            }
        }
        let profile = modulus_profile(&h, DEFAULT_TOL)?;
        prop_assert!(profile.constant && profile.hadamard_value);
        prop_assert!(gram_criterion(&h, DEFAULT_TOL).passes && weighted_criterion(&h, DEFAULT_TOL)?.passes);
    }
}

#[test]
fn pre_latin_grids_are_submagic() {
    for seed in 0..40 {
        for n in 1..=6 {
            for m in 1..=n {
                let l = pre_latin(n, m, seed);
                let r = check_grid(&grid_from_pre_latin(&l, &random_basis(n, seed)).unwrap(), 1e-10);
                assert!(r.submagic && r.commuting, "n={n} m={m} seed={seed}");
            }
        }
    }
}
