mod common;

use num_complex::Complex64;
use parthad::linalg;
use parthad::torus::{parse_phm, to_phm, TorusMatrix, TorusScalar};
use proptest::prelude::*;

/// Exact partial Hadamard matrix: chosen rows of `D · F_n` with `D` a diagonal of
/// `4n`-th roots of unity and columns permuted.
fn exact_partial_hadamard(max_n: usize) -> impl Strategy<Value = TorusMatrix> {
    (1usize..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), 1..=n),
                proptest::collection::vec(0i64..(4 * n as i64), n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, rows, phases, cols)| {
            let f = TorusMatrix::fourier(&[n]).unwrap();
            let entries = rows
                .iter()
                .enumerate()
                .flat_map(|(r, &i)| {
                    let f = &f;
                    let phases = &phases;
                    cols.iter()
                        .map(move |&c| f.entry(i, c + 1).mul(&TorusScalar::root(phases[r], 4 * n as u64).unwrap()))
                        .collect::<Vec<_>>()
                })
                .collect();
            TorusMatrix::new(rows.len(), n, entries).unwrap()
        })
}

#[test]
fn fourier_is_hadamard_up_to_16() {
    for n in 1..=16 {
        let m = TorusMatrix::fourier(&[n]).unwrap().to_complex_matrix();
        let defect = &m * m.adjoint() - linalg::identity(n).scale(n as f64);
        assert!(defect.iter().all(|z| z.norm() <= 1e-10), "n = {n}");
    }
}

#[test]
fn minor_det_matches_exact_expansion() {
    // all (N−1)×N submatrices of F_N and of a scrambled Butson matrix
    for n in 2..=6 {
        let exps = common::fourier_exponents(n);
        for del in 0..n {
            let rows: Vec<Vec<u64>> = exps.iter().enumerate().filter(|(r, _)| *r != del).map(|(_, r)| r.clone()).collect();
            let text: Vec<String> = rows
                .iter()
                .map(|r| r.iter().map(|&e| if e == 0 { "1".to_string() } else { format!("{e}/{n}") }).collect::<Vec<_>>().join(" "))
                .collect();
            let h = parse_phm(&format!("phm v1\n{} {n}\n{}\n", n - 1, text.join("\n"))).unwrap();
            for j in 1..=n {
                let minor: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| c + 1 != j).map(|(_, &e)| e).collect())
                    .collect();
                let exact = common::leibniz_det(&minor, n as u64);
                assert!((h.minor_det(j).unwrap() - exact).norm() < 1e-10, "n={n} deleted row {del} column {j}");
            }
        }
    }
}

proptest! {
    #[test]
    fn tensor_preserves_hadamard_exactly(h in exact_partial_hadamard(4), k in exact_partial_hadamard(4)) {
        let r = h.tensor(&k).is_partial_hadamard(1e-9);
        prop_assert!(r.ok && r.exact);
    }

    #[test]
    fn row_quotients_are_orthogonal(h in exact_partial_hadamard(6)) {
        let (m, n) = (h.rows(), h.cols());
        let q = |i, j| h.row_quotient(i, j).unwrap();
        for i in 1..=m {
            for j in 1..=m {
                for k in 1..=m {
                    let expected = if j == k { n as f64 } else { 0.0 };
                    prop_assert!((q(i, j).inner(&q(i, k)) - Complex64::new(expected, 0.0)).norm() < 1e-10);
                    let expected = if i == k { n as f64 } else { 0.0 };
                    prop_assert!((q(i, j).inner(&q(k, j)) - Complex64::new(expected, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn random_exact_minors_match_expansion(
        (n, exps) in (2usize..=6).prop_flat_map(|n| (Just(n), proptest::collection::vec(proptest::collection::vec(0u64..12, n), n - 1)))
    ) {
        let text: Vec<String> = exps.iter().map(|r| r.iter().map(|e| format!("{e}/12")).collect::<Vec<_>>().join(" ")).collect();
        let h = parse_phm(&format!("phm v1\n{} {n}\n{}\n", n - 1, text.join("\n"))).unwrap();
        for j in 1..=n {
            let minor: Vec<Vec<u64>> = exps.iter().map(|r| r.iter().enumerate().filter(|(c, _)| c + 1 != j).map(|(_, &e)| e).collect()).collect();
            let exact = common::leibniz_det(&minor, 12);
            prop_assert!((h.minor_det(j)? - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn phm_round_trips(h in exact_partial_hadamard(6), angle in 0.0..std::f64::consts::TAU) {
        let mut entries = h.entries().to_vec();
        entries[0] = TorusScalar::from_angle(angle);
        let mixed = TorusMatrix::new(h.rows(), h.cols(), entries).unwrap();
        for m in [h, mixed] {
            prop_assert_eq!(parse_phm(&to_phm(&m)).unwrap(), m);
        }
    }
}
