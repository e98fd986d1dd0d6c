//! Seeded sampling of small submagic grids.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ProjGrid;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Orthonormal basis of a uniformly random `k`-dimensional subspace of the span of `within`.
fn random_subspace(rng: &mut ChaCha8Rng, within: &CMatrix, k: usize) -> CMatrix {
    if k == 0 {
        return CMatrix::zeros(within.nrows(), 0);
    }
    let q = gaussian(rng, within.ncols(), k).qr().q();
    within * q
}

/// Projection onto the columns of `basis`, exact at rank `0` and `d`.
fn projection(basis: &CMatrix) -> CMatrix {
    let d = basis.nrows();
    match basis.ncols() {
        0 => CMatrix::zeros(d, d),
        k if k == d => linalg::identity(d),
        _ => linalg::proj_onto_columns(basis),
    }
}

/// Splits a random unitary basis of `ℂ^d` into a random-dimensional `W` and its complement.
fn random_split(rng: &mut ChaCha8Rng, d: usize) -> (CMatrix, CMatrix) {
    let u = gaussian(rng, d, d).qr().q();
    let w = rng.random_range(0..=d);
    (u.columns(0, w).into_owned(), u.columns(w, d - w).into_owned())
}

/// A random submagic grid, deterministic in `seed`.
///
/// For `M = 2`, `p` and `q` are random subspaces of a random `W` and `r`, `s`
/// random subspaces of `W^⊥ ⊆ ker p ∩ ker q`.
pub fn random_grid(m: usize, d: usize, seed: u64) -> Result<ProjGrid> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = linalg::identity(d);
    match m {
        1 => {
            let k = rng.random_range(0..=d);
            ProjGrid::new(1, d, vec![projection(&random_subspace(&mut rng, &full, k))])
        }
        2 => {
            let (w, z) = random_split(&mut rng, d);
            let mut sub = |within: &CMatrix| {
                let k = rng.random_range(0..=within.ncols());
                projection(&random_subspace(&mut rng, within, k))
            };
            let p = sub(&w);
            let q = sub(&w);
            let r = sub(&z);
            let s = sub(&z);
            ProjGrid::new(2, d, vec![p, r, s, q])
        }
        _ => Err(Error::Unsupported(m)),
    }
}
