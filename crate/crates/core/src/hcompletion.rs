//! Completing `(N−1) × N` partial Hadamard matrices by one row.
//!
//! The orthogonal complement of the rows is spanned by the cofactor vector
//! `Z_j = (−1)^j · conj(det H^(j))`, with `H^(j)` the minor deleting column `j`
//! (1-based). A completion exists iff all `|det H^(j)|` are equal, in which
//! case they equal `N^(N/2−1)` and the new row is `N^(1−N/2) · Z`.
//!
//! Two further criteria live on the grid side: the column Gram matrix test
//! and the weighted test `H D H* = c·1` with `D = diag |Z_k|²`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Obstruction, Result};
use crate::exec::Execution;
use crate::linalg::{self, CMatrix};
use crate::torus::{Phase, TorusMatrix, TorusScalar};

/// Cofactor kernel of an `(N−1) × N` matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelData {
    pub z: Vec<Complex64>,
    /// `det H^(j)` for `j = 1..=N`.
    pub minors: Vec<Complex64>,
    /// `|Z_j| = |det H^(j)|`.
    pub moduli: Vec<f64>,
}

/// `N^(N/2 − 1)`, the common minor modulus of a completable matrix.
pub fn hadamard_scale(n: usize) -> f64 {
    (n as f64).powf(n as f64 / 2.0 - 1.0)
}

/// The cofactor vector without checking orthogonality of the rows.
pub fn cofactor_kernel(h: &TorusMatrix) -> Result<KernelData> {
    cofactor_kernel_with(h, Execution::default())
}

pub fn cofactor_kernel_with(h: &TorusMatrix, exec: Execution) -> Result<KernelData> {
    let n = h.cols();
    if h.rows() + 1 != n {
        return Err(Error::DimensionMismatch(format!("expected an (N-1)xN matrix, got {}x{n}", h.rows())));
    }
    let minors = exec.map_range(n, |k| h.minor_det(k + 1)).into_iter().collect::<Result<Vec<_>>>()?;
    let z = minors
        .iter()
        .enumerate()
        .map(|(k, d)| if (k + 1) % 2 == 0 { d.conj() } else { -d.conj() })
        .collect();
    let moduli = minors.iter().map(|d| d.norm()).collect();
    Ok(KernelData { z, minors, moduli })
}

/// The cofactor kernel of a certified partial Hadamard matrix, with
/// `max_i |⟨R_i, Z⟩| ≤ tol · N^(N/2)` checked.
pub fn kernel_vector(h: &TorusMatrix, tol: f64) -> Result<KernelData> {
    let report = h.is_partial_hadamard(tol);
    if !report.ok {
        let (i, j) = report.worst_pair.unwrap_or((1, 1));
        return Err(Error::NotHadamard(i, j));
    }
    let k = cofactor_kernel(h)?;
    let n = h.cols();
    let bound = tol * (n as f64).powf(n as f64 / 2.0);
    // ⟨R_i, Z⟩ = Σ_l H_il · conj(Z_l)
    let z = linalg::CVector::from_iterator(k.z.len(), k.z.iter().map(|v| v.conj()));
    let worst = (h.to_complex_matrix() * z).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if worst > bound {
        return Err(Error::IllConditioned(worst / (n as f64).powf(n as f64 / 2.0)));
    }
    Ok(k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusProfile {
    /// `|det H^(j)|`.
    pub moduli: Vec<f64>,
    /// `N^(N/2 − 1)`.
    pub scale: f64,
    /// `max − min ≤ tol · scale`.
    pub constant: bool,
    /// Every modulus within `tol · scale` of `scale`.
    pub hadamard_value: bool,
}

/// Minor moduli of an `(N−1) × N` matrix, evaluated as given.
pub fn modulus_profile(h: &TorusMatrix, tol: f64) -> Result<ModulusProfile> {
    let moduli = cofactor_kernel(h)?.moduli;
    let scale = hadamard_scale(h.cols());
    let max = moduli.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    let constant = max - min <= tol * scale;
    let hadamard_value = moduli.iter().all(|m| (m - scale).abs() <= tol * scale);
    Ok(ModulusProfile { moduli, scale, constant, hadamard_value })
}

/// Snaps `z` to an exact root of unity of order `order` when within `tol`.
fn snap(z: Complex64, order: u64, tol: f64) -> TorusScalar {
    let turns = z.arg() / std::f64::consts::TAU * order as f64;
    let k = turns.round() as i64;
    match Phase::new(k, order) {
        Ok(p) if (p.to_complex() - z).norm() <= tol => TorusScalar::Root(p),
        _ => TorusScalar::Float(z),
    }
}

/// Appends `H_Nj = N^(1 − N/2) · Z_j`. Entries that land on roots of unity of
/// order `4q`, with `q` the common order of an exact input, are stored exactly.
pub fn complete_row(h: &TorusMatrix, tol: f64) -> Result<TorusMatrix> {
    let k = kernel_vector(h, tol)?;
    let profile = modulus_profile(h, tol)?;
    if !profile.constant {
        return Err(Error::NotCompletable(Obstruction::ModulusProfile { moduli: profile.moduli }));
    }
    let n = h.cols();
    let factor = (n as f64).powf(1.0 - n as f64 / 2.0);
    let order = h
        .entries()
        .iter()
        .map(|s| s.phase().map(Phase::denominator))
        .try_fold(1u64, |acc, q| q.map(|q| num_integer::lcm(acc, q)))
        .map(|q| 4 * q);
    let row = k
        .z
        .iter()
        .map(|&z| {
            let v = z * factor;
            match order {
                Some(q) if q <= crate::torus::cyclotomic::MAX_ORDER => snap(v, q, 1e-12),
                _ => TorusScalar::Float(v),
            }
        })
        .collect();
    let full = h.append_row(row)?;
    let report = full.is_partial_hadamard(tol);
    if !report.ok {
        let (i, j) = report.worst_pair.unwrap_or((n, n));
        return Err(Error::NotHadamard(i, j));
    }
    Ok(full)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub passes: bool,
    /// `max(‖Q² − Q‖, ‖Q − Q*‖)` for `Q = G − (N−2)·1`.
    pub defect: f64,
}

/// `G_kl = |⟨C_k, C_l⟩|² / N` over the columns `C_k`; passes iff `G − (N−2)·1`
/// is a projection within `tol · N`.
pub fn gram_criterion(h: &TorusMatrix, tol: f64) -> GramReport {
    let n = h.cols();
    let c = h.to_complex_matrix();
    let cols: Vec<Vec<Complex64>> = (0..n).map(|k| c.column(k).iter().copied().collect()).collect();
    let mut q = CMatrix::from_fn(n, n, |k, l| {
        Complex64::new(linalg::inner(&cols[k], &cols[l]).norm_sqr() / n as f64, 0.0)
    });
    for k in 0..n {
        q[(k, k)] -= Complex64::new(n as f64 - 2.0, 0.0);
    }
    let (idem, herm) = linalg::projection_defects(&q);
    let defect = idem.max(herm);
    GramReport { passes: defect <= tol * n as f64, defect }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedReport {
    pub passes: bool,
    /// `c = Σ_k |Z_k|²`.
    pub c: f64,
    /// `‖H D H* − c·1‖`.
    pub defect: f64,
}

/// Tests `H D H* = c·1` with `D = diag |Z_k|²`, relative to `c`.
pub fn weighted_criterion(h: &TorusMatrix, tol: f64) -> Result<WeightedReport> {
    let k = cofactor_kernel(h)?;
    let m = h.to_complex_matrix();
    let weights: Vec<f64> = k.moduli.iter().map(|x| x * x).collect();
    let c: f64 = weights.iter().sum();
    let mut hd = m.clone();
    for (col, w) in weights.iter().enumerate() {
        hd.column_mut(col).scale_mut(*w);
    }
    let gram = hd * m.adjoint();
    let defect = linalg::op_norm(&(gram - linalg::identity(h.rows()).scale(c)));
    Ok(WeightedReport { passes: defect <= tol * c, c, defect })
}
