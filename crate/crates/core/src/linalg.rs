//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| if s.is_nan() { f64::NAN } else { acc.max(s) })
}

/// Orthogonal projection onto the line spanned by `v` (zero for a zero vector).
pub fn proj(v: &CVector) -> CMatrix {
    let n2 = v.norm_squared();
    if n2 == 0.0 {
        return CMatrix::zeros(v.len(), v.len());
    }
    (v * v.adjoint()).unscale(n2)
}

/// Sum of projections onto the columns of an orthonormal basis `q`.
pub fn proj_onto_columns(q: &CMatrix) -> CMatrix {
    q * q.adjoint()
}

/// Eigendecomposition of the Hermitian part of `m`, eigenvalues ascending,
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()).unscale(2.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn lambda_min(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Columns of `vectors` whose eigenvalue satisfies `keep`, stacked into a matrix.
pub(crate) fn select_columns(values: &[f64], vectors: &CMatrix, keep: impl Fn(f64) -> bool) -> CMatrix {
    let cols: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| keep(v))
        .map(|(k, _)| k)
        .collect();
    CMatrix::from_fn(vectors.nrows(), cols.len(), |r, c| vectors[(r, cols[c])])
}

/// Orthonormal basis of the range of a (numerical) projection: eigenvectors with eigenvalue above 1/2.
pub fn range_basis(p: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(p);
    select_columns(&values, &vectors, |v| v > 0.5)
}

/// Orthonormal basis of the numerical null space of a positive semidefinite matrix.
pub fn psd_null_basis(m: &CMatrix, tol: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    select_columns(&values, &vectors, |v| v < tol)
}

/// Idempotence and Hermiticity defects `(‖P² − P‖, ‖P − P*‖)`.
pub fn projection_defects(p: &CMatrix) -> (f64, f64) {
    (op_norm(&(p * p - p)), op_norm(&(p - p.adjoint())))
}

/// Determinant by partially pivoted LU together with the relative
/// reconstruction residual `‖PA − LU‖ / ‖A‖` (Frobenius).
pub fn lu_determinant(a: &CMatrix) -> (Complex64, f64) {
    if a.nrows() == 0 {
        return (ONE, 0.0);
    }
    let lu = a.clone().lu();
    let det = lu.determinant();
    let (p, l, u) = lu.unpack();
    let mut pa = a.clone();
    p.permute_rows(&mut pa);
    let scale = a.norm();
    let residual = if scale == 0.0 { 0.0 } else { (pa - l * u).norm() / scale };
    (det, residual)
}

/// Inner product linear in the first argument: `Σ x_l · conj(y_l)`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}
