//! Finite-dimensional grids of projections.
//!
//! A [`ProjGrid`] is an `M × M` array of `d × d` complex matrices. It is
//! submagic when every block is an orthogonal projection and blocks sharing a
//! row or a column are pairwise orthogonal, and magic when in addition every
//! row and column sums to the identity. Grids built from a partial Hadamard
//! matrix use the rank one projections onto the row quotients `R_i / R_j`.
//!
//! Norms are operator norms throughout. Grid indices are 1-based.

mod classical;
mod completion;
mod pgrid;
mod random;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{self, CMatrix, CVector};
use crate::prelatin::PreLatinSquare;
use crate::torus::TorusMatrix;

pub use classical::{
    classical_points, pre_latin_from_rank_one, pre_latin_with_reference, ClassicalPoint, JointDecomposition, RankOneLabels,
};
pub use completion::{complete_2x2_to_4x4, complete_commuting, complete_last};
pub use pgrid::{parse_pgrid, to_pgrid};
pub use random::random_grid;

/// An `M × M` grid of `d × d` complex blocks, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjGrid {
    size: usize,
    dim: usize,
    blocks: Vec<CMatrix>,
}

impl ProjGrid {
    pub fn new(size: usize, dim: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != size * size {
            return Err(Error::DimensionMismatch(format!("{size}x{size} grid needs {} blocks", size * size)));
        }
        if let Some(b) = blocks.iter().find(|b| b.nrows() != dim || b.ncols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "block of shape {}x{} in a grid of dimension {dim}",
                b.nrows(),
                b.ncols()
            )));
        }
        Ok(ProjGrid { size, dim, blocks })
    }

    /// Builds a grid from `f(i, j)` with 1-based indices.
    pub fn from_fn(size: usize, dim: usize, mut f: impl FnMut(usize, usize) -> CMatrix) -> Result<Self> {
        let mut blocks = Vec::with_capacity(size * size);
        for i in 1..=size {
            for j in 1..=size {
                blocks.push(f(i, j));
            }
        }
        Self::new(size, dim, blocks)
    }

    pub fn zeros(size: usize, dim: usize) -> Self {
        ProjGrid { size, dim, blocks: vec![CMatrix::zeros(dim, dim); size * size] }
    }

    /// Grid size `M`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Block `P_ij`, 1-based.
    pub fn block(&self, i: usize, j: usize) -> &CMatrix {
        &self.blocks[(i - 1) * self.size + (j - 1)]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// `Σ_ij P_ij`.
    pub fn total(&self) -> CMatrix {
        self.blocks.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, b| acc + b)
    }

    pub fn row_sum(&self, i: usize) -> CMatrix {
        (1..=self.size).fold(CMatrix::zeros(self.dim, self.dim), |acc, j| acc + self.block(i, j))
    }

    pub fn column_sum(&self, j: usize) -> CMatrix {
        (1..=self.size).fold(CMatrix::zeros(self.dim, self.dim), |acc, i| acc + self.block(i, j))
    }

    /// True when the leading `M × M` blocks of `self` are bit-identical to `inner`.
    pub fn extends(&self, inner: &ProjGrid) -> bool {
        self.dim == inner.dim
            && self.size >= inner.size
            && (1..=inner.size).all(|i| (1..=inner.size).all(|j| self.block(i, j) == inner.block(i, j)))
    }

    /// Grid of rank one projections `P_ij = Proj(R_i / R_j)` without checking
    /// that the rows of `h` are orthogonal.
    pub fn from_row_quotients(h: &TorusMatrix) -> ProjGrid {
        let m = h.rows();
        let quotients: Vec<CVector> = (1..=m)
            .flat_map(|i| (1..=m).map(move |j| (i, j)))
            .map(|(i, j)| CVector::from_vec(h.row_quotient(i, j).expect("indices in range").to_complex()))
            .collect();
        let blocks = quotients.iter().map(linalg::proj).collect();
        ProjGrid { size: m, dim: h.cols(), blocks }
    }
}

/// `P_ij = Proj(R_i / R_j)` for a certified partial Hadamard `h`.
pub fn grid_from_hadamard(h: &TorusMatrix, tol: f64) -> Result<ProjGrid> {
    let report = h.is_partial_hadamard(tol);
    if !report.ok {
        let (i, j) = report.worst_pair.unwrap_or((1, 1));
        return Err(Error::NotHadamard(i, j));
    }
    Ok(ProjGrid::from_row_quotients(h))
}

/// `P_ij = Proj(ξ_{L_ij})` for a pre-Latin square and a list of basis vectors.
pub fn grid_from_pre_latin(square: &PreLatinSquare, basis: &[CVector]) -> Result<ProjGrid> {
    let dim = basis.first().map_or(0, |v| v.len());
    if basis.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch("basis vectors have different lengths".into()));
    }
    let m = square.size();
    for i in 1..=m {
        for j in 1..=m {
            if square.get(i, j) > basis.len() {
                return Err(Error::DimensionMismatch(format!("label {} has no basis vector", square.get(i, j))));
            }
        }
    }
    ProjGrid::from_fn(m, dim, |i, j| linalg::proj(&basis[square.get(i, j) - 1]))
}

/// Worst observed defects, each an operator norm.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Violations {
    /// `max ‖P² − P‖`
    pub idempotence: f64,
    /// `max ‖P − P*‖`
    pub hermiticity: f64,
    /// `max ‖P_ij P_ik‖`, `j ≠ k`
    pub row_orthogonality: f64,
    /// `max ‖P_ij P_kj‖`, `i ≠ k`
    pub column_orthogonality: f64,
    /// `max ‖Σ_j P_ij − 1‖`
    pub row_sum: f64,
    /// `max ‖Σ_i P_ij − 1‖`
    pub column_sum: f64,
    /// `max ‖P_ij P_kl − P_kl P_ij‖`
    pub commutator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub submagic: bool,
    pub magic: bool,
    pub commuting: bool,
    pub worst_violations: Violations,
}

/// Tolerance for sums of many blocks: `tol` scaled by the dimension.
pub(crate) fn sum_tol(tol: f64, dim: usize) -> f64 {
    tol * dim.max(1) as f64
}

pub fn check_grid(p: &ProjGrid, tol: f64) -> GridReport {
    check_grid_with(p, tol, Execution::default())
}

pub fn check_grid_with(p: &ProjGrid, tol: f64, exec: Execution) -> GridReport {
    let m = p.size;
    let nb = p.blocks.len();
    let defects = exec.map(&p.blocks, linalg::projection_defects);
    let idempotence = defects.iter().map(|d| d.0).fold(0.0, f64::max);
    let hermiticity = defects.iter().map(|d| d.1).fold(0.0, f64::max);

    let mut row_pairs = Vec::new();
    let mut col_pairs = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in (b + 1)..m {
                row_pairs.push((a * m + b, a * m + c));
                col_pairs.push((b * m + a, c * m + a));
            }
        }
    }
    let product_norm = |&(x, y): &(usize, usize)| linalg::op_norm(&(&p.blocks[x] * &p.blocks[y]));
    let row_orthogonality = exec.map(&row_pairs, product_norm).into_iter().fold(0.0, f64::max);
    let column_orthogonality = exec.map(&col_pairs, product_norm).into_iter().fold(0.0, f64::max);

    let id = linalg::identity(p.dim);
    let row_sum = (1..=m).map(|i| linalg::op_norm(&(p.row_sum(i) - &id))).fold(0.0, f64::max);
    let column_sum = (1..=m).map(|j| linalg::op_norm(&(p.column_sum(j) - &id))).fold(0.0, f64::max);

    let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|x| ((x + 1)..nb).map(move |y| (x, y))).collect();
    let commutator = exec.max_range(pairs.len(), |k| {
        let (x, y) = pairs[k];
        let (a, b) = (&p.blocks[x], &p.blocks[y]);
        linalg::op_norm(&(a * b - b * a))
    });

    let v = Violations {
        idempotence,
        hermiticity,
        row_orthogonality,
        column_orthogonality,
        row_sum,
        column_sum,
        commutator,
    };
    let submagic = v.idempotence <= tol
        && v.hermiticity <= tol
        && v.row_orthogonality <= tol
        && v.column_orthogonality <= tol;
    let magic = submagic && v.row_sum <= sum_tol(tol, p.dim) && v.column_sum <= sum_tol(tol, p.dim);
    GridReport { submagic, magic, commuting: v.commutator <= tol, worst_violations: v }
}

/// Smallest eigenvalue of `Σ_ij P_ij` against the bound `M − K`, `K = N − M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumBound {
    pub lambda_min: f64,
    pub bound: f64,
    pub passes: bool,
}

/// A failure certifies that no `N × N` magic completion exists; a pass is only necessary.
pub fn sum_bound_check(p: &ProjGrid, n: usize, tol: f64) -> SumBound {
    let lambda_min = linalg::lambda_min(&p.total());
    let bound = 2.0 * p.size as f64 - n as f64;
    SumBound { lambda_min, bound, passes: lambda_min >= bound - sum_tol(tol, p.dim) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{TorusScalar, DEFAULT_TOL};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn vecc(v: &[Complex64]) -> CVector {
        CVector::from_vec(v.to_vec())
    }

    fn f(n: usize) -> TorusMatrix {
        TorusMatrix::fourier(&[n]).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn f2_grid_is_magic() {
        let g = grid_from_hadamard(&f(2), DEFAULT_TOL).unwrap();
        let plus = linalg::proj(&vecc(&[c(1.0, 0.0), c(1.0, 0.0)]));
        let minus = linalg::proj(&vecc(&[c(1.0, 0.0), c(-1.0, 0.0)]));
        assert!(close(g.block(1, 1), &plus, 1e-15));
        assert!(close(g.block(1, 2), &minus, 1e-15));
        assert!(close(g.block(2, 1), &minus, 1e-15));
        assert!(close(g.block(2, 2), &plus, 1e-15));
        let r = check_grid(&g, 1e-10);
        assert!(r.submagic && r.magic && r.commuting);
    }

    #[test]
    fn diagonal_blocks_project_on_all_ones() {
        let h = f(5).select_rows(&[1, 3, 4]).unwrap();
        let g = grid_from_hadamard(&h, DEFAULT_TOL).unwrap();
        let ones = linalg::proj(&CVector::from_element(5, c(1.0, 0.0)));
        for i in 1..=3 {
            assert!(close(g.block(i, i), &ones, 1e-14));
        }
    }

    #[test]
    fn f3_top_rows_quotients() {
        let g = grid_from_hadamard(&f(3).select_rows(&[1, 2]).unwrap(), DEFAULT_TOL).unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let one = c(1.0, 0.0);
        assert!(close(g.block(1, 2), &linalg::proj(&vecc(&[one, w * w, w])), 1e-14));
        assert!(close(g.block(2, 1), &linalg::proj(&vecc(&[one, w, w * w])), 1e-14));
    }

    #[test]
    fn grid_needs_hadamard_input() {
        let h = TorusMatrix::from_rows(vec![vec![TorusScalar::ONE; 2]; 2]).unwrap();
        assert!(matches!(grid_from_hadamard(&h, DEFAULT_TOL), Err(Error::NotHadamard(1, 2))));
    }

    #[test]
    fn full_fourier_grids() {
        for n in 1..=6 {
            let r = check_grid(&grid_from_hadamard(&f(n), DEFAULT_TOL).unwrap(), 1e-10);
            assert!(r.submagic && r.magic && r.commuting, "n = {n}: {r:?}");
        }
    }

    #[test]
    fn zero_grid_is_submagic_not_magic() {
        let r = check_grid(&ProjGrid::zeros(3, 2), DEFAULT_TOL);
        assert!(r.submagic && !r.magic && r.commuting);
    }

    #[test]
    fn generic_two_row_grid_does_not_commute() {
        // second row (a1, a2, a3, a4) with Σa = 0 but Σa² ≠ 0
        let a1 = Complex64::from_polar(1.0, 0.3);
        let a2 = Complex64::from_polar(1.0, 2.0);
        let w = -(a1 + a2);
        let u = w / w.norm();
        let h = (1.0 - w.norm_sqr() / 4.0).sqrt();
        let a3 = w / 2.0 + c(0.0, 1.0) * u * h;
        let a4 = w / 2.0 - c(0.0, 1.0) * u * h;
        let mut vals = vec![c(1.0, 0.0); 4];
        vals.extend([a1, a2, a3, a4]);
        let hm = TorusMatrix::from_complex(2, 4, &vals, 1e-12).unwrap();
        let r = check_grid(&grid_from_hadamard(&hm, DEFAULT_TOL).unwrap(), DEFAULT_TOL);
        assert!(r.submagic && !r.commuting);
        assert!(r.worst_violations.commutator > 1e-3);
    }

    #[test]
    fn sum_bound_examples() {
        let g = grid_from_hadamard(&f(4), DEFAULT_TOL).unwrap();
        let s = sum_bound_check(&g, 4, DEFAULT_TOL);
        assert!((s.lambda_min - 4.0).abs() < 1e-12 && s.passes);

        let g = grid_from_hadamard(&f(3).select_rows(&[1, 2]).unwrap(), DEFAULT_TOL).unwrap();
        let s = sum_bound_check(&g, 3, DEFAULT_TOL);
        assert!((s.lambda_min - 1.0).abs() < 1e-12 && s.bound == 1.0 && s.passes);

        let p = linalg::proj(&vecc(&[c(1.0, 0.0), c(0.0, 0.0)]));
        let z = CMatrix::zeros(2, 2);
        let g = ProjGrid::new(2, 2, vec![p.clone(), z.clone(), z, p]).unwrap();
        let s = sum_bound_check(&g, 3, DEFAULT_TOL);
        assert!(s.lambda_min.abs() < 1e-12 && !s.passes);
    }

    #[test]
    fn pre_latin_grid_is_submagic() {
        let l = PreLatinSquare::validate(&[vec![1, 2], vec![3, 1]], 3).unwrap();
        let basis: Vec<CVector> = (0..3)
            .map(|k| CVector::from_fn(3, |r, _| if r == k { c(1.0, 0.0) } else { c(0.0, 0.0) }))
            .collect();
        let g = grid_from_pre_latin(&l, &basis).unwrap();
        let r = check_grid(&g, 1e-10);
        assert!(r.submagic && r.commuting && !r.magic);
        assert!(grid_from_pre_latin(&l, &basis[..2]).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(ProjGrid::new(2, 2, vec![CMatrix::zeros(2, 2); 3]).is_err());
        assert!(ProjGrid::new(1, 2, vec![CMatrix::zeros(3, 3)]).is_err());
    }
}
