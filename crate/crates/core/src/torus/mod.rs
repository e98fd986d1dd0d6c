//! Matrices with unit-modulus entries: partial Hadamard checks, Fourier
//! matrices, tensor products, row quotients and minor determinants.
//!
//! Entries are kept exactly (as roots of unity) when the input allows it.
//! A matrix whose entries are all exact is in the exact representation;
//! anything else is evaluated in floating point. All row and column indices
//! taken or reported by this module are 1-based.
//!
//! Inner products are linear in the first argument and unnormalized:
//! `⟨x, y⟩ = Σ_l x_l · conj(y_l)`, so orthogonal rows of a partial Hadamard
//! matrix satisfy `⟨R_i, R_i⟩ = N`.

pub mod cyclotomic;
pub(crate) mod phm;
mod scalar;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub use phm::{parse_phm, to_phm};
pub use scalar::{Phase, TorusScalar};

/// Default tolerance for unit-modulus and orthogonality tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative LU residual above which a determinant is reported ill-conditioned.
pub const DET_RESIDUAL_TOL: f64 = 1e-9;

/// Whether every entry of a matrix is an exact root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Exact,
    Float,
}

/// A vector of unit-modulus scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusVector(pub Vec<TorusScalar>);

impl TorusVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().all(TorusScalar::is_exact)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(TorusScalar::to_complex).collect()
    }

    pub fn inner(&self, other: &TorusVector) -> Complex64 {
        linalg::inner(&self.to_complex(), &other.to_complex())
    }
}

/// Outcome of [`TorusMatrix::is_partial_hadamard`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HadamardReport {
    pub ok: bool,
    /// 1-based row pair with the largest `|⟨R_i, R_j⟩|`; `None` when `M = 1`.
    pub worst_pair: Option<(usize, usize)>,
    pub worst_value: f64,
    /// Largest `| |H_ij| − 1 |`.
    pub worst_modulus_defect: f64,
    /// True when orthogonality was decided by exact cyclotomic arithmetic.
    pub exact: bool,
}

/// An `M × N` matrix of unit-modulus entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TorusScalar>,
}

impl TorusMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TorusScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(TorusMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<TorusScalar>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows have different lengths".into()));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Float matrix from complex entries, each checked to be unit modulus within `tol`.
    pub fn from_complex(rows: usize, cols: usize, values: &[Complex64], tol: f64) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .map(|(k, &z)| {
                TorusScalar::from_complex(z, tol).map_err(|_| Error::NotUnitModulus {
                    row: k / cols.max(1) + 1,
                    col: k % cols.max(1) + 1,
                    modulus: z.norm(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, entries)
    }

    /// Generalized Fourier matrix `F_{N1} ⊗ … ⊗ F_{Nk}`, with `(F_N)_{jk} = e^(2πi·jk/N)`.
    pub fn fourier(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::InvalidArgument("Fourier orders must be a nonempty list of positive integers".into()));
        }
        let single = |n: usize| -> Result<TorusMatrix> {
            let mut entries = Vec::with_capacity(n * n);
            for j in 0..n {
                for k in 0..n {
                    entries.push(TorusScalar::root(((j * k) % n) as i64, n as u64)?);
                }
            }
            TorusMatrix::new(n, n, entries)
        };
        let mut out = single(orders[0])?;
        for &n in &orders[1..] {
            out = out.tensor(&single(n)?);
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[TorusScalar] {
        &self.entries
    }

    /// Entry `(i, j)`, 1-based. Panics when out of range.
    pub fn entry(&self, i: usize, j: usize) -> &TorusScalar {
        assert!((1..=self.rows).contains(&i) && (1..=self.cols).contains(&j), "entry ({i},{j}) out of range");
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> Result<&[TorusScalar]> {
        self.check_row(i)?;
        Ok(&self.entries[(i - 1) * self.cols..i * self.cols])
    }

    fn row0(&self, i: usize) -> &[TorusScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if (1..=self.rows).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, bound: self.rows })
        }
    }

    pub fn representation(&self) -> Representation {
        if self.entries.iter().all(TorusScalar::is_exact) {
            Representation::Exact
        } else {
            Representation::Float
        }
    }

    pub fn is_exact(&self) -> bool {
        self.representation() == Representation::Exact
    }

    pub fn to_complex_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |r, c| self.entries[r * self.cols + c].to_complex())
    }

    fn complex_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| self.row0(i).iter().map(TorusScalar::to_complex).collect())
            .collect()
    }

    /// `(H ⊗ K)_{ia,jb} = H_ij K_ab`, double indices lexicographic with the
    /// first factor's index outer.
    pub fn tensor(&self, other: &TorusMatrix) -> TorusMatrix {
        let (m, n) = (other.rows, other.cols);
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for i in 0..self.rows {
            for a in 0..m {
                for j in 0..self.cols {
                    let h = &self.entries[i * self.cols + j];
                    for b in 0..n {
                        entries.push(h.mul(&other.entries[a * n + b]));
                    }
                }
            }
        }
        TorusMatrix { rows: self.rows * m, cols: self.cols * n, entries }
    }

    /// The submatrix formed by the given 1-based rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<TorusMatrix> {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i)?);
        }
        TorusMatrix::new(rows.len(), self.cols, entries)
    }

    /// The matrix with 1-based row `i` removed.
    pub fn delete_row(&self, i: usize) -> Result<TorusMatrix> {
        self.check_row(i)?;
        let keep: Vec<usize> = (1..=self.rows).filter(|&r| r != i).collect();
        self.select_rows(&keep)
    }

    pub fn append_row(&self, row: Vec<TorusScalar>) -> Result<TorusMatrix> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("row of length {} for {} columns", row.len(), self.cols)));
        }
        let mut entries = self.entries.clone();
        entries.extend(row);
        TorusMatrix::new(self.rows + 1, self.cols, entries)
    }

    /// `ξ_ij = R_i / R_j` entrywise; exact when both rows are.
    pub fn row_quotient(&self, i: usize, j: usize) -> Result<TorusVector> {
        let (ri, rj) = (self.row(i)?, self.row(j)?);
        Ok(TorusVector(ri.iter().zip(rj).map(|(a, b)| a.div(b)).collect()))
    }

    /// Determinant of the square matrix obtained by deleting 1-based column `j`
    /// from an `(N−1) × N` matrix.
    pub fn minor_det(&self, j: usize) -> Result<Complex64> {
        if self.rows + 1 != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "minor determinants need an (N-1)xN matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if !(1..=self.cols).contains(&j) {
            return Err(Error::IndexOutOfRange { index: j, bound: self.cols });
        }
        let n = self.rows;
        let minor = CMatrix::from_fn(n, n, |r, c| {
            let col = if c + 1 < j { c } else { c + 1 };
            self.entries[r * self.cols + col].to_complex()
        });
        let (det, residual) = linalg::lu_determinant(&minor);
        if residual.is_nan() || residual > DET_RESIDUAL_TOL {
            return Err(Error::IllConditioned(residual));
        }
        Ok(det)
    }

    /// Tests pairwise row orthogonality (`|⟨R_i, R_j⟩| ≤ tol·N`) and unit moduli
    /// (within `tol`). Rows that are both exact are decided exactly.
    pub fn is_partial_hadamard(&self, tol: f64) -> HadamardReport {
        let rows = self.complex_rows();
        let worst_modulus_defect = self.entries.iter().map(TorusScalar::modulus_defect).fold(0.0, f64::max);
        let mut ok = worst_modulus_defect <= tol;
        let mut exact = true;
        let mut worst_pair = None;
        let mut worst_value = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.rows {
                let value = linalg::inner(&rows[i], &rows[j]).norm();
                if worst_pair.is_none() || value > worst_value {
                    worst_value = value;
                    worst_pair = Some((i + 1, j + 1));
                }
                let orthogonal = match exact_inner_vanishes(self.row0(i), self.row0(j)) {
                    Some(v) => v,
                    None => {
                        exact = false;
                        value <= tol * self.cols as f64
                    }
                };
                ok &= orthogonal;
            }
        }
        HadamardReport { ok, worst_pair, worst_value, worst_modulus_defect, exact: exact && self.is_exact() }
    }
}

/// Exact test of `⟨x, y⟩ = 0` for rows of roots of unity. `None` if either row
/// has a float entry or the common order is too large.
fn exact_inner_vanishes(x: &[TorusScalar], y: &[TorusScalar]) -> Option<bool> {
    let mut terms = Vec::with_capacity(x.len());
    let mut order: u64 = 1;
    for (a, b) in x.iter().zip(y) {
        let p = a.phase()?.checked_mul(b.phase()?.conj())?;
        order = num_integer::lcm(order, p.denominator());
        if order > cyclotomic::MAX_ORDER {
            return None;
        }
        terms.push(p);
    }
    let mut counts = vec![0i64; order as usize];
    for p in terms {
        counts[(p.numerator() * (order / p.denominator())) as usize] += 1;
    }
    cyclotomic::vanishes(&counts)
}
