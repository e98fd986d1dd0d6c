//! Classical points of commuting grids and the rank one reduction to pre-Latin squares.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{check_grid, sum_tol, ProjGrid};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::pperm::{PartialPermutation, Semigroup};
use crate::prelatin::PreLatinSquare;

const RETRIES: u64 = 3;

/// A joint eigenspace of a commuting grid together with its partial permutation.
#[derive(Debug, Clone)]
pub struct ClassicalPoint {
    pub sigma: PartialPermutation,
    /// Orthonormal columns spanning the joint eigenspace.
    pub basis: CMatrix,
}

impl ClassicalPoint {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }
}

/// Joint eigenspaces of a commuting grid, one per distinct classical point,
/// sorted by partial permutation.
#[derive(Debug, Clone)]
pub struct JointDecomposition {
    size: usize,
    dim: usize,
    points: Vec<ClassicalPoint>,
}

impl JointDecomposition {
    pub fn points(&self) -> &[ClassicalPoint] {
        &self.points
    }

    /// Distinct classical points in sorted order.
    pub fn distinct(&self) -> Vec<PartialPermutation> {
        self.points.iter().map(|p| p.sigma.clone()).collect()
    }

    /// `(σ, multiplicity)` pairs; multiplicities sum to `d`.
    pub fn multiset(&self) -> Vec<(PartialPermutation, usize)> {
        self.points.iter().map(|p| (p.sigma.clone(), p.multiplicity())).collect()
    }

    /// The semigroup generated by the distinct classical points.
    pub fn semigroup(&self) -> Result<Semigroup> {
        Semigroup::generate(&self.distinct())
    }

    /// `P_ij = Σ_{σ_v(j) = i} Proj(v)`.
    pub fn regroup(&self) -> ProjGrid {
        let mut g = ProjGrid::zeros(self.size, self.dim);
        for p in &self.points {
            let pr = linalg::proj_onto_columns(&p.basis);
            for j in 1..=self.size {
                if let Some(i) = p.sigma.apply(j) {
                    g.blocks[(i - 1) * self.size + (j - 1)] += &pr;
                }
            }
        }
        g
    }
}

/// Joint eigenbasis of a commuting submagic grid, read off as partial
/// permutations via `σ_v(j) = i ⟺ P_ij v = v`.
pub fn classical_points(p: &ProjGrid, tol: f64, seed: u64) -> Result<JointDecomposition> {
    let report = check_grid(p, tol);
    if !report.commuting {
        return Err(Error::NotCommuting(report.worst_violations.commutator));
    }
    if !report.submagic {
        return Err(Error::NotSubmagic(format!("{:?}", report.worst_violations)));
    }
    let mut last = String::new();
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let subspaces = split(p, tol, &mut rng);
        match label(p, &subspaces, tol) {
            Ok(points) => {
                return Ok(JointDecomposition { size: p.size(), dim: p.dim(), points });
            }
            Err(msg) => last = msg,
        }
    }
    Err(Error::DegenerateSplit(last))
}

/// Splits `ℂ^d` by a random real combination of the blocks, then refines each
/// piece against every block until all blocks act as 0 or 1 on it.
fn split(p: &ProjGrid, tol: f64, rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let d = p.dim();
    let combo = p.blocks().iter().fold(CMatrix::zeros(d, d), |acc, b| {
        let w: f64 = rng.sample(StandardNormal);
        acc + b.scale(w)
    });
    let (values, vectors) = linalg::hermitian_eigen(&combo);
    let gap = 10.0 * tol;
    let mut pieces = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap {
            pieces.push(vectors.columns(start, k - start).into_owned());
            start = k;
        }
    }
    for b in p.blocks() {
        pieces = pieces
            .into_iter()
            .flat_map(|q| {
                let (vals, vecs) = linalg::hermitian_eigen(&(q.adjoint() * b * &q));
                let low = linalg::select_columns(&vals, &vecs, |v| v <= 0.5);
                let high = linalg::select_columns(&vals, &vecs, |v| v > 0.5);
                [&q * low, &q * high].into_iter().filter(|m| m.ncols() > 0)
            })
            .collect();
    }
    pieces
}

/// Reads each subspace as a partial permutation, verifying that every block
/// acts on it as exactly 0 or 1, and merges subspaces with equal points.
fn label(p: &ProjGrid, subspaces: &[CMatrix], tol: f64) -> std::result::Result<Vec<ClassicalPoint>, String> {
    let m = p.size();
    let vtol = 10.0 * sum_tol(tol, p.dim());
    let mut points: Vec<ClassicalPoint> = Vec::new();
    for q in subspaces {
        let k = q.ncols() as f64;
        let mut pairs = Vec::new();
        for i in 1..=m {
            for j in 1..=m {
                let b = p.block(i, j);
                let on = (q.adjoint() * b * q).trace().re / k > 0.5;
                let target = if on { q.clone() } else { CMatrix::zeros(q.nrows(), q.ncols()) };
                let defect = linalg::op_norm(&(b * q - target));
                if defect > vtol {
                    return Err(format!("block ({i},{j}) is not scalar on a joint eigenspace (defect {defect:.3e})"));
                }
                if on {
                    pairs.push((j, i));
                }
            }
        }
        let sigma = PartialPermutation::from_pairs(m, &pairs).map_err(|e| e.to_string())?;
        match points.iter_mut().find(|pt| pt.sigma == sigma) {
            Some(pt) => {
                let merged = CMatrix::from_columns(
                    &pt.basis.column_iter().chain(q.column_iter()).collect::<Vec<_>>(),
                );
                pt.basis = merged;
            }
            None => points.push(ClassicalPoint { sigma, basis: q.clone() }),
        }
    }
    points.sort_by(|a, b| a.sigma.cmp(&b.sigma));
    Ok(points)
}

/// A pre-Latin square read off a commuting rank one grid, with the unit vectors behind its labels.
#[derive(Debug, Clone)]
pub struct RankOneLabels {
    pub square: PreLatinSquare,
    /// `basis[x − 1]` spans the image of every block labelled `x`, for observed labels.
    pub basis: Vec<CVector>,
    /// `basis` extended to an orthonormal basis of `ℂ^d`.
    pub completed: Vec<CVector>,
}

fn require_submagic(p: &ProjGrid, tol: f64) -> Result<()> {
    let report = check_grid(p, tol);
    if report.submagic {
        Ok(())
    } else {
        Err(Error::NotSubmagic(format!("{:?}", report.worst_violations)))
    }
}

/// Unit vectors spanning each block image, row-major.
fn rank_one_images(p: &ProjGrid) -> Result<Vec<CVector>> {
    let m = p.size();
    let mut out = Vec::with_capacity(m * m);
    for i in 1..=m {
        for j in 1..=m {
            let r = linalg::range_basis(p.block(i, j));
            if r.ncols() != 1 {
                return Err(Error::RankError(i, j));
            }
            out.push(r.column(0).into_owned());
        }
    }
    Ok(out)
}

fn overlap(u: &CVector, v: &CVector) -> f64 {
    u.dotc(v).norm() / (u.norm() * v.norm())
}

/// `‖PQ − QP‖` for the rank one projections onto unit vectors with overlap `c`.
fn rank_one_commutator(c: f64) -> f64 {
    c * (1.0 - c * c).max(0.0).sqrt()
}

fn labelled(rows: Vec<Vec<usize>>, n_target: usize, basis: Vec<CVector>, d: usize) -> Result<RankOneLabels> {
    if basis.len() > n_target {
        return Err(Error::InvalidArgument(format!(
            "grid has {} distinct images, more than N = {n_target}",
            basis.len()
        )));
    }
    let square = PreLatinSquare::validate(&rows, n_target)?;
    let completed = complete_basis(&basis, d);
    Ok(RankOneLabels { square, basis, completed })
}

/// Clusters the rank one images of a submagic grid into equal-or-orthogonal
/// classes, labelling them in row-major first-seen order.
pub fn pre_latin_from_rank_one(p: &ProjGrid, n_target: usize, tol: f64) -> Result<RankOneLabels> {
    require_submagic(p, tol)?;
    let m = p.size();
    let mut basis: Vec<CVector> = Vec::new();
    let mut rows = vec![vec![0; m]; m];
    for (k, v) in rank_one_images(p)?.into_iter().enumerate() {
        let mut label = None;
        for (x, u) in basis.iter().enumerate() {
            let c = overlap(u, &v);
            if c >= 1.0 - tol {
                label = Some(x + 1);
                break;
            }
            if c > tol {
                return Err(Error::NotCommuting(rank_one_commutator(c)));
            }
        }
        rows[k / m][k % m] = label.unwrap_or_else(|| {
            basis.push(v);
            basis.len()
        });
    }
    labelled(rows, n_target, basis, p.dim())
}

/// Like [`pre_latin_from_rank_one`], with label `x` meaning the line spanned
/// by `reference[x − 1]`. The reference vectors must be pairwise orthogonal.
pub fn pre_latin_with_reference(p: &ProjGrid, reference: &[CVector], tol: f64) -> Result<RankOneLabels> {
    require_submagic(p, tol)?;
    if reference.iter().any(|v| v.len() != p.dim() || v.norm() == 0.0) {
        return Err(Error::DimensionMismatch("reference vectors must be nonzero vectors of the grid dimension".into()));
    }
    for (a, u) in reference.iter().enumerate() {
        if reference[a + 1..].iter().any(|v| overlap(u, v) > tol) {
            return Err(Error::InvalidArgument("reference vectors are not pairwise orthogonal".into()));
        }
    }
    let m = p.size();
    let mut rows = vec![vec![0; m]; m];
    for (k, v) in rank_one_images(p)?.into_iter().enumerate() {
        let mut label = None;
        for (x, u) in reference.iter().enumerate() {
            let c = overlap(u, &v);
            if c >= 1.0 - tol {
                label = Some(x + 1);
            } else if c > tol {
                return Err(Error::NotCommuting(rank_one_commutator(c)));
            }
        }
        rows[k / m][k % m] = label.ok_or_else(|| {
            Error::InvalidArgument(format!("image of block ({},{}) is not a reference line", k / m + 1, k % m + 1))
        })?;
    }
    let basis = reference.iter().map(|v| v.unscale(v.norm())).collect();
    labelled(rows, reference.len(), basis, p.dim())
}

/// Extends orthonormal vectors to an orthonormal basis of `ℂ^d`.
fn complete_basis(basis: &[CVector], d: usize) -> Vec<CVector> {
    let q = CMatrix::from_columns(basis);
    let rest = if basis.is_empty() {
        linalg::identity(d)
    } else {
        let complement = linalg::identity(d) - linalg::proj_onto_columns(&q);
        linalg::range_basis(&complement)
    };
    basis.iter().cloned().chain(rest.column_iter().map(|c| c.into_owned())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submagic::grid_from_hadamard;
    use crate::torus::{TorusMatrix, DEFAULT_TOL};

    fn pp(image: &[usize]) -> PartialPermutation {
        PartialPermutation::new(image.to_vec()).unwrap()
    }

    fn m2() -> ProjGrid {
        let h: TorusMatrix = crate::torus::parse_phm("phm v1\n2 4\n1 1 1 1\n1 i -1 -i\n").unwrap();
        grid_from_hadamard(&h, DEFAULT_TOL).unwrap()
    }

    fn close(a: &ProjGrid, b: &ProjGrid, tol: f64) -> bool {
        a.blocks().iter().zip(b.blocks()).all(|(x, y)| linalg::op_norm(&(x - y)) <= tol)
    }

    #[test]
    fn f2_points() {
        let g = grid_from_hadamard(&TorusMatrix::fourier(&[2]).unwrap(), DEFAULT_TOL).unwrap();
        let j = classical_points(&g, DEFAULT_TOL, 0).unwrap();
        assert_eq!(j.multiset(), vec![(pp(&[1, 2]), 1), (pp(&[2, 1]), 1)]);
        assert!(close(&j.regroup(), &g, 1e-12));
    }

    #[test]
    fn identity_grid_has_one_point() {
        let mut g = ProjGrid::zeros(3, 4);
        for i in 1..=3 {
            g.blocks[(i - 1) * 3 + (i - 1)] = linalg::identity(4);
        }
        let j = classical_points(&g, DEFAULT_TOL, 5).unwrap();
        assert_eq!(j.multiset(), vec![(PartialPermutation::identity(3), 4)]);
    }

    #[test]
    fn m2_family_points() {
        let j = classical_points(&m2(), DEFAULT_TOL, 0).unwrap();
        let got: Vec<(PartialPermutation, usize)> = j.multiset();
        assert_eq!(
            got,
            vec![
                (PartialPermutation::empty(2), 1),
                (pp(&[0, 1]), 1),
                (pp(&[2, 0]), 1),
                (pp(&[1, 2]), 1),
            ]
        );
        assert_eq!(j.semigroup().unwrap().order(), 6);
    }

    #[test]
    fn rejects_noncommuting() {
        let a = CVector::from_vec(vec![linalg::ONE, linalg::ZERO]);
        let b = CVector::from_vec(vec![linalg::ONE, linalg::ONE]);
        let g = ProjGrid::new(1, 2, vec![linalg::proj(&a)]).unwrap();
        assert!(classical_points(&g, DEFAULT_TOL, 0).is_ok());
        let z = CMatrix::zeros(2, 2);
        let g = ProjGrid::new(2, 2, vec![linalg::proj(&a), z.clone(), z, linalg::proj(&b)]).unwrap();
        assert!(matches!(classical_points(&g, DEFAULT_TOL, 0), Err(Error::NotCommuting(_))));
    }

    #[test]
    fn rank_one_labels() {
        let l = pre_latin_from_rank_one(&m2(), 4, DEFAULT_TOL).unwrap();
        assert_eq!(l.square.rows(), vec![vec![1, 2], vec![3, 1]]);
        assert_eq!(l.square.alphabet(), 4);
        assert_eq!(l.basis.len(), 3);
        assert_eq!(l.completed.len(), 4);

        let f3 = TorusMatrix::fourier(&[3]).unwrap();
        let g3 = grid_from_hadamard(&f3, DEFAULT_TOL).unwrap();
        let l3 = pre_latin_from_rank_one(&g3, 3, DEFAULT_TOL).unwrap();
        assert_eq!(l3.square.rows(), vec![vec![1, 2, 3], vec![3, 1, 2], vec![2, 3, 1]]);
        let rows: Vec<CVector> = (1..=3).map(|i| CVector::from_vec(f3.row(i).unwrap().iter().map(|s| s.to_complex()).collect())).collect();
        let natural = pre_latin_with_reference(&g3, &rows, DEFAULT_TOL).unwrap();
        assert_eq!(natural.square, PreLatinSquare::cyclic(3));

        let one = ProjGrid::new(1, 1, vec![linalg::identity(1)]).unwrap();
        assert_eq!(pre_latin_from_rank_one(&one, 1, DEFAULT_TOL).unwrap().square.rows(), vec![vec![1]]);
    }

    #[test]
    fn rank_one_errors() {
        let z = ProjGrid::zeros(1, 2);
        assert!(matches!(pre_latin_from_rank_one(&z, 1, DEFAULT_TOL), Err(Error::RankError(1, 1))));
        assert!(pre_latin_from_rank_one(&m2(), 2, DEFAULT_TOL).is_err());
        let e1 = CVector::from_vec(vec![linalg::ONE, linalg::ZERO, linalg::ZERO, linalg::ZERO]);
        assert!(pre_latin_with_reference(&m2(), &[e1], DEFAULT_TOL).is_err());
    }
}
