//! Completing submagic grids to magic ones.

use super::{check_grid, classical_points, sum_tol, ProjGrid};
use crate::error::{Error, Obstruction, Result};
use crate::linalg::{self, CMatrix};

fn require_submagic(p: &ProjGrid, tol: f64) -> Result<()> {
    let report = check_grid(p, tol);
    if report.submagic {
        Ok(())
    } else {
        Err(Error::NotSubmagic(format!("{:?}", report.worst_violations)))
    }
}

/// Writes the blocks of `inner` into the top-left corner of `outer`.
fn embed(outer: &mut ProjGrid, inner: &ProjGrid) {
    let (big, m) = (outer.size, inner.size);
    for i in 0..m {
        for j in 0..m {
            outer.blocks[i * big + j] = inner.blocks[i * m + j].clone();
        }
    }
}

/// Adds one row and column: `P_iN = 1 − Σ_j P_ij`, `P_Nj = 1 − Σ_i P_ij`,
/// `P_NN = Σ_ij P_ij − (N − 2)·1`. Succeeds iff the corner is a projection.
pub fn complete_last(p: &ProjGrid, tol: f64) -> Result<ProjGrid> {
    require_submagic(p, tol)?;
    let m = p.size;
    let n = m + 1;
    let d = p.dim;
    let id = linalg::identity(d);
    let corner = p.total() - id.scale(n as f64 - 2.0);
    let (idem, herm) = linalg::projection_defects(&corner);
    let defect = idem.max(herm);
    if defect > sum_tol(tol, d) {
        return Err(Error::NotCompletable(Obstruction::CornerNotProjection { defect }));
    }
    let mut out = ProjGrid::zeros(n, d);
    embed(&mut out, p);
    for k in 1..=m {
        out.blocks[(k - 1) * n + m] = &id - p.row_sum(k);
        out.blocks[m * n + (k - 1)] = &id - p.column_sum(k);
    }
    out.blocks[m * n + m] = corner;
    Ok(out)
}

/// Completes a commuting submagic `M × M` grid to a commuting magic `N × N`
/// grid through its classical points, extending each by `embed_total(N)`.
pub fn complete_commuting(p: &ProjGrid, n: usize, tol: f64, seed: u64) -> Result<ProjGrid> {
    let m = p.size;
    if n < m {
        return Err(Error::InvalidArgument(format!("target size {n} is smaller than the grid size {m}")));
    }
    let joint = classical_points(p, tol, seed)?;
    let allowed = n - m;
    if let Some(pt) = joint.points().iter().find(|pt| pt.sigma.undefined_count() > allowed) {
        return Err(Error::NotCompletable(Obstruction::ClassicalPoint {
            point: pt.sigma.clone(),
            undefined: pt.sigma.undefined_count(),
            allowed,
        }));
    }
    let mut out = ProjGrid::zeros(n, p.dim);
    for pt in joint.points() {
        let total = pt.sigma.embed_total(n)?;
        let pr = linalg::proj_onto_columns(&pt.basis);
        for j in 1..=n {
            let i = total.apply(j).expect("embedding is total");
            out.blocks[(i - 1) * n + (j - 1)] += &pr;
        }
    }
    embed(&mut out, p);
    Ok(out)
}

/// Completes any submagic `[[p, r], [s, q]]` to a magic `4 × 4` grid.
///
/// With `z` the projection onto `ker p ∩ ker q`, the antidiagonal pattern
/// `[[0,r,r^c,0],[s,0,0,s^c],[s^c,0,0,s],[0,r^c,r,0]]` is used on `z` and the
/// diagonal pattern `[[p,0,p^c,0],[0,q,0,q^c],[p^c,0,p,0],[0,q^c,0,q]]` on
/// `1 − z`, complements taken relative to each piece.
pub fn complete_2x2_to_4x4(p: &ProjGrid, tol: f64) -> Result<ProjGrid> {
    if p.size != 2 {
        return Err(Error::InvalidArgument(format!("expected a 2x2 grid, got {}x{}", p.size, p.size)));
    }
    require_submagic(p, tol)?;
    let d = p.dim;
    let (pp, r, s, q) = (p.block(1, 1), p.block(1, 2), p.block(2, 1), p.block(2, 2));
    let z = linalg::proj_onto_columns(&linalg::psd_null_basis(&(pp + q), tol));
    let zc = linalg::identity(d) - &z;
    let rc = &z - r;
    let sc = &z - s;
    let pc = &zc - pp;
    let qc = &zc - q;
    let o = CMatrix::zeros(d, d);
    let blocks = vec![
        pp.clone(), r.clone(), &rc + &pc, o.clone(),
        s.clone(), q.clone(), o.clone(), &sc + &qc,
        &sc + &pc, o.clone(), pp.clone(), s.clone(),
        o, &rc + &qc, r.clone(), q.clone(),
    ];
    ProjGrid::new(4, d, blocks)
}
