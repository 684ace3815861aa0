//! Exact phase-one simplex over the rationals, used to find vertex solutions of small
//! assignment relaxations.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Finds a basic feasible solution of `A x = b, x ≥ 0` (with `b ≥ 0`), or `None` if the
/// system is infeasible. `slack_of[row]` names a column that is a unit vector for that row,
/// if one exists; other rows receive artificial columns.
pub(crate) fn feasible_vertex(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    slack_of: &[Option<usize>],
) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let arts: Vec<usize> = (0..rows).filter(|&r| slack_of[r].is_none()).collect();
    let width = cols + arts.len();
    let mut t: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.resize(width, BigRational::zero());
            r
        })
        .collect();
    let mut rhs = b.to_vec();
    let mut basis = vec![0; rows];
    for (k, &r) in arts.iter().enumerate() {
        t[r][cols + k] = BigRational::one();
        basis[r] = cols + k;
    }
    for r in 0..rows {
        if let Some(c) = slack_of[r] {
            basis[r] = c;
        }
    }
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut d = vec![BigRational::zero(); width];
    for &r in &arts {
        for c in 0..cols {
            d[c] -= &t[r][c];
        }
    }
    while let Some(enter) = (0..width).find(|&c| d[c].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..rows {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[r] / &t[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let (pr, _) = leave.expect("phase one is bounded below");
        let piv = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x = &*x / &piv;
        }
        rhs[pr] = &rhs[pr] / &piv;
        let prow = t[pr].clone();
        let prhs = rhs[pr].clone();
        for r in 0..rows {
            if r == pr || t[r][enter].is_zero() {
                continue;
            }
            let f = t[r][enter].clone();
            for c in 0..width {
                if !prow[c].is_zero() {
                    t[r][c] -= &f * &prow[c];
                }
            }
            rhs[r] -= &f * &prhs;
        }
        let f = d[enter].clone();
        for c in 0..width {
            if !prow[c].is_zero() {
                d[c] -= &f * &prow[c];
            }
        }
        basis[pr] = enter;
    }
    let residual: BigRational = (0..rows).filter(|&r| basis[r] >= cols).map(|r| rhs[r].clone()).sum();
    if residual.is_positive() {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for r in 0..rows {
        if basis[r] < cols {
            x[basis[r]] = rhs[r].clone();
        }
    }
    Some(x)
}
