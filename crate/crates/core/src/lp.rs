//! Dense phase-one simplex for nonnegative feasibility systems.
//!
//! Every LP in the toolkit has the form `find x >= 0 with A x = b`: cone
//! membership of a V-represented cone, the zero-membership core and the
//! certificate search. Pivoting uses Bland's rule so degenerate systems
//! terminate; with [`BigRational`](num_rational::BigRational) the answer is
//! exact.

use crate::error::LpError;
use crate::scalar::{max_abs, Scalar};

/// Nonnegative solution of `A x = b` together with its residual `max |A x - b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegSolution<S> {
    pub values: Vec<S>,
    pub residual: S,
}

/// Solves `A x = b, x >= 0` for `x`, where `A` has `columns` columns.
///
/// Returns `Ok(None)` when the system is infeasible.
pub fn solve_nonnegative<S: Scalar>(
    columns: usize,
    rows: &[Vec<S>],
    rhs: &[S],
) -> Result<Option<NonnegSolution<S>>, LpError> {
    if rows.len() != rhs.len() || rows.iter().any(|r| r.len() != columns) {
        return Err(LpError::Dimensions);
    }
    let m = rows.len();
    if m == 0 {
        return Ok(Some(NonnegSolution {
            values: vec![S::zero(); columns],
            residual: S::zero(),
        }));
    }

    let width = columns + m + 1;
    let last = width - 1;
    let mut tableau: Vec<Vec<S>> = Vec::with_capacity(m);
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let flip = *b < S::zero();
        let mut t = vec![S::zero(); width];
        for (j, a) in row.iter().enumerate() {
            t[j] = if flip { -a.clone() } else { a.clone() };
        }
        t[columns + i] = S::one();
        t[last] = if flip { -b.clone() } else { b.clone() };
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (columns..columns + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![S::zero(); width];
    for j in (0..columns).chain(std::iter::once(last)) {
        let mut s = S::zero();
        for row in &tableau {
            s = s + row[j].clone();
        }
        cost[j] = -s;
    }

    let pivot_tol = S::pivot_tolerance();
    let limit = 10_000 + 50 * (columns + m);
    let mut iterations = 0;
    loop {
        let entering = (0..columns).find(|&j| cost[j] < -pivot_tol.clone());
        let Some(col) = entering else { break };

        let mut leave: Option<(usize, S)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if row[col] > pivot_tol {
                let ratio = row[last].clone() / row[col].clone();
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below, so an unbounded ray signals breakdown.
        let Some((pivot_row, _)) = leave else {
            return Err(LpError::Numerical(f64::INFINITY));
        };

        pivot(&mut tableau, &mut cost, pivot_row, col);
        basis[pivot_row] = col;

        iterations += 1;
        if iterations > limit {
            return Err(LpError::IterationLimit);
        }
    }

    let infeasibility = -cost[last].clone();
    let scale = S::one() + max_abs(rhs);
    if infeasibility > S::tolerance() * scale.clone() {
        return Ok(None);
    }

    let mut values = vec![S::zero(); columns];
    for (i, &var) in basis.iter().enumerate() {
        if var < columns {
            let v = tableau[i][last].clone();
            values[var] = if v < S::zero() { S::zero() } else { v };
        }
    }
    let residual = residual(rows, rhs, &values);
    if !S::EXACT && residual > S::tolerance() * scale * S::from_int(100) {
        return Err(LpError::Numerical(residual.to_f64()));
    }
    Ok(Some(NonnegSolution { values, residual }))
}

fn pivot<S: Scalar>(tableau: &mut [Vec<S>], cost: &mut [S], row: usize, col: usize) {
    let p = tableau[row][col].clone();
    for v in tableau[row].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let pivot_row = tableau[row].clone();
    for (i, r) in tableau.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
    }
}

/// `max_i |(A x)_i - b_i|`.
pub fn residual<S: Scalar>(rows: &[Vec<S>], rhs: &[S], x: &[S]) -> S {
    rows.iter()
        .zip(rhs)
        .map(|(row, b)| (crate::scalar::dot(row, x) - b.clone()).abs())
        .fold(S::zero(), |a, r| if r > a { r } else { a })
}
