//! Phase-one simplex for `{x ≥ 0 : A x = b}`.
//!
//! Dense tableau with one artificial variable per row and Bland's
//! smallest-index rule, so it terminates in exact arithmetic. With `f64` the
//! caller supplies a pivot tolerance and validates the returned point.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) enum LpOutcome<S> {
    Feasible(Vec<S>),
    Infeasible,
}

/// `a` is row-major with `b.len()` rows of `vars` entries each.
pub(crate) fn feasible_point<S: Scalar>(
    a: &[S],
    b: &[S],
    vars: usize,
    eps: &S,
) -> Result<LpOutcome<S>> {
    let rows = b.len();
    debug_assert_eq!(a.len(), rows * vars);
    let width = vars + rows + 1;
    let rhs = width - 1;
    let mut t = vec![S::zero(); rows * width];
    for r in 0..rows {
        let flip = b[r] < S::zero();
        for c in 0..vars {
            let v = a[r * vars + c].clone();
            t[r * width + c] = if flip { -v } else { v };
        }
        t[r * width + vars + r] = S::one();
        t[r * width + rhs] = if flip { -b[r].clone() } else { b[r].clone() };
    }
    // Phase-one objective row: reduced costs of minimizing Σ artificials.
    let mut cost = vec![S::zero(); width];
    for r in 0..rows {
        for c in (0..vars).chain(core::iter::once(rhs)) {
            let v = &t[r * width + c];
            if !v.is_zero() {
                cost[c] = cost[c].clone() - v.clone();
            }
        }
    }
    let mut basis: Vec<usize> = (vars..vars + rows).collect();
    let limit = 50 * (width + rows) + 1000;

    for _ in 0..limit {
        let Some(enter) = (0..vars + rows).find(|&c| cost[c] < -eps.clone()) else {
            return Ok(finish(&t, &basis, &cost, width, vars, eps));
        };
        let mut leave: Option<(usize, S)> = None;
        for r in 0..rows {
            let coef = &t[r * width + enter];
            if *coef > *eps {
                let ratio = t[r * width + rhs].clone() / coef.clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // Unbounded direction cannot occur for a phase-one objective
            // bounded below by zero.
            return Err(Error::Numerical(
                "phase-one simplex found an unbounded direction",
            ));
        };
        pivot(&mut t, &mut cost, width, pr, enter);
        basis[pr] = enter;
    }
    Err(Error::Numerical("simplex iteration limit reached"))
}

fn pivot<S: Scalar>(t: &mut [S], cost: &mut [S], width: usize, pr: usize, pc: usize) {
    let rows = t.len() / width;
    let inv = S::one() / t[pr * width + pc].clone();
    for c in 0..width {
        if !t[pr * width + c].is_zero() {
            t[pr * width + c] = t[pr * width + c].clone() * inv.clone();
        }
    }
    t[pr * width + pc] = S::one();
    let pivot_row: Vec<(usize, S)> = (0..width)
        .filter(|&c| !t[pr * width + c].is_zero())
        .map(|c| (c, t[pr * width + c].clone()))
        .collect();
    for r in 0..rows {
        if r == pr {
            continue;
        }
        let f = t[r * width + pc].clone();
        if f.is_zero() {
            continue;
        }
        for (c, v) in &pivot_row {
            t[r * width + c] = t[r * width + c].clone() - f.clone() * v.clone();
        }
        t[r * width + pc] = S::zero();
    }
    let f = cost[pc].clone();
    if !f.is_zero() {
        for (c, v) in &pivot_row {
            cost[*c] = cost[*c].clone() - f.clone() * v.clone();
        }
        cost[pc] = S::zero();
    }
}

fn finish<S: Scalar>(
    t: &[S],
    basis: &[usize],
    cost: &[S],
    width: usize,
    vars: usize,
    eps: &S,
) -> LpOutcome<S> {
    let rhs = width - 1;
    // The objective value is -cost[rhs].
    let residual = -cost[rhs].clone();
    let scale = S::from_u64(basis.len() as u64);
    if residual > eps.clone() * scale {
        return LpOutcome::Infeasible;
    }
    let mut x = vec![S::zero(); vars];
    for (r, &col) in basis.iter().enumerate() {
        if col < vars {
            x[col] = t[r * width + rhs].clone();
        }
    }
    LpOutcome::Feasible(x)
}
