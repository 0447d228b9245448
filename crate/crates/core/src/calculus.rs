//! Delta derivative and Cauchy delta integral of grid functions.
//!
//! Scattered steps are exact: the derivative across a gap is the difference
//! quotient and the integral over `[t, sigma(t))` is `mu(t) * u(t)`. Dense
//! segments use finite differences and the composite trapezoid rule on the
//! grid nodes.
//!
//! Integrals are accumulated strictly left to right, so continuing an
//! accumulated value over an adjacent window reproduces the longer integral
//! bit for bit (see [`integral_from`]).

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Norm};
use crate::hull::hull_distance;

/// Delta derivative of `u` at node `t`.
///
/// Right-scattered nodes use the exact difference quotient across the gap.
/// Right-dense nodes use a central difference when both neighbours lie in the
/// same dense segment and a one-sided difference otherwise; the right end of
/// the interval counts as right-dense.
pub fn delta_derivative(u: &GridFunction, t: f64) -> Result<Vec<f64>> {
    let grid = u.grid();
    let i = grid.index_of(t)?;
    let n = grid.len();
    let nodes = grid.nodes();
    if i + 1 == n && grid.is_left_scattered(i) {
        return Err(Error::NotInKappa { t });
    }
    let quotient = |j: usize, k: usize| -> Vec<f64> {
        let dt = nodes[k] - nodes[j];
        u.row(k)
            .iter()
            .zip(u.row(j))
            .map(|(b, a)| (b - a) / dt)
            .collect()
    };
    if grid.is_right_scattered(i) {
        return Ok(quotient(i, i + 1));
    }
    let has_next = grid.is_dense_link(i);
    let has_prev = i > 0 && grid.is_dense_link(i - 1);
    match (has_prev, has_next) {
        (true, true) => Ok(quotient(i - 1, i + 1)),
        (false, true) => Ok(quotient(i, i + 1)),
        (true, false) => Ok(quotient(i - 1, i)),
        (false, false) => Err(Error::Precondition(format!(
            "no neighbouring node at {t} to form a difference"
        ))),
    }
}

/// Contribution of the grid cell `[t_i, t_{i+1})` to the integral, added
/// into `acc`.
#[inline]
pub(crate) fn accumulate_cell(u: &GridFunction, i: usize, acc: &mut [f64]) {
    let grid = u.grid();
    let nodes = grid.nodes();
    let w = nodes[i + 1] - nodes[i];
    if grid.is_right_scattered(i) {
        for (a, v) in acc.iter_mut().zip(u.row(i)) {
            *a += w * v;
        }
    } else {
        for ((a, v0), v1) in acc.iter_mut().zip(u.row(i)).zip(u.row(i + 1)) {
            *a += w * (0.5 * (v0 + v1));
        }
    }
}

/// Continues the running value `init` with the integral of `u` from node `s`
/// to node `t` (`s <= t`).
pub fn integral_from(u: &GridFunction, init: &[f64], s: f64, t: f64) -> Result<Vec<f64>> {
    if init.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: init.len(),
        });
    }
    let grid = u.grid();
    let i = grid.index_of(s)?;
    let j = grid.index_of(t)?;
    if i > j {
        return Err(Error::InvertedInterval { a: s, b: t });
    }
    let mut acc = init.to_vec();
    for k in i..j {
        accumulate_cell(u, k, &mut acc);
    }
    Ok(acc)
}

/// Cauchy delta integral of `u` from node `s` to node `t`; `s > t` yields
/// the negated integral from `t` to `s`, and `s == t` the zero vector.
pub fn delta_integral(u: &GridFunction, s: f64, t: f64) -> Result<Vec<f64>> {
    let zero = vec![0.0; u.dim()];
    let (lo, hi) = (u.grid().index_of(s)?, u.grid().index_of(t)?);
    if lo > hi {
        let mut v = integral_from(u, &zero, t, s)?;
        v.iter_mut().for_each(|x| *x = -*x);
        return Ok(v);
    }
    integral_from(u, &zero, s, t)
}

/// `t -> u0 + int_a^t u`, accumulated left to right from the first node.
pub fn antiderivative(u: &GridFunction, u0: &[f64]) -> Result<GridFunction> {
    if u0.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: u0.len(),
        });
    }
    let d = u.dim();
    let mut values = Vec::with_capacity(d * u.len());
    let mut acc = u0.to_vec();
    values.extend_from_slice(&acc);
    for i in 0..u.len() - 1 {
        accumulate_cell(u, i, &mut acc);
        values.extend_from_slice(&acc);
    }
    GridFunction::new(u.grid().clone(), d, values)
}

/// Checks `|int_s^t u| <= int_s^t v` given `|u| <= v` on the nodes the
/// quadrature touches. Returns an error when that pointwise bound fails.
pub fn norm_bound_check(u: &GridFunction, v: &GridFunction, s: f64, t: f64, norm: Norm) -> Result<bool> {
    if !u.same_grid(v) {
        return Err(Error::GridMismatch);
    }
    if v.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: v.dim(),
        });
    }
    let range = u.grid().range(s, t)?;
    let (i, j) = (*range.start(), *range.end());
    let touched = |k: usize| k < j || (k == j && j > i && u.grid().is_dense_link(j - 1));
    for k in i..=j {
        if touched(k) && norm.norm(u.row(k)) > v.row(k)[0] {
            return Err(Error::Precondition(format!(
                "|u| exceeds v at node {}",
                u.grid().nodes()[k]
            )));
        }
    }
    let lhs = norm.norm(&delta_integral(u, s, t)?);
    let rhs = delta_integral(v, s, t)?[0];
    Ok(lhs <= rhs + 1e-12 * rhs.abs().max(1.0))
}

/// Distance from the mean value `int_a^{t0} u / (t0 - a)` to the convex hull
/// of the node values on `[a, t0]`.
pub fn mean_hull_distance(u: &GridFunction, a: f64, t0: f64) -> Result<f64> {
    let range = u.grid().range(a, t0)?;
    if range.start() == range.end() {
        return Ok(0.0);
    }
    let nodes = u.grid().nodes();
    let len = nodes[*range.end()] - nodes[*range.start()];
    let mean: Vec<f64> = delta_integral(u, a, t0)?.iter().map(|x| x / len).collect();
    let pts: Vec<&[f64]> = range.map(|k| u.row(k)).collect();
    Ok(hull_distance(&pts, &mean))
}

/// Mean value check: the averaged integral lies within `tol` of the convex
/// hull of the values. Vacuously true for `t0 == a`.
pub fn mvt_hull_check(u: &GridFunction, a: f64, t0: f64, tol: f64) -> Result<bool> {
    Ok(mean_hull_distance(u, a, t0)? <= tol)
}
