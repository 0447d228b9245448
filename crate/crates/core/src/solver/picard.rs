use std::sync::Arc;

use crate::calculus::accumulate_cell;
use crate::error::Result;
use crate::grid::{Grid, GridFunction};

use super::step::{volterra_residual, SolutionTrace};
use super::IvpSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PicardStatus {
    Converged,
    MaxIterations,
    /// The gap grew for three consecutive iterations past the fifth.
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardDiagnostics {
    /// `|u_{k+1} - u_k|_inf` per iteration.
    pub iterate_gaps: Vec<f64>,
    /// `sup_t diam {u_j(t) : j > k}` over the computed iterates: the spread
    /// of the remaining sequence after iteration `k`.
    pub vk_trace: Vec<f64>,
    pub status: PicardStatus,
}

impl PicardDiagnostics {
    pub fn iterations(&self) -> usize {
        self.iterate_gaps.len()
    }

    /// Successive gap ratios `gap_{k+1} / gap_k` (skipping zero gaps).
    pub fn ratios(&self) -> Vec<f64> {
        self.iterate_gaps
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }
}

/// `F(u)(t) = u0 + int_a^t f(s, u(s)) Delta s` on the grid of `u`.
pub(crate) fn picard_map(spec: &IvpSpec, grid: &Arc<Grid>, u: &GridFunction) -> Result<GridFunction> {
    let d = spec.dim();
    let f_values = u
        .rows()
        .map(|(t, x)| spec.f(t, x))
        .collect::<Result<Vec<_>>>()?
        .concat();
    let f = GridFunction::new(grid.clone(), d, f_values)?;
    let mut acc = spec.u0.clone();
    let mut out = Vec::with_capacity(grid.len() * d);
    for i in 0..grid.len() {
        out.extend_from_slice(&acc);
        if i + 1 < grid.len() {
            accumulate_cell(&f, i, &mut acc);
        }
    }
    GridFunction::new(grid.clone(), d, out)
}

fn sup_gap(spec: &IvpSpec, a: &GridFunction, b: &GridFunction) -> f64 {
    (0..a.len()).map(|i| spec.norm.dist(a.row(i), b.row(i))).fold(0.0, f64::max)
}

/// Iterates `u_{k+1} = F(u_k)` from `u_0 = u0` until the sup gap drops
/// below `tol` or `k_max` iterations ran.
pub fn picard_iterate(spec: &IvpSpec, h: f64, k_max: usize, tol: f64) -> Result<(SolutionTrace, PicardDiagnostics)> {
    let (window, grid) = spec.solve_grid(h)?;
    let mut iterates = vec![GridFunction::constant(grid.clone(), &spec.u0)?];
    let mut gaps = Vec::new();
    let mut rising = 0;
    let mut status = PicardStatus::MaxIterations;
    for k in 0..k_max {
        let next = picard_map(spec, &grid, iterates.last().unwrap())?;
        let gap = sup_gap(spec, &next, iterates.last().unwrap());
        rising = match gaps.last() {
            Some(&prev) if gap > prev => rising + 1,
            _ => 0,
        };
        gaps.push(gap);
        iterates.push(next);
        if gap < tol {
            status = PicardStatus::Converged;
            break;
        }
        if k >= 5 && rising >= 3 {
            status = PicardStatus::Diverged;
            break;
        }
    }

    // tail spreads, from the last iterate backwards
    let n = grid.len();
    let mut lo = iterates.last().unwrap().values().to_vec();
    let mut hi = lo.clone();
    let mut vk = vec![0.0; gaps.len()];
    for k in (0..gaps.len()).rev() {
        // after iteration k the remaining iterates are u_{k+1}, ...
        let u = &iterates[k + 1];
        for (j, v) in u.values().iter().enumerate() {
            lo[j] = lo[j].min(*v);
            hi[j] = hi[j].max(*v);
        }
        let d = spec.dim();
        vk[k] = (0..n)
            .map(|i| {
                let span: Vec<f64> = (0..d).map(|r| hi[i * d + r] - lo[i * d + r]).collect();
                spec.norm.norm(&span)
            })
            .fold(0.0, f64::max);
    }

    let u = iterates.pop().unwrap();
    let residual = volterra_residual(&u, spec)?;
    let ball_exit = (0..n)
        .find(|&i| spec.norm.dist(u.row(i), &spec.u0) > spec.beta)
        .map(|i| grid.nodes()[i]);
    let mut warnings = Vec::new();
    if let Some(t) = ball_exit {
        warnings.push(format!("iterate leaves B(u0, {}) at t = {t}", spec.beta));
    }
    Ok((
        SolutionTrace { u, residual, window, ball_exit, warnings },
        PicardDiagnostics { iterate_gaps: gaps, vk_trace: vk, status },
    ))
}
