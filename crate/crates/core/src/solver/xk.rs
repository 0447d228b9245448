//! Sampled diagnostics of the sets `X_{k+1} = conv F(X_k)`.
//!
//! All values are statistics of finite samples; the measure used is the
//! diameter in the spec norm, a lower bound on the spread of the true sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Norm};
use crate::mnc::{DiameterMnc, Mnc};

use super::picard::picard_map;
use super::IvpSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct XkReport {
    pub nodes: Vec<f64>,
    /// `v[k][i]`: sampled measure of `X_k(t_i)`, `k = 0..=k_max`.
    pub v: Vec<Vec<f64>>,
    /// Largest `v_{k+1}(t) - v_k(t)` over `k` and nodes.
    pub worst_increase: f64,
    pub tolerance: f64,
}

impl XkReport {
    pub fn nonincreasing(&self) -> bool {
        self.worst_increase <= self.tolerance
    }
}

fn sample_x0(spec: &IvpSpec, grid: &std::sync::Arc<crate::grid::Grid>, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let d = spec.dim();
    let nodes = grid.nodes();
    let mut values = Vec::with_capacity(nodes.len() * d);
    let mut u = spec.u0.clone();
    values.extend_from_slice(&u);
    for w in nodes.windows(2) {
        let dt = w[1] - w[0];
        let mut slope: Vec<f64> = (0..d).map(|_| rng.gen_range(-spec.m..=spec.m)).collect();
        let len = spec.norm.norm(&slope);
        if len > spec.m {
            slope.iter_mut().for_each(|s| *s *= spec.m / len);
        }
        for (x, s) in u.iter_mut().zip(&slope) {
            *x += dt * s;
        }
        // nearest-point projection onto B(u0, beta), 1-Lipschitz in the norm
        match spec.norm {
            Norm::Max => {
                for (x, c) in u.iter_mut().zip(&spec.u0) {
                    *x = x.clamp(c - spec.beta, c + spec.beta);
                }
            }
            Norm::Euclidean => {
                let r = spec.norm.dist(&u, &spec.u0);
                if r > spec.beta {
                    for (x, c) in u.iter_mut().zip(&spec.u0) {
                        *x = c + (*x - c) * spec.beta / r;
                    }
                }
            }
        }
        values.extend_from_slice(&u);
    }
    GridFunction::new(grid.clone(), d, values)
}

fn convex_combination(members: &[GridFunction], rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let e: Vec<f64> = (0..members.len()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    let mut values = vec![0.0; members[0].values().len()];
    for (w, u) in e.iter().zip(members) {
        let w = w / total;
        for (o, v) in values.iter_mut().zip(u.values()) {
            *o += w * v;
        }
    }
    GridFunction::new(members[0].grid().clone(), members[0].dim(), values)
}

/// Samples `n_samples` members of `X_0` (`u(a) = u0`, `M`-Lipschitz per
/// cell, inside `B(u0, beta)`), then repeatedly maps random convex
/// combinations through `F`, recording the per-node diameter `v_k(t)`.
pub fn xk_diagnostics(spec: &IvpSpec, h: f64, n_samples: usize, k_max: usize, seed: u64) -> Result<XkReport> {
    if n_samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    let (_, grid) = spec.solve_grid(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mnc = DiameterMnc { norm: spec.norm };
    let measure = |family: &[GridFunction]| -> Vec<f64> {
        (0..grid.len())
            .map(|i| {
                let rows: Vec<&[f64]> = family.iter().map(|u| u.row(i)).collect();
                mnc.measure(&rows)
            })
            .collect()
    };

    let mut family = (0..n_samples)
        .map(|_| sample_x0(spec, &grid, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut v = vec![measure(&family)];
    for _ in 0..k_max {
        family = (0..n_samples)
            .map(|_| picard_map(spec, &grid, &convex_combination(&family, &mut rng)?))
            .collect::<Result<Vec<_>>>()?;
        v.push(measure(&family));
    }
    let worst_increase = v
        .windows(2)
        .flat_map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(XkReport {
        nodes: grid.nodes().to_vec(),
        v,
        worst_increase: worst_increase.max(0.0),
        tolerance: 1e-10,
    })
}
