//! Initial value problems `u^Delta = f(t, u)`, `u(a) = u0` on time scales.

mod picard;
mod step;
mod window;
mod xk;

pub use picard::{picard_iterate, PicardDiagnostics, PicardStatus};
pub use step::{step_solve, volterra_residual, SolutionTrace};
pub use window::{local_window, Window};
pub use xk::{xk_diagnostics, XkReport};

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Grid, Norm};
use crate::timescale::TsInterval;

/// Right-hand side `f(t, u)`; must be re-entrant.
pub trait Rhs: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, u: &[f64], out: &mut [f64]);
}

/// `f(t, u) = A u + b` with `A` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRhs {
    pub matrix: Vec<f64>,
    pub offset: Vec<f64>,
}

impl LinearRhs {
    pub fn new(matrix: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        let d = offset.len();
        if matrix.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: matrix.len() });
        }
        Ok(LinearRhs { matrix, offset })
    }
}

impl Rhs for LinearRhs {
    fn dim(&self) -> usize {
        self.offset.len()
    }

    fn eval(&self, _t: f64, u: &[f64], out: &mut [f64]) {
        let d = self.offset.len();
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.matrix[r * d..(r + 1) * d];
            *o = row.iter().zip(u).map(|(a, x)| a * x).sum::<f64>() + self.offset[r];
        }
    }
}

/// `f(t, u) = c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRhs(pub Vec<f64>);

impl Rhs for ConstantRhs {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn eval(&self, _t: f64, _u: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.0);
    }
}

/// Closure-backed right-hand side.
pub struct FnRhs<F> {
    dim: usize,
    f: F,
}

impl<F> FnRhs<F>
where
    F: Fn(f64, &[f64], &mut [f64]) + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnRhs { dim, f }
    }
}

impl<F> Rhs for FnRhs<F>
where
    F: Fn(f64, &[f64], &mut [f64]) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64, u: &[f64], out: &mut [f64]) {
        (self.f)(t, u, out)
    }
}

/// Which interval the solvers march over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowPolicy {
    /// The existence window `[a, sigma(b*)]` (or its fallback).
    #[default]
    Existence,
    /// The whole interval `[a, b]`, ignoring `beta` and `M`.
    Whole,
}

#[derive(Clone)]
pub struct IvpSpec {
    pub rhs: Arc<dyn Rhs>,
    pub u0: Vec<f64>,
    pub window: TsInterval,
    pub beta: f64,
    pub m: f64,
    pub norm: Norm,
    pub policy: WindowPolicy,
}

impl fmt::Debug for IvpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvpSpec")
            .field("u0", &self.u0)
            .field("window", &self.window)
            .field("beta", &self.beta)
            .field("m", &self.m)
            .field("norm", &self.norm)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

impl IvpSpec {
    pub fn new(rhs: Arc<dyn Rhs>, u0: Vec<f64>, window: TsInterval, beta: f64, m: f64) -> Result<Self> {
        if rhs.dim() != u0.len() {
            return Err(Error::DimensionMismatch { expected: rhs.dim(), got: u0.len() });
        }
        if !(beta > 0.0 && beta.is_finite()) || !(m > 0.0 && m.is_finite()) {
            return Err(Error::Precondition(format!("beta and M must be positive, got {beta} and {m}")));
        }
        if u0.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t: window.a() });
        }
        Ok(IvpSpec {
            rhs,
            u0,
            window,
            beta,
            m,
            norm: Norm::Euclidean,
            policy: WindowPolicy::Existence,
        })
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }

    pub fn with_policy(mut self, policy: WindowPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn dim(&self) -> usize {
        self.u0.len()
    }

    /// Window per the policy.
    pub fn window_info(&self) -> Result<Window> {
        match self.policy {
            WindowPolicy::Existence => local_window(
                self.window.parent(),
                self.window.a(),
                self.window.b(),
                self.beta,
                self.m,
            ),
            WindowPolicy::Whole => Ok(Window::whole(&self.window)),
        }
    }

    /// Grid of the solve interval at dense step `h`.
    pub fn solve_grid(&self, h: f64) -> Result<(Window, Arc<Grid>)> {
        let w = self.window_info()?;
        let interval = self.window.sub(self.window.a(), w.end)?;
        Ok((w, Arc::new(Grid::build(&interval, h)?)))
    }

    pub(crate) fn f(&self, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.rhs.eval(t, u, &mut out);
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        Ok(out)
    }
}

/// Sampled `sup |f(t, u)|` over grid nodes and points of the ball
/// `B(u0, beta)`; a lower estimate of the bound `M`.
pub fn estimate_bound(
    rhs: &dyn Rhs,
    grid: &Grid,
    u0: &[f64],
    beta: f64,
    norm: Norm,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = u0.len();
    let mut out = vec![0.0; d];
    let mut best = 0.0f64;
    for &t in grid.nodes() {
        for k in 0..samples.max(1) {
            let mut dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let len = norm.norm(&dir);
            let radius = if k == 0 { 0.0 } else { beta * rng.gen::<f64>() };
            if len > 0.0 {
                dir.iter_mut().for_each(|x| *x *= radius / len);
            }
            let u: Vec<f64> = u0.iter().zip(&dir).map(|(a, b)| a + b).collect();
            rhs.eval(t, &u, &mut out);
            best = best.max(norm.norm(&out));
        }
    }
    best
}
