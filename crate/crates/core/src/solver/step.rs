use crate::calculus::accumulate_cell;
use crate::error::{Error, Result};
use crate::grid::GridFunction;

use super::{IvpSpec, Window};

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace {
    pub u: GridFunction,
    /// `sup_t |u(t) - u0 - int_a^t f(s, u(s)) Delta s|`.
    pub residual: f64,
    pub window: Window,
    /// First node where the trajectory left `B(u0, beta)`.
    pub ball_exit: Option<f64>,
    pub warnings: Vec<String>,
}

impl SolutionTrace {
    pub fn window_used(&self) -> (f64, f64) {
        (self.window.a, self.window.end)
    }
}

/// Marches the solve grid: exact Euler steps `u + mu f(t, u)` across gaps,
/// classical RK4 on dense cells.
pub fn step_solve(spec: &IvpSpec, h: f64) -> Result<SolutionTrace> {
    let (window, grid) = spec.solve_grid(h)?;
    let nodes = grid.nodes();
    let d = spec.dim();
    let mut values = Vec::with_capacity(nodes.len() * d);
    let mut u = spec.u0.clone();
    values.extend_from_slice(&u);
    let mut ball_exit = None;
    let mut tmp = vec![0.0; d];
    for i in 0..nodes.len() - 1 {
        let t = nodes[i];
        let dt = nodes[i + 1] - t;
        let k1 = spec.f(t, &u)?;
        if grid.is_right_scattered(i) {
            for (x, k) in u.iter_mut().zip(&k1) {
                *x += dt * k;
            }
        } else {
            let half = 0.5 * dt;
            let stage = |tmp: &mut [f64], k: &[f64], w: f64| {
                for ((o, x), k) in tmp.iter_mut().zip(&u).zip(k) {
                    *o = x + w * k;
                }
            };
            stage(&mut tmp, &k1, half);
            let k2 = spec.f(t + half, &tmp)?;
            stage(&mut tmp, &k2, half);
            let k3 = spec.f(t + half, &tmp)?;
            stage(&mut tmp, &k3, dt);
            let k4 = spec.f(nodes[i + 1], &tmp)?;
            for r in 0..d {
                u[r] += dt * ((k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]) / 6.0);
            }
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { t: nodes[i + 1] });
        }
        if ball_exit.is_none() && spec.norm.dist(&u, &spec.u0) > spec.beta {
            ball_exit = Some(nodes[i + 1]);
        }
        values.extend_from_slice(&u);
    }
    let u = GridFunction::new(grid, d, values)?;
    let residual = volterra_residual(&u, spec)?;
    let mut warnings = Vec::new();
    if let Some(t) = ball_exit {
        warnings.push(format!("trajectory leaves B(u0, {}) at t = {t}", spec.beta));
    }
    if !window.guard_ok {
        warnings.push(format!(
            "window guard M*(sigma(b*) - a) <= beta fails for b* = {}, sigma(b*) = {}; solving on [{}, {}]",
            window.b_star, window.sigma_b_star, window.a, window.end
        ));
    }
    Ok(SolutionTrace { u, residual, window, ball_exit, warnings })
}

/// `sup_t |u(t) - u0 - int_a^t f(s, u(s)) Delta s|` over the grid of `u`,
/// accumulated left to right in the solver's order.
pub fn volterra_residual(u: &GridFunction, spec: &IvpSpec) -> Result<f64> {
    if u.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: u.dim() });
    }
    let grid = u.grid();
    let f = GridFunction::new(
        grid.clone(),
        u.dim(),
        u.rows()
            .map(|(t, x)| spec.f(t, x))
            .collect::<Result<Vec<_>>>()?
            .concat(),
    )?;
    let mut acc = spec.u0.clone();
    let mut worst = 0.0f64;
    for i in 0..grid.len() {
        worst = worst.max(spec.norm.dist(u.row(i), &acc));
        if i + 1 < grid.len() {
            accumulate_cell(&f, i, &mut acc);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::super::{ConstantRhs, FnRhs, LinearRhs, WindowPolicy};
    use super::*;
    use crate::timescale::{TimeScale, TsInterval};
    use std::sync::Arc;

    fn spec(ts: &TimeScale, rhs: Arc<dyn crate::solver::Rhs>, u0: f64) -> IvpSpec {
        IvpSpec::new(rhs, vec![u0], TsInterval::whole(ts), 1.0, 1.0)
            .unwrap()
            .with_policy(WindowPolicy::Whole)
    }

    #[test]
    fn discrete_doubling_is_exact() {
        let ts = TimeScale::integers(0, 50).unwrap();
        let rhs = Arc::new(LinearRhs::new(vec![1.0], vec![0.0]).unwrap());
        let trace = step_solve(&spec(&ts, rhs, 1.0), 1.0).unwrap();
        for (t, v) in trace.u.rows() {
            assert_eq!(v[0], 2f64.powi(t as i32));
        }
        assert_eq!(trace.residual, 0.0);
    }

    #[test]
    fn dense_exponential() {
        let ts = TimeScale::interval(0.0, 1.0).unwrap();
        let rhs = Arc::new(FnRhs::new(1, |_, u: &[f64], o: &mut [f64]| o[0] = u[0]));
        let trace = step_solve(&spec(&ts, rhs, 1.0), 1e-3).unwrap();
        assert!((trace.u.at(1.0).unwrap()[0] - std::f64::consts::E).abs() < 1e-8);
        assert!(trace.residual < 1e-6);
    }

    #[test]
    fn mixed_scale_antiderivative() {
        let ts = TimeScale::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let trace = step_solve(&spec(&ts, Arc::new(ConstantRhs(vec![1.0])), 0.0), 1e-2).unwrap();
        for (t, v) in trace.u.rows() {
            assert_eq!(v[0], t);
        }
    }

    #[test]
    fn existence_window_is_used() {
        let ts = TimeScale::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let s = IvpSpec::new(Arc::new(ConstantRhs(vec![1.0])), vec![0.0], TsInterval::whole(&ts), 1.5, 1.0).unwrap();
        let trace = step_solve(&s, 0.1).unwrap();
        assert_eq!(trace.window_used(), (0.0, 1.0));
        assert_eq!(trace.warnings.len(), 1);
    }

    #[test]
    fn perturbation_shows_in_residual() {
        let ts = TimeScale::integers(0, 10).unwrap();
        let rhs = Arc::new(LinearRhs::new(vec![0.5], vec![0.0]).unwrap());
        let s = spec(&ts, rhs, 1.0);
        let trace = step_solve(&s, 1.0).unwrap();
        let mut values = trace.u.values().to_vec();
        values[4] += 1e-3;
        let bumped = GridFunction::new(trace.u.grid().clone(), 1, values).unwrap();
        assert!(volterra_residual(&bumped, &s).unwrap() >= 1e-3);
    }

    #[test]
    fn non_finite_aborts() {
        let ts = TimeScale::interval(0.0, 1.0).unwrap();
        let rhs = Arc::new(FnRhs::new(1, |t, _u: &[f64], o: &mut [f64]| o[0] = if t > 0.5 { f64::NAN } else { 0.0 }));
        assert!(matches!(step_solve(&spec(&ts, rhs, 0.0), 0.1), Err(Error::NonFinite { .. })));
    }
}
