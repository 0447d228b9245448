//! Method-of-lines reduction of `u^Delta = u_xx + F(t, x)` on `x = 1, 2, ...`
//! to a truncated system in c₀.
//!
//! Component `k` obeys
//! `u_k^Delta = (u_{k+1} - 2 u_k + u_{k-1}) / dx^2 + F(t, k dx)` with the
//! boundary value `u_0 = psi(t)` and the truncation closure `u_{N+1} = 0`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Norm};
use crate::rdcont::{check_rd_continuity_with, RdCheck, Violation};
use crate::solver::{step_solve, IvpSpec, Rhs, SolutionTrace, WindowPolicy};
use crate::timescale::TsInterval;

pub type Forcing = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Declared decay of `sup_t |F(t, j)|` in `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecayMode {
    Geometric,
    Polynomial,
    /// No decay claimed; consistent only with `F = 0`.
    #[default]
    None,
}

#[derive(Clone)]
pub struct ParabolicSpec {
    pub forcing: Forcing,
    pub phi: Profile,
    pub psi: Profile,
    pub window: TsInterval,
    pub n: usize,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub dx: f64,
    pub decay: DecayMode,
    /// Coefficient of `u_k` in the stencil, `-2` for the Laplacian.
    pub center: f64,
    pub policy: WindowPolicy,
}

impl fmt::Debug for ParabolicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParabolicSpec")
            .field("window", &self.window)
            .field("n", &self.n)
            .field("beta", &self.beta)
            .field("p", &self.p)
            .field("q", &self.q)
            .field("dx", &self.dx)
            .field("decay", &self.decay)
            .field("center", &self.center)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

impl ParabolicSpec {
    /// Zero forcing, initial profile and boundary; `P = 0`, `Q = 4`, `dx = 1`.
    pub fn new(window: TsInterval, n: usize, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("truncation N must be at least 2, got {n}")));
        }
        if !(beta > 0.0) {
            return Err(Error::Precondition(format!("beta must be positive, got {beta}")));
        }
        Ok(ParabolicSpec {
            forcing: Arc::new(|_, _| 0.0),
            phi: Arc::new(|_| 0.0),
            psi: Arc::new(|_| 0.0),
            window,
            n,
            beta,
            p: 0.0,
            q: 4.0,
            dx: 1.0,
            decay: DecayMode::None,
            center: -2.0,
            policy: WindowPolicy::Existence,
        })
    }

    pub fn with_forcing(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forcing = Arc::new(f);
        self
    }

    pub fn with_phi(mut self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi = Arc::new(phi);
        self
    }

    pub fn with_psi(mut self, psi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.psi = Arc::new(psi);
        self
    }

    pub fn with_bounds(mut self, p: f64, q: f64) -> Self {
        self.p = p;
        self.q = q;
        self
    }

    pub fn with_dx(mut self, dx: f64) -> Self {
        self.dx = dx;
        self
    }

    pub fn with_decay(mut self, decay: DecayMode) -> Self {
        self.decay = decay;
        self
    }

    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn with_policy(mut self, policy: WindowPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// `(phi(dx), ..., phi(N dx))`.
    pub fn initial_state(&self) -> Vec<f64> {
        (1..=self.n).map(|k| (self.phi)(k as f64 * self.dx)).collect()
    }

    pub fn phi_norm(&self) -> f64 {
        self.initial_state().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Sup-norm Lipschitz constant of the stencil.
    pub fn lipschitz_bound(&self) -> f64 {
        (2.0 + self.center.abs()) / (self.dx * self.dx)
    }
}

/// The truncated right-hand side.
#[derive(Clone)]
pub struct ParabolicRhs {
    forcing: Forcing,
    psi: Profile,
    n: usize,
    dx: f64,
    center: f64,
}

impl Rhs for ParabolicRhs {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, t: f64, x: &[f64], out: &mut [f64]) {
        let inv = 1.0 / (self.dx * self.dx);
        let n = self.n;
        for k in 0..n {
            let left = if k == 0 { (self.psi)(t) } else { x[k - 1] };
            let right = if k + 1 < n { x[k + 1] } else { 0.0 };
            let lap = right + self.center * x[k] + left;
            let lap = if self.dx == 1.0 { lap } else { lap * inv };
            out[k] = lap + (self.forcing)(t, (k + 1) as f64 * self.dx);
        }
    }
}

/// `M = P + Q (|phi| + beta)`.
pub fn ball_bound(p: f64, q: f64, phi_norm: f64, beta: f64) -> f64 {
    p + q * (phi_norm + beta)
}

pub fn parabolic_rhs(spec: &ParabolicSpec) -> ParabolicRhs {
    ParabolicRhs {
        forcing: spec.forcing.clone(),
        psi: spec.psi.clone(),
        n: spec.n,
        dx: spec.dx,
        center: spec.center,
    }
}

/// The `N`-dimensional IVP in the sup norm with `M` from the constants.
pub fn semi_discretize(spec: &ParabolicSpec) -> Result<IvpSpec> {
    if spec.n < 2 {
        return Err(Error::Precondition(format!("truncation N must be at least 2, got {}", spec.n)));
    }
    let m = ball_bound(spec.p, spec.q, spec.phi_norm(), spec.beta);
    let ivp = IvpSpec::new(
        Arc::new(parabolic_rhs(spec)),
        spec.initial_state(),
        spec.window.clone(),
        spec.beta,
        m,
    )?;
    Ok(ivp.with_norm(Norm::Max).with_policy(spec.policy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    /// (a) largest sampled `|f(x) - f(y)| / |x - y|`.
    pub lipschitz_max: f64,
    pub lipschitz_bound: f64,
    pub lipschitz_ok: bool,
    /// Offending pair `(t, x, y)` when (a) fails.
    pub lipschitz_witness: Option<(f64, Vec<f64>, Vec<f64>)>,
    /// (b) `sup |F(t, j)|` over nodes and `j <= N`.
    pub p_max: f64,
    pub p_ok: bool,
    /// `sup_t |F(t, j)|` for `j = 1..=horizon`.
    pub decay_profile: Vec<f64>,
    pub decay_ok: bool,
    /// (c) largest `|f_j| - p_j - Q sup_{i >= n_j} |x_i|` over samples.
    pub growth_excess: f64,
    pub growth_ok: bool,
    /// (d) rd-continuity of `t -> (F(t, j))_j`.
    pub rd_violation: Option<Violation>,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.lipschitz_ok && self.p_ok && self.decay_ok && self.growth_ok && self.rd_violation.is_none()
    }
}

fn decay_consistent(mode: DecayMode, s: &[f64]) -> bool {
    let h = s.len();
    let peak = s.iter().fold(0.0f64, |m, x| m.max(*x));
    if peak == 0.0 {
        return true;
    }
    let (mid, last) = (s[h / 2 - 1], s[h - 1]);
    let tail_monotone = s[h / 2 - 1..].windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    match mode {
        DecayMode::None => false,
        DecayMode::Geometric => tail_monotone && last <= mid * 0.9f64.powi((h - h / 2) as i32),
        DecayMode::Polynomial => tail_monotone && last <= mid * 0.5f64.sqrt() && last < peak,
    }
}

/// Checks the hypotheses of the existence result for the truncated system
/// on the nodes of `grid`. `eps` is the rd-continuity tolerance.
pub fn verify_hypotheses(spec: &ParabolicSpec, grid: &Arc<Grid>, samples: usize, eps: f64, seed: u64) -> Result<HypothesisReport> {
    let rhs = parabolic_rhs(spec);
    let n = spec.n;
    let nodes = grid.nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 4.0 / (spec.dx * spec.dx);

    // (a)
    let mut lipschitz_max = 0.0f64;
    let mut witness = None;
    let (mut fx, mut fy) = (vec![0.0; n], vec![0.0; n]);
    for s in 0..samples.max(1) {
        let t = nodes[rng.gen_range(0..nodes.len())];
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let y: Vec<f64> = if s % 2 == 0 {
            (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
        } else {
            // alternating difference: the stencil's worst case
            let amp = rng.gen_range(0.1..=1.0);
            x.iter().enumerate().map(|(k, v)| v + if k % 2 == 0 { amp } else { -amp }).collect()
        };
        rhs.eval(t, &x, &mut fx);
        rhs.eval(t, &y, &mut fy);
        let d = Norm::Max.dist(&x, &y);
        if d == 0.0 {
            continue;
        }
        let ratio = Norm::Max.dist(&fx, &fy) / d;
        if ratio > lipschitz_max {
            lipschitz_max = ratio;
            if ratio > bound * (1.0 + 1e-12) {
                witness = Some((t, x.clone(), y.clone()));
            }
        }
    }

    // (b)
    let p_max = nodes
        .iter()
        .flat_map(|&t| (1..=n).map(move |j| (spec.forcing)(t, j as f64 * spec.dx).abs()))
        .fold(0.0, f64::max);
    let horizon = (4 * n).max(64);
    let decay_profile: Vec<f64> = (1..=horizon)
        .map(|j| {
            nodes
                .iter()
                .map(|&t| (spec.forcing)(t, j as f64 * spec.dx).abs())
                .fold(0.0, f64::max)
        })
        .collect();

    // (c)
    let mut growth_excess = f64::NEG_INFINITY;
    for _ in 0..samples.max(1) {
        let t = nodes[rng.gen_range(0..nodes.len())];
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        rhs.eval(t, &x, &mut fx);
        // suffix sups of |x_i|
        let mut tail = vec![0.0f64; n + 1];
        for i in (0..n).rev() {
            tail[i] = tail[i + 1].max(x[i].abs());
        }
        for j in 0..n {
            let nj = if j == 0 { 0 } else { j - 1 };
            let pj = (spec.forcing)(t, (j + 1) as f64 * spec.dx).abs();
            growth_excess = growth_excess.max(fx[j].abs() - pj - spec.q * tail[nj]);
        }
    }

    // (d)
    let forcing = GridFunction::from_fn(grid.clone(), n, |t, out| {
        for (j, o) in out.iter_mut().enumerate() {
            *o = (spec.forcing)(t, (j + 1) as f64 * spec.dx);
        }
    })?;
    let rd_violation = match check_rd_continuity_with(std::slice::from_ref(&forcing), eps, Norm::Max)? {
        RdCheck::Violation(v) => Some(v),
        RdCheck::Partition(_) => None,
    };

    Ok(HypothesisReport {
        lipschitz_max,
        lipschitz_bound: bound,
        lipschitz_ok: lipschitz_max <= bound * (1.0 + 1e-12),
        lipschitz_witness: witness,
        p_max,
        p_ok: p_max <= spec.p * (1.0 + 1e-12),
        decay_ok: decay_consistent(spec.decay, &decay_profile),
        decay_profile,
        growth_excess,
        growth_ok: growth_excess <= 1e-12,
        rd_violation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    /// `(m, sup_t max_{k > N - m} |u_k(t)|)` for `m = N/4, N/8`.
    pub bands: Vec<(usize, f64)>,
    pub warnings: Vec<String>,
}

pub fn tail_report(u: &GridFunction) -> TailReport {
    let n = u.dim();
    let bands = [n / 4, n / 8]
        .iter()
        .map(|&m| {
            let m = m.max(1);
            let sup = u
                .rows()
                .map(|(_, v)| v[n - m..].iter().fold(0.0f64, |a, x| a.max(x.abs())))
                .fold(0.0, f64::max);
            (m, sup)
        })
        .collect();
    TailReport { bands, warnings: Vec::new() }
}

fn stability_warning(spec: &ParabolicSpec, h: f64) -> Option<String> {
    let stiff = spec.lipschitz_bound() * h;
    (stiff > 0.5).then(|| format!("dense step h = {h} gives 4h/dx^2 = {stiff} > 0.5; explicit stepping may be unstable"))
}

/// Solves the truncated system on its window and reports tail bands.
pub fn solve_parabolic(spec: &ParabolicSpec, h: f64) -> Result<(SolutionTrace, TailReport)> {
    let ivp = semi_discretize(spec)?;
    let mut trace = step_solve(&ivp, h)?;
    let mut tails = tail_report(&trace.u);
    if let Some(w) = stability_warning(spec, h) {
        tails.warnings.push(w.clone());
        trace.warnings.push(w);
    }
    Ok((trace, tails))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub n_coarse: usize,
    pub n_fine: usize,
    /// Max over nodes and shared components of `|u^coarse_k - u^fine_k|`.
    pub difference: f64,
}

/// Solves each truncation on one common window (the smallest of the
/// individual windows) and compares consecutive truncations.
pub fn convergence_study(spec: &ParabolicSpec, n_list: &[usize], h: f64) -> Result<Vec<StudyRow>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut end = spec.window.b();
    for &n in &ns {
        let w = semi_discretize(&spec.clone().with_n(n))?.window_info()?;
        end = end.min(w.end);
    }
    let window = spec.window.sub(spec.window.a(), end)?;
    let traces = ns
        .iter()
        .map(|&n| {
            let mut s = spec.clone().with_n(n).with_policy(WindowPolicy::Whole);
            s.window = window.clone();
            Ok(step_solve(&semi_discretize(&s)?, h)?.u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ns
        .windows(2)
        .zip(traces.windows(2))
        .map(|(n, u)| {
            let shared = n[0];
            let difference = (0..u[0].len())
                .map(|i| {
                    u[0].row(i)[..shared]
                        .iter()
                        .zip(&u[1].row(i)[..shared])
                        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
                })
                .fold(0.0, f64::max);
            StudyRow { n_coarse: n[0], n_fine: n[1], difference }
        })
        .collect())
}
