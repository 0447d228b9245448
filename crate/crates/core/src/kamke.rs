//! Kamke comparison functions: axiom checks and the Gronwall probe.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Norm};
use crate::rdcont::{check_rd_continuity_with, RdCheck, Violation};

pub type KamkeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum KamkeKind {
    /// `w(t, x) = q(t) x`.
    Linear { q: GridFunction },
    Custom(KamkeFn),
}

impl fmt::Debug for KamkeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KamkeKind::Linear { q } => f.debug_struct("Linear").field("q", q).finish(),
            KamkeKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KamkeSpec {
    pub kind: KamkeKind,
    pub grid: Arc<Grid>,
}

impl KamkeSpec {
    pub fn linear(q: GridFunction) -> Result<Self> {
        if q.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: q.dim() });
        }
        Ok(KamkeSpec { grid: q.grid().clone(), kind: KamkeKind::Linear { q } })
    }

    pub fn custom(grid: Arc<Grid>, w: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        KamkeSpec { kind: KamkeKind::Custom(Arc::new(w)), grid }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, KamkeKind::Linear { .. })
    }

    /// `w(t_i, x)` at node `i`.
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        match &self.kind {
            KamkeKind::Linear { q } => q.row(i)[0] * x,
            KamkeKind::Custom(w) => w(self.grid.nodes()[i], x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KamkeReport {
    /// (i): `t -> w(t, x)` rd-continuous for every sampled `x`.
    pub rd_continuous: bool,
    pub rd_violation: Option<(f64, Violation)>,
    /// (ii): modulus scan `(delta, omega(delta))` over `delta = eps, eps/2, eps/4`.
    pub modulus: Vec<(f64, f64)>,
    pub equicontinuous: bool,
    /// `w(t, x) >= 0` on sampled `x >= 0`.
    pub nonnegative: bool,
    pub negative_at: Option<(f64, f64)>,
    /// (iii): `w(t, 0) = 0` at every node.
    pub vanishes_at_zero: bool,
    /// (iv): verified only for linear `w` through the Gronwall probe.
    pub uniqueness_verified: bool,
}

impl KamkeReport {
    pub fn all_passed(&self) -> bool {
        self.rd_continuous && self.equicontinuous && self.nonnegative && self.vanishes_at_zero
    }
}

const X_SAMPLES: usize = 257;

/// Checks axioms (i)-(iii) on `[0, x_max]` and nonnegativity; (iv) is
/// marked verified for linear specs whose probe returns zero.
pub fn axiom_check(spec: &KamkeSpec, x_max: f64, eps: f64) -> Result<KamkeReport> {
    if !(x_max > 0.0 && eps > 0.0) {
        return Err(Error::Precondition("x_max and eps must be positive".into()));
    }
    let grid = &spec.grid;
    let n = grid.len();
    let xs: Vec<f64> = (0..X_SAMPLES).map(|k| x_max * k as f64 / (X_SAMPLES - 1) as f64).collect();

    let mut rd_violation = None;
    for &x in xs.iter().step_by(32) {
        let u = GridFunction::new(grid.clone(), 1, (0..n).map(|i| spec.eval(i, x)).collect())
            .map_err(|_| Error::NonFinite { t: x })?;
        if let RdCheck::Violation(v) = check_rd_continuity_with(std::slice::from_ref(&u), eps, Norm::Max)? {
            rd_violation = Some((x, v));
            break;
        }
    }

    let modulus: Vec<(f64, f64)> = [eps, eps / 2.0, eps / 4.0]
        .iter()
        .map(|&delta| {
            let mut omega = 0.0f64;
            for i in 0..n {
                for &x in &xs {
                    for s in [0.25, 0.5, 1.0] {
                        let y = (x + s * delta).min(x_max);
                        omega = omega.max((spec.eval(i, y) - spec.eval(i, x)).abs());
                    }
                }
            }
            (delta, omega)
        })
        .collect();
    let shrinking = modulus.windows(2).all(|w| w[1].1 <= w[0].1);
    let equicontinuous = shrinking && (modulus[0].1 <= 1e-14 || modulus[2].1 <= 0.75 * modulus[0].1);

    let mut negative_at = None;
    'scan: for i in 0..n {
        for &x in &xs {
            if spec.eval(i, x) < 0.0 {
                negative_at = Some((grid.nodes()[i], x));
                break 'scan;
            }
        }
    }
    let vanishes_at_zero = (0..n).all(|i| spec.eval(i, 0.0) == 0.0);

    let uniqueness_verified = spec.is_linear()
        && negative_at.is_none()
        && gronwall_uniqueness_probe(spec, 1e-6)?.zero_max <= 1e-12;

    Ok(KamkeReport {
        rd_continuous: rd_violation.is_none(),
        rd_violation,
        modulus,
        equicontinuous,
        nonnegative: negative_at.is_none(),
        negative_at,
        vanishes_at_zero,
        uniqueness_verified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GronwallReport {
    /// Maximal solution of `u(t) = int_a^t q u` from `u(a) = 0`.
    pub zero_solution: GridFunction,
    pub zero_max: f64,
    /// Same recursion from `u(a) = epsilon`.
    pub envelope: GridFunction,
    pub epsilon: f64,
}

/// Marches `u(t) = u(a) + int_a^t q u` over the grid of `q`: exact
/// multiplication by `1 + mu q` across gaps, `exp` of the trapezoid of `q`
/// on dense cells.
pub fn gronwall_solution(q: &GridFunction, u_a: f64) -> Result<GridFunction> {
    let grid = q.grid();
    let nodes = grid.nodes();
    let mut values = Vec::with_capacity(nodes.len());
    let mut u = u_a;
    values.push(u);
    for i in 0..nodes.len() - 1 {
        let (qi, qj) = (q.row(i)[0], q.row(i + 1)[0]);
        let dt = nodes[i + 1] - nodes[i];
        u = if grid.is_right_scattered(i) {
            u * (1.0 + dt * qi)
        } else {
            u * (0.5 * dt * (qi + qj)).exp()
        };
        values.push(u);
    }
    GridFunction::new(grid.clone(), 1, values)
}

pub fn gronwall_uniqueness_probe(spec: &KamkeSpec, epsilon: f64) -> Result<GronwallReport> {
    let q = match &spec.kind {
        KamkeKind::Linear { q } => q,
        KamkeKind::Custom(_) => {
            return Err(Error::Unsupported("Gronwall probe needs a linear Kamke function".into()))
        }
    };
    let zero_solution = gronwall_solution(q, 0.0)?;
    let zero_max = zero_solution.sup_norm(Norm::Max);
    Ok(GronwallReport {
        zero_solution,
        zero_max,
        envelope: gronwall_solution(q, epsilon)?,
        epsilon,
    })
}

/// Whether a nonnegative scalar `u` with `u(a) = 0` has vanishing delta
/// derivative at `a`: `u(sigma(a)) <= tol` when `a` is right-scattered,
/// otherwise the ratio `u(t)/(t - a)` extrapolated linearly to `t = a` from
/// the first two dense nodes is at most `tol` in magnitude.
pub fn delta_diff_at_a_check(u: &GridFunction, tol: f64) -> Result<bool> {
    if u.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: u.dim() });
    }
    let grid = u.grid();
    let nodes = grid.nodes();
    if nodes.len() < 2 {
        return Err(Error::Precondition("need at least two nodes".into()));
    }
    if grid.is_right_scattered(0) {
        return Ok(u.row(1)[0].abs() <= tol);
    }
    let a = nodes[0];
    let ratio = |i: usize| u.row(i)[0] / (nodes[i] - a);
    let r1 = ratio(1);
    let limit = if grid.is_dense_link(1) {
        let r2 = ratio(2);
        r1 - (r2 - r1) * (nodes[1] - a) / (nodes[2] - nodes[1])
    } else {
        r1
    };
    Ok(limit.abs() <= tol)
}
