//! Measures of noncompactness on finite families.
//!
//! Families are given as rows (one value vector per member). The [`Mnc`]
//! trait fixes how rows are measured and normed; [`HausdorffC0`] reads rows
//! through a [`C0Layout`], [`DiameterMnc`] treats them as points of `R^d`.

mod axioms;
mod c0;

pub use axioms::{axiom_suite, AxiomOutcome, AxiomReport, FamilyGenerator};
pub use c0::{hausdorff_c0, C0Layout, TailShape, TailTerm, TailedSequence};

use crate::calculus::accumulate_cell;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Norm};
use crate::rdcont::{check_rd_continuity_with, RdCheck};

/// A sublinear measure of noncompactness evaluated on finite families.
pub trait Mnc {
    fn measure(&self, rows: &[&[f64]]) -> f64;
    fn norm(&self, row: &[f64]) -> f64;
    /// `K = mu(closed unit ball)`.
    fn unit_ball_constant(&self) -> f64;

    fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.norm(&d)
    }
}

/// Hausdorff MNC of the c₀ model; `K = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffC0 {
    pub layout: C0Layout,
}

impl Mnc for HausdorffC0 {
    fn measure(&self, rows: &[&[f64]]) -> f64 {
        rows.iter().map(|r| self.layout.limit(r).abs()).fold(0.0, f64::max)
    }

    fn norm(&self, row: &[f64]) -> f64 {
        self.layout.decode(row).sup_norm()
    }

    fn unit_ball_constant(&self) -> f64 {
        1.0
    }
}

/// Diameter of the family in a finite-dimensional norm; `K = 2`.
///
/// Vanishes only on singletons, so it overstates noncompactness in `R^d`;
/// used as a sample statistic for spread.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiameterMnc {
    pub norm: Norm,
}

impl Mnc for DiameterMnc {
    fn measure(&self, rows: &[&[f64]]) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i + 1..] {
                best = best.max(self.norm.dist(a, b));
            }
        }
        best
    }

    fn norm(&self, row: &[f64]) -> f64 {
        self.norm.norm(row)
    }

    fn unit_ball_constant(&self) -> f64 {
        2.0
    }
}

/// Non-symmetric distance `max_y min_z |y - z|` between finite point sets.
pub fn set_distance(y: &[&[f64]], z: &[&[f64]], norm: Norm) -> f64 {
    assert!(!z.is_empty() || y.is_empty(), "cover set is empty");
    y.iter()
        .map(|p| z.iter().map(|q| norm.dist(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

fn check_family(family: &[GridFunction]) -> Result<()> {
    let first = family
        .first()
        .ok_or_else(|| Error::Precondition("empty family".into()))?;
    for u in family {
        if !u.same_grid(first) {
            return Err(Error::GridMismatch);
        }
        if u.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), got: u.dim() });
        }
    }
    Ok(())
}

fn section(family: &[GridFunction], i: usize) -> Vec<&[f64]> {
    family.iter().map(|u| u.row(i)).collect()
}

/// `mu(X(t))` at every node.
pub fn mnc_trace(family: &[GridFunction], mnc: &dyn Mnc) -> Result<Vec<f64>> {
    check_family(family)?;
    Ok((0..family[0].len()).map(|i| mnc.measure(&section(family, i))).collect())
}

/// Both sides of `|mu(X(s)) - mu(X(t))| <= K sup_u |u(s) - u(t)|`.
pub fn mnc_continuity_bound(family: &[GridFunction], mnc: &dyn Mnc, s: f64, t: f64) -> Result<(f64, f64)> {
    check_family(family)?;
    let grid = family[0].grid();
    let (i, j) = (grid.index_of(s)?, grid.index_of(t)?);
    let lhs = (mnc.measure(&section(family, i)) - mnc.measure(&section(family, j))).abs();
    let spread = family
        .iter()
        .map(|u| mnc.dist(u.row(i), u.row(j)))
        .fold(0.0, f64::max);
    Ok((lhs, mnc.unit_ball_constant() * spread))
}

/// Pointwise traces of `mu(int_a^t X)` and `int_a^t mu(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTraces {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Outcome of the rd-equicontinuity precondition at the given tolerance.
    pub equicontinuous: bool,
}

impl IntegralTraces {
    /// Largest `lhs - rhs`; non-positive when the inequality holds.
    pub fn max_excess(&self) -> f64 {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(l, r)| l - r)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn mnc_integral_inequality(family: &[GridFunction], mnc: &dyn Mnc, eps: f64) -> Result<IntegralTraces> {
    check_family(family)?;
    let equicontinuous = matches!(check_rd_continuity_with(family, eps, Norm::Max)?, RdCheck::Partition(_));
    let dim = family[0].dim();
    let n = family[0].len();
    let mus = GridFunction::new(family[0].grid().clone(), 1, mnc_trace(family, mnc)?)?;

    let mut integrals = vec![vec![0.0; dim]; family.len()];
    let mut rhs_acc = [0.0];
    let mut lhs = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        let rows: Vec<&[f64]> = integrals.iter().map(Vec::as_slice).collect();
        lhs.push(mnc.measure(&rows));
        rhs.push(rhs_acc[0]);
        if i + 1 < n {
            for (u, acc) in family.iter().zip(integrals.iter_mut()) {
                accumulate_cell(u, i, acc);
            }
            accumulate_cell(&mus, i, &mut rhs_acc);
        }
    }
    Ok(IntegralTraces { lhs, rhs, equicontinuous })
}

/// Evaluation of the function-space MNC
/// `lim_{eps->0} sup_u omega(u, eps) + sup_t mu(X(t))` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpaceMnc {
    /// `(eps, sup_u omega(u, eps))` sorted by decreasing eps.
    pub modulus_trace: Vec<(f64, f64)>,
    /// Modulus at the smallest eps; the limit itself is not asserted.
    pub modulus_term: f64,
    /// Modulus trace nonincreasing as eps decreases.
    pub monotone: bool,
    pub sup_term: f64,
    pub value: f64,
}

/// Largest `|u(s) - u(t)|` over members and node pairs with `|s - t| <= eps`.
pub fn modulus_of_continuity(family: &[GridFunction], mnc: &dyn Mnc, eps: f64) -> Result<f64> {
    check_family(family)?;
    let nodes = family[0].grid().nodes();
    let mut best = 0.0f64;
    for u in family {
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[j] - nodes[i] > eps {
                    break;
                }
                best = best.max(mnc.dist(u.row(i), u.row(j)));
            }
        }
    }
    Ok(best)
}

pub fn mnc_on_function_space(family: &[GridFunction], mnc: &dyn Mnc, eps_grid: &[f64]) -> Result<FunctionSpaceMnc> {
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Precondition("eps grid must be non-empty and positive".into()));
    }
    let mut eps: Vec<f64> = eps_grid.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let modulus_trace = eps
        .iter()
        .map(|&e| Ok((e, modulus_of_continuity(family, mnc, e)?)))
        .collect::<Result<Vec<_>>>()?;
    let monotone = modulus_trace.windows(2).all(|w| w[1].1 <= w[0].1);
    let modulus_term = modulus_trace.last().unwrap().1;
    let sup_term = mnc_trace(family, mnc)?.into_iter().fold(0.0, f64::max);
    Ok(FunctionSpaceMnc {
        modulus_trace,
        modulus_term,
        monotone,
        sup_term,
        value: modulus_term + sup_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::timescale::{TimeScale, TsInterval};
    use std::sync::Arc;

    fn layout() -> C0Layout {
        C0Layout::new(2, vec![TailShape::Geometric { r: 0.5 }, TailShape::Persistent]).unwrap()
    }

    fn grid() -> Arc<Grid> {
        let ts = TimeScale::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        Arc::new(Grid::build(&TsInterval::whole(&ts), 0.05).unwrap())
    }

    #[test]
    fn set_distance_basics() {
        let origin = [0.0, 0.0, 0.0];
        let e1 = [1.0, 0.0, 0.0];
        assert_eq!(set_distance(&[&origin], &[&e1], Norm::Euclidean), 1.0);
        assert_eq!(set_distance(&[&origin], &[&e1, &origin], Norm::Euclidean), 0.0);
        // non-symmetric
        assert_eq!(set_distance(&[&e1, &origin], &[&origin], Norm::Euclidean), 1.0);
    }

    #[test]
    fn constant_family_with_unit_profile() {
        let g = grid();
        let mnc = HausdorffC0 { layout: layout() };
        let family = vec![
            GridFunction::constant(g.clone(), &[0.0, 0.0, 0.0, 1.0]).unwrap(),
            GridFunction::constant(g.clone(), &[1.0, 2.0, 3.0, 0.0]).unwrap(),
        ];
        let f = mnc_on_function_space(&family, &mnc, &[0.1, 0.01]).unwrap();
        assert_eq!(f.modulus_term, 0.0);
        assert_eq!(f.sup_term, 1.0);
        assert_eq!(f.value, 1.0);

        let zero_tails = vec![
            GridFunction::constant(g.clone(), &[0.0, 5.0, 1.0, 0.0]).unwrap(),
            GridFunction::constant(g, &[1.0, 2.0, 3.0, 0.0]).unwrap(),
        ];
        assert_eq!(mnc_on_function_space(&zero_tails, &mnc, &[0.1]).unwrap().value, 0.0);
    }

    #[test]
    fn common_shift_leaves_trace_unchanged() {
        let g = grid();
        let mnc = HausdorffC0 { layout: layout() };
        let family: Vec<GridFunction> = [0.5, -2.0]
            .iter()
            .map(|&p| GridFunction::from_fn(g.clone(), 4, |t, v| v.copy_from_slice(&[t.sin(), t * t, t, p])).unwrap())
            .collect();
        for s in [0.0, 0.5, 1.0, 2.0, 3.0] {
            let (lhs, rhs) = mnc_continuity_bound(&family, &mnc, 0.0, s).unwrap();
            assert_eq!(lhs, 0.0);
            assert!(rhs >= 0.0);
        }
    }

    #[test]
    fn lipschitz_modulus_bound() {
        let g = grid();
        let m = 2.0;
        let family: Vec<GridFunction> = (0..3)
            .map(|k| GridFunction::scalar(g.clone(), |t| m * (t + k as f64).sin()).unwrap())
            .collect();
        let mnc = DiameterMnc { norm: Norm::Max };
        let f = mnc_on_function_space(&family, &mnc, &[0.2, 0.1, 0.05]).unwrap();
        assert!(f.monotone);
        assert!(f.modulus_term <= m * 0.05 + 1e-12);
    }

    #[test]
    fn integral_inequality_on_singleton() {
        let g = grid();
        let u = GridFunction::from_fn(g, 4, |t, v| v.copy_from_slice(&[t, 1.0, t.cos(), t])).unwrap();
        let mnc = HausdorffC0 { layout: layout() };
        let traces = mnc_integral_inequality(&[u], &mnc, 0.5).unwrap();
        assert!(traces.equicontinuous);
        // singleton: the integral has persistent part int t, so lhs = rhs
        assert!(traces.max_excess() <= 1e-12);
    }
}
