//! Grids over time-scale intervals and vector-valued grid functions.
//!
//! A [`Grid`] contains every segment endpoint of its interval. Inside a dense
//! segment consecutive nodes are at most `dense_step` apart; across a gap the
//! consecutive nodes are exactly `(t, sigma(t))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::timescale::TsInterval;

/// Norm used on the value space `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    #[default]
    Euclidean,
    /// Sup norm; the norm of the truncated `c0` model.
    Max,
}

impl Norm {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Max => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Norm::Max => a
                .iter()
                .zip(b)
                .fold(0.0, |m, (x, y)| m.max((x - y).abs())),
        }
    }
}

/// Finite ordered sample of a time-scale interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    interval: TsInterval,
    nodes: Vec<f64>,
    segment_of: Vec<usize>,
    dense_step: f64,
}

impl Grid {
    /// Uniformly subdivides every dense segment with spacing at most `h`.
    pub fn build(interval: &TsInterval, h: f64) -> Result<Grid> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidStep { h });
        }
        let mut nodes = Vec::new();
        let mut segment_of = Vec::new();
        for (k, seg) in interval.scale().segments().iter().enumerate() {
            if seg.is_point() {
                nodes.push(seg.lo);
                segment_of.push(k);
                continue;
            }
            let len = seg.len();
            // guard against len/h landing a hair above an integer
            let n = ((len / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let step = len / n as f64;
            for i in 0..n {
                nodes.push(seg.lo + i as f64 * step);
                segment_of.push(k);
            }
            nodes.push(seg.hi);
            segment_of.push(k);
        }
        Ok(Grid {
            interval: interval.clone(),
            nodes,
            segment_of,
            dense_step: h,
        })
    }

    /// Builds a grid from explicit nodes, validating the grid invariants
    /// against the interval.
    pub fn from_nodes(interval: &TsInterval, nodes: &[f64]) -> Result<Grid> {
        if nodes.is_empty() {
            return Err(Error::Precondition("grid has no nodes".into()));
        }
        let scale = interval.scale();
        let mut snapped = Vec::with_capacity(nodes.len());
        let mut segment_of = Vec::with_capacity(nodes.len());
        for &t in nodes {
            let loc = scale.locate(t)?;
            if let Some(&prev) = snapped.last() {
                if loc.t <= prev {
                    return Err(Error::Precondition(format!(
                        "nodes must be strictly increasing ({} after {})",
                        loc.t, prev
                    )));
                }
            }
            snapped.push(loc.t);
            segment_of.push(loc.segment);
        }
        let mut dense_step: f64 = 0.0;
        for (k, seg) in scale.segments().iter().enumerate() {
            for end in [seg.lo, seg.hi] {
                if !snapped.contains(&end) {
                    return Err(Error::Precondition(format!(
                        "segment endpoint {end} missing from grid nodes"
                    )));
                }
            }
            let idx: Vec<usize> = (0..snapped.len()).filter(|&i| segment_of[i] == k).collect();
            for w in idx.windows(2) {
                dense_step = dense_step.max(snapped[w[1]] - snapped[w[0]]);
            }
        }
        Ok(Grid {
            interval: interval.clone(),
            nodes: snapped,
            segment_of,
            dense_step: if dense_step > 0.0 { dense_step } else { 1.0 },
        })
    }

    pub fn interval(&self) -> &TsInterval {
        &self.interval
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dense_step(&self) -> f64 {
        self.dense_step
    }

    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    pub fn b(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index of the segment (of the restricted scale) owning node `i`.
    pub fn segment_of(&self, i: usize) -> usize {
        self.segment_of[i]
    }

    /// Node `i` is right-scattered within the interval: the next node sits
    /// across a gap.
    pub fn is_right_scattered(&self, i: usize) -> bool {
        i + 1 < self.nodes.len() && self.segment_of[i] != self.segment_of[i + 1]
    }

    /// Nodes `i` and `i + 1` lie in the same dense segment.
    pub fn is_dense_link(&self, i: usize) -> bool {
        i + 1 < self.nodes.len() && self.segment_of[i] == self.segment_of[i + 1]
    }

    /// Node `i` is left-scattered within the interval.
    pub fn is_left_scattered(&self, i: usize) -> bool {
        i > 0 && self.segment_of[i] != self.segment_of[i - 1]
    }

    /// Locates a node, tolerating rounding noise of the order of the snap
    /// tolerance.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let tol = self.interval.scale().snap().max(4.0 * f64::EPSILON * t.abs());
        let i = self.nodes.partition_point(|&x| x < t);
        for j in [i.wrapping_sub(1), i] {
            if let Some(&x) = self.nodes.get(j) {
                if (x - t).abs() <= tol {
                    return Ok(j);
                }
            }
        }
        Err(Error::NotANode { t })
    }

    /// Indices of nodes in `[s, t]`.
    pub fn range(&self, s: f64, t: f64) -> Result<std::ops::RangeInclusive<usize>> {
        let i = self.index_of(s)?;
        let j = self.index_of(t)?;
        if i > j {
            return Err(Error::InvertedInterval { a: s, b: t });
        }
        Ok(i..=j)
    }
}

/// Values on a grid: one `dim`-vector per node, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<Grid>,
    dim: usize,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        if values.len() != dim * grid.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * grid.len(),
                got: values.len(),
            });
        }
        for (i, row) in values.chunks(dim).enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { t: grid.nodes()[i] });
            }
        }
        Ok(GridFunction { grid, dim, values })
    }

    /// Samples `f(t, out)` at every node.
    pub fn from_fn(grid: Arc<Grid>, dim: usize, mut f: impl FnMut(f64, &mut [f64])) -> Result<Self> {
        let mut values = vec![0.0; dim * grid.len()];
        for (row, &t) in values.chunks_mut(dim).zip(grid.nodes()) {
            f(t, row);
        }
        Self::new(grid, dim, values)
    }

    /// Samples a scalar function.
    pub fn scalar(grid: Arc<Grid>, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, 1, |t, out| out[0] = f(t))
    }

    pub fn constant(grid: Arc<Grid>, value: &[f64]) -> Result<Self> {
        Self::from_fn(grid, value.len(), |_, out| out.copy_from_slice(value))
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at node index `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Value at node `t`.
    pub fn at(&self, t: f64) -> Result<&[f64]> {
        Ok(self.row(self.grid.index_of(t)?))
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.grid.nodes().iter().copied().zip(self.values.chunks(self.dim))
    }

    /// Componentwise map of each row.
    pub fn map(&self, dim: usize, mut f: impl FnMut(f64, &[f64], &mut [f64])) -> Result<Self> {
        let mut values = vec![0.0; dim * self.len()];
        for (i, out) in values.chunks_mut(dim).enumerate() {
            f(self.grid.nodes()[i], self.row(i), out);
        }
        Self::new(self.grid.clone(), dim, values)
    }

    /// Checks that two functions live on the same grid.
    pub fn same_grid(&self, other: &GridFunction) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.nodes() == other.grid.nodes()
    }

    /// Sup over nodes of the norm.
    pub fn sup_norm(&self, norm: Norm) -> f64 {
        self.values
            .chunks(self.dim)
            .fold(0.0, |m, r| m.max(norm.norm(r)))
    }

    /// Writes the CSV form: header `t,v1,...,vd`, one row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for k in 1..=self.dim {
            out.push_str(&format!(",v{k}"));
        }
        out.push('\n');
        for (t, row) in self.rows() {
            out.push_str(&format!("{t:?}"));
            for v in row {
                out.push_str(&format!(",{v:?}"));
            }
            out.push('\n');
        }
        out
    }

    /// Reads the CSV form, validating the nodes against `interval`.
    pub fn from_csv(text: &str, interval: &TsInterval) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.len() < 2 || cols[0] != "t" {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `t,v1,...,vd`".into(),
            });
        }
        for (k, c) in cols[1..].iter().enumerate() {
            if *c != format!("v{}", k + 1) {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unexpected column {c:?}"),
                });
            }
        }
        let dim = cols.len() - 1;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != dim + 1 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {} fields, got {}", dim + 1, fields.len()),
                });
            }
            let mut parsed = fields.iter().map(|f| {
                f.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{f:?}: {e}"),
                })
            });
            nodes.push(parsed.next().unwrap()?);
            for v in parsed {
                values.push(v?);
            }
        }
        let grid = Grid::from_nodes(interval, &nodes)?;
        GridFunction::new(Arc::new(grid), dim, values)
    }
}
