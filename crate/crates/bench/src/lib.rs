//! Benchmark fixtures.

use std::sync::Arc;

use tscale_core::solver::LinearRhs;
use tscale_core::{Grid, GridFunction, IvpSpec, TimeScale, TsInterval, WindowPolicy};

/// `segments` unit intervals separated by unit gaps.
pub fn comb(segments: usize) -> TsInterval {
    let segs: Vec<(f64, f64)> = (0..segments).map(|i| (2.0 * i as f64, 2.0 * i as f64 + 1.0)).collect();
    TsInterval::whole(&TimeScale::new(&segs).expect("valid segments"))
}

/// The integers `0..=n`.
pub fn integers(n: usize) -> TsInterval {
    let segs: Vec<(f64, f64)> = (0..=n).map(|i| (i as f64, i as f64)).collect();
    TsInterval::whole(&TimeScale::new(&segs).expect("valid segments"))
}

pub fn sine(iv: &TsInterval, h: f64) -> GridFunction {
    let grid = Arc::new(Grid::build(iv, h).expect("valid step"));
    GridFunction::scalar(grid, f64::sin).expect("finite values")
}

/// Harmonic oscillator over the whole interval.
pub fn rotation(iv: &TsInterval) -> IvpSpec {
    let rhs = LinearRhs::new(vec![0.0, 1.0, -1.0, 0.0], vec![0.0, 0.0]).expect("square matrix");
    IvpSpec::new(Arc::new(rhs), vec![1.0, 0.0], iv.clone(), 10.0, 1.0)
        .expect("valid problem")
        .with_policy(WindowPolicy::Whole)
}
