//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tscale_core::{Grid, GridFunction, TimeScale, TsInterval};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sorted, disjoint segment list inside `[0, 10]` mixing intervals
/// and isolated points, with gaps of at least 0.05.
pub fn random_segments(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let count = rng.gen_range(1..=6);
    let mut out = Vec::with_capacity(count);
    let mut x: f64 = rng.gen_range(0.0..1.0);
    for _ in 0..count {
        if rng.gen_bool(0.4) {
            out.push((x, x));
        } else {
            let len = rng.gen_range(0.2..1.5);
            out.push((x, x + len));
            x += len;
        }
        x += rng.gen_range(0.05..1.0);
    }
    // round to a coarse lattice so endpoints are exact-ish decimals
    out.iter()
        .map(|&(a, b)| ((a * 1000.0).round() / 1000.0, (b * 1000.0).round() / 1000.0))
        .collect()
}

pub fn random_scale(rng: &mut ChaCha8Rng) -> (Vec<(f64, f64)>, TimeScale) {
    let segs = random_segments(rng);
    let ts = TimeScale::new(&segs).expect("valid segments");
    (segs, ts)
}

/// Forward jump computed from the raw segment list.
pub fn oracle_sigma(segs: &[(f64, f64)], t: f64) -> f64 {
    for (k, &(lo, hi)) in segs.iter().enumerate() {
        if t >= lo && t < hi {
            return t;
        }
        if t == hi {
            return segs.get(k + 1).map_or(t, |s| s.0);
        }
    }
    panic!("{t} not in segment list");
}

/// Smooth test function `sum_k c_k sin(w_k t + p_k)` per component.
#[derive(Debug, Clone)]
pub struct SmoothFn {
    terms: Vec<Vec<(f64, f64, f64)>>,
}

impl SmoothFn {
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, amplitude: f64) -> Self {
        let terms = (0..dim)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        (
                            rng.gen_range(-amplitude..=amplitude),
                            rng.gen_range(0.0..3.0),
                            rng.gen_range(0.0..6.3),
                        )
                    })
                    .collect()
            })
            .collect();
        SmoothFn { terms }
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.terms) {
            *o = terms.iter().map(|(c, w, p)| c * (w * t + p).sin()).sum();
        }
    }

    /// Lipschitz bound per component.
    pub fn lipschitz(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.iter().map(|(c, w, _)| c.abs() * w).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn on(&self, grid: &Arc<Grid>) -> GridFunction {
        GridFunction::from_fn(grid.clone(), self.dim(), |t, out| self.eval(t, out)).unwrap()
    }
}

pub fn whole_grid(ts: &TimeScale, h: f64) -> Arc<Grid> {
    Arc::new(Grid::build(&TsInterval::whole(ts), h).unwrap())
}

/// Brute-force check that a ball cover witnesses rd-continuity: every pair
/// of nodes inside a ball on an admissible side differs by less than `eps`,
/// and every node lies in some ball. Right-density of a center comes from
/// the raw segment list; the right end of the interval counts as
/// right-dense.
pub fn oracle_cover_ok(segs: &[(f64, f64)], u: &GridFunction, centers: &[f64], radii: &[f64], eps: f64) -> bool {
    let nodes = u.grid().nodes();
    let b = *nodes.last().unwrap();
    let mut covered = vec![false; nodes.len()];
    for (&c, &r) in centers.iter().zip(radii) {
        let right_dense = c == b || oracle_sigma(segs, c) == c;
        let lo = nodes.partition_point(|&x| x <= c - r);
        let hi = nodes.partition_point(|&x| x < c + r);
        for i in lo..hi {
            if (nodes[i] - c).abs() >= r {
                continue;
            }
            covered[i] = true;
            for j in i + 1..hi {
                if (nodes[j] - c).abs() >= r {
                    continue;
                }
                let same_side = (nodes[i] < c) == (nodes[j] < c);
                if (right_dense || same_side) && dist(u.row(i), u.row(j)) >= eps {
                    return false;
                }
            }
        }
    }
    covered.into_iter().all(|c| c)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
