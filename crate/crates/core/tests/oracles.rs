//! Library results against brute-force or closed-form oracles.

mod common;

use rand::Rng;
use tscale_core::hull::hull_distance;
use tscale_core::*;

fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p[0] - a[0] - s * dx).powi(2) + (p[1] - a[1] - s * dy).powi(2)).sqrt()
}

fn in_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let cross = |o: [f64; 2], u: [f64; 2], v: [f64; 2]| (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0]);
    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Distance to the hull of planar points as the minimum over all triangles
/// spanned by them.
fn brute_hull_distance(points: &[[f64; 2]], x: [f64; 2]) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i..n {
            best = best.min(seg_dist(x, points[i], points[j]));
            for k in j + 1..n {
                if in_triangle(x, points[i], points[j], points[k]) {
                    return 0.0;
                }
            }
        }
    }
    best
}

#[test]
fn planar_hull_distance_matches_triangle_scan() {
    let mut r = common::rng(41);
    for _ in 0..400 {
        let n = r.gen_range(1..=7);
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
        let x = [r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)];
        let rows: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let got = hull_distance(&rows, &x);
        let want = brute_hull_distance(&pts, x);
        assert!((got - want).abs() <= 1e-8, "{got} vs {want} for {pts:?}, {x:?}");
    }
}

#[test]
fn set_distance_matches_double_loop() {
    let mut r = common::rng(42);
    for _ in 0..200 {
        let d = r.gen_range(1..=4);
        let mut cloud = |m: usize| -> Vec<Vec<f64>> {
            (0..m).map(|_| (0..d).map(|_| r.gen_range(-3.0..3.0)).collect()).collect()
        };
        let y = cloud(5);
        let z = cloud(7);
        let mut want = 0.0f64;
        for p in &y {
            let mut near = f64::INFINITY;
            for q in &z {
                near = near.min(common::dist(p, q));
            }
            want = want.max(near);
        }
        let yr: Vec<&[f64]> = y.iter().map(Vec::as_slice).collect();
        let zr: Vec<&[f64]> = z.iter().map(Vec::as_slice).collect();
        assert_eq!(set_distance(&yr, &zr, Norm::Euclidean), want);
    }
}

#[test]
fn sigma_rho_and_neighbours_match_segment_scan() {
    let mut r = common::rng(43);
    for _ in 0..100 {
        let (segs, ts) = common::random_scale(&mut r);
        for &(lo, hi) in &segs {
            for t in [lo, hi, 0.5 * (lo + hi)] {
                assert_eq!(ts.sigma(t).unwrap(), common::oracle_sigma(&segs, t));
            }
        }
        for _ in 0..20 {
            let x = r.gen_range(-1.0..11.0);
            let below = segs.iter().filter(|s| s.0 < x).map(|s| s.1.min(x)).fold(None, |m: Option<f64>, v| {
                Some(m.map_or(v, |m| m.max(v)))
            });
            let above = segs.iter().filter(|s| s.1 > x).map(|s| s.0.max(x)).fold(None, |m: Option<f64>, v| {
                Some(m.map_or(v, |m| m.min(v)))
            });
            assert_eq!(ts.sup_below(x), below);
            assert_eq!(ts.inf_above(x), above);
        }
    }
}

#[test]
fn dense_integral_matches_closed_form() {
    let ts = TimeScale::new(&[(0.0, 1.0), (1.5, 1.5), (2.0, 3.0)]).unwrap();
    let h = 1e-3;
    let grid = common::whole_grid(&ts, h);
    let u = GridFunction::scalar(grid, f64::sin).unwrap();
    // dense parts integrate cos exactly, the gap contributes mu * sin(t)
    let exact = (1.0 - 1.0f64.cos()) + 0.5 * 1.0f64.sin() + 0.5 * 1.5f64.sin() + (2.0f64.cos() - 3.0f64.cos());
    let got = delta_integral(&u, 0.0, 3.0).unwrap()[0];
    assert!((got - exact).abs() <= 2.0 * h * h / 12.0, "{got} vs {exact}");
}

#[test]
fn rk4_converges_with_order_four() {
    let ts = TimeScale::interval(0.0, 1.0).unwrap();
    let rhs = std::sync::Arc::new(tscale_core::solver::LinearRhs::new(vec![0.0, 1.0, -1.0, 0.0], vec![0.0, 0.0]).unwrap());
    let spec = IvpSpec::new(rhs, vec![0.0, 1.0], TsInterval::whole(&ts), 1.0, 1.0)
        .unwrap()
        .with_policy(WindowPolicy::Whole);
    let err = |h: f64| {
        let u = step_solve(&spec, h).unwrap().u;
        let v = u.at(1.0).unwrap();
        (v[0] - 1.0f64.sin()).abs().max((v[1] - 1.0f64.cos()).abs())
    };
    let (e1, e2) = (err(0.1), err(0.05));
    let order = (e1 / e2).log2();
    assert!(order > 3.7, "observed order {order}");
}
