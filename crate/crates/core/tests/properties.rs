mod common;

use std::sync::Arc;

use proptest::prelude::*;
use tscale_core::kamke::gronwall_solution;
use tscale_core::parabolic::parabolic_rhs;
use tscale_core::solver::LinearRhs;
use tscale_core::*;

fn raw_segments() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-20.0..20.0f64, 0.0..3.0f64, prop::bool::ANY), 1..8).prop_map(|v| {
        v.into_iter()
            .map(|(lo, len, point)| if point { (lo, lo) } else { (lo, lo + len) })
            .collect()
    })
}

fn scale_and_seed() -> impl Strategy<Value = (Vec<(f64, f64)>, u64)> {
    (any::<u64>()).prop_map(|seed| {
        let mut r = common::rng(seed);
        (common::random_segments(&mut r), seed)
    })
}

fn points(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), 1..max)
}

fn refs(v: &[Vec<f64>]) -> Vec<&[f64]> {
    v.iter().map(Vec::as_slice).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_is_sorted_disjoint_and_idempotent(raw in raw_segments()) {
        let ts = TimeScale::new(&raw).unwrap();
        let segs = ts.segments();
        for w in segs.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
        for s in segs {
            prop_assert!(s.lo <= s.hi);
        }
        let again: Vec<(f64, f64)> = segs.iter().map(|s| (s.lo, s.hi)).collect();
        prop_assert_eq!(TimeScale::new(&again).unwrap(), ts.clone());
        let mut reversed = raw.clone();
        reversed.reverse();
        prop_assert_eq!(TimeScale::new(&reversed).unwrap(), ts.clone());
        for &(lo, hi) in &raw {
            prop_assert!(ts.contains(lo) && ts.contains(hi) && ts.contains(0.5 * (lo + hi)));
        }
    }

    #[test]
    fn jump_operators_bracket_points((segs, _) in scale_and_seed()) {
        let ts = TimeScale::new(&segs).unwrap();
        let grid = common::whole_grid(&ts, 0.1);
        for &t in grid.nodes() {
            let s = ts.sigma(t).unwrap();
            let r = ts.rho(t).unwrap();
            prop_assert!(r <= t && t <= s);
            prop_assert!(ts.contains(s) && ts.contains(r));
            prop_assert_eq!(s, common::oracle_sigma(&segs, t));
            if s > t {
                prop_assert_eq!(ts.rho(s).unwrap(), t);
                prop_assert!(ts.classify(t).unwrap().is_right_scattered());
            }
            if r < t {
                prop_assert_eq!(ts.sigma(r).unwrap(), t);
            }
        }
    }

    #[test]
    fn set_distance_triangle_and_subset(
        x in points(2, 6),
        y in points(2, 6),
        z in points(2, 6),
    ) {
        for norm in [Norm::Euclidean, Norm::Max] {
            let dxz = set_distance(&refs(&x), &refs(&z), norm);
            let dxy = set_distance(&refs(&x), &refs(&y), norm);
            let dyz = set_distance(&refs(&y), &refs(&z), norm);
            prop_assert!(dxz <= dxy + dyz + 1e-12);
            let mut sup = z.clone();
            sup.extend(x.iter().cloned());
            prop_assert_eq!(set_distance(&refs(&x), &refs(&sup), norm), 0.0);
            let mut far = x.clone();
            far.push(vec![100.0, 100.0]);
            prop_assert!(set_distance(&refs(&far), &refs(&sup), norm) > 0.0);
        }
    }

    #[test]
    fn kamke_envelope_is_monotone_in_q(
        (segs, seed) in scale_and_seed(),
        bump in 0.0..2.0f64,
        eps in 1e-6..1.0f64,
    ) {
        let ts = TimeScale::new(&segs).unwrap();
        let grid = common::whole_grid(&ts, 0.05);
        let mut r = common::rng(seed);
        let f = common::SmoothFn::random(&mut r, 1, 1.0);
        let q1 = GridFunction::scalar(grid.clone(), |t| {
            let mut v = [0.0];
            f.eval(t, &mut v);
            v[0].abs()
        }).unwrap();
        let q2 = q1.map(1, |t, v, o| o[0] = v[0] + bump * (0.5 + 0.5 * t.sin())).unwrap();
        let e1 = gronwall_solution(&q1, eps).unwrap();
        let e2 = gronwall_solution(&q2, eps).unwrap();
        for i in 0..grid.len() {
            prop_assert!(e1.row(i)[0] <= e2.row(i)[0]);
        }
        prop_assert_eq!(gronwall_solution(&q2, 0.0).unwrap().sup_norm(Norm::Max), 0.0);
    }

    #[test]
    fn discrete_heat_step_obeys_maximum_principle(
        phi in prop::collection::vec(-1.0..1.0f64, 4..20),
        step in 0.05..0.5f64,
    ) {
        let n = phi.len();
        let pts: Vec<f64> = (0..8).map(|k| k as f64 * step).collect();
        let ts = TimeScale::points(&pts).unwrap();
        let table = phi.clone();
        let spec = ParabolicSpec::new(TsInterval::whole(&ts), n, 1.0)
            .unwrap()
            .with_phi(move |x| table[(x as usize).clamp(1, n) - 1])
            .with_policy(WindowPolicy::Whole);
        let (trace, _) = solve_parabolic(&spec, 1.0).unwrap();
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..trace.u.len() - 1 {
            prop_assert!(sup(trace.u.row(i + 1)) <= sup(trace.u.row(i)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn stencil_lipschitz_constant_is_four(
        x in prop::collection::vec(-3.0..3.0f64, 12),
        y in prop::collection::vec(-3.0..3.0f64, 12),
        t in 0.0..1.0f64,
    ) {
        let ts = TimeScale::interval(0.0, 1.0).unwrap();
        let spec = ParabolicSpec::new(TsInterval::whole(&ts), 12, 1.0)
            .unwrap()
            .with_forcing(|t, x| (-x).exp() * t.cos());
        let rhs = parabolic_rhs(&spec);
        let (mut fx, mut fy) = (vec![0.0; 12], vec![0.0; 12]);
        rhs.eval(t, &x, &mut fx);
        rhs.eval(t, &y, &mut fy);
        prop_assert!(Norm::Max.dist(&fx, &fy) <= 4.0 * Norm::Max.dist(&x, &y) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn discrete_solver_is_the_forward_recursion(
        gaps in prop::collection::vec(0.01..2.0f64, 1..30),
        a in -1.0..1.0f64,
        b in -1.0..1.0f64,
        u0 in -2.0..2.0f64,
    ) {
        let mut pts = vec![0.0];
        for g in &gaps {
            pts.push(pts.last().unwrap() + g);
        }
        let ts = TimeScale::points(&pts).unwrap();
        let rhs = Arc::new(LinearRhs::new(vec![a], vec![b]).unwrap());
        let spec = IvpSpec::new(rhs, vec![u0], TsInterval::whole(&ts), 1.0, 1.0)
            .unwrap()
            .with_policy(WindowPolicy::Whole);
        let trace = step_solve(&spec, 1.0).unwrap();
        let nodes = trace.u.grid().nodes().to_vec();
        let mut u = u0;
        prop_assert_eq!(trace.u.row(0)[0], u0);
        for i in 0..nodes.len() - 1 {
            u += (nodes[i + 1] - nodes[i]) * (a * u + b);
            prop_assert_eq!(trace.u.row(i + 1)[0], u);
        }
        prop_assert_eq!(trace.residual, 0.0);
    }

    #[test]
    fn zero_tail_families_have_zero_measure(
        prefixes in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 0..6), 1..5),
    ) {
        let family: Vec<TailedSequence> =
            prefixes.into_iter().map(|p| TailedSequence::finite(p).unwrap()).collect();
        prop_assert_eq!(hausdorff_c0(&family), 0.0);
    }
}
