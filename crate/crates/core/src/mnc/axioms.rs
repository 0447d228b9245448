//! Property checks of the MNC axioms on seeded random finite families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::c0::{TailTerm, TailedSequence};
use super::Mnc;

/// Deterministic source of random finite families of rows.
#[derive(Debug, Clone)]
pub struct FamilyGenerator {
    rng: ChaCha8Rng,
    dim: usize,
    max_members: usize,
    scale: f64,
}

impl FamilyGenerator {
    pub fn new(dim: usize, seed: u64) -> Self {
        FamilyGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            max_members: 6,
            scale: 2.0,
        }
    }

    pub fn with_members(mut self, max_members: usize) -> Self {
        self.max_members = max_members.max(1);
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn row(&mut self) -> Vec<f64> {
        let s = self.scale;
        (0..self.dim).map(|_| self.rng.gen_range(-s..=s)).collect()
    }

    pub fn family(&mut self) -> Vec<Vec<f64>> {
        let m = self.rng.gen_range(1..=self.max_members);
        (0..m).map(|_| self.row()).collect()
    }

    /// Uniform weights on the simplex.
    pub fn simplex_weights(&mut self, m: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..m).map(|_| -(1.0 - self.rng.gen::<f64>()).ln()).collect();
        let total: f64 = e.iter().sum();
        e.into_iter().map(|x| x / total).collect()
    }

    /// Random element of c₀ drawn from the tail catalog.
    pub fn tailed_sequence(&mut self) -> TailedSequence {
        let s = self.scale;
        let n = self.rng.gen_range(0..=6);
        let prefix = (0..n).map(|_| self.rng.gen_range(-s..=s)).collect();
        let tail = match self.rng.gen_range(0..4) {
            0 => vec![],
            1 => vec![TailTerm::geometric(self.rng.gen_range(-s..=s), self.rng.gen_range(0.0..0.95))],
            2 => vec![TailTerm::const_until(self.rng.gen_range(-s..=s), self.rng.gen_range(0..40))],
            _ => vec![
                TailTerm::geometric(self.rng.gen_range(-s..=s), self.rng.gen_range(0.0..0.95)),
                TailTerm::const_until(self.rng.gen_range(-s..=s), self.rng.gen_range(0..40)),
            ],
        };
        TailedSequence::new(prefix, tail).expect("catalog terms are valid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest observed violation (0 when none).
    pub worst: f64,
}

impl AxiomOutcome {
    fn new(name: &'static str) -> Self {
        AxiomOutcome { name, trials: 0, failures: 0, worst: 0.0 }
    }

    /// Records `lhs <= rhs + tol`.
    fn record(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.trials += 1;
        let excess = lhs - rhs;
        if excess > tol || !excess.is_finite() {
            self.failures += 1;
            self.worst = self.worst.max(excess);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

fn refs(rows: &[Vec<f64>]) -> Vec<&[f64]> {
    rows.iter().map(Vec::as_slice).collect()
}

fn lin(a: f64, x: &[f64], b: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

/// Runs `trials` rounds of the axiom checks on generated family pairs.
///
/// Names: `ii` monotonicity, `iii` closure (adding the limit of a sampled
/// convergent sequence moves the value by at most `K |d| / m`), `iv` hull
/// (adding convex combinations), `v` convexity, `vi` nested sequences
/// shrinking onto a point, `vii` homogeneity, `viii` subadditivity.
pub fn axiom_suite(mnc: &dyn Mnc, gen: &mut FamilyGenerator, trials: usize) -> AxiomReport {
    let mut ii = AxiomOutcome::new("ii");
    let mut iii = AxiomOutcome::new("iii");
    let mut iv = AxiomOutcome::new("iv");
    let mut v = AxiomOutcome::new("v");
    let mut vi = AxiomOutcome::new("vi");
    let mut vii = AxiomOutcome::new("vii");
    let mut viii = AxiomOutcome::new("viii");
    let k = mnc.unit_ball_constant();

    for _ in 0..trials {
        let x = gen.family();
        let y = gen.family();
        let mx = mnc.measure(&refs(&x));
        let my = mnc.measure(&refs(&y));
        let tol = 1e-12 * (1.0 + mx + my);

        let mut union = x.clone();
        union.extend(y.iter().cloned());
        ii.record(mx, mnc.measure(&refs(&union)), tol);

        let limit = gen.row();
        let d = gen.row();
        let m = 8;
        let mut seq = x.clone();
        seq.extend((1..=m).map(|j| lin(1.0, &limit, 1.0 / j as f64, &d)));
        let open = mnc.measure(&refs(&seq));
        seq.push(limit.clone());
        let closed = mnc.measure(&refs(&seq));
        iii.record((closed - open).abs(), k * mnc.norm(&d) / m as f64, tol);

        let mut hull = x.clone();
        for _ in 0..4 {
            let w = gen.simplex_weights(x.len());
            let mut p = vec![0.0; gen.dim()];
            for (wi, row) in w.iter().zip(&x) {
                p = lin(1.0, &p, *wi, row);
            }
            hull.push(p);
        }
        iv.record((mnc.measure(&refs(&hull)) - mx).abs(), 0.0, tol);

        let lambda: f64 = gen.rng().gen_range(0.0..=1.0);
        let mixed: Vec<Vec<f64>> = x
            .iter()
            .flat_map(|p| y.iter().map(move |q| lin(lambda, p, 1.0 - lambda, q)))
            .collect();
        v.record(mnc.measure(&refs(&mixed)), lambda * mx + (1.0 - lambda) * my, tol);

        let scale: f64 = gen.rng().gen_range(-3.0..=3.0);
        let scaled: Vec<Vec<f64>> = x.iter().map(|p| lin(scale, p, 0.0, p)).collect();
        vii.record((mnc.measure(&refs(&scaled)) - scale.abs() * mx).abs(), 0.0, tol * (1.0 + scale.abs()));

        let sum: Vec<Vec<f64>> = x
            .iter()
            .flat_map(|p| y.iter().map(move |q| lin(1.0, p, 1.0, q)))
            .collect();
        viii.record(mnc.measure(&refs(&sum)), mx + my, tol);

        // X_n = {c} ∪ {c + d/j : n <= j <= n + m}: nested, shrinking onto c
        let centre = gen.row();
        let mut prev = f64::INFINITY;
        let mut ok = true;
        for n in 1..=10 {
            let mut level = vec![centre.clone()];
            level.extend((n..=n + m).map(|j| lin(1.0, &centre, 1.0 / j as f64, &d)));
            let value = mnc.measure(&refs(&level));
            ok &= value <= prev + tol && level.contains(&centre);
            prev = value;
        }
        vi.record(if ok { 0.0 } else { 1.0 }, 0.0, 0.0);
    }
    AxiomReport { outcomes: vec![ii, iii, iv, v, vi, vii, viii] }
}

#[cfg(test)]
mod tests {
    use super::super::{C0Layout, DiameterMnc, HausdorffC0, TailShape};
    use super::*;
    use crate::grid::Norm;

    #[test]
    fn hausdorff_axioms() {
        let layout = C0Layout::new(3, vec![TailShape::Geometric { r: 0.3 }, TailShape::Persistent]).unwrap();
        let mnc = HausdorffC0 { layout };
        let mut gen = FamilyGenerator::new(5, 7);
        let report = axiom_suite(&mnc, &mut gen, 50);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn diameter_axioms() {
        let mnc = DiameterMnc { norm: Norm::Max };
        let mut gen = FamilyGenerator::new(3, 11);
        let report = axiom_suite(&mnc, &mut gen, 50);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn homogeneity_factor_two_on_profile_family() {
        let layout = C0Layout::new(0, vec![TailShape::Persistent]).unwrap();
        let mnc = HausdorffC0 { layout };
        let x = [vec![1.0], vec![-0.25]];
        let scaled: Vec<Vec<f64>> = x.iter().map(|r| vec![-2.0 * r[0]]).collect();
        assert_eq!(mnc.measure(&refs(&x)), 1.0);
        assert_eq!(mnc.measure(&refs(&scaled)), 2.0);
    }

    #[test]
    fn generator_is_deterministic() {
        let mut a = FamilyGenerator::new(4, 3);
        let mut b = FamilyGenerator::new(4, 3);
        assert_eq!(a.family(), b.family());
        assert_eq!(a.tailed_sequence(), b.tailed_sequence());
    }
}
