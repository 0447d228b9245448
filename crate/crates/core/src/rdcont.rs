//! rd-continuity certification at grid resolution.
//!
//! A function (or a family sharing one grid) is certified by a finite cover
//! of the interval with balls `N_delta(tau) = (tau - delta, tau + delta) ∩ T`
//! centered at grid nodes or dense-cell midpoints, `tau_1 = a < ... < tau_n = b`.
//! Inside a ball, every pair of nodes on an admissible side must differ by
//! less than `eps`: all pairs when the center is right-dense, otherwise pairs
//! lying both left of the center or both at-or-right of it.
//!
//! The continuum between two consecutive nodes of a dense segment is modelled
//! by requiring each such link to lie inside a single ball. Certification is
//! therefore exact over nodes and approximate inside dense segments.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, Norm};

/// Witness of rd-continuity: ball centers, radii and the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct RdPartition {
    pub centers: Vec<f64>,
    pub radii: Vec<f64>,
    pub epsilon: f64,
}

/// An offending node pair: no admissible ball can contain both.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Location reported for the failure (right node of the offending pair).
    pub center: f64,
    pub s: f64,
    pub t: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RdCheck {
    Partition(RdPartition),
    Violation(Violation),
}

impl RdCheck {
    pub fn is_continuous(&self) -> bool {
        matches!(self, RdCheck::Partition(_))
    }

    pub fn partition(&self) -> Option<&RdPartition> {
        match self {
            RdCheck::Partition(p) => Some(p),
            RdCheck::Violation(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            RdCheck::Violation(v) => Some(v),
            RdCheck::Partition(_) => None,
        }
    }
}

/// Shared view of a family on one grid.
struct Family<'a> {
    grid: &'a Grid,
    members: &'a [GridFunction],
    norm: Norm,
}

impl<'a> Family<'a> {
    fn new(members: &'a [GridFunction], norm: Norm) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::Precondition("empty family".into()))?;
        if members.iter().any(|m| !m.same_grid(first)) {
            return Err(Error::GridMismatch);
        }
        Ok(Family {
            grid: first.grid(),
            members,
            norm,
        })
    }

    /// Largest member-wise distance between the values at nodes `i` and `j`.
    fn spread(&self, i: usize, j: usize) -> f64 {
        self.members
            .iter()
            .fold(0.0, |m, u| m.max(self.norm.dist(u.row(i), u.row(j))))
    }

    /// Centers are indexed by slots: `2i` is node `i`, `2i + 1` the midpoint
    /// of the dense cell `(i, i + 1)`.
    fn slot_pos(&self, slot: usize) -> f64 {
        let nodes = self.grid.nodes();
        if slot.is_multiple_of(2) {
            nodes[slot / 2]
        } else {
            0.5 * (nodes[slot / 2] + nodes[slot / 2 + 1])
        }
    }

    fn slot_exists(&self, slot: usize) -> bool {
        slot.is_multiple_of(2) || self.grid.is_dense_link(slot / 2)
    }

    fn slot_dense(&self, slot: usize) -> bool {
        slot % 2 == 1 || !self.grid.is_right_scattered(slot / 2)
    }

    /// Pair `(i, j)` is constrained inside a ball centered at `slot`.
    fn constrained(&self, slot: usize, i: usize, j: usize) -> bool {
        let c = slot / 2;
        self.slot_dense(slot) || (i < c) == (j < c)
    }

    fn margin(&self) -> f64 {
        let nodes = self.grid.nodes();
        let min_gap = nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if min_gap.is_finite() {
            1e-9 * min_gap
        } else {
            1e-9
        }
    }

    fn span(&self) -> f64 {
        self.grid.b() - self.grid.a()
    }
}

/// Maximal admissible ball at a center slot: radius and covered index range.
#[derive(Debug, Clone, Copy)]
struct Ball {
    slot: usize,
    radius: f64,
    lo: usize,
    hi: usize,
}

fn max_ball(fam: &Family<'_>, slot: usize, eps: f64) -> Option<Ball> {
    let nodes = fam.grid.nodes();
    let n = nodes.len();
    let x = fam.slot_pos(slot);
    let c = slot / 2;
    let (mut lo, mut hi) = if slot.is_multiple_of(2) { (c, c) } else { (c, c + 1) };
    if hi > lo && fam.spread(lo, hi) >= eps {
        return None;
    }
    let mut inside: Vec<usize> = (lo..=hi).collect();
    loop {
        let dl = (lo > 0).then(|| x - nodes[lo - 1]);
        let dr = (hi + 1 < n).then(|| nodes[hi + 1] - x);
        let d = match (dl, dr) {
            (None, None) => {
                return Some(Ball {
                    slot,
                    radius: fam.span() + 1.0,
                    lo,
                    hi,
                })
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (Some(l), Some(r)) => l.min(r),
        };
        // distances equal up to rounding (mirror nodes around a midpoint)
        // enter together
        let tie = |x: Option<f64>| x.is_some_and(|x| x <= d + fam.margin());
        let mut entering = Vec::with_capacity(2);
        if tie(dl) {
            entering.push(lo - 1);
        }
        if tie(dr) {
            entering.push(hi + 1);
        }
        let mut ok = true;
        'check: for (k, &p) in entering.iter().enumerate() {
            for &q in inside.iter().chain(&entering[..k]) {
                if fam.constrained(slot, p, q) && fam.spread(p, q) >= eps {
                    ok = false;
                    break 'check;
                }
            }
        }
        if !ok {
            return Some(Ball {
                slot,
                radius: d - 0.5 * fam.margin(),
                lo,
                hi,
            });
        }
        for &p in &entering {
            if p < lo {
                lo = p;
            } else {
                hi = p;
            }
            inside.push(p);
        }
    }
}

fn greedy_cover(fam: &Family<'_>, eps: f64) -> RdCheck {
    let grid = fam.grid;
    let nodes = grid.nodes();
    let n = nodes.len();
    let last_slot = 2 * (n - 1);
    let mut balls = vec![max_ball(fam, 0, eps).expect("node balls always exist")];
    let mut reach = balls[0].hi;
    while reach + 1 < n {
        // next uncovered item: the link (reach, reach+1) or the node reach+1
        let link = grid.is_dense_link(reach);
        let (need_lo, need_hi) = if link {
            (reach, reach + 1)
        } else {
            (reach + 1, reach + 1)
        };
        let prev = balls.last().unwrap().slot;
        let mut best: Option<Ball> = None;
        for slot in prev + 1..=last_slot {
            if !fam.slot_exists(slot) {
                continue;
            }
            let ball = max_ball(fam, slot, eps);
            match ball {
                Some(b) if b.lo <= need_lo && b.hi >= need_hi => {
                    if best.is_none_or(|o| b.hi > o.hi) {
                        best = Some(b);
                    }
                }
                _ if slot > 2 * need_hi => break,
                _ => {}
            }
            if let Some(b) = best {
                if b.hi + 1 == n || slot >= 2 * b.hi {
                    break;
                }
            }
        }
        match best {
            Some(b) => {
                reach = b.hi;
                balls.push(b);
            }
            None => {
                let (s, t) = (need_lo, need_hi);
                return RdCheck::Violation(Violation {
                    center: nodes[t],
                    s: nodes[s],
                    t: nodes[t],
                    distance: fam.spread(s, t),
                });
            }
        }
    }
    if balls.last().unwrap().slot != last_slot {
        balls.push(max_ball(fam, last_slot, eps).expect("node balls always exist"));
    }
    RdCheck::Partition(RdPartition {
        centers: balls.iter().map(|b| fam.slot_pos(b.slot)).collect(),
        radii: balls.iter().map(|b| b.radius).collect(),
        epsilon: eps,
    })
}

/// Certifies rd-continuity of `u` at tolerance `eps` (Euclidean norm).
pub fn check_rd_continuity(u: &GridFunction, eps: f64) -> Result<RdCheck> {
    check_rd_continuity_with(std::slice::from_ref(u), eps, Norm::Euclidean)
}

/// Certifies uniform rd-equicontinuity of a family sharing one grid: one
/// cover that works for every member.
pub fn check_rd_continuity_with(family: &[GridFunction], eps: f64, norm: Norm) -> Result<RdCheck> {
    if !(eps > 0.0) {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    let fam = Family::new(family, norm)?;
    Ok(greedy_cover(&fam, eps))
}

impl RdPartition {
    /// Brute-force check of the cover against a family: centers ordered with
    /// `tau_1 = a`, `tau_n = b`; every node and every dense link inside some
    /// ball; every admissible pair inside every ball closer than `eps`.
    pub fn verify(&self, family: &[GridFunction], norm: Norm) -> Result<std::result::Result<(), Violation>> {
        let fam = Family::new(family, norm)?;
        let grid = fam.grid;
        let nodes = grid.nodes();
        let n = nodes.len();
        if self.centers.len() != self.radii.len() || self.centers.is_empty() {
            return Err(Error::Precondition("malformed partition".into()));
        }
        if self.centers[0] != grid.a() || *self.centers.last().unwrap() != grid.b() {
            return Err(Error::Precondition("partition must start at a and end at b".into()));
        }
        if self.centers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("centers must be strictly increasing".into()));
        }
        let mut covered = vec![false; n];
        let mut link_covered = vec![false; n];
        for (&tau, &r) in self.centers.iter().zip(&self.radii) {
            let slot = match grid.index_of(tau) {
                Ok(i) => 2 * i,
                Err(_) => {
                    let i = nodes.partition_point(|&x| x < tau);
                    if i == 0 || i >= n || !grid.is_dense_link(i - 1) {
                        return Err(Error::Precondition(format!("center {tau} is not in the interval")));
                    }
                    2 * (i - 1) + 1
                }
            };
            let lo = nodes.partition_point(|&x| x < tau - r);
            let hi = nodes.partition_point(|&x| x <= tau + r);
            let members: Vec<usize> = (lo..hi).filter(|&i| (nodes[i] - tau).abs() < r).collect();
            for (a, &i) in members.iter().enumerate() {
                covered[i] = true;
                if members.get(a + 1) == Some(&(i + 1)) {
                    link_covered[i] = true;
                }
                for &j in &members[a + 1..] {
                    if fam.constrained(slot, i, j) {
                        let d = fam.spread(i, j);
                        if d >= self.epsilon {
                            return Ok(Err(Violation {
                                center: tau,
                                s: nodes[i],
                                t: nodes[j],
                                distance: d,
                            }));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if !covered[i] {
                return Err(Error::Precondition(format!("node {} not covered", nodes[i])));
            }
            if grid.is_dense_link(i) && !link_covered[i] {
                return Err(Error::Precondition(format!(
                    "link ({}, {}) not inside a single ball",
                    nodes[i],
                    nodes[i + 1]
                )));
            }
        }
        Ok(Ok(()))
    }
}

/// Outcome of [`equicontinuity_partition`].
#[derive(Debug, Clone, PartialEq)]
pub enum EquiPartition {
    Knots(Vec<f64>),
    Violation(Violation),
}

impl EquiPartition {
    pub fn knots(&self) -> Option<&[f64]> {
        match self {
            EquiPartition::Knots(k) => Some(k),
            EquiPartition::Violation(_) => None,
        }
    }
}

/// Knots `a = xi_1 < ... < xi_m = b` such that every member oscillates by
/// less than `eps` on each half-open span `[xi_j, xi_{j+1})`, built from a
/// uniform rd-cover by the left/right merge of adjacent balls.
///
/// When the left and right pieces overlap, the merge point is the smallest
/// grid node of the overlap (or the midpoint of the overlap when it contains
/// no node).
pub fn equicontinuity_partition(family: &[GridFunction], eps: f64, norm: Norm) -> Result<EquiPartition> {
    let cover = match check_rd_continuity_with(family, eps, norm)? {
        RdCheck::Partition(p) => p,
        RdCheck::Violation(v) => return Ok(EquiPartition::Violation(v)),
    };
    let grid = family[0].grid();
    let scale = grid.interval().scale();
    let nodes = grid.nodes();
    let (tau, delta) = (&cover.centers, &cover.radii);
    let mut knots = vec![tau[0]];
    for k in 0..tau.len() - 1 {
        let (t0, t1) = (tau[k], tau[k + 1]);
        let left_end = t0 + delta[k];
        let right_start = t1 - delta[k + 1];
        // L ∩ R as a real interval with open/closed ends
        let (lo, lo_open) = if right_start < t0 { (t0, false) } else { (right_start, true) };
        let (hi, hi_open) = if left_end > t1 { (t1, false) } else { (left_end, true) };
        let in_range = |x: f64| {
            (if lo_open { x > lo } else { x >= lo }) && (if hi_open { x < hi } else { x <= hi })
        };
        let eta = nodes.iter().copied().find(|&x| in_range(x)).or_else(|| {
            // no node inside: the overlap, if any, sits strictly inside a
            // dense cell
            let p = scale.inf_above(lo)?;
            let seg = scale.locate(p).ok()?.segment;
            let top = hi.min(scale.segments()[seg].hi);
            (p < top).then_some(0.5 * (p + top))
        });
        match eta {
            Some(e) => knots.extend([e, t1]),
            None => {
                let sup_l = scale.sup_below(left_end).unwrap_or(t0).max(t0);
                let inf_r = scale.inf_above(right_start).unwrap_or(t1).min(t1);
                knots.extend([sup_l, inf_r, t1]);
            }
        }
    }
    knots.dedup();
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    // verify the span condition over nodes
    let fam = Family::new(family, norm)?;
    for w in knots.windows(2) {
        let idx: Vec<usize> = (0..nodes.len())
            .filter(|&i| nodes[i] >= w[0] && nodes[i] < w[1])
            .collect();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                let d = fam.spread(i, j);
                if d >= eps {
                    return Ok(EquiPartition::Violation(Violation {
                        center: w[0],
                        s: nodes[i],
                        t: nodes[j],
                        distance: d,
                    }));
                }
            }
        }
    }
    Ok(EquiPartition::Knots(knots))
}
