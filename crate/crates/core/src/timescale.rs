//! Computable time scales.
//!
//! A [`TimeScale`] is a non-empty finite union of pairwise disjoint closed
//! intervals, kept in a unique canonical form (sorted, merged, no two segments
//! touching). Degenerate segments `lo == hi` model isolated points. Every jump
//! operator query is answered exactly from the segment list.
//!
//! Membership is decided exactly, except that queries within an absolute snap
//! tolerance of a segment endpoint are mapped onto that endpoint.

use std::fmt;

use crate::error::{Error, Result};

/// Default absolute tolerance for snapping queries onto segment endpoints.
pub const DEFAULT_SNAP: f64 = 1e-12;

/// A closed interval `[lo, hi]`, possibly degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    pub fn new(lo: f64, hi: f64) -> Self {
        Segment { lo, hi }
    }

    /// An isolated point.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Density of a point on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Dense,
    Scattered,
}

/// Right/left classification of a point of a time scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub right: Side,
    pub left: Side,
}

impl PointClass {
    pub fn is_right_dense(&self) -> bool {
        self.right == Side::Dense
    }

    pub fn is_right_scattered(&self) -> bool {
        self.right == Side::Scattered
    }

    pub fn is_left_dense(&self) -> bool {
        self.left == Side::Dense
    }

    pub fn is_left_scattered(&self) -> bool {
        self.left == Side::Scattered
    }
}

/// Position of a member point: owning segment and the (snapped) coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub segment: usize,
    pub t: f64,
}

/// A bounded time scale: finite union of disjoint closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    segments: Vec<Segment>,
    snap: f64,
}

impl TimeScale {
    /// Canonicalizes a raw segment list: validates bounds, sorts, and merges
    /// overlapping or touching segments.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyTimeScale);
        }
        let mut segs = Vec::with_capacity(raw.len());
        for &(lo, hi) in raw {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidSegment { lo, hi });
            }
            segs.push(Segment::new(lo, hi));
        }
        segs.sort_by(|x, y| x.lo.total_cmp(&y.lo).then(x.hi.total_cmp(&y.hi)));
        let mut merged: Vec<Segment> = Vec::with_capacity(segs.len());
        for s in segs {
            match merged.last_mut() {
                Some(last) if s.lo <= last.hi => last.hi = last.hi.max(s.hi),
                _ => merged.push(s),
            }
        }
        Ok(TimeScale {
            segments: merged,
            snap: DEFAULT_SNAP,
        })
    }

    /// A single closed interval `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(&[(lo, hi)])
    }

    /// A purely discrete scale made of the given points.
    pub fn points(points: &[f64]) -> Result<Self> {
        let raw: Vec<_> = points.iter().map(|&p| (p, p)).collect();
        Self::new(&raw)
    }

    /// The integers `lo, lo + 1, ..., hi`.
    pub fn integers(lo: i64, hi: i64) -> Result<Self> {
        let pts: Vec<f64> = (lo..=hi).map(|k| k as f64).collect();
        Self::points(&pts)
    }

    /// Replaces the endpoint snap tolerance.
    pub fn with_snap(mut self, snap: f64) -> Self {
        self.snap = snap.max(0.0);
        self
    }

    pub fn snap(&self) -> f64 {
        self.snap
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn min(&self) -> f64 {
        self.segments[0].lo
    }

    pub fn max(&self) -> f64 {
        self.segments[self.segments.len() - 1].hi
    }

    /// True when the scale has no dense part.
    pub fn is_discrete(&self) -> bool {
        self.segments.iter().all(Segment::is_point)
    }

    /// Finds the segment containing `t`, snapping near-endpoint values.
    pub fn locate(&self, t: f64) -> Result<Location> {
        if !t.is_finite() {
            return Err(Error::NotInTimeScale { t });
        }
        // first segment whose upper end (plus snap) reaches t
        let idx = self.segments.partition_point(|s| s.hi + self.snap < t);
        if let Some(s) = self.segments.get(idx) {
            if t >= s.lo - self.snap {
                let snapped = if (t - s.lo).abs() <= self.snap {
                    s.lo
                } else if (t - s.hi).abs() <= self.snap {
                    s.hi
                } else {
                    t
                };
                return Ok(Location {
                    segment: idx,
                    t: snapped,
                });
            }
        }
        Err(Error::NotInTimeScale { t })
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_ok()
    }

    /// Forward jump: `inf { s in T : s > t }`, with `sigma(max) = max`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let loc = self.locate(t)?;
        let seg = self.segments[loc.segment];
        if loc.t < seg.hi {
            Ok(loc.t)
        } else {
            Ok(self
                .segments
                .get(loc.segment + 1)
                .map_or(loc.t, |next| next.lo))
        }
    }

    /// Backward jump: `sup { s in T : s < t }`, with `rho(min) = min`.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let loc = self.locate(t)?;
        let seg = self.segments[loc.segment];
        if loc.t > seg.lo || loc.segment == 0 {
            Ok(loc.t)
        } else {
            Ok(self.segments[loc.segment - 1].hi)
        }
    }

    /// Graininess `sigma(t) - t`.
    pub fn graininess(&self, t: f64) -> Result<f64> {
        let loc = self.locate(t)?;
        Ok(self.sigma(loc.t)? - loc.t)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let loc = self.locate(t)?;
        let right = if self.sigma(loc.t)? > loc.t {
            Side::Scattered
        } else {
            Side::Dense
        };
        let left = if self.rho(loc.t)? < loc.t {
            Side::Scattered
        } else {
            Side::Dense
        };
        Ok(PointClass { right, left })
    }

    /// `T^kappa`: removes the maximum iff it is left-scattered.
    pub fn t_kappa(&self) -> TimeScale {
        let n = self.segments.len();
        if n > 1 && self.segments[n - 1].is_point() {
            TimeScale {
                segments: self.segments[..n - 1].to_vec(),
                snap: self.snap,
            }
        } else {
            self.clone()
        }
    }

    /// `[a, b] ∩ T` as a time scale of its own. Endpoints must be members.
    pub fn restrict(&self, a: f64, b: f64) -> Result<TimeScale> {
        let a = self.locate(a)?.t;
        let b = self.locate(b)?.t;
        if a > b {
            return Err(Error::InvertedInterval { a, b });
        }
        let segments: Vec<Segment> = self
            .segments
            .iter()
            .filter_map(|s| {
                let lo = s.lo.max(a);
                let hi = s.hi.min(b);
                (lo <= hi).then_some(Segment::new(lo, hi))
            })
            .collect();
        Ok(TimeScale {
            segments,
            snap: self.snap,
        })
    }

    /// `sup (T ∩ (-inf, x))`, or `None` when that set is empty.
    pub fn sup_below(&self, x: f64) -> Option<f64> {
        self.segments
            .iter()
            .rev()
            .find(|s| s.lo < x)
            .map(|s| s.hi.min(x))
    }

    /// `inf (T ∩ (x, inf))`, or `None` when that set is empty.
    pub fn inf_above(&self, x: f64) -> Option<f64> {
        self.segments
            .iter()
            .find(|s| s.hi > x)
            .map(|s| s.lo.max(x))
    }

    /// Parses the plain-text segment list: one `lo hi` pair per line,
    /// `#` starts a comment, blank lines are ignored.
    pub fn parse_segment_list(text: &str) -> Result<TimeScale> {
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected `lo hi`, got {:?}", body),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{s:?}: {e}"),
                })
            };
            raw.push((parse(fields[0])?, parse(fields[1])?));
        }
        TimeScale::new(&raw)
    }

    /// Inverse of [`TimeScale::parse_segment_list`].
    pub fn to_segment_list(&self) -> String {
        let mut out = String::new();
        for s in &self.segments {
            out.push_str(&format!("{} {}\n", s.lo, s.hi));
        }
        out
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            if s.is_point() {
                write!(f, "{{{}}}", s.lo)?;
            } else {
                write!(f, "[{}, {}]", s.lo, s.hi)?;
            }
        }
        Ok(())
    }
}

/// A time-scale interval `[a, b]_T` viewed as a scale of its own, so that the
/// right endpoint `b` is right-dense in every jump query.
#[derive(Debug, Clone, PartialEq)]
pub struct TsInterval {
    parent: TimeScale,
    scale: TimeScale,
    a: f64,
    b: f64,
}

impl TsInterval {
    pub fn new(parent: &TimeScale, a: f64, b: f64) -> Result<Self> {
        let a = parent.locate(a)?.t;
        let b = parent.locate(b)?.t;
        let scale = parent.restrict(a, b)?;
        Ok(TsInterval {
            parent: parent.clone(),
            scale,
            a,
            b,
        })
    }

    /// The whole scale as an interval.
    pub fn whole(parent: &TimeScale) -> Self {
        TsInterval {
            parent: parent.clone(),
            scale: parent.clone(),
            a: parent.min(),
            b: parent.max(),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn parent(&self) -> &TimeScale {
        &self.parent
    }

    /// The restricted scale `[a, b] ∩ T`.
    pub fn scale(&self) -> &TimeScale {
        &self.scale
    }

    pub fn contains(&self, t: f64) -> bool {
        self.scale.contains(t)
    }

    pub fn sigma(&self, t: f64) -> Result<f64> {
        self.scale.sigma(t)
    }

    pub fn rho(&self, t: f64) -> Result<f64> {
        self.scale.rho(t)
    }

    pub fn graininess(&self, t: f64) -> Result<f64> {
        self.scale.graininess(t)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        self.scale.classify(t)
    }

    /// `[a, b]_T^kappa`.
    pub fn kappa(&self) -> TimeScale {
        self.scale.t_kappa()
    }

    /// A sub-interval `[a', b']_T` of the same parent.
    pub fn sub(&self, a: f64, b: f64) -> Result<TsInterval> {
        if !self.contains(a) {
            return Err(Error::NotInTimeScale { t: a });
        }
        if !self.contains(b) {
            return Err(Error::NotInTimeScale { t: b });
        }
        TsInterval::new(&self.parent, a, b)
    }
}

/// Free-function form of [`TimeScale::new`].
pub fn canonicalize(raw: &[(f64, f64)]) -> Result<TimeScale> {
    TimeScale::new(raw)
}

/// Free-function form of [`TsInterval::new`].
pub fn ts_interval(scale: &TimeScale, a: f64, b: f64) -> Result<TsInterval> {
    TsInterval::new(scale, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap_scale() -> TimeScale {
        TimeScale::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap()
    }

    fn seg_pairs(ts: &TimeScale) -> Vec<(f64, f64)> {
        ts.segments().iter().map(|s| (s.lo, s.hi)).collect()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(
            seg_pairs(&TimeScale::new(&[(0.0, 1.0), (1.0, 2.0)]).unwrap()),
            vec![(0.0, 2.0)]
        );
        assert_eq!(
            seg_pairs(&TimeScale::new(&[(2.0, 3.0), (0.0, 1.0)]).unwrap()),
            vec![(0.0, 1.0), (2.0, 3.0)]
        );
        assert_eq!(
            seg_pairs(&TimeScale::new(&[(0.0, 0.5), (0.25, 1.0)]).unwrap()),
            vec![(0.0, 1.0)]
        );
        assert_eq!(TimeScale::new(&[]), Err(Error::EmptyTimeScale));
        assert_eq!(
            Error::EmptyTimeScale.to_string(),
            "time scale must be non-empty"
        );
        assert!(TimeScale::new(&[(1.0, 0.0)]).is_err());
        assert!(TimeScale::new(&[(0.0, f64::NAN)]).is_err());
    }

    #[test]
    fn jumps_on_gap_scale() {
        let ts = gap_scale();
        assert_eq!(ts.sigma(1.0).unwrap(), 2.0);
        assert_eq!(ts.sigma(0.5).unwrap(), 0.5);
        assert_eq!(ts.sigma(3.0).unwrap(), 3.0);
        assert_eq!(ts.rho(2.0).unwrap(), 1.0);
        assert_eq!(ts.rho(0.0).unwrap(), 0.0);
        assert_eq!(ts.graininess(1.0).unwrap(), 1.0);
        assert_eq!(ts.graininess(0.5).unwrap(), 0.0);
        assert!(matches!(ts.sigma(1.5), Err(Error::NotInTimeScale { .. })));
    }

    #[test]
    fn discrete_jumps() {
        let ts = TimeScale::integers(0, 2).unwrap();
        assert_eq!(ts.rho(2.0).unwrap(), 1.0);
        let n = TimeScale::integers(0, 6).unwrap();
        for k in 0..6 {
            assert_eq!(n.graininess(k as f64).unwrap(), 1.0);
        }
        assert_eq!(n.graininess(6.0).unwrap(), 0.0);
    }

    #[test]
    fn classification() {
        let ts = gap_scale();
        let c1 = ts.classify(1.0).unwrap();
        assert_eq!((c1.right, c1.left), (Side::Scattered, Side::Dense));
        let c2 = ts.classify(2.0).unwrap();
        assert_eq!((c2.right, c2.left), (Side::Dense, Side::Scattered));
        let c3 = ts.classify(0.5).unwrap();
        assert_eq!((c3.right, c3.left), (Side::Dense, Side::Dense));
    }

    #[test]
    fn kappa() {
        let with_point = TimeScale::new(&[(0.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(seg_pairs(&with_point.t_kappa()), vec![(0.0, 1.0)]);
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        assert_eq!(unit.t_kappa(), unit);
        let disc = TimeScale::integers(0, 2).unwrap();
        assert_eq!(disc.t_kappa(), TimeScale::integers(0, 1).unwrap());
        let single = TimeScale::points(&[4.0]).unwrap();
        assert_eq!(single.t_kappa(), single);
    }

    #[test]
    fn interval_restriction() {
        let ts = gap_scale();
        let sub = TsInterval::new(&ts, 0.0, 1.0).unwrap();
        assert_eq!(sub.sigma(1.0).unwrap(), 1.0);
        assert!(sub.classify(1.0).unwrap().is_right_dense());
        let full = TsInterval::new(&ts, 0.0, 3.0).unwrap();
        assert_eq!(full.scale(), &ts);
        let single = TsInterval::new(&ts, 0.5, 0.5).unwrap();
        assert_eq!(seg_pairs(single.scale()), vec![(0.5, 0.5)]);
        assert!(TsInterval::new(&ts, 0.0, 1.5).is_err());
        assert!(TsInterval::new(&ts, 2.0, 1.0).is_err());
    }

    #[test]
    fn snapping() {
        let ts = gap_scale();
        assert_eq!(ts.sigma(1.0 + 1e-14).unwrap(), 2.0);
        assert_eq!(ts.locate(2.0 - 5e-13).unwrap().t, 2.0);
        let strict = gap_scale().with_snap(0.0);
        assert!(strict.locate(1.0 + 1e-14).is_err());
    }

    #[test]
    fn sup_and_inf() {
        let ts = gap_scale();
        assert_eq!(ts.sup_below(1.5), Some(1.0));
        assert_eq!(ts.sup_below(0.7), Some(0.7));
        assert_eq!(ts.sup_below(0.0), None);
        assert_eq!(ts.inf_above(1.0), Some(2.0));
        assert_eq!(ts.inf_above(2.5), Some(2.5));
        assert_eq!(ts.inf_above(3.0), None);
    }

    #[test]
    fn segment_list_text() {
        let text = "# gap scale\n0 1\n\n2 3 # second\n";
        let ts = TimeScale::parse_segment_list(text).unwrap();
        assert_eq!(ts, gap_scale());
        assert_eq!(TimeScale::parse_segment_list(&ts.to_segment_list()).unwrap(), ts);
        assert!(matches!(
            TimeScale::parse_segment_list("0 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            TimeScale::parse_segment_list("# nothing\n"),
            Err(Error::EmptyTimeScale)
        );
    }
}
