use crate::error::{Error, Result};
use crate::timescale::{TimeScale, TsInterval};

/// Existence window `[a, sigma(b*)]` with `b* = sup{s : sigma(s) <= c}`,
/// `c = min(b, a + beta/M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub a: f64,
    pub c: f64,
    /// Literal supremum.
    pub b_star: f64,
    /// `sigma(b*)` of the literal supremum.
    pub sigma_b_star: f64,
    /// `M (sigma(b*) - a) <= beta`.
    pub guard_ok: bool,
    /// `b*` belongs to the candidate set, i.e. `sigma(b*) <= c`.
    pub attained: bool,
    /// Right end actually used: `sigma(b*)` when the supremum is attained,
    /// otherwise `b*` itself (the right end of a dense run, treated as
    /// right-dense within the window).
    pub end: f64,
}

impl Window {
    pub fn whole(interval: &TsInterval) -> Self {
        Window {
            a: interval.a(),
            c: interval.b(),
            b_star: interval.b(),
            sigma_b_star: interval.b(),
            guard_ok: true,
            attained: true,
            end: interval.b(),
        }
    }

    pub fn fallback(&self) -> bool {
        !self.attained
    }
}

pub fn local_window(scale: &TimeScale, a: f64, b: f64, beta: f64, m: f64) -> Result<Window> {
    if !(beta > 0.0 && m > 0.0) {
        return Err(Error::Precondition(format!("beta and M must be positive, got {beta} and {m}")));
    }
    if !(scale.contains(a) && scale.contains(b)) {
        return Err(Error::NotInTimeScale { t: if scale.contains(a) { b } else { a } });
    }
    if a > b {
        return Err(Error::InvertedInterval { a, b });
    }
    let c = b.min(a + beta / m);
    let sigma_a = scale.sigma(a)?;
    if sigma_a > c {
        return Err(Error::WindowTooSmall { sigma_a, c });
    }
    // (supremum, attained)
    let mut best: Option<(f64, bool)> = None;
    for seg in scale.segments() {
        if seg.hi < a || seg.lo > c {
            continue;
        }
        let lo = seg.lo.max(a);
        let cand = if scale.sigma(seg.hi)? <= c {
            Some((seg.hi, true))
        } else if seg.hi > lo {
            // dense run: sigma(s) = s for s < hi
            if c < seg.hi {
                Some((c, true))
            } else {
                Some((seg.hi, false))
            }
        } else {
            None
        };
        if let Some(cd) = cand {
            if best.is_none_or(|b| cd.0 > b.0) {
                best = Some(cd);
            }
        }
    }
    let (b_star, attained) = best.expect("a lies in the candidate set");
    let sigma_b_star = scale.sigma(b_star)?;
    let guard_ok = m * (sigma_b_star - a) <= beta * (1.0 + 1e-12);
    Ok(Window {
        a,
        c,
        b_star,
        sigma_b_star,
        guard_ok,
        attained,
        end: if attained { sigma_b_star } else { b_star },
    })
}
