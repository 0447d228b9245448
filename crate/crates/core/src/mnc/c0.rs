//! Sequences in c₀ represented by a finite prefix and a closed-form tail.
//!
//! Index convention is 1-based and absolute: `x_j` for `j <= N` comes from
//! the prefix, `x_j` for `j > N` is the sum of the tail terms evaluated at
//! `j`. The tail catalog is closed under linear combination, so sums and
//! scalings of sequences stay in the model.

use std::fmt;

use crate::error::{Error, Result};

/// Unit-coefficient tail shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailShape {
    /// `r^j` with `0 <= r < 1`.
    Geometric { r: f64 },
    /// `1` for `j <= k0`, `0` afterwards.
    ConstUntil { k0: usize },
    /// `1` for every `j`; not in c₀. Stand-in for families such as the unit
    /// vectors, whose tail suprema never decay.
    Persistent,
}

impl TailShape {
    pub fn value(&self, j: usize) -> f64 {
        match *self {
            TailShape::Geometric { r } => r.powi(j.min(i32::MAX as usize) as i32),
            TailShape::ConstUntil { k0 } => (j <= k0) as u8 as f64,
            TailShape::Persistent => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TailShape::Geometric { r } if !(0.0..1.0).contains(&r) => {
                Err(Error::Precondition(format!("geometric ratio must lie in [0,1), got {r}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailTerm {
    pub coef: f64,
    pub shape: TailShape,
}

impl TailTerm {
    pub fn geometric(c: f64, r: f64) -> Self {
        TailTerm { coef: c, shape: TailShape::Geometric { r } }
    }

    pub fn const_until(v: f64, k0: usize) -> Self {
        TailTerm { coef: v, shape: TailShape::ConstUntil { k0 } }
    }

    pub fn persistent(v: f64) -> Self {
        TailTerm { coef: v, shape: TailShape::Persistent }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailedSequence {
    prefix: Vec<f64>,
    tail: Vec<TailTerm>,
}

/// Evaluations cap for suprema over slowly decaying geometric tails.
const SCAN_CAP: usize = 1 << 20;

impl TailedSequence {
    pub fn new(prefix: Vec<f64>, tail: Vec<TailTerm>) -> Result<Self> {
        if let Some(x) = prefix.iter().find(|x| !x.is_finite()) {
            return Err(Error::Precondition(format!("non-finite prefix entry {x}")));
        }
        for term in &tail {
            term.shape.validate()?;
            if !term.coef.is_finite() {
                return Err(Error::Precondition(format!("non-finite tail coefficient {}", term.coef)));
            }
        }
        Ok(TailedSequence { prefix, tail: merge_terms(tail) })
    }

    /// Finitely supported sequence.
    pub fn finite(prefix: Vec<f64>) -> Result<Self> {
        Self::new(prefix, Vec::new())
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn tail(&self) -> &[TailTerm] {
        &self.tail
    }

    /// `x_j`, `j >= 1`.
    pub fn value(&self, j: usize) -> f64 {
        assert!(j >= 1, "sequence indices start at 1");
        if j <= self.prefix.len() {
            self.prefix[j - 1]
        } else {
            self.tail_value(j)
        }
    }

    fn tail_value(&self, j: usize) -> f64 {
        self.tail.iter().map(|t| t.coef * t.shape.value(j)).sum()
    }

    /// `lim_j x_j`, the sum of the persistent coefficients.
    pub fn limit(&self) -> f64 {
        self.tail
            .iter()
            .filter(|t| t.shape == TailShape::Persistent)
            .map(|t| t.coef)
            .sum()
    }

    /// `lim_k sup_{j>=k} |x_j|`.
    pub fn tail_limit(&self) -> f64 {
        self.limit().abs()
    }

    pub fn in_c0(&self) -> bool {
        self.limit() == 0.0
    }

    /// Tail profile `s(k) = sup_{j>=k} |x_j|`.
    pub fn profile(&self, k: usize) -> f64 {
        let k = k.max(1);
        let n = self.prefix.len();
        let mut best = self.prefix.iter().skip(k - 1).fold(0.0f64, |m, x| m.max(x.abs()));
        let start = k.max(n + 1);
        let persistent = self.limit();
        let last_step = self
            .tail
            .iter()
            .filter_map(|t| match t.shape {
                TailShape::ConstUntil { k0 } => Some(k0),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let geo: Vec<(f64, f64)> = self
            .tail
            .iter()
            .filter_map(|t| match t.shape {
                TailShape::Geometric { r } => Some((t.coef.abs(), r)),
                _ => None,
            })
            .collect();
        let mut j = start;
        let mut scanned = 0usize;
        loop {
            if j > last_step {
                let bound: f64 = geo.iter().map(|&(c, r)| c * r.powi(j.min(i32::MAX as usize) as i32)).sum();
                if bound <= f64::EPSILON * best.max(persistent.abs()).max(f64::MIN_POSITIVE) {
                    break;
                }
                if scanned >= SCAN_CAP {
                    // remaining values are bounded by |P| + bound
                    best = best.max(persistent.abs() + bound);
                    break;
                }
            }
            best = best.max(self.tail_value(j).abs());
            j += 1;
            scanned += 1;
        }
        best.max(persistent.abs())
    }

    pub fn sup_norm(&self) -> f64 {
        self.profile(1)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        TailedSequence {
            prefix: self.prefix.iter().map(|x| lambda * x).collect(),
            tail: merge_terms(
                self.tail
                    .iter()
                    .map(|t| TailTerm { coef: lambda * t.coef, shape: t.shape })
                    .collect(),
            ),
        }
    }

    /// `sum_i lambda_i x_i`.
    pub fn combine(terms: &[(f64, &TailedSequence)]) -> Self {
        let n = terms.iter().map(|(_, x)| x.prefix.len()).max().unwrap_or(0);
        let prefix = (1..=n)
            .map(|j| terms.iter().map(|(l, x)| l * x.value(j)).sum())
            .collect();
        let tail = terms
            .iter()
            .flat_map(|(l, x)| x.tail.iter().map(move |t| TailTerm { coef: l * t.coef, shape: t.shape }))
            .collect();
        TailedSequence { prefix, tail: merge_terms(tail) }
    }

    pub fn add(&self, other: &TailedSequence) -> Self {
        Self::combine(&[(1.0, self), (1.0, other)])
    }

    pub fn sub(&self, other: &TailedSequence) -> Self {
        Self::combine(&[(1.0, self), (-1.0, other)])
    }

    /// Parses `{prefix: [..], tail: <terms>}` where `<terms>` is `zero` or
    /// a `+`-separated list of `geometric(c,r)`, `const_until(v,k0)` and
    /// `const_until(v,inf)`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 1, msg: format!("{msg} in tailed sequence `{text}`") };
        let body = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| bad("expected braces"))?;
        let open = body.find('[').ok_or_else(|| bad("missing prefix list"))?;
        let close = body.find(']').ok_or_else(|| bad("unterminated prefix list"))?;
        if !body[..open].trim().trim_end_matches(':').trim().eq("prefix") {
            return Err(bad("expected `prefix:`"));
        }
        let prefix = body[open + 1..close]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| bad("bad prefix number")))
            .collect::<Result<Vec<_>>>()?;
        let rest = body[close + 1..].trim().trim_start_matches(',').trim();
        let terms = rest
            .strip_prefix("tail")
            .map(|s| s.trim_start().trim_start_matches(':').trim())
            .ok_or_else(|| bad("expected `tail:`"))?;
        Self::new(prefix, parse_tail(terms).map_err(|e| bad(&e))?)
    }
}

fn parse_tail(text: &str) -> std::result::Result<Vec<TailTerm>, String> {
    let mut out = Vec::new();
    for part in text.split('+').map(str::trim) {
        if part == "zero" {
            continue;
        }
        let open = part.find('(').ok_or("expected a tail term")?;
        let args = part[open + 1..].strip_suffix(')').ok_or("unterminated tail term")?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        if args.len() != 2 {
            return Err("tail terms take two arguments".into());
        }
        let c: f64 = args[0].parse().map_err(|_| "bad tail coefficient")?;
        let term = match part[..open].trim() {
            "geometric" => TailTerm::geometric(c, args[1].parse().map_err(|_| "bad ratio")?),
            "const_until" if args[1] == "inf" => TailTerm::persistent(c),
            "const_until" => TailTerm::const_until(c, args[1].parse().map_err(|_| "bad index")?),
            other => return Err(format!("unknown tail term `{other}`")),
        };
        out.push(term);
    }
    Ok(out)
}

fn merge_terms(terms: Vec<TailTerm>) -> Vec<TailTerm> {
    let mut out: Vec<TailTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.iter_mut().find(|o| o.shape == t.shape) {
            Some(o) => o.coef += t.coef,
            None => out.push(t),
        }
    }
    out.retain(|t| t.coef != 0.0);
    out
}

impl fmt::Display for TailedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(|x| format!("{x:?}")).collect();
        write!(f, "{{prefix: [{}], tail: ", prefix.join(", "))?;
        if self.tail.is_empty() {
            return write!(f, "zero}}");
        }
        let terms: Vec<String> = self
            .tail
            .iter()
            .map(|t| match t.shape {
                TailShape::Geometric { r } => format!("geometric({:?},{:?})", t.coef, r),
                TailShape::ConstUntil { k0 } => format!("const_until({:?},{k0})", t.coef),
                TailShape::Persistent => format!("const_until({:?},inf)", t.coef),
            })
            .collect();
        write!(f, "{}}}", terms.join(" + "))
    }
}

/// Fixed encoding of a tailed sequence as a flat vector: the prefix values
/// followed by one coefficient per tail shape. Linear operations on encoded
/// vectors match linear operations on the sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct C0Layout {
    pub prefix_len: usize,
    pub shapes: Vec<TailShape>,
}

impl C0Layout {
    pub fn new(prefix_len: usize, shapes: Vec<TailShape>) -> Result<Self> {
        for s in &shapes {
            s.validate()?;
        }
        Ok(C0Layout { prefix_len, shapes })
    }

    pub fn dim(&self) -> usize {
        self.prefix_len + self.shapes.len()
    }

    pub fn decode(&self, row: &[f64]) -> TailedSequence {
        assert_eq!(row.len(), self.dim(), "row does not match layout");
        let (prefix, coefs) = row.split_at(self.prefix_len);
        let tail = coefs
            .iter()
            .zip(&self.shapes)
            .map(|(&coef, &shape)| TailTerm { coef, shape })
            .collect();
        TailedSequence { prefix: prefix.to_vec(), tail: merge_terms(tail) }
    }

    /// Persistent part of an encoded row.
    pub fn limit(&self, row: &[f64]) -> f64 {
        row[self.prefix_len..]
            .iter()
            .zip(&self.shapes)
            .filter(|(_, s)| **s == TailShape::Persistent)
            .map(|(c, _)| c)
            .sum()
    }
}

/// Hausdorff MNC of a finite family in the c₀ model:
/// `lim_k sup_{x in X} sup_{j>=k} |x_j|`, exact per member.
pub fn hausdorff_c0(family: &[TailedSequence]) -> f64 {
    family.iter().map(TailedSequence::tail_limit).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_values_and_norm() {
        let x = TailedSequence::new(vec![], vec![TailTerm::geometric(1.0, 0.5)]).unwrap();
        assert_eq!(x.value(1), 0.5);
        assert_eq!(x.value(3), 0.125);
        assert_eq!(x.sup_norm(), 0.5);
        assert_eq!(x.profile(4), 0.0625);
        assert!(x.in_c0());
    }

    #[test]
    fn singleton_and_basis_profile() {
        let x = TailedSequence::new(vec![3.0, -1.0], vec![TailTerm::geometric(2.0, 0.9)]).unwrap();
        assert_eq!(hausdorff_c0(&[x]), 0.0);
        let basis = TailedSequence::new(vec![], vec![TailTerm::persistent(1.0)]).unwrap();
        assert_eq!(hausdorff_c0(std::slice::from_ref(&basis)), 1.0);
        assert_eq!(basis.profile(1_000_000), 1.0);
    }

    #[test]
    fn const_until_profile() {
        let x = TailedSequence::new(vec![0.5], vec![TailTerm::const_until(-2.0, 5)]).unwrap();
        assert_eq!(x.profile(1), 2.0);
        assert_eq!(x.profile(5), 2.0);
        assert_eq!(x.profile(6), 0.0);
    }

    #[test]
    fn combination_with_unequal_prefixes() {
        let x = TailedSequence::new(vec![1.0], vec![TailTerm::geometric(1.0, 0.5)]).unwrap();
        let y = TailedSequence::new(vec![1.0, 2.0, 3.0], vec![TailTerm::persistent(1.0)]).unwrap();
        let z = TailedSequence::combine(&[(2.0, &x), (-1.0, &y)]);
        for j in 1..20 {
            assert_eq!(z.value(j), 2.0 * x.value(j) - y.value(j));
        }
        assert_eq!(z.limit(), -1.0);
    }

    #[test]
    fn literal_round_trip() {
        let x = TailedSequence::parse("{prefix: [1, -2.5], tail: geometric(1,0.5) + const_until(3,inf)}").unwrap();
        assert_eq!(x.prefix(), &[1.0, -2.5]);
        assert_eq!(x.limit(), 3.0);
        assert_eq!(TailedSequence::parse(&x.to_string()).unwrap(), x);
        let z = TailedSequence::parse("{prefix: [], tail: zero}").unwrap();
        assert_eq!(z.sup_norm(), 0.0);
        assert!(TailedSequence::parse("{prefix: [1], tail: geometric(1,1.5)}").is_err());
        assert!(TailedSequence::parse("prefix: [1]").is_err());
    }

    #[test]
    fn layout_decoding() {
        let layout = C0Layout::new(2, vec![TailShape::Geometric { r: 0.5 }, TailShape::Persistent]).unwrap();
        let x = layout.decode(&[1.0, 2.0, 4.0, -0.5]);
        assert_eq!(x.value(3), 4.0 * 0.125 - 0.5);
        assert_eq!(layout.limit(&[1.0, 2.0, 4.0, -0.5]), -0.5);
    }
}
