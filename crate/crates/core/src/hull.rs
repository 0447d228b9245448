//! Distance from a point to the convex hull of finitely many points.
//!
//! General dimension uses Wolfe's minimum-norm-point algorithm on the
//! translated points `p_i - x`; the scalar case is a plain interval test.

/// Euclidean distance from `x` to `conv(points)`.
///
/// `points` is non-empty and every point has the dimension of `x`.
pub fn hull_distance(points: &[&[f64]], x: &[f64]) -> f64 {
    assert!(!points.is_empty(), "hull of an empty set");
    if x.len() == 1 {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[0]), hi.max(p[0]))
            });
        return (lo - x[0]).max(x[0] - hi).max(0.0);
    }
    let shifted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(x).map(|(a, b)| a - b).collect())
        .collect();
    let z = min_norm_point(&shifted);
    dot(&z, &z).sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum-norm point of `conv(points)`.
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    const Z1: f64 = 1e-12;
    const Z2: f64 = 1e-10;
    const Z3: f64 = 1e-10;

    let d = points[0].len();
    let max_sq = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max);
    let start = (0..points.len())
        .min_by(|&i, &j| dot(&points[i], &points[i]).total_cmp(&dot(&points[j], &points[j])))
        .unwrap();
    let mut active = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].clone();

    let combine = |active: &[usize], w: &[f64]| {
        let mut out = vec![0.0; d];
        for (&i, &wi) in active.iter().zip(w) {
            for (o, p) in out.iter_mut().zip(&points[i]) {
                *o += wi * p;
            }
        }
        out
    };

    for _major in 0..(10 * points.len() + 100) {
        let xx = dot(&x, &x);
        if xx <= Z3 * Z3 * max_sq {
            break;
        }
        let (j, xpj) = (0..points.len())
            .map(|i| (i, dot(&x, &points[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xpj > xx - Z1 * max_sq || active.contains(&j) {
            break;
        }
        active.push(j);
        weights.push(0.0);

        for _minor in 0..(points.len() + d + 10) {
            let alpha = match affine_minimizer(points, &active) {
                Some(a) => a,
                None => break,
            };
            if alpha.iter().all(|&a| a > Z2) {
                weights = alpha;
                break;
            }
            let mut theta: f64 = 1.0;
            for (&w, &a) in weights.iter().zip(&alpha) {
                if a <= Z2 && w - a > 0.0 {
                    theta = theta.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (1.0 - theta) * *w;
            }
            let mut k = 0;
            while k < active.len() {
                if weights[k] <= Z2 {
                    active.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
        }
        x = combine(&active, &weights);
    }
    x
}

/// Minimizer of `|sum a_i p_i|` over the affine hull (`sum a_i = 1`).
fn affine_minimizer(points: &[Vec<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let m = active.len();
    let n = m + 1;
    let mut a = vec![vec![0.0; n + 1]; n];
    for r in 0..m {
        for c in 0..m {
            a[r][c] = dot(&points[active[r]], &points[active[c]]);
        }
        a[r][m] = 1.0;
        a[m][r] = 1.0;
    }
    a[m][n] = 1.0;
    let sol = solve(a)?;
    Some(sol[..m].to_vec())
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..=n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
