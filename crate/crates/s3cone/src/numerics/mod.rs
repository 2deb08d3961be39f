//! Small numerical kernels shared across modules.

mod univariate;

pub use univariate::{Poly1, RootSet};

/// Fornberg's recursion: weights w[m][j] for the m-th derivative at `z`
/// from values at nodes `x`, for m = 0..=max_order.
pub fn fornberg_weights(z: f64, x: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Symmetric central stencil for the m-th derivative with accuracy `order`
/// (even), unit spacing.  Returns (half width, weights from -s to s).
pub fn central_stencil(m: usize, order: usize) -> (usize, Vec<f64>) {
    let s = (m + 1) / 2 + order / 2 - 1;
    let s = s.max(if m == 0 { 0 } else { 1 });
    let nodes: Vec<f64> = (-(s as i64)..=s as i64).map(|k| k as f64).collect();
    let w = fornberg_weights(0.0, &nodes, m);
    (s, w[m].clone())
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_stencils() {
        let (s, w) = central_stencil(2, 2);
        assert_eq!(s, 1);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14);
        let (s, w) = central_stencil(4, 2);
        assert_eq!(s, 2);
        let expect = [1.0, -4.0, 6.0, -4.0, 1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let (s, w) = central_stencil(2, 4);
        assert_eq!(s, 2);
        assert!((w[2] + 2.5).abs() < 1e-12 && (w[0] + 1.0 / 12.0).abs() < 1e-12);
        let (s, w) = central_stencil(4, 4);
        assert_eq!(s, 3);
        assert!((w[3] - 28.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [0.1, 0.2, 0.4];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powi(2)).collect();
        assert!((loglog_slope(&x, &y).unwrap() - 2.0).abs() < 1e-12);
    }
}
