//! Grid and summation helpers shared by the quadrature and sweep code.

/// Pairwise summation over a fixed ordering. Deterministic and O(eps·log n)
/// accurate, so grid reductions are bit-stable regardless of thread count.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 32;
    if values.len() <= BASE {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Midpoint abscissas for `n` uniform cells on `[a, b]`.
pub fn midpoints(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = (b - a) / n as f64;
    (0..n).map(move |i| a + (i as f64 + 0.5) * h)
}

/// `n` evenly spaced values covering `[a, b]` inclusive (n >= 1; a single
/// point degenerates to `a`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + i as f64 * h).collect()
}

/// Trapezoidal rule over sampled values with abscissas `x`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let terms: Vec<f64> = x
        .windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .collect();
    pairwise_sum(&terms)
}

/// Wrap an angle into `[0, 2π)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut p = phi % two_pi;
    if p < 0.0 {
        p += two_pi;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_smooth_data() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.01).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }

    #[test]
    fn midpoint_cells_cover_interval() {
        let pts: Vec<f64> = midpoints(0.0, 1.0, 4).collect();
        assert_eq!(pts, vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let x = linspace(0.0, 2.0, 21);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v).collect();
        assert!((trapezoid(&x, &y) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(-0.1) - (std::f64::consts::TAU - 0.1)).abs() < 1e-15);
        assert_eq!(wrap_angle(1.0), 1.0);
    }
}
