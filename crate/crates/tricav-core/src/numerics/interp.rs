//! Piecewise interpolation on tabulated data.

/// Locate the segment of a strictly increasing grid containing `x`.
///
/// Returns `i` such that `xs[i] <= x <= xs[i + 1]`. The caller guarantees
/// `xs` is strictly increasing and `x` lies inside the covered range.
pub fn segment_index(xs: &[f64], x: f64) -> usize {
    debug_assert!(xs.len() >= 2);
    match xs.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => i.min(xs.len() - 2),
        Err(i) => i.saturating_sub(1).min(xs.len() - 2),
    }
}

/// Linear interpolation of `ys` in `ln(x)`; monotone between samples.
pub fn log_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = segment_index(xs, x);
    let (x0, x1) = (xs[i], xs[i + 1]);
    let t = (x.ln() - x0.ln()) / (x1.ln() - x0.ln());
    ys[i] + t.clamp(0.0, 1.0) * (ys[i + 1] - ys[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_samples_and_stays_monotone() {
        let xs = [1.0, 10.0, 100.0, 1000.0];
        let ys = [0.0, 1.0, 4.0, 9.0];
        for (x, y) in xs.iter().zip(ys.iter()) {
            assert!((log_linear(&xs, &ys, *x) - y).abs() < 1e-12);
        }
        // Exactly halfway in log space between 10 and 100.
        let mid = log_linear(&xs, &ys, 10.0_f64.powf(1.5));
        assert!((mid - 2.5).abs() < 1e-12, "got {mid}");
        let mut prev = f64::NEG_INFINITY;
        for k in 0..200 {
            let x = 1.0 * 1000.0_f64.powf(k as f64 / 199.0);
            let y = log_linear(&xs, &ys, x);
            assert!(y >= prev - 1e-12);
            prev = y;
        }
    }
}
