//! Summation of slowly damped oscillatory integral tails.
//!
//! Splits a half-line integral into fixed-width segments and applies
//! iterated averaging (an Euler transformation) to the sequence of partial
//! sums. For integrands that eventually oscillate around zero with a
//! polynomially growing or slowly decaying envelope, the averaging converges
//! to the Abel-summed value that analytic continuation assigns to the
//! integral; for absolutely convergent integrands it reduces to the plain
//! limit of the partial sums.

/// Result of an averaged segment sum.
#[derive(Debug, Clone, Copy)]
pub struct TailSum {
    pub value: f64,
    /// Spread of the deepest averaging rows plus accumulated segment errors.
    pub error: f64,
    pub segments: usize,
}

/// Sum `segments[0] + segments[1] + ...` where later entries oscillate in
/// sign. `segment_errors` carry the quadrature error of each entry.
pub fn averaged_segment_sum(segments: &[f64], segment_errors: &[f64]) -> TailSum {
    assert_eq!(segments.len(), segment_errors.len());
    let n = segments.len();
    let quad_err: f64 = segment_errors.iter().sum();
    if n == 0 {
        return TailSum {
            value: 0.0,
            error: 0.0,
            segments: 0,
        };
    }

    // Averaging only makes sense once the segments alternate; sum the
    // leading same-sign run directly.
    let mut start = 0;
    for i in 1..n {
        if segments[i] * segments[i - 1] < 0.0 {
            start = i;
            break;
        }
        start = i + 1;
    }
    let head: f64 = segments[..start].iter().sum();
    let tail = &segments[start..];
    if tail.len() < 4 {
        let direct: f64 = tail.iter().sum();
        let osc = tail.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        return TailSum {
            value: head + direct,
            error: quad_err + osc,
            segments: n,
        };
    }

    // Partial sums of the oscillatory tail, then the averaging triangle.
    let mut row: Vec<f64> = tail
        .iter()
        .scan(0.0, |acc, s| {
            *acc += s;
            Some(*acc)
        })
        .collect();
    let mut last_mid = row[row.len() / 2];
    let mut spread = f64::INFINITY;
    let mut best = last_mid;
    while row.len() > 2 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
        let mid = row[row.len() / 2];
        let s = (mid - last_mid).abs()
            + row
                .iter()
                .fold(0.0f64, |m, v| m.max((v - mid).abs()))
                .min(row[0].abs() + row[row.len() - 1].abs());
        if s < spread {
            spread = s;
            best = mid;
        }
        last_mid = mid;
    }

    TailSum {
        value: head + best,
        error: quad_err + spread,
        segments: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_convergent_series() {
        // Segment integrals of exp(-x) over unit intervals.
        let segs: Vec<f64> = (0..40)
            .map(|j| {
                let a = j as f64;
                (-a).exp() - (-(a + 1.0)).exp()
            })
            .collect();
        let errs = vec![0.0; segs.len()];
        let r = averaged_segment_sum(&segs, &errs);
        assert!((r.value - 1.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn oscillatory_with_growing_envelope() {
        // Int_0^inf x sin(x) e^{-eps x} dx -> -cos'? Abel value of
        // Int x sin(x) dx is 0... use Int_0^inf sin(x) dx = 1 (Abel).
        // Segments over half-periods of sin: s_j = Int_{j pi}^{(j+1) pi} sin = 2 (-1)^j / 1.
        let segs: Vec<f64> = (0..60)
            .map(|j| if j % 2 == 0 { 2.0 } else { -2.0 })
            .collect();
        let errs = vec![0.0; segs.len()];
        let r = averaged_segment_sum(&segs, &errs);
        assert!((r.value - 1.0).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn polynomial_envelope_is_annihilated() {
        // Abel sum of sum (-1)^j (j+1) = 1/4.
        let segs: Vec<f64> = (0..80)
            .map(|j| {
                let v = (j + 1) as f64;
                if j % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let errs = vec![0.0; segs.len()];
        let r = averaged_segment_sum(&segs, &errs);
        assert!((r.value - 0.25).abs() < 1e-6, "got {}", r.value);
    }
}
