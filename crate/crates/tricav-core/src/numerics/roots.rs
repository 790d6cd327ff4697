//! Bisection root finding.

use crate::error::NumericsError;

/// Find a root of `f` inside `[lo, hi]` by bisection.
///
/// Requires a sign change between the endpoints; the endpoints may be given
/// in either order. Stops when the bracket width falls below `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidSpec(format!(
            "bisection tol must be > 0, got {tol}"
        )));
    }
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoBracket {
            lo: a,
            hi: b,
            flo: fa,
            fhi: fb,
        });
    }

    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let x = bisect(|x| x - 2.0, 0.0, 10.0, 1e-9).unwrap();
        assert!((x - 2.0).abs() < 1e-8);
    }

    #[test]
    fn cosine_root() {
        let x = bisect(f64::cos, 0.0, 3.0, 1e-10).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn swapped_endpoints_give_same_root() {
        let a = bisect(|x| x * x * x - 5.0, 0.0, 4.0, 1e-12).unwrap();
        let b = bisect(|x| x * x * x - 5.0, 4.0, 0.0, 1e-12).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_bracket_is_an_error() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-6),
            Err(NumericsError::NoBracket { .. })
        ));
    }
}
