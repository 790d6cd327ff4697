//! Kramers-Kronig transform of tabulated absorption data onto the
//! imaginary frequency axis.
//!
//! For a passive medium the permittivity on the imaginary axis follows from
//! the absorption spectrum alone:
//!
//! `eps(i xi) = 1 + (2/pi) Int_0^inf  w Im eps(w) / (w^2 + xi^2) dw`.
//!
//! The table is interpolated log-linearly in frequency. Below the first
//! sample the absorption is taken as zero (the table must cover the spectral
//! support); beyond the last sample it is extrapolated from the final value
//! with a `1/w^3` falloff, the high-frequency asymptotics of a Lorentz
//! oscillator, and that tail is integrated in closed form.

use crate::error::NumericsError;
use crate::numerics::interp::log_linear;
use crate::numerics::quad::{integrate_finite, QuadratureSpec};

/// Validate a `(omega, Im eps)` table: non-empty, strictly increasing
/// frequencies, non-negative absorption.
pub fn validate_absorption_table(table: &[(f64, f64)]) -> Result<(), NumericsError> {
    if table.is_empty() {
        return Err(NumericsError::EmptyTable);
    }
    for (i, &(omega, im)) in table.iter().enumerate() {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(NumericsError::InvalidSpec(format!(
                "table frequency at row {i} must be positive and finite, got {omega:e}"
            )));
        }
        if i > 0 && omega <= table[i - 1].0 {
            return Err(NumericsError::InvalidSpec(format!(
                "table frequencies must be strictly increasing at row {i}"
            )));
        }
        if im < 0.0 {
            return Err(NumericsError::NegativeImEps(i));
        }
    }
    Ok(())
}

/// Closed-form tail `(2/pi) Int_W^inf w I_W (W/w)^3 / (w^2 + xi^2) dw`
/// expressed through `g(u) = (1 - atan(u)/u) / u^2`, `u = xi / W`.
fn tail_factor(u: f64) -> f64 {
    if u < 1e-2 {
        // Series around u = 0 avoids the atan cancellation.
        let u2 = u * u;
        1.0 / 3.0 - u2 / 5.0 + u2 * u2 / 7.0
    } else {
        (1.0 - u.atan() / u) / (u * u)
    }
}

/// Permittivity on the imaginary axis from a sampled absorption spectrum.
///
/// `table` holds `(omega [rad/s], Im eps(omega))` rows in ascending omega.
/// `xi >= 0`; the result is real, at least 1, and non-increasing in `xi`.
pub fn kramers_kronig_imag_axis(table: &[(f64, f64)], xi: f64) -> Result<f64, NumericsError> {
    validate_absorption_table(table)?;
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(NumericsError::InvalidSpec(format!(
            "xi must be >= 0 and finite, got {xi}"
        )));
    }

    let xs: Vec<f64> = table.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = table.iter().map(|r| r.1).collect();
    let xi2 = xi * xi;

    let spec = QuadratureSpec {
        rel_tol: 1e-9,
        abs_tol: 0.0,
        max_subdivisions: 200,
        ..QuadratureSpec::default()
    };

    // Segment-by-segment integration keeps the piecewise-linear kinks on
    // panel boundaries.
    let mut integral = 0.0;
    if xs.len() == 1 {
        // A single sample carries no in-band information; only the tail.
    } else {
        for w in xs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let f = |omega: f64| {
                let im = log_linear(&xs, &ys, omega);
                omega * im / (omega * omega + xi2)
            };
            integral += integrate_finite(f, a, b, &spec)?.value;
        }
    }

    let w_last = *xs.last().unwrap();
    let im_last = *ys.last().unwrap();
    let tail = im_last * tail_factor(xi / w_last);

    Ok(1.0 + std::f64::consts::FRAC_2_PI * (integral + tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz_im(strength: f64, w0: f64, gamma: f64, omega: f64) -> f64 {
        // Im of strength * w0^2 / (w0^2 - w^2 - i gamma w)
        let d_re = w0 * w0 - omega * omega;
        let d_im = gamma * omega;
        strength * w0 * w0 * d_im / (d_re * d_re + d_im * d_im)
    }

    fn lorentz_imag_axis(strength: f64, w0: f64, gamma: f64, xi: f64) -> f64 {
        1.0 + strength * w0 * w0 / (w0 * w0 + xi * xi + gamma * xi)
    }

    fn lorentz_table(strength: f64, w0: f64, gamma: f64) -> Vec<(f64, f64)> {
        // Dense log grid over the oscillator's support.
        let n = 4000;
        (0..n)
            .map(|i| {
                let omega = w0 * 1e-4 * 1e8_f64.powf(i as f64 / (n - 1) as f64);
                (omega, lorentz_im(strength, w0, gamma, omega))
            })
            .collect()
    }

    #[test]
    fn vacuum_table_gives_unity() {
        let table = [(1e13, 0.0), (1e14, 0.0), (1e15, 0.0)];
        let eps = kramers_kronig_imag_axis(&table, 5e13).unwrap();
        assert!((eps - 1.0).abs() < 1e-12, "got {eps}");
    }

    #[test]
    fn single_lorentz_oscillator_round_trip() {
        let (s, w0, g) = (2.5, 1.0e14, 2.0e12);
        let table = lorentz_table(s, w0, g);
        for xi in [1e12, 3e13, 1e14, 5e14, 3e15] {
            let kk = kramers_kronig_imag_axis(&table, xi).unwrap();
            let exact = lorentz_imag_axis(s, w0, g, xi);
            assert!(
                (kk - exact).abs() / exact < 0.01,
                "xi={xi:e}: kk={kk}, exact={exact}"
            );
        }
    }

    #[test]
    fn monotone_and_at_least_one() {
        let table = lorentz_table(1.7, 2.0e14, 5.0e12);
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let xi = 1e12 * 1e4_f64.powf(k as f64 / 39.0);
            let eps = kramers_kronig_imag_axis(&table, xi).unwrap();
            assert!(eps >= 1.0);
            assert!(eps <= prev + 1e-12, "not monotone at xi={xi:e}");
            prev = eps;
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            kramers_kronig_imag_axis(&[], 1e13),
            Err(NumericsError::EmptyTable)
        ));
        assert!(matches!(
            kramers_kronig_imag_axis(&[(1e13, 0.1), (1e13, 0.2)], 1e13),
            Err(NumericsError::InvalidSpec(_))
        ));
        assert!(matches!(
            kramers_kronig_imag_axis(&[(1e13, 0.1), (2e13, -0.2)], 1e13),
            Err(NumericsError::NegativeImEps(1))
        ));
    }
}
