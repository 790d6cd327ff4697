//! Matsubara-frequency summation.

use crate::constants::{HBAR, KB};
use crate::error::NumericsError;

/// Truncation control for Matsubara sums.
#[derive(Debug, Clone, Copy)]
pub struct SummationSpec {
    /// Relative tolerance of a term against the running partial sum.
    pub rel_tol: f64,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
}

impl Default for SummationSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_terms: 200_000,
        }
    }
}

impl SummationSpec {
    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.rel_tol > 0.0) {
            return Err(NumericsError::InvalidSpec(format!(
                "summation rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 1 {
            return Err(NumericsError::InvalidSpec("max_terms must be >= 1".into()));
        }
        Ok(())
    }
}

/// n-th Matsubara frequency `2 pi k_B T n / hbar` [rad/s].
pub fn matsubara_frequency(n: usize, temperature: f64) -> f64 {
    2.0 * std::f64::consts::PI * KB * temperature * n as f64 / HBAR
}

/// Sum `first_term + sum_{n>=1} term(n, xi_n)`.
///
/// The caller supplies the n = 0 contribution explicitly (it usually carries
/// a different analytic form and a half weight). Truncation happens once five
/// consecutive terms each fall below `rel_tol` of the running partial sum;
/// the terms of dispersion sums decay monotonically only after an initial
/// regime and may plateau near surface-mode scales, so a single small term is
/// not trusted.
pub fn matsubara_sum<F: FnMut(usize, f64) -> f64>(
    mut term: F,
    first_term: f64,
    temperature: f64,
    spec: &SummationSpec,
) -> Result<f64, NumericsError> {
    spec.validate()?;
    if !(temperature > 0.0) {
        return Err(NumericsError::InvalidSpec(format!(
            "temperature must be > 0, got {temperature}"
        )));
    }

    let mut sum = first_term;
    let mut small_streak = 0usize;
    for n in 1..=spec.max_terms {
        let t = term(n, matsubara_frequency(n, temperature));
        sum += t;
        if t.abs() < spec.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 5 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(NumericsError::SumNotConverged {
        partial: sum,
        max_terms: spec.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let s = matsubara_sum(
            |n, _| 0.5f64.powi(n as i32),
            1.0,
            300.0,
            &SummationSpec::default(),
        )
        .unwrap();
        assert!((s - 2.0).abs() < 1e-7, "got {s}");
    }

    #[test]
    fn first_matsubara_frequency_at_room_temperature() {
        // 2 pi k_B 300 / hbar, evaluated independently.
        let xi1 = matsubara_frequency(1, 300.0);
        assert!((xi1 - 2.4678e14).abs() / 2.4678e14 < 1e-3, "got {xi1:e}");
    }

    #[test]
    fn zero_terms_returns_first_term() {
        let s = matsubara_sum(|_, _| 0.0, 3.25, 10.0, &SummationSpec::default()).unwrap();
        assert_eq!(s, 3.25);
    }

    #[test]
    fn non_convergence_reports_partial_sum() {
        let spec = SummationSpec {
            rel_tol: 1e-12,
            max_terms: 50,
        };
        match matsubara_sum(|n, _| 1.0 / n as f64, 0.0, 300.0, &spec) {
            Err(NumericsError::SumNotConverged { partial, max_terms }) => {
                assert_eq!(max_terms, 50);
                assert!(partial > 1.0);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }
}
