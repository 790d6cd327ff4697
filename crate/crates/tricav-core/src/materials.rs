//! Permittivity models, evaluable as complex `eps(omega)` on the real
//! frequency axis and real `eps(i xi)` on the imaginary axis.
//!
//! Bundled presets:
//! - [`MaterialModel::sic`]: silicon carbide as a single phonon resonance
//!   between the transverse and longitudinal optical frequencies.
//! - [`MaterialModel::gold`]: Drude metal with standard literature values.
//! - [`MaterialModel::sapphire_like`]: a two-oscillator stand-in for
//!   aluminum oxide (one infrared phonon band, one ultraviolet band); the
//!   oscillator fit is documented in the repository README. Results for
//!   this material are model-dependent at the few-percent level.
//! - [`MaterialModel::black`]: a test double that absorbs everything; it
//!   has no permittivity and maps directly to zero reflection and zero
//!   transmission in the scattering layer.

use std::path::Path;

use num_complex::Complex64;

use crate::error::MaterialError;
use crate::numerics::interp::log_linear;
use crate::numerics::kk::{kramers_kronig_imag_axis, validate_absorption_table};

/// One row of a tabulated optical data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalSample {
    pub omega: f64,
    pub eps_re: f64,
    pub eps_im: f64,
}

/// A dielectric response model.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    /// Fixed permittivity, mostly for tests and ideal-mirror limits.
    Constant(Complex64),
    /// Single phonon resonance:
    /// `eps(w) = eps_inf (w^2 - w_l^2 + i G w) / (w^2 - w_t^2 + i G w)`.
    PhononLorentz {
        eps_inf: f64,
        omega_l: f64,
        omega_t: f64,
        gamma: f64,
    },
    /// Free-carrier metal: `eps(w) = 1 - w_p^2 / (w (w + i gamma))`.
    Drude { omega_p: f64, gamma: f64 },
    /// `eps_inf + sum_j s_j w_j^2 / (w_j^2 - w^2 - i g_j w)`.
    OscillatorSum {
        eps_inf: f64,
        /// `(strength, omega_j, gamma_j)` per oscillator.
        oscillators: Vec<(f64, f64, f64)>,
    },
    /// Measured data, interpolated log-linearly in frequency.
    Tabulated(Vec<OpticalSample>),
    /// Perfect absorber test double; valid only where the scattering layer
    /// can map it to rho = 0, tau = 0 directly.
    Black,
}

impl MaterialModel {
    /// Vacuum (`eps = 1`).
    pub fn vacuum() -> Self {
        MaterialModel::Constant(Complex64::new(1.0, 0.0))
    }

    /// Silicon carbide phonon model: `eps_inf = 6.7`,
    /// `omega_l = 1.827e14`, `omega_t = 1.495e14`, `Gamma = 0.9e12` rad/s.
    pub fn sic() -> Self {
        MaterialModel::PhononLorentz {
            eps_inf: 6.7,
            omega_l: 1.827e14,
            omega_t: 1.495e14,
            gamma: 0.9e12,
        }
    }

    /// Gold as a Drude metal, `omega_p = 1.37e16`, `gamma = 5.32e13` rad/s.
    pub fn gold() -> Self {
        MaterialModel::Drude {
            omega_p: 1.37e16,
            gamma: 5.32e13,
        }
    }

    /// Two-oscillator aluminum-oxide stand-in (see crate docs). Static
    /// permittivity 10.1, infrared band near 1e14 rad/s, ultraviolet band
    /// near 2e16 rad/s.
    pub fn sapphire_like() -> Self {
        MaterialModel::OscillatorSum {
            eps_inf: 1.0,
            oscillators: vec![(7.03, 1.0e14, 9.0e11), (2.072, 2.0e16, 1.0e15)],
        }
    }

    pub fn black() -> Self {
        MaterialModel::Black
    }

    pub fn is_black(&self) -> bool {
        matches!(self, MaterialModel::Black)
    }

    /// Resonance frequencies around which the response varies on a scale
    /// far narrower than a thermal window; frequency integrals seed panel
    /// boundaries there so adaptive refinement cannot step over the lines.
    pub fn feature_frequencies(&self) -> Vec<f64> {
        match self {
            MaterialModel::PhononLorentz {
                omega_l, omega_t, ..
            } => vec![*omega_t, *omega_l],
            MaterialModel::OscillatorSum { oscillators, .. } => {
                oscillators.iter().map(|&(_, w, _)| w).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Look up a bundled preset by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "vacuum" => Some(Self::vacuum()),
            "sic" => Some(Self::sic()),
            "gold" => Some(Self::gold()),
            "sapphire" | "sapphire-like" => Some(Self::sapphire_like()),
            "black" => Some(Self::black()),
            "mirror" => Some(MaterialModel::Constant(Complex64::new(1e6, 0.0))),
            _ => None,
        }
    }

    /// Build a tabulated model, validating the samples.
    pub fn from_samples(samples: Vec<OpticalSample>) -> Result<Self, MaterialError> {
        if samples.is_empty() {
            return Err(MaterialError::InvalidTable("no rows".into()));
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.omega > 0.0) || !s.omega.is_finite() {
                return Err(MaterialError::InvalidTable(format!(
                    "row {i}: omega must be positive and finite"
                )));
            }
            if i > 0 && s.omega <= samples[i - 1].omega {
                return Err(MaterialError::InvalidTable(format!(
                    "row {i}: omega must be strictly increasing"
                )));
            }
            if s.eps_im < 0.0 {
                return Err(MaterialError::InvalidTable(format!(
                    "row {i}: Im eps must be >= 0"
                )));
            }
            if !s.eps_re.is_finite() || !s.eps_im.is_finite() {
                return Err(MaterialError::InvalidTable(format!("row {i}: non-finite value")));
            }
        }
        Ok(MaterialModel::Tabulated(samples))
    }

    /// Load a tabulated model from a comma-separated text file with the
    /// exact header `omega_rad_per_s,eps_re,eps_im` and rows ascending in
    /// frequency.
    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self, MaterialError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| MaterialError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_table_str(&text)
    }

    /// Parse the optical-data file format from a string.
    pub fn from_table_str(text: &str) -> Result<Self, MaterialError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| MaterialError::InvalidTable("empty file".into()))?;
        if header.trim() != "omega_rad_per_s,eps_re,eps_im" {
            return Err(MaterialError::InvalidTable(format!(
                "bad header {header:?}, expected \"omega_rad_per_s,eps_re,eps_im\""
            )));
        }
        let mut samples = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let mut next = |what: &str| -> Result<f64, MaterialError> {
                fields
                    .next()
                    .ok_or_else(|| {
                        MaterialError::InvalidTable(format!("line {}: missing {what}", lineno + 2))
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| {
                        MaterialError::InvalidTable(format!("line {}: {what}: {e}", lineno + 2))
                    })
            };
            let omega = next("omega")?;
            let eps_re = next("eps_re")?;
            let eps_im = next("eps_im")?;
            if fields.next().is_some() {
                return Err(MaterialError::InvalidTable(format!(
                    "line {}: too many fields",
                    lineno + 2
                )));
            }
            samples.push(OpticalSample {
                omega,
                eps_re,
                eps_im,
            });
        }
        Self::from_samples(samples)
    }
}

/// Complex permittivity on the real frequency axis.
///
/// Tabulated models never extrapolate here: a frequency outside the sampled
/// range is an error.
pub fn eps_real_axis(m: &MaterialModel, omega: f64) -> Result<Complex64, MaterialError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(MaterialError::InvalidTable(format!(
            "omega must be positive and finite, got {omega:e}"
        )));
    }
    match m {
        MaterialModel::Constant(e) => Ok(*e),
        MaterialModel::PhononLorentz {
            eps_inf,
            omega_l,
            omega_t,
            gamma,
        } => {
            let w2 = omega * omega;
            let num = Complex64::new(w2 - omega_l * omega_l, gamma * omega);
            let den = Complex64::new(w2 - omega_t * omega_t, gamma * omega);
            Ok(eps_inf * num / den)
        }
        MaterialModel::Drude { omega_p, gamma } => {
            let den = omega * Complex64::new(omega, *gamma);
            Ok(Complex64::new(1.0, 0.0) - omega_p * omega_p / den)
        }
        MaterialModel::OscillatorSum {
            eps_inf,
            oscillators,
        } => {
            let mut eps = Complex64::new(*eps_inf, 0.0);
            for &(s, wj, gj) in oscillators {
                let den = Complex64::new(wj * wj - omega * omega, -gj * omega);
                eps += s * wj * wj / den;
            }
            Ok(eps)
        }
        MaterialModel::Tabulated(samples) => {
            let lo = samples[0].omega;
            let hi = samples[samples.len() - 1].omega;
            if omega < lo || omega > hi {
                return Err(MaterialError::OutOfTableRange { omega, lo, hi });
            }
            let xs: Vec<f64> = samples.iter().map(|s| s.omega).collect();
            let re: Vec<f64> = samples.iter().map(|s| s.eps_re).collect();
            let im: Vec<f64> = samples.iter().map(|s| s.eps_im).collect();
            Ok(Complex64::new(
                log_linear(&xs, &re, omega),
                log_linear(&xs, &im, omega),
            ))
        }
        MaterialModel::Black => Err(MaterialError::NoPermittivity(
            "black test double has no dielectric function".into(),
        )),
    }
}

/// Real permittivity on the imaginary frequency axis, `eps(i xi)`.
///
/// Analytic models are continued exactly; tabulated data goes through the
/// Kramers-Kronig transform of its absorption spectrum. `xi = 0` returns the
/// static limit, which is `+inf` for a Drude metal.
pub fn eps_imag_axis(m: &MaterialModel, xi: f64) -> Result<f64, MaterialError> {
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(MaterialError::InvalidTable(format!(
            "xi must be >= 0 and finite, got {xi:e}"
        )));
    }
    match m {
        MaterialModel::Constant(e) => {
            if e.im != 0.0 {
                return Err(MaterialError::NoPermittivity(
                    "constant permittivity with Im != 0 has no imaginary-axis continuation".into(),
                ));
            }
            Ok(e.re)
        }
        MaterialModel::PhononLorentz {
            eps_inf,
            omega_l,
            omega_t,
            gamma,
        } => {
            let x2 = xi * xi;
            Ok(eps_inf * (x2 + omega_l * omega_l + gamma * xi)
                / (x2 + omega_t * omega_t + gamma * xi))
        }
        MaterialModel::Drude { omega_p, gamma } => {
            if xi == 0.0 {
                Ok(f64::INFINITY)
            } else {
                Ok(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
            }
        }
        MaterialModel::OscillatorSum {
            eps_inf,
            oscillators,
        } => {
            let mut eps = *eps_inf;
            for &(s, wj, gj) in oscillators {
                eps += s * wj * wj / (wj * wj + xi * xi + gj * xi);
            }
            Ok(eps)
        }
        MaterialModel::Tabulated(samples) => {
            let table: Vec<(f64, f64)> = samples.iter().map(|s| (s.omega, s.eps_im)).collect();
            validate_absorption_table(&table)?;
            Ok(kramers_kronig_imag_axis(&table, xi)?)
        }
        MaterialModel::Black => Err(MaterialError::NoPermittivity(
            "black test double has no dielectric function".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bisect;

    #[test]
    fn constant_vacuum_is_unity() {
        let v = MaterialModel::vacuum();
        assert_eq!(
            eps_real_axis(&v, 1e14).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(eps_imag_axis(&v, 1e13).unwrap(), 1.0);
    }

    #[test]
    fn sic_static_limit() {
        // eps_inf * omega_l^2 / omega_t^2 for the bundled parameters.
        let expected = 6.7 * (1.827e14_f64 / 1.495e14).powi(2);
        let eps = eps_real_axis(&MaterialModel::sic(), 1e8).unwrap();
        assert!(
            (eps.re - expected).abs() / expected < 1e-3,
            "eps(0) = {eps}, expected ~{expected}"
        );
        assert!((expected - 10.01).abs() < 0.01);
        let eps0 = eps_imag_axis(&MaterialModel::sic(), 0.0).unwrap();
        assert!((eps0 - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn sic_surface_mode_condition() {
        // Re eps(omega) = -1 inside the reststrahlen band.
        let m = MaterialModel::sic();
        let f = |w: f64| eps_real_axis(&m, w).unwrap().re + 1.0;
        let w = bisect(f, 1.6e14, 1.83e14, 1e6).unwrap();
        assert!(
            (w - 1.787e14).abs() / 1.787e14 < 2e-3,
            "surface mode at {w:e}"
        );
    }

    #[test]
    fn drude_imaginary_axis_closed_form() {
        let (wp, g) = (1.37e16, 5.32e13);
        let m = MaterialModel::gold();
        for xi in [1e13, 1e14, 1e15, 1e16] {
            let eps = eps_imag_axis(&m, xi).unwrap();
            let exact = 1.0 + wp * wp / (xi * (xi + g));
            assert!((eps - exact).abs() / exact < 1e-14);
        }
        assert!(eps_imag_axis(&m, 0.0).unwrap().is_infinite());
    }

    #[test]
    fn phonon_model_consistent_with_kramers_kronig_of_itself() {
        let m = MaterialModel::sic();
        // Sample Im eps over the full oscillator support, with a dense
        // linear section across the phonon line (width Gamma = 9e11, three
        // orders below the band scale).
        let mut omegas: Vec<f64> = (0..2000)
            .map(|i| 1e10 * 1e8_f64.powf(i as f64 / 1999.0))
            .collect();
        let (line_lo, line_hi) = (1.0e14, 2.3e14);
        omegas.extend((0..6000).map(|i| line_lo + (line_hi - line_lo) * i as f64 / 5999.0));
        omegas.sort_by(f64::total_cmp);
        omegas.dedup();
        let table: Vec<(f64, f64)> = omegas
            .into_iter()
            .map(|w| (w, eps_real_axis(&m, w).unwrap().im))
            .collect();
        let xi = 1.495e14;
        // The transform reconstructs the oscillator part; the model's
        // eps_inf stands in for electronic absorption far above the
        // phonon band, so it enters as a constant offset.
        let kk_oscillator = kramers_kronig_imag_axis(&table, xi).unwrap() - 1.0;
        let exact_oscillator = eps_imag_axis(&m, xi).unwrap() - 6.7;
        assert!(
            (kk_oscillator - exact_oscillator).abs() / exact_oscillator < 0.01,
            "kk={kk_oscillator} vs exact={exact_oscillator}"
        );
    }

    #[test]
    fn imag_axis_is_real_monotone_and_at_least_one() {
        for m in [
            MaterialModel::sic(),
            MaterialModel::gold(),
            MaterialModel::sapphire_like(),
            MaterialModel::Constant(Complex64::new(4.0, 0.0)),
        ] {
            let mut prev = f64::INFINITY;
            for k in 0..60 {
                let xi = 1e11 * 1e6_f64.powf(k as f64 / 59.0);
                let eps = eps_imag_axis(&m, xi).unwrap();
                assert!(eps >= 1.0, "{m:?} at xi={xi:e}: {eps}");
                assert!(eps <= prev * (1.0 + 1e-12), "{m:?} not monotone at {xi:e}");
                prev = eps;
            }
        }
    }

    #[test]
    fn passivity_on_the_real_axis() {
        for m in [
            MaterialModel::sic(),
            MaterialModel::gold(),
            MaterialModel::sapphire_like(),
        ] {
            for k in 0..100 {
                let w = 1e11 * 1e6_f64.powf(k as f64 / 99.0);
                let eps = eps_real_axis(&m, w).unwrap();
                assert!(eps.im >= 0.0, "{m:?} at {w:e}: Im eps = {}", eps.im);
            }
        }
    }

    #[test]
    fn reststrahlen_band_sign_change_for_small_damping() {
        let m = MaterialModel::PhononLorentz {
            eps_inf: 6.7,
            omega_l: 1.827e14,
            omega_t: 1.495e14,
            gamma: 1e9,
        };
        // Re eps large and positive just below omega_t, negative in between.
        let below = eps_real_axis(&m, 1.494e14).unwrap().re;
        let inside = eps_real_axis(&m, 1.6e14).unwrap().re;
        let above = eps_real_axis(&m, 1.9e14).unwrap().re;
        assert!(below > 100.0);
        assert!(inside < 0.0);
        assert!(above > 0.0);
    }

    #[test]
    fn table_file_round_trip_and_validation() {
        let good = "omega_rad_per_s,eps_re,eps_im\n1.0e13,2.0,0.1\n2.0e13,2.1,0.2\n";
        let m = MaterialModel::from_table_str(good).unwrap();
        let eps = eps_real_axis(&m, 1.5e13).unwrap();
        assert!(eps.re > 2.0 && eps.re < 2.1);
        assert!(eps_real_axis(&m, 5e13).is_err(), "no silent extrapolation");

        let bad_header = "omega,eps_re,eps_im\n1e13,2.0,0.1\n";
        assert!(MaterialModel::from_table_str(bad_header).is_err());
        let bad_order = "omega_rad_per_s,eps_re,eps_im\n2e13,2.0,0.1\n1e13,2.0,0.1\n";
        assert!(MaterialModel::from_table_str(bad_order).is_err());
        let bad_im = "omega_rad_per_s,eps_re,eps_im\n1e13,2.0,-0.1\n";
        assert!(MaterialModel::from_table_str(bad_im).is_err());
    }

    #[test]
    fn black_has_no_permittivity() {
        assert!(eps_real_axis(&MaterialModel::black(), 1e14).is_err());
        assert!(eps_imag_axis(&MaterialModel::black(), 1e14).is_err());
    }
}
