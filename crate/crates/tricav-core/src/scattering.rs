//! Single-interface Fresnel coefficients and finite-thickness slab
//! amplitudes per field mode, on the real and imaginary frequency axes.
//!
//! Square-root branches always put the wave decay into the medium: the
//! principal root is taken and the sign flipped if its imaginary part is
//! negative (or, on the imaginary axis, if it is real-negative). Guided-mode
//! poles of lossless media surface as [`ScatteringError::SingularMode`]
//! rather than being clamped; lossless dielectrics are therefore unsupported
//! in evanescent integrals.

use num_complex::Complex64;

use crate::constants::C;
use crate::error::ScatteringError;
use crate::materials::{eps_imag_axis, eps_real_axis, MaterialModel};

/// Denominator floor below which a mode counts as singular [rad/m].
const DENOM_FLOOR: f64 = 1e-30;
/// `|2 k_z delta|` beyond which the internal propagation factor underflows
/// and the slab is treated as semi-infinite.
const THICK_SLAB_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];
}

/// Which frequency axis a mode lives on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    /// Real angular frequency omega [rad/s].
    Real(f64),
    /// Imaginary-axis frequency xi [rad/s] (omega = i xi).
    Imaginary(f64),
}

/// A single field mode: frequency, transverse wavevector magnitude, and
/// polarization. The axial wavevector is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub frequency: Frequency,
    pub k: f64,
    pub pol: Polarization,
}

impl Mode {
    pub fn real_axis(omega: f64, k: f64, pol: Polarization) -> Self {
        Mode {
            frequency: Frequency::Real(omega),
            k,
            pol,
        }
    }

    pub fn imag_axis(xi: f64, k: f64, pol: Polarization) -> Self {
        Mode {
            frequency: Frequency::Imaginary(xi),
            k,
            pol,
        }
    }

    /// Axial wavevector in vacuum. Real-axis modes give
    /// `sqrt(omega^2/c^2 - k^2)` with branch `Im k_z >= 0`; imaginary-axis
    /// modes give `i kappa` with `kappa = sqrt(xi^2/c^2 + k^2)`.
    pub fn kz(&self) -> Complex64 {
        match self.frequency {
            Frequency::Real(omega) => {
                let q = omega * omega / (C * C) - self.k * self.k;
                if q >= 0.0 {
                    Complex64::new(q.sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, (-q).sqrt())
                }
            }
            Frequency::Imaginary(_) => Complex64::new(0.0, self.kappa()),
        }
    }

    /// `kappa = sqrt(xi^2/c^2 + k^2)` for imaginary-axis modes; for
    /// real-axis modes the positive decay rate of an evanescent wave.
    pub fn kappa(&self) -> f64 {
        match self.frequency {
            Frequency::Imaginary(xi) => (xi * xi / (C * C) + self.k * self.k).sqrt(),
            Frequency::Real(omega) => {
                let q = self.k * self.k - omega * omega / (C * C);
                if q > 0.0 {
                    q.sqrt()
                } else {
                    0.0
                }
            }
        }
    }

    /// Real-axis modes with `k <= omega/c` carry energy to the far field.
    pub fn is_propagative(&self) -> bool {
        match self.frequency {
            Frequency::Real(omega) => self.k * C <= omega,
            Frequency::Imaginary(_) => false,
        }
    }

    fn validate(&self) -> Result<(), ScatteringError> {
        let f = match self.frequency {
            Frequency::Real(w) | Frequency::Imaginary(w) => w,
        };
        if !(f > 0.0) || !f.is_finite() {
            return Err(ScatteringError::InvalidMode(format!(
                "frequency must be positive and finite, got {f:e}"
            )));
        }
        if !(self.k >= 0.0) || !self.k.is_finite() {
            return Err(ScatteringError::InvalidMode(format!(
                "k must be >= 0 and finite, got {:e}",
                self.k
            )));
        }
        Ok(())
    }
}

/// Reflection and transmission of one homogeneous slab at one mode, with
/// the global position phase stripped (it is applied by the cavity layer).
/// `tau` is independent of the propagation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabAmplitudes {
    pub rho: Complex64,
    pub tau: Complex64,
}

impl SlabAmplitudes {
    pub const VACUUM: SlabAmplitudes = SlabAmplitudes {
        rho: Complex64::new(0.0, 0.0),
        tau: Complex64::new(1.0, 0.0),
    };
    pub const BLACK: SlabAmplitudes = SlabAmplitudes {
        rho: Complex64::new(0.0, 0.0),
        tau: Complex64::new(0.0, 0.0),
    };
}

/// Principal square root pushed onto the physical branch (`Im >= 0`, and
/// `Re >= 0` when purely real).
fn branch_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        -r
    } else {
        r
    }
}

/// Axial wavevector inside a medium of permittivity `eps`.
fn kz_medium(omega: f64, k: f64, eps: Complex64) -> Complex64 {
    branch_sqrt(eps * (omega * omega / (C * C)) - k * k)
}

/// Vacuum-medium Fresnel coefficients `(r, t, t_bar)` for one interface:
/// `t` is vacuum-to-medium, `t_bar` medium-to-vacuum.
pub fn fresnel(
    mode: &Mode,
    eps: Complex64,
) -> Result<(Complex64, Complex64, Complex64), ScatteringError> {
    mode.validate()?;
    let omega = match mode.frequency {
        Frequency::Real(w) => w,
        Frequency::Imaginary(_) => {
            return Err(ScatteringError::InvalidMode(
                "fresnel on the imaginary axis goes through slab_amplitudes_imag_axis".into(),
            ))
        }
    };
    let kz = mode.kz();
    let kzi = kz_medium(omega, mode.k, eps);
    match mode.pol {
        Polarization::Te => {
            let den = kz + kzi;
            if den.norm() < DENOM_FLOOR {
                return Err(ScatteringError::SingularMode(format!(
                    "TE interface denominator vanished at omega={omega:e}, k={:e}",
                    mode.k
                )));
            }
            Ok(((kz - kzi) / den, 2.0 * kz / den, 2.0 * kzi / den))
        }
        Polarization::Tm => {
            let den = eps * kz + kzi;
            if den.norm() < DENOM_FLOOR {
                return Err(ScatteringError::SingularMode(format!(
                    "TM interface denominator vanished at omega={omega:e}, k={:e}",
                    mode.k
                )));
            }
            let sq = branch_sqrt(eps);
            Ok((
                (eps * kz - kzi) / den,
                2.0 * sq * kz / den,
                2.0 * sq * kzi / den,
            ))
        }
    }
}

/// Finite-thickness slab amplitudes from the interface coefficients:
///
/// `rho = r (1 - e^{2 i k_z' d}) / (1 - r^2 e^{2 i k_z' d})`,
/// `tau = t t_bar e^{i (k_z' - k_z) d} / (1 - r^2 e^{2 i k_z' d})`.
pub fn slab_amplitudes(
    mode: &Mode,
    eps: Complex64,
    delta: f64,
) -> Result<SlabAmplitudes, ScatteringError> {
    mode.validate()?;
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(ScatteringError::InvalidMode(format!(
            "thickness must be >= 0 and finite, got {delta:e}"
        )));
    }
    if let Frequency::Imaginary(xi) = mode.frequency {
        let eps_i = if eps.im != 0.0 {
            return Err(ScatteringError::InvalidMode(
                "imaginary-axis permittivity must be real".into(),
            ));
        } else {
            eps.re
        };
        let (rho, tau) = slab_amplitudes_imag_axis(xi, mode.k, mode.pol, eps_i, delta)?;
        return Ok(SlabAmplitudes {
            rho: Complex64::new(rho, 0.0),
            tau: Complex64::new(tau, 0.0),
        });
    }

    // Zero thickness and vacuum are exact identities.
    if delta == 0.0 || eps == Complex64::new(1.0, 0.0) {
        return Ok(SlabAmplitudes::VACUUM);
    }

    let omega = match mode.frequency {
        Frequency::Real(w) => w,
        Frequency::Imaginary(_) => unreachable!(),
    };
    let (r, t, tbar) = fresnel(mode, eps)?;
    let kz = mode.kz();
    let kzi = kz_medium(omega, mode.k, eps);

    // Lossy thick slabs: once the internal round trip underflows the slab
    // is exactly semi-infinite, avoiding 0/0 noise.
    if 2.0 * kzi.im * delta > THICK_SLAB_EXPONENT {
        return Ok(SlabAmplitudes {
            rho: r,
            tau: Complex64::new(0.0, 0.0),
        });
    }

    let phase = (Complex64::i() * 2.0 * kzi * delta).exp();
    let den = Complex64::new(1.0, 0.0) - r * r * phase;
    if den.norm() < DENOM_FLOOR {
        return Err(ScatteringError::SingularMode(format!(
            "slab Fabry-Perot denominator vanished at omega={omega:e}, k={:e}",
            mode.k
        )));
    }
    let rho = r * (Complex64::new(1.0, 0.0) - phase) / den;
    let tau = t * tbar * (Complex64::i() * (kzi - kz) * delta).exp() / den;
    Ok(SlabAmplitudes { rho, tau })
}

/// Slab amplitudes on the imaginary axis; all quantities are real and
/// `|rho| < 1` for any passive permittivity and `xi, k > 0`.
///
/// `eps_i = eps(i xi)` may be `+inf` (static Drude limit), which yields the
/// perfect-mirror amplitudes.
pub fn slab_amplitudes_imag_axis(
    xi: f64,
    k: f64,
    pol: Polarization,
    eps_i: f64,
    delta: f64,
) -> Result<(f64, f64), ScatteringError> {
    if !(xi >= 0.0) || !(k >= 0.0) || !k.is_finite() {
        return Err(ScatteringError::InvalidMode(format!(
            "need xi >= 0 and k >= 0, got xi={xi:e}, k={k:e}"
        )));
    }
    if !(eps_i >= 1.0) {
        return Err(ScatteringError::InvalidMode(format!(
            "imaginary-axis permittivity must be >= 1, got {eps_i:e}"
        )));
    }
    if delta == 0.0 || eps_i == 1.0 {
        return Ok((0.0, 1.0));
    }

    let kappa = (xi * xi / (C * C) + k * k).sqrt();
    let (r, ttbar, kappa_i) = if eps_i.is_infinite() {
        match pol {
            Polarization::Te => (-1.0, 0.0, f64::INFINITY),
            Polarization::Tm => (1.0, 0.0, f64::INFINITY),
        }
    } else {
        let kappa_i = (eps_i * xi * xi / (C * C) + k * k).sqrt();
        match pol {
            Polarization::Te => {
                let den = kappa + kappa_i;
                ((kappa - kappa_i) / den, 4.0 * kappa * kappa_i / (den * den), kappa_i)
            }
            Polarization::Tm => {
                let den = eps_i * kappa + kappa_i;
                (
                    (eps_i * kappa - kappa_i) / den,
                    4.0 * eps_i * kappa * kappa_i / (den * den),
                    kappa_i,
                )
            }
        }
    };

    if kappa_i.is_infinite() || 2.0 * kappa_i * delta > THICK_SLAB_EXPONENT {
        return Ok((r, 0.0));
    }
    let e = (-2.0 * kappa_i * delta).exp();
    let den = 1.0 - r * r * e;
    let rho = r * (1.0 - e) / den;
    let tau = ttbar * (-(kappa_i - kappa) * delta).exp() / den;
    Ok((rho, tau))
}

/// Slab amplitudes for a material model, dispatching the black test double
/// to `rho = tau = 0` directly.
pub fn amplitudes_for(
    material: &MaterialModel,
    mode: &Mode,
    delta: f64,
) -> Result<SlabAmplitudes, ScatteringError> {
    if material.is_black() {
        return Ok(SlabAmplitudes::BLACK);
    }
    match mode.frequency {
        Frequency::Real(omega) => {
            let eps = eps_real_axis(material, omega)?;
            slab_amplitudes(mode, eps, delta)
        }
        Frequency::Imaginary(xi) => {
            let eps_i = eps_imag_axis(material, xi)?;
            let (rho, tau) = slab_amplitudes_imag_axis(xi, mode.k, mode.pol, eps_i, delta)?;
            Ok(SlabAmplitudes {
                rho: Complex64::new(rho, 0.0),
                tau: Complex64::new(tau, 0.0),
            })
        }
    }
}

/// Overlap of the polarization unit vectors of the up- and down-going
/// branches of one mode, `(eps_hat^+ . eps_hat^-)`.
///
/// TE gives 1; TM gives `(c^2/omega^2)(k^2 - k_z^2)`, which is real in both
/// the propagative and evanescent sectors (-1 at normal incidence, +1 at
/// grazing, > 1 evanescent).
pub fn polarization_overlap(mode: &Mode) -> f64 {
    match mode.pol {
        Polarization::Te => 1.0,
        Polarization::Tm => {
            let omega = match mode.frequency {
                Frequency::Real(w) => w,
                Frequency::Imaginary(_) => unreachable!("overlap is a real-axis quantity"),
            };
            let kz2 = omega * omega / (C * C) - mode.k * mode.k; // signed
            (C * C / (omega * omega)) * (mode.k * mode.k - kz2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_interface_is_transparent() {
        let m = Mode::real_axis(1e15, 1e6, Polarization::Tm);
        let (r, t, tbar) = fresnel(&m, c64(1.0, 0.0)).unwrap();
        assert!(r.norm() < 1e-15);
        assert!((t - 1.0).norm() < 1e-15);
        assert!((tbar - 1.0).norm() < 1e-15);
    }

    #[test]
    fn normal_incidence_index_two() {
        // eps = 4 at k = 0: r_TE = -1/3, r_TM = +1/3.
        let te = Mode::real_axis(1e15, 0.0, Polarization::Te);
        let tm = Mode::real_axis(1e15, 0.0, Polarization::Tm);
        let (r_te, ..) = fresnel(&te, c64(4.0, 0.0)).unwrap();
        let (r_tm, ..) = fresnel(&tm, c64(4.0, 0.0)).unwrap();
        assert!((r_te - c64(-1.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((r_tm - c64(1.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn deep_evanescent_tm_reaches_electrostatic_limit() {
        let omega = 1e14;
        let eps = c64(3.0, 0.5);
        let m = Mode::real_axis(omega, 1e9, Polarization::Tm);
        let (r, ..) = fresnel(&m, eps).unwrap();
        let expected = (eps - 1.0) / (eps + 1.0);
        assert!((r - expected).norm() < 1e-3, "r={r}, expected {expected}");
    }

    #[test]
    fn zero_thickness_slab_is_exactly_transparent() {
        let m = Mode::real_axis(2e14, 3e5, Polarization::Tm);
        let a = slab_amplitudes(&m, c64(5.0, 1.0), 0.0).unwrap();
        assert_eq!(a.rho, c64(0.0, 0.0));
        assert_eq!(a.tau, c64(1.0, 0.0));
    }

    #[test]
    fn near_zero_thickness_matches_identity_continuously() {
        let m = Mode::real_axis(2e14, 3e5, Polarization::Tm);
        let a = slab_amplitudes(&m, c64(5.0, 1.0), 1e-12).unwrap();
        assert!(a.rho.norm() < 1e-2);
        assert!((a.tau - 1.0).norm() < 1e-2);
    }

    #[test]
    fn thick_lossy_slab_becomes_semi_infinite() {
        let m = Mode::real_axis(2e14, 8e5, Polarization::Te);
        let eps = c64(6.0, 2.0);
        let thick = slab_amplitudes(&m, eps, 1.0).unwrap();
        let (r, ..) = fresnel(&m, eps).unwrap();
        assert!((thick.rho - r).norm() < 1e-12);
        assert_eq!(thick.tau, c64(0.0, 0.0));
    }

    #[test]
    fn propagative_passivity() {
        // |rho|^2 + |tau|^2 < 1 for lossy slabs, = 1 for lossless.
        let mut lcg = 123456789u64;
        let mut rand01 = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (lcg >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let omega = 1e13 + rand01() * 1e15;
            let k = rand01() * omega / C * 0.999;
            let pol = if rand01() < 0.5 {
                Polarization::Te
            } else {
                Polarization::Tm
            };
            let eps = c64(1.5 + 10.0 * rand01(), 0.1 + 3.0 * rand01());
            let delta = 1e-7 * 10f64.powf(2.0 * rand01());
            let m = Mode::real_axis(omega, k, pol);
            let a = slab_amplitudes(&m, eps, delta).unwrap();
            let sum = a.rho.norm_sqr() + a.tau.norm_sqr();
            assert!(sum < 1.0, "passivity violated: {sum} for eps={eps}");
        }
        // Lossless: energy conservation with equality.
        let m = Mode::real_axis(5e14, 1e6, Polarization::Te);
        let a = slab_amplitudes(&m, c64(2.25, 0.0), 3e-7).unwrap();
        let sum = a.rho.norm_sqr() + a.tau.norm_sqr();
        assert!((sum - 1.0).abs() < 1e-12, "lossless sum = {sum}");
    }

    #[test]
    fn branch_decays_into_the_medium() {
        let mut lcg = 987654321u64;
        let mut rand01 = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (lcg >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let omega = 1e13 + rand01() * 1e15;
            let k = rand01() * 3.0 * omega / C;
            let eps = c64(-5.0 + 15.0 * rand01(), 1e-6 + 3.0 * rand01());
            let kzi = kz_medium(omega, k, eps);
            assert!(kzi.im >= 0.0, "Im kz^(i) < 0 for eps={eps}");
        }
    }

    #[test]
    fn imag_axis_amplitudes() {
        // Vacuum: rho = 0.
        let (rho, tau) = slab_amplitudes_imag_axis(1e14, 1e6, Polarization::Tm, 1.0, 1e-6).unwrap();
        assert_eq!((rho, tau), (0.0, 1.0));

        // Perfect mirror limit: rho_TM -> 1, rho_TE -> -1.
        let (rho_tm, _) =
            slab_amplitudes_imag_axis(1e14, 1e6, Polarization::Tm, 1e12, 1e-5).unwrap();
        let (rho_te, _) =
            slab_amplitudes_imag_axis(1e14, 1e6, Polarization::Te, 1e12, 1e-5).unwrap();
        assert!((rho_tm - 1.0).abs() < 1e-2, "rho_tm={rho_tm}");
        assert!((rho_te + 1.0).abs() < 1e-2, "rho_te={rho_te}");

        // Thick slab equals the single-interface value.
        let eps_i = 4.5;
        let (rho_thick, tau_thick) =
            slab_amplitudes_imag_axis(1e14, 1e6, Polarization::Te, eps_i, 1.0).unwrap();
        let kappa = (1e14f64 * 1e14 / (C * C) + 1e12).sqrt();
        let kappa_i = (eps_i * 1e14f64 * 1e14 / (C * C) + 1e12).sqrt();
        let r = (kappa - kappa_i) / (kappa + kappa_i);
        assert!((rho_thick - r).abs() < 1e-14);
        assert_eq!(tau_thick, 0.0);

        // |rho| < 1 over a sweep.
        for pol in Polarization::BOTH {
            for k in [1e3, 1e5, 1e7] {
                for xi in [1e12, 1e14, 1e16] {
                    let (rho, _) = slab_amplitudes_imag_axis(xi, k, pol, 11.3, 2e-6).unwrap();
                    assert!(rho.abs() < 1.0);
                }
            }
        }
    }

    #[test]
    fn overlap_values() {
        let te = Mode::real_axis(1e15, 1e5, Polarization::Te);
        assert_eq!(polarization_overlap(&te), 1.0);
        let tm0 = Mode::real_axis(1e15, 0.0, Polarization::Tm);
        assert!((polarization_overlap(&tm0) + 1.0).abs() < 1e-14);
        let omega = 1e15;
        let tm_grazing = Mode::real_axis(omega, omega / C, Polarization::Tm);
        assert!((polarization_overlap(&tm_grazing) - 1.0).abs() < 1e-12);
        let tm_ev = Mode::real_axis(omega, 2.0 * omega / C, Polarization::Tm);
        assert!(polarization_overlap(&tm_ev) > 1.0);
    }

    #[test]
    fn black_material_maps_to_zero_amplitudes() {
        let m = Mode::real_axis(1e14, 1e5, Polarization::Tm);
        let a = amplitudes_for(&MaterialModel::black(), &m, 1e-6).unwrap();
        assert_eq!(a.rho, c64(0.0, 0.0));
        assert_eq!(a.tau, c64(0.0, 0.0));
    }
}
