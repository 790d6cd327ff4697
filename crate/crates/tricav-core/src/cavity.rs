//! Scalar many-body composition at a single mode: intracavity resummation
//! factors, dressed pair and triple reflections, and composite
//! transmissions for three coaxial slabs.
//!
//! All stored reflections are "tilde" quantities with the global position
//! phase removed; the gap distances enter explicitly through the mode's
//! round-trip propagation factor. This avoids catastrophic phase
//! cancellation from absolute coordinates. Triple quantities are built from
//! the (12)+3 grouping; the 1+(23) grouping is algebraically equivalent and
//! exercised in tests.

use num_complex::{Complex64, ComplexFloat};

use crate::error::CavityError;
use crate::scattering::SlabAmplitudes;

/// Intracavity denominator floor; a smaller modulus means a guided-mode
/// pole of a lossless structure.
const DENOM_FLOOR: f64 = 1e-30;

/// Slab thicknesses and the two gaps separating them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub d12: f64,
    pub d23: f64,
}

impl CavityGeometry {
    pub fn new(delta1: f64, delta2: f64, delta3: f64, d12: f64, d23: f64) -> Result<Self, CavityError> {
        let g = CavityGeometry {
            delta1,
            delta2,
            delta3,
            d12,
            d23,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        for (name, v) in [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("delta3", self.delta3),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(CavityError::InvalidGeometry(format!(
                    "{name} must be >= 0 and finite, got {v:e}"
                )));
            }
        }
        for (name, v) in [("d12", self.d12), ("d23", self.d23)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CavityError::InvalidGeometry(format!(
                    "{name} must be > 0 and finite, got {v:e}"
                )));
            }
        }
        Ok(())
    }

    /// Separation between the facing surfaces of slabs 1 and 3.
    pub fn span(&self) -> f64 {
        self.d12 + self.delta2 + self.d23
    }

    /// Swap slabs 1 and 3 (mirror through the center of slab 2).
    pub fn mirrored(&self) -> Self {
        CavityGeometry {
            delta1: self.delta3,
            delta2: self.delta2,
            delta3: self.delta1,
            d12: self.d23,
            d23: self.d12,
        }
    }
}

/// Every two- and three-body scalar at one mode. `T` is `Complex64` on the
/// real frequency axis and `f64` on the imaginary axis.
///
/// The intracavity factors satisfy `u = 1 / (1 - rho rho' e^{2 i k_z d})`
/// for their constituent pair; `tau123` computed through either grouping
/// agrees to 1e-12 relative (checked in debug builds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityScalars<T> {
    pub u12: T,
    pub u23: T,
    pub u1_23: T,
    pub u12_3: T,
    pub rho12_plus: T,
    pub rho12_minus: T,
    pub rho23_plus: T,
    pub rho23_minus: T,
    pub rho123_plus: T,
    pub rho123_minus: T,
    pub tau12: T,
    pub tau23: T,
    pub tau123: T,
}

/// Composition over any scalar field with a propagation rule.
///
/// `phase(dist)` must return the round-trip factor `e^{2 i k_z dist}` for
/// the mode at hand (`e^{-2 kappa dist}` on the imaginary axis).
pub fn compose_with<T, P>(
    rho: [T; 3],
    tau: [T; 3],
    geometry: &CavityGeometry,
    phase: P,
) -> Result<CavityScalars<T>, CavityError>
where
    T: ComplexFloat<Real = f64>,
    P: Fn(f64) -> T,
{
    let one = T::one();
    let inv = |x: T, which: &'static str| -> Result<T, CavityError> {
        let d = one - x;
        if d.abs() < DENOM_FLOOR {
            return Err(CavityError::SingularCavity { factor: which });
        }
        Ok(one / d)
    };

    let (r1, r2, r3) = (rho[0], rho[1], rho[2]);
    let (t1, t2, t3) = (tau[0], tau[1], tau[2]);
    let e12 = phase(geometry.d12);
    let e23 = phase(geometry.d23);
    let ed1 = phase(geometry.delta1);
    let ed2 = phase(geometry.delta2);
    let ed3 = phase(geometry.delta3);

    let u12 = inv(r1 * r2 * e12, "u12")?;
    let u23 = inv(r2 * r3 * e23, "u23")?;

    let rho12_plus = r2 + t2 * t2 * u12 * r1 * e12 * ed2;
    let rho12_minus = r1 + t1 * t1 * u12 * r2 * e12 * ed1;
    let rho23_plus = r3 + t3 * t3 * u23 * r2 * e23 * ed3;
    let rho23_minus = r2 + t2 * t2 * u23 * r3 * e23 * ed2;
    let tau12 = t1 * t2 * u12;
    let tau23 = t2 * t3 * u23;

    let u1_23 = inv(r1 * rho23_minus * e12, "u1_23")?;
    let u12_3 = inv(rho12_plus * r3 * e23, "u12_3")?;

    let rho123_plus = r3 + t3 * t3 * u12_3 * rho12_plus * e23 * ed3;
    let rho123_minus = r1 + t1 * t1 * u1_23 * rho23_minus * e12 * ed1;
    let tau123 = tau12 * t3 * u12_3;

    #[cfg(debug_assertions)]
    {
        let alt = t1 * tau23 * u1_23;
        let scale = tau123.abs().max(alt.abs());
        // The identity is exact, but its floating-point conditioning
        // degrades with grazing evanescent transmissions (|tau| >> 1) and
        // near-resonant intracavity factors (|u| >> 1); subnormal products
        // carry no relative precision at all. Scale the tripwire so it
        // still catches transcription errors, which are O(1).
        let cond = (1.0 + t1.abs().powi(2) + t2.abs().powi(2) + t3.abs().powi(2))
            * (1.0 + u12.abs() + u23.abs() + u12_3.abs() + u1_23.abs());
        debug_assert!(
            scale <= 1e-280 || (tau123 - alt).abs() <= 1e-12 * scale * cond,
            "tau123 grouping mismatch"
        );
    }

    Ok(CavityScalars {
        u12,
        u23,
        u1_23,
        u12_3,
        rho12_plus,
        rho12_minus,
        rho23_plus,
        rho23_minus,
        rho123_plus,
        rho123_minus,
        tau12,
        tau23,
        tau123,
    })
}

/// Compose complex amplitudes at a real-axis mode with axial wavevector
/// `kz` (from [`crate::scattering::Mode::kz`]).
pub fn compose(
    kz: Complex64,
    amps: [&SlabAmplitudes; 3],
    geometry: &CavityGeometry,
) -> Result<CavityScalars<Complex64>, CavityError> {
    geometry.validate()?;
    let rho = [amps[0].rho, amps[1].rho, amps[2].rho];
    let tau = [amps[0].tau, amps[1].tau, amps[2].tau];
    compose_with(rho, tau, geometry, |dist| {
        (Complex64::i() * 2.0 * kz * dist).exp()
    })
}

/// Compose real amplitudes on the imaginary axis, where the round-trip
/// factor is `e^{-2 kappa d}` in `(0, 1)` and every output is real.
pub fn compose_imag_axis(
    kappa: f64,
    rho: [f64; 3],
    tau: [f64; 3],
    geometry: &CavityGeometry,
) -> Result<CavityScalars<f64>, CavityError> {
    geometry.validate()?;
    compose_with(rho, tau, geometry, |dist| (-2.0 * kappa * dist).exp())
}

impl CavityScalars<Complex64> {
    /// The 1+(23) grouping of the composite transmission, used to verify
    /// the grouping equivalence.
    pub fn tau123_alt(&self, tau1: Complex64) -> Complex64 {
        tau1 * self.tau23 * self.u1_23
    }
}
