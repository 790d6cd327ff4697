//! Observables for three parallel slabs: equilibrium pressures,
//! non-equilibrium heat flux and pressure contributions, and their
//! per-channel spectral decompositions.

pub(crate) mod eq;
mod neq;

pub use eq::{
    additive_pressure_slab1, pressure_eq_slab1, pressure_eq_slab1_realfreq, pressure_eq_slab2,
    pressure_eq_slab3, pressure_two_body,
};
pub use neq::{
    delta_slab1, delta_slab2, delta_slab3, observables, spectral_density, ChannelSource,
    NeqChannel, NeqDecomposition, SlabObservables, SpectralChannel, WaveSector,
};

use crate::cavity::CavityGeometry;
use crate::constants::{HBAR, KB};
use crate::error::{Error, Result};
use crate::materials::MaterialModel;

/// Which generalized flux is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    /// Poynting flux: heat transfer [W/m^2].
    Heat,
    /// Stress-tensor flux: pressure [Pa].
    Pressure,
}

impl FluxKind {
    /// The integer exponent `m` entering the kernels (1 for heat, 2 for
    /// pressure).
    pub fn exponent(self) -> i32 {
        match self {
            FluxKind::Heat => 1,
            FluxKind::Pressure => 2,
        }
    }

    /// `(-1)^m`.
    pub fn sign(self) -> f64 {
        match self {
            FluxKind::Heat => -1.0,
            FluxKind::Pressure => 1.0,
        }
    }
}

/// The four temperatures of the stationary configuration [K].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Temperatures {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub te: f64,
}

impl Temperatures {
    pub fn uniform(t: f64) -> Self {
        Temperatures {
            t1: t,
            t2: t,
            t3: t,
            te: t,
        }
    }

    pub fn max(&self) -> f64 {
        self.t1.max(self.t2).max(self.t3).max(self.te)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [
            ("T1", self.t1),
            ("T2", self.t2),
            ("T3", self.t3),
            ("Te", self.te),
        ] {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidSystem(format!(
                    "{name} must be > 0 and finite, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Three slabs with their materials, geometry, and temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeSlabSystem {
    pub materials: [MaterialModel; 3],
    pub geometry: CavityGeometry,
    pub temperatures: Temperatures,
}

impl ThreeSlabSystem {
    pub fn new(
        materials: [MaterialModel; 3],
        geometry: CavityGeometry,
        temperatures: Temperatures,
    ) -> Result<Self> {
        geometry.validate().map_err(Error::from)?;
        temperatures.validate()?;
        Ok(ThreeSlabSystem {
            materials,
            geometry,
            temperatures,
        })
    }

    /// The same system seen through a mirror: slabs 1 and 3 exchange roles,
    /// as do the two gaps and the two outer temperatures.
    pub fn mirrored(&self) -> Self {
        ThreeSlabSystem {
            materials: [
                self.materials[2].clone(),
                self.materials[1].clone(),
                self.materials[0].clone(),
            ],
            geometry: self.geometry.mirrored(),
            temperatures: Temperatures {
                t1: self.temperatures.t3,
                t3: self.temperatures.t1,
                ..self.temperatures
            },
        }
    }

    /// Reposition slab 2 inside a fixed cavity: `span` is the distance
    /// between the facing surfaces of slabs 1 and 3 and `z2` the offset of
    /// the slab-2 center from the cavity center.
    pub fn with_slab2_center(&self, z2: f64) -> Result<Self> {
        let span = self.geometry.span();
        let half = 0.5 * (span - self.geometry.delta2);
        let d12 = half + z2;
        let d23 = half - z2;
        if d12 <= 0.0 || d23 <= 0.0 {
            return Err(Error::InvalidSystem(format!(
                "slab 2 center offset {z2:e} m puts it outside the cavity (span {span:e} m)"
            )));
        }
        let mut sys = self.clone();
        sys.geometry.d12 = d12;
        sys.geometry.d23 = d23;
        Ok(sys)
    }
}

/// Thermal weights of one frequency: mean photon energy and occupation.
#[derive(Debug, Clone, Copy)]
pub struct ThermalWeights {
    pub omega: f64,
}

impl ThermalWeights {
    pub fn new(omega: f64) -> Self {
        ThermalWeights { omega }
    }

    /// Bose-Einstein occupation `n(omega, T)`.
    pub fn occupation(&self, t: f64) -> f64 {
        occupation(self.omega, t)
    }

    /// Mean energy `N(omega, T) = hbar omega (1/2 + n)` [J], which is
    /// `(hbar omega / 2) coth(hbar omega / 2 k_B T)`.
    pub fn energy(&self, t: f64) -> f64 {
        HBAR * self.omega * (0.5 + self.occupation(t))
    }

    pub fn occupation_diff(&self, ta: f64, tb: f64) -> f64 {
        self.occupation(ta) - self.occupation(tb)
    }

    pub fn energy_diff(&self, ta: f64, tb: f64) -> f64 {
        self.energy(ta) - self.energy(tb)
    }
}

/// `n(omega, T) = 1 / (e^{hbar omega / k_B T} - 1)`, safe against overflow.
pub fn occupation(omega: f64, t: f64) -> f64 {
    let x = HBAR * omega / (KB * t);
    let e = x.exp_m1();
    if e.is_infinite() {
        0.0
    } else {
        1.0 / e
    }
}

/// Geometric panel boundaries for frequency integrals over
/// `[0, omega_cut]`: half-decade steps from `1e-5 omega_cut` upward.
///
/// A single adaptive panel can step right over a narrow material resonance
/// (surface phonon-polariton lines are three orders of magnitude narrower
/// than the thermal window); the partition forces initial nodes into every
/// frequency decade.
pub(crate) fn omega_breakpoints(omega_cut: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut hi = omega_cut * 1e-5;
    while hi < omega_cut {
        breaks.push(hi);
        hi *= 3.1622776601683795;
    }
    breaks.push(omega_cut);
    breaks
}

/// Integrate a frequency kernel over `[0, omega_cut]`, seeded with the
/// geometric partition and refined under one global tolerance.
pub(crate) fn integrate_omega_partitioned<F: Fn(f64) -> f64>(
    f: F,
    omega_cut: f64,
    quad: &crate::numerics::QuadratureSpec,
) -> Result<crate::numerics::Estimate> {
    crate::numerics::integrate_seeded(f, &omega_breakpoints(omega_cut), quad).map_err(Error::from)
}

/// Frequency panels for a set of materials: the geometric partition plus a
/// linear window across every material resonance, fine enough that the
/// surface-mode structure between the transverse and longitudinal lines is
/// pinned by initial panel boundaries.
pub(crate) fn material_omega_breakpoints(
    materials: &[MaterialModel],
    omega_cut: f64,
) -> Vec<f64> {
    let mut breaks = omega_breakpoints(omega_cut);
    for m in materials {
        for f in m.feature_frequencies() {
            if !(f > 0.0) {
                continue;
            }
            let mut w = 0.92 * f;
            while w <= 1.13 * f {
                if w > 0.0 && w < omega_cut {
                    breaks.push(w);
                }
                w += 0.015 * f;
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// As [`integrate_omega_partitioned`], with the material-aware panels.
pub(crate) fn integrate_omega_materials<F: Fn(f64) -> f64>(
    f: F,
    materials: &[MaterialModel],
    omega_cut: f64,
    quad: &crate::numerics::QuadratureSpec,
) -> Result<crate::numerics::Estimate> {
    crate::numerics::integrate_seeded(f, &material_omega_breakpoints(materials, omega_cut), quad)
        .map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_weights_identities() {
        for omega in [1e12, 1e14, 5e15] {
            for t in [4.0, 300.0, 900.0] {
                let w = ThermalWeights::new(omega);
                let n = w.occupation(t);
                assert!(n >= 0.0);
                let nn = w.energy(t);
                assert!(nn >= HBAR * omega / 2.0);
                assert!((nn - HBAR * omega * (0.5 + n)).abs() <= 1e-15 * nn);
            }
        }
        // Deep Wien tail underflows to zero occupation, not NaN.
        assert_eq!(occupation(1e18, 1.0), 0.0);
    }

    #[test]
    fn mirrored_system_swaps_outer_slabs() {
        let sys = ThreeSlabSystem::new(
            [
                MaterialModel::sic(),
                MaterialModel::vacuum(),
                MaterialModel::gold(),
            ],
            CavityGeometry::new(1e-6, 2e-6, 3e-6, 4e-6, 5e-6).unwrap(),
            Temperatures {
                t1: 250.0,
                t2: 300.0,
                t3: 350.0,
                te: 320.0,
            },
        )
        .unwrap();
        let m = sys.mirrored();
        assert_eq!(m.materials[0], MaterialModel::gold());
        assert_eq!(m.materials[2], MaterialModel::sic());
        assert_eq!(m.geometry.d12, 5e-6);
        assert_eq!(m.temperatures.t1, 350.0);
        assert_eq!(m.temperatures.t3, 250.0);
        assert_eq!(m.temperatures.t2, 300.0);
        assert_eq!(sys.mirrored().mirrored(), sys);
    }

    #[test]
    fn slab2_positioning_preserves_span() {
        let sys = ThreeSlabSystem::new(
            [
                MaterialModel::sic(),
                MaterialModel::sic(),
                MaterialModel::sic(),
            ],
            CavityGeometry::new(5e-6, 1e-6, 5e-6, 2.5e-6, 2.5e-6).unwrap(),
            Temperatures::uniform(300.0),
        )
        .unwrap();
        let moved = sys.with_slab2_center(1e-6).unwrap();
        assert!((moved.geometry.span() - sys.geometry.span()).abs() < 1e-18);
        assert!((moved.geometry.d12 - 3.5e-6).abs() < 1e-18);
        assert!((moved.geometry.d23 - 1.5e-6).abs() < 1e-18);
        assert!(sys.with_slab2_center(3e-6).is_err());
    }
}
