//! Force and potential for a polarizable atom between two parallel slabs.
//!
//! The atom is a point induced dipole, kept to first order in its dynamic
//! polarizability. The equilibrium force is a Matsubara sum over the
//! intracavity-resummed TE/TM kernels; out of equilibrium the occupation
//! differences between each slab, the environment, and the atom's reference
//! temperature drive additional propagative and evanescent exchanges.
//!
//! The atom's own reference temperature enters only through those
//! occupation differences; it defaults to the environment temperature and
//! can be overridden, with [`atom_temperature_sensitivity`] quantifying how
//! much the choice matters for a given configuration.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{C, EPS0, HBAR, KB};
use crate::error::{Error, Result};
use crate::materials::{eps_imag_axis, eps_real_axis, MaterialModel};
use crate::numerics::quad::{integrate_finite, integrate_semi_infinite, QuadratureSpec};
use crate::numerics::sum::matsubara_sum;
use crate::scattering::{polarization_overlap, slab_amplitudes, Mode, Polarization, SlabAmplitudes};
use crate::slab::eq::{imag_amps_one, summation_spec, ErrSlot};
use crate::slab::integrate_omega_partitioned;
use rayon::prelude::*;

/// Dynamic polarizability model.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomModel {
    /// Frequency-independent polarizability [C m^2/V].
    Static { alpha0: f64 },
    /// Single resonance line: `alpha0 w0^2 / (w0^2 - w^2 - i g0 w)`.
    SingleLorentz {
        alpha0: f64,
        omega0: f64,
        gamma0: f64,
    },
    /// Uniform scaling of a base model (the polarizability knob for
    /// highly excited atoms, which grows steeply with principal quantum
    /// number).
    Scaled { base: Box<AtomModel>, factor: f64 },
}

impl AtomModel {
    /// Ground-state rubidium-87 modeled on its strongest optical line:
    /// `alpha0 = 5.26e-39 C m^2/V`, `omega0 = 2.42e15 rad/s`,
    /// `gamma0 = 3.8e7 rad/s`.
    pub fn rubidium87() -> Self {
        AtomModel::SingleLorentz {
            alpha0: 5.26e-39,
            omega0: 2.42e15,
            gamma0: 3.8e7,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        AtomModel::Scaled {
            base: Box::new(self),
            factor,
        }
    }

    /// Static polarizability `alpha(0)`.
    pub fn static_value(&self) -> f64 {
        match self {
            AtomModel::Static { alpha0 } => *alpha0,
            AtomModel::SingleLorentz { alpha0, .. } => *alpha0,
            AtomModel::Scaled { base, factor } => factor * base.static_value(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AtomModel::Static { alpha0 } => {
                if !(*alpha0 > 0.0) {
                    return Err(Error::InvalidSystem("alpha0 must be > 0".into()));
                }
            }
            AtomModel::SingleLorentz {
                alpha0,
                omega0,
                gamma0,
            } => {
                if !(*alpha0 > 0.0) || !(*omega0 > 0.0) || !(*gamma0 >= 0.0) {
                    return Err(Error::InvalidSystem(
                        "need alpha0 > 0, omega0 > 0, gamma0 >= 0".into(),
                    ));
                }
            }
            AtomModel::Scaled { base, factor } => {
                base.validate()?;
                if !(*factor > 0.0) {
                    return Err(Error::InvalidSystem("scale factor must be > 0".into()));
                }
            }
        }
        Ok(())
    }
}

/// Complex polarizability on the real frequency axis.
pub fn polarizability(a: &AtomModel, omega: f64) -> Complex64 {
    match a {
        AtomModel::Static { alpha0 } => Complex64::new(*alpha0, 0.0),
        AtomModel::SingleLorentz {
            alpha0,
            omega0,
            gamma0,
        } => {
            let den = Complex64::new(omega0 * omega0 - omega * omega, -gamma0 * omega);
            alpha0 * omega0 * omega0 / den
        }
        AtomModel::Scaled { base, factor } => *factor * polarizability(base, omega),
    }
}

/// Real polarizability on the imaginary axis, `alpha(i xi)`.
pub fn polarizability_imag_axis(a: &AtomModel, xi: f64) -> f64 {
    match a {
        AtomModel::Static { alpha0 } => *alpha0,
        AtomModel::SingleLorentz { alpha0, omega0, .. } => {
            alpha0 * omega0 * omega0 / (omega0 * omega0 + xi * xi)
        }
        AtomModel::Scaled { base, factor } => factor * polarizability_imag_axis(base, xi),
    }
}

/// An atom between two slabs: cavity width `width` is the distance between
/// the facing slab surfaces, `z` the atom offset from the cavity center
/// (`|z| < width/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomCavity {
    pub material1: MaterialModel,
    pub delta1: f64,
    pub t1: f64,
    pub material3: MaterialModel,
    pub delta3: f64,
    pub t3: f64,
    pub width: f64,
    pub z: f64,
    pub te: f64,
    /// Reference temperature of the atom's occupation differences;
    /// defaults to `te`.
    pub atom_temperature: Option<f64>,
    pub atom: AtomModel,
}

impl AtomCavity {
    pub fn validate(&self) -> Result<()> {
        self.atom.validate()?;
        if !(self.width > 0.0) {
            return Err(Error::InvalidSystem("cavity width must be > 0".into()));
        }
        if !(self.z.abs() < self.width / 2.0) {
            return Err(Error::InvalidSystem(format!(
                "atom position {:e} outside the open cavity of width {:e}",
                self.z, self.width
            )));
        }
        for (name, t) in [("T1", self.t1), ("T3", self.t3), ("Te", self.te)] {
            if !(t > 0.0) {
                return Err(Error::InvalidSystem(format!("{name} must be > 0")));
            }
        }
        if let Some(t) = self.atom_temperature {
            if !(t > 0.0) {
                return Err(Error::InvalidSystem("atom temperature must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn at(&self, z: f64) -> Self {
        AtomCavity {
            z,
            ..self.clone()
        }
    }

    pub fn atom_reference_temperature(&self) -> f64 {
        self.atom_temperature.unwrap_or(self.te)
    }

    fn t_max(&self) -> f64 {
        self.t1
            .max(self.t3)
            .max(self.te)
            .max(self.atom_reference_temperature())
    }

    fn eps_imag(&self, xi: f64) -> Result<[Option<f64>; 2]> {
        let one = |m: &MaterialModel| -> Result<Option<f64>> {
            if m.is_black() {
                Ok(None)
            } else {
                Ok(Some(eps_imag_axis(m, xi).map_err(Error::from)?))
            }
        };
        Ok([one(&self.material1)?, one(&self.material3)?])
    }

    fn eps_real(&self, omega: f64) -> Result<[Option<Complex64>; 2]> {
        let one = |m: &MaterialModel| -> Result<Option<Complex64>> {
            if m.is_black() {
                Ok(None)
            } else {
                Ok(Some(eps_real_axis(m, omega).map_err(Error::from)?))
            }
        };
        Ok([one(&self.material1)?, one(&self.material3)?])
    }
}

/// Equilibrium force on the atom at temperature `t` [N]; positive pushes
/// the atom toward slab 3 (+z).
pub fn atom_force_eq(c: &AtomCavity, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    c.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidSystem("temperature must be > 0".into()));
    }
    let d_half = c.width / 2.0;
    let scale = 1.0 / (2.0 * (d_half - c.z.abs()));

    // Static term: TM only, static permittivities, half Matsubara weight
    // already absorbed in its closed form.
    let kernel0 = {
        let eps = c.eps_imag(0.0)?;
        let slot = ErrSlot::new();
        let est = integrate_semi_infinite(
            |k| {
                let (r1, _) = slot.capture(imag_amps_one(eps[0], c.delta1, 0.0, k, Polarization::Tm));
                let (r3, _) = slot.capture(imag_amps_one(eps[1], c.delta3, 0.0, k, Polarization::Tm));
                let u = 1.0 / (1.0 - r1 * r3 * (-2.0 * k * c.width).exp());
                k * k * k
                    * u
                    * (r3 * (-2.0 * k * (d_half - c.z)).exp()
                        - r1 * (-2.0 * k * (d_half + c.z)).exp())
            },
            0.0,
            scale,
            quad,
        )
        .map_err(Error::from)?;
        slot.check()?;
        est.value
    };
    let first_term = KB * t * c.atom.static_value() / (2.0 * PI * EPS0) * kernel0;

    let slot = ErrSlot::new();
    let total = matsubara_sum(
        |_, xi| {
            let eps = match c.eps_imag(xi) {
                Ok(e) => e,
                Err(e) => {
                    slot.capture::<f64, _>(Err(e));
                    return 0.0;
                }
            };
            let est = integrate_semi_infinite(
                |k| {
                    let kappa = (xi * xi / (C * C) + k * k).sqrt();
                    let near3 = (-2.0 * kappa * (d_half - c.z)).exp();
                    let near1 = (-2.0 * kappa * (d_half + c.z)).exp();
                    let cavity_round = (-2.0 * kappa * c.width).exp();
                    let mut val = 0.0;
                    for pol in Polarization::BOTH {
                        let (r1, _) =
                            slot.capture(imag_amps_one(eps[0], c.delta1, xi, k, pol));
                        let (r3, _) =
                            slot.capture(imag_amps_one(eps[1], c.delta3, xi, k, pol));
                        let u = 1.0 / (1.0 - r1 * r3 * cavity_round);
                        let gradient = r1 * near1 - r3 * near3;
                        val += match pol {
                            Polarization::Te => k * u * gradient,
                            Polarization::Tm => {
                                -k * u
                                    * (2.0 * C * C * k * k / (xi * xi) + 1.0)
                                    * gradient
                            }
                        };
                    }
                    val
                },
                0.0,
                scale,
                quad,
            );
            let kernel = slot.capture(est.map(|e| e.value));
            KB * t / (2.0 * PI * EPS0 * C * C)
                * xi
                * xi
                * polarizability_imag_axis(&c.atom, xi)
                * kernel
        },
        first_term,
        t,
        &summation_spec(quad),
    )
    .map_err(Error::from)?;
    slot.check()?;
    Ok(total)
}

/// Non-equilibrium force contributions by source [N].
#[derive(Debug, Clone, Copy)]
pub struct AtomNeqChannels {
    pub slab1: f64,
    pub slab3: f64,
    pub environment: f64,
}

impl AtomNeqChannels {
    pub fn total(&self) -> f64 {
        self.slab1 + self.slab3 + self.environment
    }
}

/// Real-axis amplitudes of the two walls at one mode.
fn wall_amps(
    c: &AtomCavity,
    eps: &[Option<Complex64>; 2],
    omega: f64,
    k: f64,
    pol: Polarization,
) -> Result<(SlabAmplitudes, SlabAmplitudes)> {
    let mode = Mode::real_axis(omega, k, pol);
    let one = |e: Option<Complex64>, delta: f64| -> Result<SlabAmplitudes> {
        match e {
            None => Ok(SlabAmplitudes::BLACK),
            Some(eps) => slab_amplitudes(&mode, eps, delta).map_err(Error::from),
        }
    };
    Ok((one(eps[0], c.delta1)?, one(eps[1], c.delta3)?))
}

#[derive(Clone, Copy)]
enum AtomChannel {
    Slab1,
    Slab3,
    Environment,
}

/// Mode-count scale of an atom channel's k-integral, for absolute
/// tolerance floors (propagative count plus the evanescent reach).
fn atom_k_scale(c: &AtomCavity, ch: AtomChannel, omega: f64) -> f64 {
    let alpha0 = c.atom.static_value();
    let pw = (omega / C).powi(2);
    let ew = match ch {
        AtomChannel::Environment => 0.0,
        AtomChannel::Slab1 => (0.5 / (c.width / 2.0 + c.z)).powi(2),
        AtomChannel::Slab3 => (0.5 / (c.width / 2.0 - c.z)).powi(2),
    };
    alpha0 * (pw + ew)
}

/// Tighter spec for the k-integrals nested inside a frequency integral.
fn inner_spec(quad: &QuadratureSpec, scale: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 0.01 * quad.rel_tol,
        abs_tol: 0.01 * quad.rel_tol * scale,
        max_subdivisions: quad.max_subdivisions.saturating_mul(4),
        ..*quad
    }
}

/// Frequency panels: the geometric thermal partition plus a nest of
/// boundaries around a sharp polarizability line, so the resonance
/// fluorescence term is not skipped entirely.
fn atom_omega_breaks(c: &AtomCavity, omega_cut: f64) -> Vec<f64> {
    let mut breaks = crate::slab::material_omega_breakpoints(
        &[c.material1.clone(), c.material3.clone()],
        omega_cut,
    );
    fn line_of(a: &AtomModel) -> Option<(f64, f64)> {
        match a {
            AtomModel::SingleLorentz { omega0, gamma0, .. } => Some((*omega0, *gamma0)),
            AtomModel::Scaled { base, .. } => line_of(base),
            AtomModel::Static { .. } => None,
        }
    }
    if let Some((omega0, gamma0)) = line_of(&c.atom) {
        if gamma0 > 0.0 && omega0 < omega_cut {
            for decades in [1e6, 1e4, 1e2, 1e1] {
                for sign in [-1.0, 1.0] {
                    let w = omega0 + sign * decades * gamma0;
                    if w > 0.0 && w < omega_cut {
                        breaks.push(w);
                    }
                }
            }
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
        }
    }
    breaks
}

/// k-kernels of one atom channel at fixed frequency (occupation factored
/// out). `Slab3` is the mirrored copy of `Slab1` and enters the total with
/// the opposite sign, exactly as the plus/minus structure of the flux
/// difference dictates.
fn atom_channel_kernel(
    c: &AtomCavity,
    ch: AtomChannel,
    omega: f64,
    quad: &QuadratureSpec,
    slot: &ErrSlot,
) -> f64 {
    let eps = match c.eps_real(omega) {
        Ok(e) => e,
        Err(e) => {
            slot.capture::<f64, _>(Err(e));
            return 0.0;
        }
    };
    let alpha = polarizability(&c.atom, omega);
    let d_half = c.width / 2.0;
    let (dist_near, dist_far, sign) = match ch {
        // "near" is the distance appearing with the emitting wall.
        AtomChannel::Slab1 => (d_half + c.z, d_half - c.z, 1.0),
        AtomChannel::Slab3 => (d_half - c.z, d_half + c.z, -1.0),
        AtomChannel::Environment => (d_half + c.z, d_half - c.z, 1.0),
    };

    let u_sq = |r1: Complex64, r3: Complex64, kz: Complex64| -> Option<f64> {
        let x = r1 * r3 * (Complex64::i() * 2.0 * kz * c.width).exp();
        let den = Complex64::new(1.0, 0.0) - x;
        if den.norm() < 1e-30 {
            None
        } else {
            Some(1.0 / den.norm_sqr())
        }
    };

    let k_scale = atom_k_scale(c, ch, omega);
    let spec = inner_spec(quad, k_scale);
    let relax = |est: std::result::Result<crate::numerics::Estimate, crate::error::NumericsError>| {
        crate::numerics::quad::relax_nonconvergence(est, |best| {
            quad.rel_tol * (best.abs() + 0.01 * k_scale)
        })
    };
    let pw = {
        let est = integrate_finite(
            |k| {
                let mut sum = 0.0;
                for pol in Polarization::BOTH {
                    let (a1, a3) = match wall_amps(c, &eps, omega, k, pol) {
                        Ok(v) => v,
                        Err(e) => {
                            slot.capture::<f64, _>(Err(e));
                            return 0.0;
                        }
                    };
                    let mode = Mode::real_axis(omega, k, pol);
                    let kz = mode.kz();
                    let Some(usq) = u_sq(a1.rho, a3.rho, kz) else {
                        slot.capture::<f64, _>(Err(Error::DegenerateDenominator(
                            "atom intracavity factor".into(),
                        )));
                        return 0.0;
                    };
                    let ov = polarization_overlap(&mode);
                    sum += match ch {
                        AtomChannel::Slab1 | AtomChannel::Slab3 => {
                            let (emit, emit_tau, opp) = match ch {
                                AtomChannel::Slab1 => (a1.rho, a1.tau, a3.rho),
                                _ => (a3.rho, a3.tau, a1.rho),
                            };
                            let emissivity = 1.0 - emit.norm_sqr() - emit_tau.norm_sqr();
                            let standing =
                                (opp * (Complex64::i() * 2.0 * kz * dist_far).exp()).im;
                            k * usq
                                * emissivity
                                * (2.0 * standing * ov * alpha.re
                                    + (1.0 - opp.norm_sqr()) * alpha.im)
                        }
                        AtomChannel::Environment => {
                            let s1 = (a1.rho * (Complex64::i() * 2.0 * kz * dist_near).exp()).im;
                            let s3 = (a3.rho * (Complex64::i() * 2.0 * kz * dist_far).exp()).im;
                            let (t1sq, t3sq) = (a1.tau.norm_sqr(), a3.tau.norm_sqr());
                            k * usq
                                * (2.0 * (t3sq * s1 - t1sq * s3) * ov * alpha.re
                                    - (t1sq * (1.0 - a3.rho.norm_sqr())
                                        - t3sq * (1.0 - a1.rho.norm_sqr()))
                                        * alpha.im)
                        }
                    };
                }
                sum
            },
            0.0,
            omega / C,
            &spec,
        );
        slot.capture(relax(est).map(|e| e.value))
    };

    let ew = match ch {
        AtomChannel::Environment => 0.0,
        AtomChannel::Slab1 | AtomChannel::Slab3 => {
            let est = integrate_semi_infinite(
                |k| {
                    let mut sum = 0.0;
                    for pol in Polarization::BOTH {
                        let (a1, a3) = match wall_amps(c, &eps, omega, k, pol) {
                            Ok(v) => v,
                            Err(e) => {
                                slot.capture::<f64, _>(Err(e));
                                return 0.0;
                            }
                        };
                        let mode = Mode::real_axis(omega, k, pol);
                        let kz = mode.kz();
                        let b = kz.im;
                        let Some(usq) = u_sq(a1.rho, a3.rho, kz) else {
                            slot.capture::<f64, _>(Err(Error::DegenerateDenominator(
                                "atom intracavity factor".into(),
                            )));
                            return 0.0;
                        };
                        let ov = polarization_overlap(&mode);
                        let (emit, opp) = match ch {
                            AtomChannel::Slab1 => (a1.rho, a3.rho),
                            AtomChannel::Slab3 => (a3.rho, a1.rho),
                            AtomChannel::Environment => unreachable!(),
                        };
                        sum += k
                            * usq
                            * emit.im
                            * ((1.0 - (-4.0 * b * dist_far).exp() * opp.norm_sqr())
                                * ov
                                * alpha.re
                                * (-2.0 * b * dist_near).exp()
                                - 2.0 * opp.im * alpha.im * (-2.0 * b * c.width).exp());
                    }
                    sum
                },
                omega / C,
                0.5 / dist_near.min(dist_far),
                &spec,
            );
            slot.capture(relax(est).map(|e| e.value))
        }
    };

    // Slab channels enter as -I_pw + 2 I_ew; the mirrored copy is
    // subtracted. The environment channel enters with its bare sign.
    match ch {
        AtomChannel::Slab1 | AtomChannel::Slab3 => sign * (-pw + 2.0 * ew),
        AtomChannel::Environment => pw,
    }
}

/// Non-equilibrium force on the atom [N] and its source decomposition.
///
/// Vanishes identically at global equilibrium; the total force is
/// [`atom_force_eq`] at the atom reference temperature plus this value.
pub fn atom_force_neq(c: &AtomCavity, quad: &QuadratureSpec) -> Result<(f64, AtomNeqChannels)> {
    c.validate()?;
    let t_atom = c.atom_reference_temperature();
    let t_max = c.t_max();
    let omega_cut = quad.omega_cutoff(t_max);
    let prefactor = -HBAR / (4.0 * PI * PI * EPS0 * C * C);
    let breaks = atom_omega_breaks(c, omega_cut);

    let channel = |ch: AtomChannel, t_src: f64| -> Result<f64> {
        // Blackbody-bounded scale for the absolute tolerance floor; the
        // occupation clamp tames the Rayleigh-Jeans divergence of the
        // bound at zero frequency.
        let scale_spec = QuadratureSpec {
            rel_tol: 1e-2,
            ..*quad
        };
        let omega_scale = integrate_omega_partitioned(
            |omega| {
                omega * omega
                    * crate::slab::occupation(omega, t_max).min(1.0)
                    * atom_k_scale(c, ch, omega)
            },
            omega_cut,
            &scale_spec,
        )?
        .value
        .abs();
        let outer = QuadratureSpec {
            abs_tol: quad.abs_tol.max(0.5 * quad.rel_tol * omega_scale),
            ..*quad
        };

        let slot = ErrSlot::new();
        let est = crate::numerics::integrate_seeded(
            |omega| {
                let n_diff =
                    crate::slab::occupation(omega, t_src) - crate::slab::occupation(omega, t_atom);
                if n_diff == 0.0 {
                    return 0.0;
                }
                omega * omega * n_diff * atom_channel_kernel(c, ch, omega, quad, &slot)
            },
            &breaks,
            &outer,
        );
        let est = crate::numerics::quad::relax_nonconvergence(est, |best| {
            4.0 * (outer.rel_tol * best.abs()).max(outer.abs_tol)
        })
        .map_err(Error::from)?;
        slot.check()?;
        Ok(prefactor * est.value)
    };

    let channels = AtomNeqChannels {
        slab1: channel(AtomChannel::Slab1, c.t1)?,
        slab3: channel(AtomChannel::Slab3, c.t3)?,
        environment: channel(AtomChannel::Environment, c.te)?,
    };
    Ok((channels.total(), channels))
}

/// Total force on the atom [N]: equilibrium part at the atom reference
/// temperature plus the non-equilibrium contribution.
pub fn atom_force_total(c: &AtomCavity, quad: &QuadratureSpec) -> Result<f64> {
    let eq = atom_force_eq(c, c.atom_reference_temperature(), quad)?;
    let (neq, _) = atom_force_neq(c, quad)?;
    Ok(eq + neq)
}

/// Spread of the total force over the plausible range of the atom
/// reference temperature (the extreme system temperatures), as a fraction
/// of the maximum force magnitude encountered.
pub fn atom_temperature_sensitivity(c: &AtomCavity, quad: &QuadratureSpec) -> Result<f64> {
    let candidates = [c.te, c.t1, c.t3];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut scale = 0.0f64;
    for t in candidates {
        let mut probe = c.clone();
        probe.atom_temperature = Some(t);
        let f = atom_force_total(&probe, quad)?;
        lo = lo.min(f);
        hi = hi.max(f);
        scale = scale.max(f.abs());
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((hi - lo) / scale)
}

/// Force and potential sampled on a position grid.
#[derive(Debug, Clone)]
pub struct PotentialProfile {
    pub z: Vec<f64>,
    pub force: Vec<f64>,
    /// `U(z) = -Int_0^z F dz'`, normalized to `U(0) = 0`.
    pub potential: Vec<f64>,
    /// Set when the force sign alternates across neighboring cells,
    /// meaning the grid under-resolves the sign structure.
    pub resolution_warning: bool,
}

/// Evaluate the total force over `z_grid` (ascending, inside the cavity,
/// containing z = 0) and integrate it into a potential profile.
pub fn atom_potential(c: &AtomCavity, z_grid: &[f64], quad: &QuadratureSpec) -> Result<PotentialProfile> {
    if z_grid.len() < 3 {
        return Err(Error::InvalidSystem("z grid needs at least 3 points".into()));
    }
    let half = c.width / 2.0;
    let tol0 = 1e-9 * c.width;
    let mut zero_index = None;
    for (i, &z) in z_grid.iter().enumerate() {
        if !(z.abs() < half) {
            return Err(Error::InvalidSystem(format!(
                "grid point {z:e} outside the open cavity"
            )));
        }
        if i > 0 && z <= z_grid[i - 1] {
            return Err(Error::InvalidSystem("z grid must be ascending".into()));
        }
        if z.abs() <= tol0 && zero_index.is_none() {
            zero_index = Some(i);
        }
    }
    let zero_index = zero_index.ok_or_else(|| {
        Error::InvalidSystem("z grid must contain the cavity center z = 0".into())
    })?;

    let force: Vec<f64> = z_grid
        .par_iter()
        .map(|&z| atom_force_total(&c.at(z), quad))
        .collect::<Result<Vec<f64>>>()?;

    // Cumulative trapezoid outward from the center.
    let n = z_grid.len();
    let mut potential = vec![0.0; n];
    for i in zero_index + 1..n {
        let dz = z_grid[i] - z_grid[i - 1];
        potential[i] = potential[i - 1] - 0.5 * (force[i] + force[i - 1]) * dz;
    }
    for i in (0..zero_index).rev() {
        let dz = z_grid[i + 1] - z_grid[i];
        potential[i] = potential[i + 1] + 0.5 * (force[i] + force[i + 1]) * dz;
    }

    // A +/-/+ flip across two adjacent cells means unresolved structure.
    let fmax = force.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    let floor = 1e-8 * fmax;
    let signs: Vec<i8> = force
        .iter()
        .map(|&f| {
            if f > floor {
                1
            } else if f < -floor {
                -1
            } else {
                0
            }
        })
        .collect();
    let mut resolution_warning = false;
    for w in signs.windows(3) {
        if w[0] != 0 && w[1] == -w[0] && w[2] == w[0] {
            resolution_warning = true;
        }
    }

    Ok(PotentialProfile {
        z: z_grid.to_vec(),
        force,
        potential,
        resolution_warning,
    })
}

/// Uniform grid of `count` points spanning the open cavity symmetrically,
/// leaving `margin` (fraction of the width) to each wall. Odd counts place
/// a node exactly at the center.
pub fn symmetric_grid(width: f64, margin: f64, count: usize) -> Vec<f64> {
    let a = width * (0.5 - margin);
    let n = count.max(3);
    (0..n)
        .map(|i| -a + 2.0 * a * i as f64 / (n - 1) as f64)
        .map(|z| if z.abs() < 1e-12 * width { 0.0 } else { z })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

/// A stationary point of the potential.
#[derive(Debug, Clone, Copy)]
pub struct Extremum {
    pub z: f64,
    pub potential: f64,
    pub kind: ExtremumKind,
}

/// Locate potential extrema from the sign changes of the force and count
/// those sign changes. Crossing positions are refined by linear
/// interpolation of the force and the potential by a local parabola.
pub fn classify_extrema(profile: &PotentialProfile) -> (Vec<Extremum>, usize) {
    let f = &profile.force;
    let z = &profile.z;
    let u = &profile.potential;
    let fmax = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if fmax == 0.0 {
        return (Vec::new(), 0);
    }
    let floor = 1e-8 * fmax;

    // Indices of samples with a definite sign.
    let significant: Vec<usize> = (0..f.len()).filter(|&i| f[i].abs() > floor).collect();
    let mut extrema = Vec::new();
    let mut sign_changes = 0;
    for w in significant.windows(2) {
        let (i, j) = (w[0], w[1]);
        if f[i].signum() == f[j].signum() {
            continue;
        }
        sign_changes += 1;
        // Zero crossing of F between z[i] and z[j].
        let zc = z[i] + f[i] / (f[i] - f[j]) * (z[j] - z[i]);
        // Parabola through the three profile samples nearest the crossing.
        let mid = if (zc - z[i]).abs() < (z[j] - zc).abs() { i } else { j };
        let mid = mid.clamp(1, z.len() - 2);
        let (z0, z1, z2) = (z[mid - 1], z[mid], z[mid + 1]);
        let (u0, u1, u2) = (u[mid - 1], u[mid], u[mid + 1]);
        let l0 = (zc - z1) * (zc - z2) / ((z0 - z1) * (z0 - z2));
        let l1 = (zc - z0) * (zc - z2) / ((z1 - z0) * (z1 - z2));
        let l2 = (zc - z0) * (zc - z1) / ((z2 - z0) * (z2 - z1));
        let uc = u0 * l0 + u1 * l1 + u2 * l2;
        let kind = if f[i] > 0.0 {
            ExtremumKind::Minimum
        } else {
            ExtremumKind::Maximum
        };
        extrema.push(Extremum {
            z: zc,
            potential: uc,
            kind,
        });
    }
    (extrema, sign_changes)
}

/// Depth of the deepest interior well: for each minimum, the smaller of
/// the two barrier heights toward the neighboring maxima (or the cavity
/// ends of the profile).
pub fn deepest_well(profile: &PotentialProfile) -> Option<f64> {
    let (extrema, _) = classify_extrema(profile);
    let minima: Vec<&Extremum> = extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Minimum)
        .collect();
    if minima.is_empty() {
        return None;
    }
    let mut best: Option<f64> = None;
    for min in minima {
        let left_barrier = extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Maximum && e.z < min.z)
            .map(|e| e.potential)
            .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.min(v))));
        let right_barrier = extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Maximum && e.z > min.z)
            .map(|e| e.potential)
            .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.min(v))));
        let barrier = match (left_barrier, right_barrier) {
            (Some(l), Some(r)) => l.min(r),
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => continue,
        };
        let depth = barrier - min.potential;
        if depth > 0.0 {
            best = Some(best.map_or(depth, |b: f64| b.max(depth)));
        }
    }
    best
}
