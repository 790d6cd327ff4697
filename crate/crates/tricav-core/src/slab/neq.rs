//! Non-equilibrium heat flux and pressure contributions on the three
//! slabs, decomposed by exchange channel.
//!
//! Each slab couples to the two other slabs (through propagative and
//! evanescent waves) and to the environment (propagative only). A channel
//! stores the occupation-difference integral
//!
//! `Int domega omega^{2-m} [n(omega, T_src) - n(omega, T_body)] K(omega)`
//!
//! together with a reference magnitude (the same integral with the body
//! occupation alone), so equilibrium nulls can be judged relative to the
//! size of the exchange the channel would mediate. The full contribution is
//! `-(-1)^m hbar / (4 pi^2)` times the channel sum.
//!
//! Evanescent kernels combine `2 i^m` with `(rho^* + (-1)^m rho)` exactly
//! as the scalar reduction prescribes; every such product is checked to be
//! real before use, which traps transcription slips in the long formulas.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cavity::CavityScalars;
use crate::constants::{C, HBAR};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_finite, integrate_semi_infinite, QuadratureSpec};
use crate::scattering::{Mode, Polarization, SlabAmplitudes};

use super::eq::{eps_real3, real_amps, ErrSlot};
use super::{
    integrate_omega_partitioned, occupation, pressure_eq_slab1, pressure_eq_slab2,
    pressure_eq_slab3, FluxKind, ThreeSlabSystem,
};

/// Which reservoir feeds a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelSource {
    Body(u8),
    Environment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveSector {
    Propagative,
    Evanescent,
}

/// One exchange channel of a non-equilibrium contribution.
#[derive(Debug, Clone, Copy)]
pub struct NeqChannel {
    pub source: ChannelSource,
    pub sector: WaveSector,
    /// Occupation-difference integral (no prefactor).
    pub value: f64,
    /// Magnitude of the same integral with the body occupation alone; the
    /// scale against which a null is judged.
    pub magnitude: f64,
}

/// Channel decomposition of one `Delta_{i,m}`.
#[derive(Debug, Clone)]
pub struct NeqDecomposition {
    pub flux: FluxKind,
    pub channels: Vec<NeqChannel>,
}

impl NeqDecomposition {
    /// `-(-1)^m hbar / (4 pi^2)`.
    pub fn prefactor(&self) -> f64 {
        -self.flux.sign() * HBAR / (4.0 * PI * PI)
    }

    /// The full contribution: prefactor times the channel sum. This equals
    /// the value returned next to the decomposition exactly.
    pub fn total(&self) -> f64 {
        self.prefactor() * self.channels.iter().map(|c| c.value).sum::<f64>()
    }
}

/// Everything one kernel evaluation needs at a single `(omega, k, p)`.
struct ModeScalars {
    k: f64,
    kz: Complex64,
    amps: [SlabAmplitudes; 3],
    cav: CavityScalars<Complex64>,
}

fn mode_scalars(
    sys: &ThreeSlabSystem,
    eps: &[Option<Complex64>; 3],
    omega: f64,
    k: f64,
    pol: Polarization,
) -> Result<ModeScalars> {
    let amps = real_amps(eps, sys, omega, k, pol)?;
    let kz = Mode::real_axis(omega, k, pol).kz();
    let cav = crate::cavity::compose(kz, [&amps[0], &amps[1], &amps[2]], &sys.geometry)
        .map_err(Error::from)?;
    Ok(ModeScalars { k, kz, amps, cav })
}

/// Take the real part of a product that must be real by construction.
fn re_checked(v: Complex64, slot: &ErrSlot) -> f64 {
    if v.im.abs() > 1e-10 * v.re.abs().max(1e-280) {
        slot.capture::<f64, _>(Err(Error::InvalidSystem(format!(
            "evanescent channel integrand acquired an imaginary part: {v}"
        ))));
    }
    v.re
}

/// `2 i^m (x^* + (-1)^m x)`: `4 Im x` for heat, `-4 Re x` for pressure.
fn phase_combination(x: Complex64, flux: FluxKind) -> Complex64 {
    let i_m = match flux {
        FluxKind::Heat => Complex64::new(0.0, 1.0),
        FluxKind::Pressure => Complex64::new(-1.0, 0.0),
    };
    2.0 * i_m * (x.conj() + flux.sign() * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChannelId {
    // Slab 1 set.
    S1Body2Pw,
    S1Body2Ew,
    S1Body3Pw,
    S1Body3Ew,
    S1EnvPw,
    // Slab 2 set.
    S2Body1Pw,
    S2Body1Ew,
    S2Body3Pw,
    S2Body3Ew,
    S2EnvPw,
}

impl ChannelId {
    fn sector(self) -> WaveSector {
        match self {
            ChannelId::S1Body2Ew
            | ChannelId::S1Body3Ew
            | ChannelId::S2Body1Ew
            | ChannelId::S2Body3Ew => WaveSector::Evanescent,
            _ => WaveSector::Propagative,
        }
    }

    fn source(self) -> ChannelSource {
        match self {
            ChannelId::S1Body2Pw | ChannelId::S1Body2Ew => ChannelSource::Body(2),
            ChannelId::S1Body3Pw | ChannelId::S1Body3Ew | ChannelId::S2Body3Pw
            | ChannelId::S2Body3Ew => ChannelSource::Body(3),
            ChannelId::S2Body1Pw | ChannelId::S2Body1Ew => ChannelSource::Body(1),
            ChannelId::S1EnvPw | ChannelId::S2EnvPw => ChannelSource::Environment,
        }
    }

    /// Distance controlling the explicit evanescent decay, for the
    /// semi-infinite substitution scale.
    fn decay_distance(self, sys: &ThreeSlabSystem) -> f64 {
        let g = &sys.geometry;
        match self {
            ChannelId::S1Body2Ew | ChannelId::S2Body1Ew => g.d12,
            ChannelId::S1Body3Ew => g.span(),
            ChannelId::S2Body3Ew => g.d23,
            _ => unreachable!("propagative channels have a finite k range"),
        }
    }
}

/// Kernel value at one mode (the factor under `k dk`, including the
/// `k k_z^{m-1}` weight but not the frequency weights).
fn channel_kernel(
    id: ChannelId,
    ms: &ModeScalars,
    sys: &ThreeSlabSystem,
    flux: FluxKind,
    slot: &ErrSlot,
) -> f64 {
    let sgn = flux.sign();
    let m = flux.exponent();
    let g = &sys.geometry;
    let [a1, a2, a3] = &ms.amps;
    let cav = &ms.cav;
    let nsq = |z: Complex64| z.norm_sqr();

    // A transparent middle slab decouples it exactly: its emission
    // channels and everything felt by it vanish identically, not just to
    // roundoff.
    if *a2 == SlabAmplitudes::VACUUM {
        match id {
            ChannelId::S1Body2Pw | ChannelId::S1Body2Ew => return 0.0,
            ChannelId::S2Body1Pw
            | ChannelId::S2Body1Ew
            | ChannelId::S2Body3Pw
            | ChannelId::S2Body3Ew
            | ChannelId::S2EnvPw => return 0.0,
            _ => {}
        }
    }

    match id.sector() {
        WaveSector::Propagative => {
            let kz = ms.kz.re;
            let w = ms.k * kz.powi(m - 1);
            let bracket = match id {
                ChannelId::S1Body2Pw => {
                    let f1 = 1.0 + sgn * nsq(a1.rho) - nsq(a1.tau);
                    let emission2 = 1.0
                        - nsq(cav.rho23_minus)
                        - nsq(a2.tau * cav.u23) * (1.0 - nsq(a3.rho));
                    nsq(cav.u1_23) * f1 * emission2
                }
                ChannelId::S1Body3Pw => {
                    let f1 = 1.0 + sgn * nsq(a1.rho) - nsq(a1.tau);
                    let emission3 = 1.0 - nsq(a3.rho) - nsq(a3.tau);
                    nsq(cav.u1_23 * cav.u23 * a2.tau) * f1 * emission3
                }
                ChannelId::S1EnvPw => {
                    let f1 = 1.0 + sgn * nsq(a1.rho) - nsq(a1.tau);
                    nsq(cav.u1_23 * cav.tau23) * f1
                        + sgn * (nsq(cav.u1_23 * a1.tau) - 1.0)
                            * (1.0 + sgn * nsq(cav.rho23_minus))
                        + nsq(cav.rho23_minus)
                        - nsq(cav.rho123_minus)
                }
                ChannelId::S2Body1Pw => {
                    let emission1 = 1.0 - nsq(a1.rho) - nsq(a1.tau);
                    sgn * emission1
                        * (nsq(a2.tau * cav.u12 * cav.u12_3) * (1.0 + sgn * nsq(a3.rho))
                            - nsq(cav.u1_23) * (1.0 + sgn * nsq(cav.rho23_minus)))
                }
                ChannelId::S2Body3Pw => {
                    let emission3 = 1.0 - nsq(a3.rho) - nsq(a3.tau);
                    emission3
                        * (-nsq(a2.tau * cav.u23 * cav.u1_23) * (1.0 + sgn * nsq(a1.rho))
                            + nsq(cav.u12_3) * (1.0 + sgn * nsq(cav.rho12_plus)))
                }
                ChannelId::S2EnvPw => {
                    nsq(cav.u12_3 * a3.tau) * (1.0 + sgn * nsq(cav.rho12_plus))
                        - nsq(cav.u1_23 * cav.tau23) * (1.0 + sgn * nsq(a1.rho))
                        - sgn
                            * nsq(cav.u1_23 * a1.tau)
                            * (1.0 + sgn * nsq(cav.rho23_minus))
                        + sgn * nsq(cav.u12_3 * cav.tau12) * (1.0 + sgn * nsq(a3.rho))
                }
                _ => unreachable!(),
            };
            w * bracket
        }
        WaveSector::Evanescent => {
            let b = ms.kz.im;
            let w = ms.k * b.powi(m - 1);
            let decay = |dist: f64| (-2.0 * b * dist).exp();
            let value = match id {
                ChannelId::S1Body2Ew => {
                    let q = phase_combination(a1.rho, flux);
                    let bracket = cav.rho23_minus.im
                        - nsq(a2.tau * cav.u23) * a3.rho.im * decay(g.d23 + g.delta2);
                    re_checked(q, slot) * nsq(cav.u1_23) * bracket * decay(g.d12)
                }
                ChannelId::S1Body3Ew => {
                    let q = phase_combination(a1.rho, flux);
                    re_checked(q, slot)
                        * nsq(cav.u1_23 * cav.u23 * a2.tau)
                        * a3.rho.im
                        * decay(g.d12 + g.d23 + g.delta2)
                }
                ChannelId::S2Body1Ew => {
                    let q23 = phase_combination(cav.rho23_minus, flux);
                    let q3 = phase_combination(a3.rho, flux);
                    let bracket = -nsq(cav.u1_23) * re_checked(q23, slot)
                        + nsq(a2.tau * cav.u12 * cav.u12_3)
                            * re_checked(q3, slot)
                            * decay(g.d23 + g.delta2);
                    sgn * a1.rho.im * bracket * decay(g.d12)
                }
                ChannelId::S2Body3Ew => {
                    let q12 = phase_combination(cav.rho12_plus, flux);
                    let q1 = phase_combination(a1.rho, flux);
                    let bracket = nsq(cav.u12_3) * re_checked(q12, slot)
                        - nsq(a2.tau * cav.u23 * cav.u1_23)
                            * re_checked(q1, slot)
                            * decay(g.d12 + g.delta2);
                    a3.rho.im * bracket * decay(g.d23)
                }
                _ => unreachable!(),
            };
            // The printed combination carries the i^m inside
            // `phase_combination`; an extra factor 1/2 would double-count
            // nothing: weights are exactly as printed.
            w * value
        }
    }
}

/// Mode-count scale of a channel's k-integral at one frequency: the value
/// the kernel would take for order-one brackets. Gives the quadrature an
/// absolute floor at the physically meaningful magnitude, so integrands
/// that cancel to roundoff converge instead of chasing noise.
fn k_integral_scale(id: ChannelId, sys: &ThreeSlabSystem, omega: f64, flux: FluxKind) -> f64 {
    let m = flux.exponent();
    match id.sector() {
        WaveSector::Propagative => (omega / C).powi(m + 1),
        WaveSector::Evanescent => (0.5 / id.decay_distance(sys)).powi(m + 1),
    }
}

/// Inner (k-integral) tolerance: tighter than the frequency integral so its
/// noise stays below the outer error estimate, with the absolute floor at
/// the mode-count scale.
fn inner_spec(quad: &QuadratureSpec, scale: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 0.01 * quad.rel_tol,
        abs_tol: 0.01 * quad.rel_tol * scale,
        max_subdivisions: quad.max_subdivisions.saturating_mul(4),
        ..*quad
    }
}

/// k-integral of a channel kernel at one frequency, summed over
/// polarizations.
fn channel_k_integral(
    id: ChannelId,
    sys: &ThreeSlabSystem,
    omega: f64,
    flux: FluxKind,
    quad: &QuadratureSpec,
    slot: &ErrSlot,
) -> f64 {
    let eps = match eps_real3(&sys.materials, omega) {
        Ok(e) => e,
        Err(e) => {
            slot.capture::<f64, _>(Err(e));
            return 0.0;
        }
    };
    let integrand = |k: f64| {
        let mut sum = 0.0;
        for pol in Polarization::BOTH {
            match mode_scalars(sys, &eps, omega, k, pol) {
                Ok(ms) => sum += channel_kernel(id, &ms, sys, flux, slot),
                Err(e) => {
                    slot.capture::<f64, _>(Err(e));
                    return 0.0;
                }
            }
        }
        sum
    };
    let scale = k_integral_scale(id, sys, omega, flux);
    let spec = inner_spec(quad, scale);
    let est = match id.sector() {
        WaveSector::Propagative => integrate_finite(integrand, 0.0, omega / C, &spec),
        WaveSector::Evanescent => integrate_semi_infinite(
            integrand,
            omega / C,
            0.5 / id.decay_distance(sys),
            &spec,
        ),
    };
    let est = crate::numerics::quad::relax_nonconvergence(est, |best| {
        quad.rel_tol * (best.abs() + 0.01 * scale)
    });
    slot.capture(est.map(|e| e.value))
}

/// Occupation-weighted frequency integral of one channel.
fn channel_integral(
    id: ChannelId,
    sys: &ThreeSlabSystem,
    flux: FluxKind,
    t_weight: impl Fn(f64) -> f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let t_max = sys.temperatures.max();
    let omega_cut = quad.omega_cutoff(t_max);
    let m = flux.exponent();

    // Blackbody-bounded scale of the whole frequency integral, for the
    // absolute tolerance floor.
    let scale_spec = QuadratureSpec {
        rel_tol: 1e-2,
        ..*quad
    };
    // The occupation is clamped at one: the Rayleigh-Jeans 1/omega growth
    // would make the pressure-kernel bound log-divergent at zero frequency,
    // where the true integrands vanish anyway.
    let omega_scale = integrate_omega_partitioned(
        |omega| {
            omega.powi(2 - m)
                * occupation(omega, t_max).min(1.0)
                * k_integral_scale(id, sys, omega, flux)
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
    let breaks = super::material_omega_breakpoints(&sys.materials, omega_cut);
    let est = crate::numerics::integrate_seeded(
        |omega| {
            let weight = t_weight(omega);
            if weight == 0.0 {
                return 0.0;
            }
            omega.powi(2 - m) * weight * channel_k_integral(id, sys, omega, flux, quad, &slot)
        },
        &breaks,
        &outer,
    );
    // Resonant channels bottom out against the inner noise floor a hair
    // above the requested tolerance; a few times the target is still far
    // inside every downstream use.
    let est = crate::numerics::quad::relax_nonconvergence(est, |best| {
        4.0 * (outer.rel_tol * best.abs()).max(outer.abs_tol)
    })
    .map_err(Error::from)?;
    slot.check()?;
    Ok(est.value)
}

/// Loose-tolerance spec for the channel reference magnitudes.
fn magnitude_quad(quad: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-3_f64.max(quad.rel_tol),
        max_subdivisions: quad.max_subdivisions.min(200),
        ..*quad
    }
}

fn evaluate_channels(
    sys: &ThreeSlabSystem,
    flux: FluxKind,
    set: &[(ChannelId, f64, f64)], // (channel, T_source, T_body)
    quad: &QuadratureSpec,
) -> Result<(f64, NeqDecomposition)> {
    let mq = magnitude_quad(quad);
    let mut channels = Vec::with_capacity(set.len());
    for &(id, t_src, t_body) in set {
        let value = channel_integral(
            id,
            sys,
            flux,
            |omega| occupation(omega, t_src) - occupation(omega, t_body),
            quad,
        )
        .map_err(|e| e.context(format!("channel {:?}", id)))?;
        let magnitude = channel_integral(id, sys, flux, |omega| occupation(omega, t_body), &mq)
            .map_err(|e| e.context(format!("channel {:?} magnitude", id)))?
            .abs();
        channels.push(NeqChannel {
            source: id.source(),
            sector: id.sector(),
            value,
            magnitude,
        });
    }
    let decomposition = NeqDecomposition { flux, channels };
    let total = decomposition.total();
    Ok((total, decomposition))
}

/// Non-equilibrium contribution on slab 1: the heat flux (`FluxKind::Heat`,
/// W/m^2) or the pressure correction (`FluxKind::Pressure`, Pa), with its
/// channel decomposition.
pub fn delta_slab1(
    sys: &ThreeSlabSystem,
    flux: FluxKind,
    quad: &QuadratureSpec,
) -> Result<(f64, NeqDecomposition)> {
    sys.temperatures.validate()?;
    let t = &sys.temperatures;
    evaluate_channels(
        sys,
        flux,
        &[
            (ChannelId::S1Body2Pw, t.t2, t.t1),
            (ChannelId::S1Body2Ew, t.t2, t.t1),
            (ChannelId::S1Body3Pw, t.t3, t.t1),
            (ChannelId::S1Body3Ew, t.t3, t.t1),
            (ChannelId::S1EnvPw, t.te, t.t1),
        ],
        quad,
    )
}

/// Non-equilibrium contribution on the intermediate slab.
pub fn delta_slab2(
    sys: &ThreeSlabSystem,
    flux: FluxKind,
    quad: &QuadratureSpec,
) -> Result<(f64, NeqDecomposition)> {
    sys.temperatures.validate()?;
    let t = &sys.temperatures;
    evaluate_channels(
        sys,
        flux,
        &[
            (ChannelId::S2Body1Pw, t.t1, t.t2),
            (ChannelId::S2Body1Ew, t.t1, t.t2),
            (ChannelId::S2Body3Pw, t.t3, t.t2),
            (ChannelId::S2Body3Ew, t.t3, t.t2),
            (ChannelId::S2EnvPw, t.te, t.t2),
        ],
        quad,
    )
}

/// Non-equilibrium contribution on slab 3, by mirror symmetry: the heat
/// flux maps directly, the pressure picks up a sign.
pub fn delta_slab3(
    sys: &ThreeSlabSystem,
    flux: FluxKind,
    quad: &QuadratureSpec,
) -> Result<(f64, NeqDecomposition)> {
    let (value, mut dec) = delta_slab1(&sys.mirrored(), flux, quad)?;
    let sign = match flux {
        FluxKind::Heat => 1.0,
        FluxKind::Pressure => -1.0,
    };
    for ch in &mut dec.channels {
        ch.value *= sign;
        // Body labels are in the mirrored frame: 3 -> 1.
        if ch.source == ChannelSource::Body(3) {
            ch.source = ChannelSource::Body(1);
        }
    }
    Ok((sign * value, dec))
}

/// Heat fluxes and total pressures on all three slabs.
#[derive(Debug, Clone)]
pub struct SlabObservables {
    /// `H_i = Delta_{i,1}` [W/m^2], positive when body `i` absorbs energy.
    pub heat: [f64; 3],
    /// `P_i = P_i^{eq}(T_i) + Delta_{i,2}` [Pa], positive along +z.
    pub pressure: [f64; 3],
    pub pressure_eq: [f64; 3],
    pub heat_channels: [NeqDecomposition; 3],
    pub pressure_channels: [NeqDecomposition; 3],
}

/// Evaluate every slab observable of a system: the heat flux on each body
/// and the total pressure combining the equilibrium part at the body's own
/// temperature with the non-equilibrium correction.
pub fn observables(sys: &ThreeSlabSystem, quad: &QuadratureSpec) -> Result<SlabObservables> {
    let t = &sys.temperatures;
    let (h1, hc1) = delta_slab1(sys, FluxKind::Heat, quad)?;
    let (h2, hc2) = delta_slab2(sys, FluxKind::Heat, quad)?;
    let (h3, hc3) = delta_slab3(sys, FluxKind::Heat, quad)?;
    let (dp1, pc1) = delta_slab1(sys, FluxKind::Pressure, quad)?;
    let (dp2, pc2) = delta_slab2(sys, FluxKind::Pressure, quad)?;
    let (dp3, pc3) = delta_slab3(sys, FluxKind::Pressure, quad)?;
    let p1 = pressure_eq_slab1(sys, t.t1, quad)?;
    let p2 = pressure_eq_slab2(sys, t.t2, quad)?;
    let p3 = pressure_eq_slab3(sys, t.t3, quad)?;
    Ok(SlabObservables {
        heat: [h1, h2, h3],
        pressure: [p1 + dp1, p2 + dp2, p3 + dp3],
        pressure_eq: [p1, p2, p3],
        heat_channels: [hc1, hc2, hc3],
        pressure_channels: [pc1, pc2, pc3],
    })
}

/// Spectral density of one channel at a single frequency.
#[derive(Debug, Clone, Copy)]
pub struct SpectralChannel {
    pub source: ChannelSource,
    pub sector: WaveSector,
    /// `d Delta / d omega` contribution of this channel [W s / m^2 or Pa s].
    pub density: f64,
}

/// Per-channel spectral integrand of `Delta_{body,m}` at frequency
/// `omega`: integrating the densities over frequency reproduces the
/// channel totals.
pub fn spectral_density(
    sys: &ThreeSlabSystem,
    body: u8,
    flux: FluxKind,
    omega: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<SpectralChannel>> {
    let t = &sys.temperatures;
    let (worksys, set, sign): (ThreeSlabSystem, Vec<(ChannelId, f64, f64)>, f64) = match body {
        1 => (
            sys.clone(),
            vec![
                (ChannelId::S1Body2Pw, t.t2, t.t1),
                (ChannelId::S1Body2Ew, t.t2, t.t1),
                (ChannelId::S1Body3Pw, t.t3, t.t1),
                (ChannelId::S1Body3Ew, t.t3, t.t1),
                (ChannelId::S1EnvPw, t.te, t.t1),
            ],
            1.0,
        ),
        2 => (
            sys.clone(),
            vec![
                (ChannelId::S2Body1Pw, t.t1, t.t2),
                (ChannelId::S2Body1Ew, t.t1, t.t2),
                (ChannelId::S2Body3Pw, t.t3, t.t2),
                (ChannelId::S2Body3Ew, t.t3, t.t2),
                (ChannelId::S2EnvPw, t.te, t.t2),
            ],
            1.0,
        ),
        3 => {
            let m = sys.mirrored();
            let mt = m.temperatures;
            (
                m.clone(),
                vec![
                    (ChannelId::S1Body2Pw, mt.t2, mt.t1),
                    (ChannelId::S1Body2Ew, mt.t2, mt.t1),
                    (ChannelId::S1Body3Pw, mt.t3, mt.t1),
                    (ChannelId::S1Body3Ew, mt.t3, mt.t1),
                    (ChannelId::S1EnvPw, mt.te, mt.t1),
                ],
                match flux {
                    FluxKind::Heat => 1.0,
                    FluxKind::Pressure => -1.0,
                },
            )
        }
        other => {
            return Err(Error::InvalidSystem(format!(
                "body index must be 1, 2 or 3, got {other}"
            )))
        }
    };

    let m = flux.exponent();
    let prefactor = -flux.sign() * HBAR / (4.0 * PI * PI);
    let mut out = Vec::with_capacity(set.len());
    for (id, t_src, t_body) in set {
        let slot = ErrSlot::new();
        let kernel = channel_k_integral(id, &worksys, omega, flux, quad, &slot);
        slot.check()?;
        let n_diff = occupation(omega, t_src) - occupation(omega, t_body);
        let mut source = id.source();
        if body == 3 && source == ChannelSource::Body(3) {
            source = ChannelSource::Body(1);
        }
        out.push(SpectralChannel {
            source,
            sector: id.sector(),
            density: sign * prefactor * omega.powi(2 - m) * n_diff * kernel,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::CavityGeometry;
    use crate::constants::SIGMA_SB;
    use crate::materials::MaterialModel;
    use crate::slab::Temperatures;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn sic_system(temps: Temperatures) -> ThreeSlabSystem {
        ThreeSlabSystem::new(
            [
                MaterialModel::sic(),
                MaterialModel::sic(),
                MaterialModel::sic(),
            ],
            CavityGeometry::new(5e-6, 1e-6, 5e-6, 2.5e-6, 2.5e-6).unwrap(),
            temps,
        )
        .unwrap()
    }

    #[test]
    fn equilibrium_nulls_every_channel() {
        let sys = sic_system(Temperatures::uniform(300.0));
        for flux in [FluxKind::Heat, FluxKind::Pressure] {
            let (v1, d1) = delta_slab1(&sys, flux, &quad()).unwrap();
            let (v2, d2) = delta_slab2(&sys, flux, &quad()).unwrap();
            for ch in d1.channels.iter().chain(d2.channels.iter()) {
                assert!(
                    ch.value.abs() <= 1e-6 * ch.magnitude.max(f64::MIN_POSITIVE),
                    "channel {:?}/{:?}: {:e} vs scale {:e}",
                    ch.source,
                    ch.sector,
                    ch.value,
                    ch.magnitude
                );
            }
            assert_eq!(v1, d1.total());
            assert_eq!(v2, d2.total());
        }
    }

    #[test]
    fn vacuum_middle_slab_kills_its_channels() {
        let mut sys = sic_system(Temperatures {
            t1: 250.0,
            t2: 300.0,
            t3: 350.0,
            te: 300.0,
        });
        sys.materials[1] = MaterialModel::vacuum();
        sys.geometry.delta2 = 0.0;
        let (_, dec) = delta_slab1(&sys, FluxKind::Heat, &quad()).unwrap();
        for ch in &dec.channels {
            if ch.source == ChannelSource::Body(2) {
                assert_eq!(ch.value, 0.0, "{:?} should vanish identically", ch.sector);
            }
        }
        // And the flux on the vacuum slab itself vanishes.
        let (h2, _) = delta_slab2(&sys, FluxKind::Heat, &quad()).unwrap();
        assert!(h2.abs() < 1e-12, "H2 = {h2:e}");
    }

    #[test]
    fn blackbody_far_field_balance() {
        // Black outer slabs, vacuum middle, gaps far beyond every thermal
        // wavelength: the heat flux on slab 1 is the Stefan-Boltzmann
        // balance sigma (T3^4 + Te^4 - 2 T1^4).
        let sys = ThreeSlabSystem::new(
            [
                MaterialModel::black(),
                MaterialModel::vacuum(),
                MaterialModel::black(),
            ],
            CavityGeometry::new(1e-6, 0.0, 1e-6, 5e-3, 5e-3).unwrap(),
            Temperatures {
                t1: 250.0,
                t2: 250.0,
                t3: 350.0,
                te: 250.0,
            },
        )
        .unwrap();
        let (h1, _) = delta_slab1(&sys, FluxKind::Heat, &quad()).unwrap();
        let expected = SIGMA_SB * (350.0f64.powi(4) - 250.0f64.powi(4));
        assert!(
            (h1 - expected).abs() < 0.03 * expected,
            "H1 = {h1} vs {expected}"
        );
        // The hotter outer slab loses heat.
        let (h3, _) = delta_slab3(&sys, FluxKind::Heat, &quad()).unwrap();
        assert!(h3 < 0.0, "H3 = {h3}");
    }

    #[test]
    fn mirror_swap_fixes_heat_and_negates_pressure_on_slab2() {
        let sys = ThreeSlabSystem::new(
            [
                MaterialModel::sic(),
                MaterialModel::sic(),
                MaterialModel::sic(),
            ],
            CavityGeometry::new(5e-6, 1e-6, 5e-6, 1.5e-6, 3.5e-6).unwrap(),
            Temperatures {
                t1: 250.0,
                t2: 300.0,
                t3: 350.0,
                te: 300.0,
            },
        )
        .unwrap();
        let m = sys.mirrored();
        let q = quad();
        let (h, _) = delta_slab2(&sys, FluxKind::Heat, &q).unwrap();
        let (hm, _) = delta_slab2(&m, FluxKind::Heat, &q).unwrap();
        assert!(
            (h - hm).abs() <= 2e-5 * h.abs().max(hm.abs()),
            "heat not mirror invariant: {h:e} vs {hm:e}"
        );
        let (p, _) = delta_slab2(&sys, FluxKind::Pressure, &q).unwrap();
        let (pm, _) = delta_slab2(&m, FluxKind::Pressure, &q).unwrap();
        assert!(
            (p + pm).abs() <= 2e-5 * p.abs().max(pm.abs()),
            "pressure not mirror odd: {p:e} vs {pm:e}"
        );
    }

    #[test]
    fn spectral_density_integrates_back_to_the_channel_totals() {
        let sys = sic_system(Temperatures {
            t1: 250.0,
            t2: 307.0,
            t3: 350.0,
            te: 300.0,
        });
        let q = QuadratureSpec {
            rel_tol: 1e-5,
            ..quad()
        };
        let (total, dec) = delta_slab2(&sys, FluxKind::Heat, &q).unwrap();
        let omega_cut = q.omega_cutoff(sys.temperatures.max());
        let outer = QuadratureSpec {
            rel_tol: 1e-4,
            abs_tol: 2e-4 * total.abs(),
            ..q
        };
        let slot = ErrSlot::new();
        let est = integrate_omega_partitioned(
            |omega| {
                let chans = slot.capture(
                    spectral_density(&sys, 2, FluxKind::Heat, omega, &q)
                        .map(|v| v.iter().map(|c| c.density).sum::<f64>()),
                );
                chans
            },
            omega_cut,
            &outer,
        )
        .unwrap();
        slot.check().unwrap();
        assert!(
            (est.value - total).abs() <= 1e-3 * total.abs().max(dec.channels[0].magnitude * 1e-6),
            "density integral {:e} vs delta {:e}",
            est.value,
            total
        );
    }
}
