//! Equilibrium Casimir-Lifshitz pressures on the three slabs.
//!
//! The production route is the Matsubara form: a sum over imaginary
//! frequencies `xi_n = 2 pi k_B T n / hbar` of transverse-wavevector
//! integrals built from real-valued imaginary-axis cavity scalars. The
//! zero-frequency term is supplied separately (TM only, static
//! permittivity, half weight).
//!
//! [`pressure_eq_slab1_realfreq`] evaluates the same pressure directly on
//! the real frequency axis as an independent cross-check. Its thermal part
//! converges absolutely under the frequency cutoff; the zero-point part of
//! the propagative sector only converges through oscillation, so it is
//! sampled densely in fixed frequency windows whose partial sums are then
//! contracted by iterated averaging. The returned error estimate includes
//! the spread of that contraction.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cavity::{compose, compose_imag_axis, CavityScalars};
use crate::constants::{C, HBAR, KB};
use crate::error::{Error, Result};
use crate::materials::{eps_imag_axis, eps_real_axis, MaterialModel};
use crate::numerics::quad::{integrate_finite, integrate_semi_infinite, Estimate, QuadratureSpec};
use crate::numerics::sum::{matsubara_sum, SummationSpec};
use crate::numerics::tail::averaged_segment_sum;
use crate::scattering::{
    slab_amplitudes, slab_amplitudes_imag_axis, Mode, Polarization, SlabAmplitudes,
};

use super::{occupation, ThreeSlabSystem};

/// Collects the first error raised inside a quadrature integrand, where
/// closures cannot return `Result` themselves.
pub(crate) struct ErrSlot(RefCell<Option<Error>>);

impl ErrSlot {
    pub fn new() -> Self {
        ErrSlot(RefCell::new(None))
    }

    pub fn capture<T: Default, E: Into<Error>>(&self, r: std::result::Result<T, E>) -> T {
        match r {
            Ok(v) => v,
            Err(e) => {
                let mut slot = self.0.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e.into());
                }
                T::default()
            }
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.0.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Summation control derived from the quadrature tolerance: the truncation
/// tail of the Matsubara sum stays well below the quadrature error.
pub(crate) fn summation_spec(quad: &QuadratureSpec) -> SummationSpec {
    SummationSpec {
        rel_tol: (0.05 * quad.rel_tol).max(1e-14),
        max_terms: 500_000,
    }
}

/// Imaginary-axis permittivities of the three slabs; `None` marks the black
/// test double.
fn eps_imag3(sys: &ThreeSlabSystem, xi: f64) -> Result<[Option<f64>; 3]> {
    let mut out = [None; 3];
    for (i, m) in sys.materials.iter().enumerate() {
        out[i] = if m.is_black() {
            None
        } else {
            Some(eps_imag_axis(m, xi).map_err(Error::from)?)
        };
    }
    Ok(out)
}

/// Real-axis permittivities; `None` marks black.
pub(crate) fn eps_real3(materials: &[MaterialModel; 3], omega: f64) -> Result<[Option<Complex64>; 3]> {
    let mut out = [None; 3];
    for (i, m) in materials.iter().enumerate() {
        out[i] = if m.is_black() {
            None
        } else {
            Some(eps_real_axis(m, omega).map_err(Error::from)?)
        };
    }
    Ok(out)
}

/// Imaginary-axis amplitudes of one slab. The static Drude limit
/// (`eps = inf` at `xi = 0`) keeps the TM perfect-mirror reflection while
/// TE decouples, matching the `xi -> 0` limit of the dispersive model.
pub(crate) fn imag_amps_one(
    eps: Option<f64>,
    delta: f64,
    xi: f64,
    k: f64,
    pol: Polarization,
) -> Result<(f64, f64)> {
    let Some(e) = eps else {
        return Ok((0.0, 0.0));
    };
    if delta == 0.0 {
        return Ok((0.0, 1.0));
    }
    if xi == 0.0 && e.is_infinite() {
        return Ok(match pol {
            Polarization::Te => (0.0, 1.0),
            Polarization::Tm => (1.0, 0.0),
        });
    }
    slab_amplitudes_imag_axis(xi, k, pol, e, delta)
        .map_err(Error::from)
}

pub(crate) fn imag_cavity_scalars(
    sys: &ThreeSlabSystem,
    eps: &[Option<f64>; 3],
    xi: f64,
    k: f64,
    pol: Polarization,
) -> Result<(CavityScalars<f64>, [(f64, f64); 3])> {
    let g = &sys.geometry;
    let a1 = imag_amps_one(eps[0], g.delta1, xi, k, pol)?;
    let a2 = imag_amps_one(eps[1], g.delta2, xi, k, pol)?;
    let a3 = imag_amps_one(eps[2], g.delta3, xi, k, pol)?;
    let kappa = (xi * xi / (C * C) + k * k).sqrt();
    let s = compose_imag_axis(kappa, [a1.0, a2.0, a3.0], [a1.1, a2.1, a3.1], g)?;
    Ok((s, [a1, a2, a3]))
}

#[derive(Clone, Copy)]
enum PressureOn {
    Slab1,
    Slab2,
}

/// `sum_p Int dk k kappa_n Y/(1 - Y)` at one imaginary frequency, with
/// `Y = rho rho' e^{-2 kappa d}` the intracavity round trip.
///
/// `Y/(1-Y)` is formed from `Y` directly rather than as `u - 1`: at large
/// Matsubara order the round trip shrinks exponentially and `1/(1-Y) - 1`
/// would lose all significant digits.
fn matsubara_kernel(
    sys: &ThreeSlabSystem,
    xi: f64,
    quad: &QuadratureSpec,
    which: PressureOn,
) -> Result<f64> {
    let eps = eps_imag3(sys, xi)?;
    let g = sys.geometry;
    let scale = 0.5 / g.d12.min(g.d23);
    let slot = ErrSlot::new();
    let est = integrate_semi_infinite(
        |k| {
            let kappa = (xi * xi / (C * C) + k * k).sqrt();
            let e12 = (-2.0 * kappa * g.d12).exp();
            let e23 = (-2.0 * kappa * g.d23).exp();
            let mut sum = 0.0;
            for pol in Polarization::BOTH {
                let (s, amps) = match imag_cavity_scalars(sys, &eps, xi, k, pol) {
                    Ok(v) => v,
                    Err(e) => {
                        slot.capture::<f64, _>(Err(e));
                        return 0.0;
                    }
                };
                let y_left = amps[0].0 * s.rho23_minus * e12;
                let round_trip = match which {
                    PressureOn::Slab1 => y_left / (1.0 - y_left),
                    PressureOn::Slab2 => {
                        let y_right = s.rho12_plus * amps[2].0 * e23;
                        y_right / (1.0 - y_right) - y_left / (1.0 - y_left)
                    }
                };
                sum += k * kappa * round_trip;
            }
            sum
        },
        0.0,
        scale,
        quad,
    )
    .map_err(Error::from)?;
    slot.check()?;
    Ok(est.value)
}

fn pressure_matsubara(
    sys: &ThreeSlabSystem,
    t: f64,
    quad: &QuadratureSpec,
    which: PressureOn,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidSystem(format!(
            "temperature must be > 0 and finite, got {t}"
        )));
    }
    sys.geometry.validate().map_err(Error::from)?;
    let s0 = matsubara_kernel(sys, 0.0, quad, which)?;
    let slot = ErrSlot::new();
    let total = matsubara_sum(
        |_, xi| slot.capture(matsubara_kernel(sys, xi, quad, which)),
        0.5 * s0,
        t,
        &summation_spec(quad),
    )
    .map_err(Error::from)?;
    slot.check()?;
    Ok(-(KB * t / PI) * total)
}

/// Equilibrium pressure on slab 1 at temperature `t` [Pa]; negative values
/// pull slab 1 toward slab 2.
pub fn pressure_eq_slab1(sys: &ThreeSlabSystem, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    pressure_matsubara(sys, t, quad, PressureOn::Slab1)
}

/// Equilibrium pressure on the intermediate slab [Pa]; zero for a
/// symmetric system.
pub fn pressure_eq_slab2(sys: &ThreeSlabSystem, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    pressure_matsubara(sys, t, quad, PressureOn::Slab2)
}

/// Equilibrium pressure on slab 3 [Pa], through the mirror rule
/// `P3(sys) = -P1(mirror(sys))`.
pub fn pressure_eq_slab3(sys: &ThreeSlabSystem, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(-pressure_eq_slab1(&sys.mirrored(), t, quad)?)
}

/// Lifshitz pressure between two isolated slabs separated by `gap` [Pa].
///
/// Deliberately implemented without the three-body composition so it can
/// serve as an independent reduction check.
pub fn pressure_two_body(
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
    delta_a: f64,
    delta_b: f64,
    gap: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::InvalidSystem(format!("gap must be > 0, got {gap:e}")));
    }
    let eps_of = |m: &MaterialModel, xi: f64| -> Result<Option<f64>> {
        if m.is_black() {
            Ok(None)
        } else {
            Ok(Some(eps_imag_axis(m, xi).map_err(Error::from)?))
        }
    };
    let kernel = |xi: f64| -> Result<f64> {
        let ea = eps_of(mat_a, xi)?;
        let eb = eps_of(mat_b, xi)?;
        let slot = ErrSlot::new();
        let est = integrate_semi_infinite(
            |k| {
                let kappa = (xi * xi / (C * C) + k * k).sqrt();
                let e = (-2.0 * kappa * gap).exp();
                let mut sum = 0.0;
                for pol in Polarization::BOTH {
                    let (ra, _) = slot.capture(imag_amps_one(ea, delta_a, xi, k, pol));
                    let (rb, _) = slot.capture(imag_amps_one(eb, delta_b, xi, k, pol));
                    let y = ra * rb * e;
                    sum += k * kappa * y / (1.0 - y);
                }
                sum
            },
            0.0,
            0.5 / gap,
            quad,
        )
        .map_err(Error::from)?;
        slot.check()?;
        Ok(est.value)
    };

    let s0 = kernel(0.0)?;
    let slot = ErrSlot::new();
    let total = matsubara_sum(
        |_, xi| slot.capture(kernel(xi)),
        0.5 * s0,
        t,
        &summation_spec(quad),
    )
    .map_err(Error::from)?;
    slot.check()?;
    Ok(-(KB * t / PI) * total)
}

/// Pairwise-additive estimate of the pressure on slab 1: the slab-2 pair
/// pressure at gap `d12` plus the slab-3 pair pressure at gap
/// `d12 + delta2 + d23`.
pub fn additive_pressure_slab1(sys: &ThreeSlabSystem, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    let g = &sys.geometry;
    let p12 = pressure_two_body(
        &sys.materials[0],
        &sys.materials[1],
        g.delta1,
        g.delta2,
        g.d12,
        t,
        quad,
    )?;
    let p13 = pressure_two_body(
        &sys.materials[0],
        &sys.materials[2],
        g.delta1,
        g.delta3,
        g.span(),
        t,
        quad,
    )?;
    Ok(p12 + p13)
}

/// Real-axis amplitudes of the three slabs at one mode, from cached
/// permittivities (`None` = black).
pub(crate) fn real_amps(
    eps: &[Option<Complex64>; 3],
    sys: &ThreeSlabSystem,
    omega: f64,
    k: f64,
    pol: Polarization,
) -> Result<[SlabAmplitudes; 3]> {
    let mode = Mode::real_axis(omega, k, pol);
    let deltas = [
        sys.geometry.delta1,
        sys.geometry.delta2,
        sys.geometry.delta3,
    ];
    let mut out = [SlabAmplitudes::VACUUM; 3];
    for i in 0..3 {
        out[i] = match eps[i] {
            None => SlabAmplitudes::BLACK,
            Some(e) => slab_amplitudes(&mode, e, deltas[i]).map_err(Error::from)?,
        };
    }
    Ok(out)
}

/// Inner-quadrature spec for the k-integrals of the real-frequency
/// kernels: tighter than the frequency integral, with an absolute floor at
/// the mode-count scale so cancellation-level integrands converge.
fn realfreq_inner_spec(quad: &QuadratureSpec, scale: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 0.01 * quad.rel_tol,
        abs_tol: 0.01 * quad.rel_tol * scale,
        max_subdivisions: quad.max_subdivisions.saturating_mul(4),
        ..*quad
    }
}

/// `sum_p Int_0^{omega/c} dk Re[k k_z (u - 1)]` at one real frequency.
fn realfreq_kernel_pw(
    sys: &ThreeSlabSystem,
    omega: f64,
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
    let kmax = omega / C;
    let k_scale = (omega / C).powi(3);
    let spec = realfreq_inner_spec(quad, k_scale);
    let est = integrate_finite(
        |k| {
            let mut sum = 0.0;
            for pol in Polarization::BOTH {
                let amps = match real_amps(&eps, sys, omega, k, pol) {
                    Ok(a) => a,
                    Err(e) => {
                        slot.capture::<f64, _>(Err(e));
                        return 0.0;
                    }
                };
                let kz = Mode::real_axis(omega, k, pol).kz();
                let s = match compose(kz, [&amps[0], &amps[1], &amps[2]], &sys.geometry) {
                    Ok(s) => s,
                    Err(e) => {
                        slot.capture::<f64, _>(Err(e));
                        return 0.0;
                    }
                };
                let y = amps[0].rho
                    * s.rho23_minus
                    * (Complex64::i() * 2.0 * kz * sys.geometry.d12).exp();
                sum += (k * kz * y / (Complex64::new(1.0, 0.0) - y)).re;
            }
            sum
        },
        0.0,
        kmax,
        &spec,
    );
    let est = crate::numerics::quad::relax_nonconvergence(est, |best| {
        quad.rel_tol * (best.abs() + 0.01 * k_scale)
    });
    slot.capture(est.map(|e| e.value))
}

/// Evanescent-sector companion of [`realfreq_kernel_pw`].
fn realfreq_kernel_ew(
    sys: &ThreeSlabSystem,
    omega: f64,
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
    let scale = 0.5 / sys.geometry.d12.min(sys.geometry.d23);
    let k_scale = scale.powi(3);
    let spec = realfreq_inner_spec(quad, k_scale);
    let est = integrate_semi_infinite(
        |k| {
            let mut sum = 0.0;
            for pol in Polarization::BOTH {
                let amps = match real_amps(&eps, sys, omega, k, pol) {
                    Ok(a) => a,
                    Err(e) => {
                        slot.capture::<f64, _>(Err(e));
                        return 0.0;
                    }
                };
                let kz = Mode::real_axis(omega, k, pol).kz();
                let s = match compose(kz, [&amps[0], &amps[1], &amps[2]], &sys.geometry) {
                    Ok(s) => s,
                    Err(e) => {
                        slot.capture::<f64, _>(Err(e));
                        return 0.0;
                    }
                };
                let y = amps[0].rho
                    * s.rho23_minus
                    * (Complex64::i() * 2.0 * kz * sys.geometry.d12).exp();
                // kz = i Im(kz): Re[i k Im(kz) Y/(1-Y)] = -k Im(kz) Im[Y/(1-Y)].
                sum -= k * kz.im * (y / (Complex64::new(1.0, 0.0) - y)).im;
            }
            sum
        },
        omega / C,
        scale,
        &spec,
    );
    let est = crate::numerics::quad::relax_nonconvergence(est, |best| {
        quad.rel_tol * (best.abs() + 0.01 * k_scale)
    });
    slot.capture(est.map(|e| e.value))
}

/// Direct real-frequency evaluation of the equilibrium pressure on slab 1.
///
/// Returns the value with an achieved-accuracy estimate; agreement with
/// [`pressure_eq_slab1`] validates the rotation to the imaginary axis for
/// the lossy amplitudes at hand.
pub fn pressure_eq_slab1_realfreq(
    sys: &ThreeSlabSystem,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidSystem(format!(
            "temperature must be > 0 and finite, got {t}"
        )));
    }
    let prefactor = -1.0 / (PI * PI);
    let omega_cut = quad.omega_cutoff(t);
    let mut value = 0.0;
    let mut error = 0.0;

    // Thermal part: the occupation cuts the integrand off exponentially.
    {
        let q_ew = 0.5 / sys.geometry.d12.min(sys.geometry.d23);
        let scale_spec = QuadratureSpec {
            rel_tol: 1e-2,
            ..*quad
        };
        let thermal_scale = super::integrate_omega_partitioned(
            |omega| {
                HBAR * occupation(omega, t).min(1.0) * ((omega / C).powi(3) + q_ew.powi(3))
            },
            omega_cut,
            &scale_spec,
        )?
        .value;
        let outer = QuadratureSpec {
            abs_tol: quad.abs_tol.max(0.5 * quad.rel_tol * thermal_scale),
            ..*quad
        };
        let slot = ErrSlot::new();
        let est = super::integrate_omega_materials(
            |omega| {
                let w = HBAR * occupation(omega, t);
                if w == 0.0 {
                    return 0.0;
                }
                w * (realfreq_kernel_pw(sys, omega, quad, &slot)
                    + realfreq_kernel_ew(sys, omega, quad, &slot))
            },
            &sys.materials,
            omega_cut,
            &outer,
        )?;
        slot.check()?;
        value += prefactor * est.value;
        error += est.error.abs();
        // Truncated thermal tail is suppressed by e^{-cutoff_factor}.
        error += (prefactor * est.value).abs() * (-quad.frequency_cutoff_factor).exp();
    }

    // Zero-point evanescent part: absolutely convergent, integrated over
    // expanding log panels until exhausted.
    {
        let q_ew = 0.5 / sys.geometry.d12.min(sys.geometry.d23);
        let slot = ErrSlot::new();
        let omega_hi = (10.0 * omega_cut).max(3e17);
        let mut lo = 0.0f64;
        let mut hi = omega_cut.min(1e13);
        let mut last_piece = 0.0f64;
        while lo < omega_hi {
            let b = hi.min(omega_hi);
            let piece_spec = QuadratureSpec {
                abs_tol: quad
                    .abs_tol
                    .max(0.1 * quad.rel_tol * 0.5 * HBAR * q_ew.powi(3) * (b - lo)),
                ..*quad
            };
            let est = integrate_finite(
                |omega| 0.5 * HBAR * realfreq_kernel_ew(sys, omega, quad, &slot),
                lo,
                b,
                &piece_spec,
            )
            .map_err(Error::from)?;
            value += prefactor * est.value;
            error += est.error.abs();
            last_piece = (prefactor * est.value).abs();
            lo = hi;
            hi *= 3.1622776601683795; // half-decade steps
        }
        slot.check()?;
        error += last_piece;
    }

    // Zero-point propagative part: only conditionally convergent. Sample in
    // windows of the half period of the slowest cavity round-trip tone and
    // contract the partial sums by iterated averaging.
    {
        let slot = ErrSlot::new();
        let window = PI * C / (2.0 * sys.geometry.d12);
        let n_seg = 72;
        let mut segs = Vec::with_capacity(n_seg);
        let mut seg_errs = Vec::with_capacity(n_seg);
        let mut abs_floor = 0.0f64;
        for j in 0..n_seg {
            let a = j as f64 * window;
            let b = a + window;
            let seg_spec = QuadratureSpec {
                abs_tol: abs_floor,
                ..*quad
            };
            let est = integrate_finite(
                |omega| 0.5 * HBAR * realfreq_kernel_pw(sys, omega, quad, &slot),
                a,
                b,
                &seg_spec,
            )
            .map_err(Error::from)?;
            abs_floor = abs_floor.max(quad.rel_tol * 0.1 * est.value.abs());
            segs.push(est.value);
            seg_errs.push(est.error);
        }
        slot.check()?;
        let tail = averaged_segment_sum(&segs, &seg_errs);
        value += prefactor * tail.value;
        error += tail.error.abs();
    }

    Ok(Estimate { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::CavityGeometry;
    use crate::slab::Temperatures;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn system(materials: [MaterialModel; 3], g: CavityGeometry) -> ThreeSlabSystem {
        ThreeSlabSystem::new(materials, g, Temperatures::uniform(300.0)).unwrap()
    }

    #[test]
    fn vacuum_slabs_feel_nothing() {
        let sys = system(
            [
                MaterialModel::vacuum(),
                MaterialModel::vacuum(),
                MaterialModel::vacuum(),
            ],
            CavityGeometry::new(1e-6, 1e-6, 1e-6, 1e-6, 1e-6).unwrap(),
        );
        assert_eq!(pressure_eq_slab1(&sys, 300.0, &quad()).unwrap(), 0.0);
        assert_eq!(pressure_eq_slab2(&sys, 300.0, &quad()).unwrap(), 0.0);
        let rf = pressure_eq_slab1_realfreq(&sys, 300.0, &quad()).unwrap();
        assert_eq!(rf.value, 0.0);
    }

    #[test]
    fn symmetric_system_has_no_net_pressure_on_the_middle_slab() {
        let sys = system(
            [
                MaterialModel::sic(),
                MaterialModel::sic(),
                MaterialModel::sic(),
            ],
            CavityGeometry::new(2e-6, 1e-6, 2e-6, 1.5e-6, 1.5e-6).unwrap(),
        );
        let p2 = pressure_eq_slab2(&sys, 300.0, &quad()).unwrap();
        let p1 = pressure_eq_slab1(&sys, 300.0, &quad()).unwrap();
        assert!(p1 < 0.0, "outer slab should be attracted inward, got {p1:e}");
        assert!(p2.abs() < 1e-9 * p1.abs(), "P2 = {p2:e} vs P1 = {p1:e}");
    }

    #[test]
    fn three_body_reduces_to_two_body_when_the_middle_slab_is_vacuum() {
        let g = CavityGeometry::new(1e-6, 0.5e-6, 2e-6, 1e-6, 1.5e-6).unwrap();
        let sys = system(
            [
                MaterialModel::sic(),
                MaterialModel::vacuum(),
                MaterialModel::sic(),
            ],
            g,
        );
        let p1 = pressure_eq_slab1(&sys, 300.0, &quad()).unwrap();
        let p2b = pressure_two_body(
            &MaterialModel::sic(),
            &MaterialModel::sic(),
            g.delta1,
            g.delta3,
            g.span(),
            300.0,
            &quad(),
        )
        .unwrap();
        assert!(
            (p1 - p2b).abs() <= 1e-5 * p2b.abs(),
            "three-body {p1:e} vs pair {p2b:e}"
        );
        // The pair-sum estimate collapses onto the same value: the slab-2
        // pair term vanishes for a vacuum middle.
        let add = additive_pressure_slab1(&sys, 300.0, &quad()).unwrap();
        assert!((add - p2b).abs() <= 1e-5 * p2b.abs());
    }

    #[test]
    fn pair_pressure_dies_off_with_gap() {
        let m = MaterialModel::Constant(Complex64::new(100.0, 0.0));
        let near = pressure_two_body(&m, &m, 1e-6, 1e-6, 1e-7, 300.0, &quad()).unwrap();
        let far = pressure_two_body(&m, &m, 1e-6, 1e-6, 1e-3, 300.0, &quad()).unwrap();
        assert!(near < 0.0);
        assert!(far.abs() < 1e-9 * near.abs(), "far={far:e}, near={near:e}");
    }
}
