// Scratch numerical probe; removed before release.
use num_complex::Complex64;
use tricav_core::cavity::{compose, CavityGeometry};
use tricav_core::materials::{eps_real_axis, MaterialModel};
use tricav_core::scattering::{slab_amplitudes, Mode, Polarization};

fn main() {
    let g = CavityGeometry::new(5e-6, 1e-6, 5e-6, 1.5e-6, 3.5e-6).unwrap();
    let sic = MaterialModel::sic();
    let mut worst = (0.0f64, 0.0, 0.0, Polarization::Te);
    let mut worst_rel = 0.0f64;
    for i in 0..200 {
        let omega = 1e12 * (1.83e15f64 / 1e12).powf(i as f64 / 199.0);
        let eps = eps_real_axis(&sic, omega).unwrap();
        for j in 0..200 {
            let k = 1e2 * (1e9f64 / 1e2).powf(j as f64 / 199.0);
            for pol in [Polarization::Te, Polarization::Tm] {
                let mode = Mode::real_axis(omega, k, pol);
                let a1 = slab_amplitudes(&mode, eps, g.delta1).unwrap();
                let a2 = slab_amplitudes(&mode, eps, g.delta2).unwrap();
                let a3 = slab_amplitudes(&mode, eps, g.delta3).unwrap();
                let kz = mode.kz();
                let s = match compose(kz, [&a1, &a2, &a3], &g) {
                    Ok(s) => s,
                    Err(e) => {
                        println!("compose error at omega={omega:e} k={k:e} {pol:?}: {e}");
                        continue;
                    }
                };
                let alt = s.tau123_alt(a1.tau);
                let scale = s.tau123.norm().max(alt.norm());
                if scale > 0.0 {
                    let rel = (s.tau123 - alt).norm() / scale;
                    if rel > worst_rel {
                        worst_rel = rel;
                        worst = (omega, k, scale, pol);
                        if rel > 1e-12 {
                            println!(
                                "mismatch rel={rel:e} scale={scale:e} omega={omega:e} k={k:e} {pol:?}"
                            );
                            println!(
                                "  tau123={:?} alt={:?} tau12={:?} tau23={:?} u12_3={:?} u1_23={:?} t1={:?} t2={:?} t3={:?}",
                                s.tau123, alt, s.tau12, s.tau23, s.u12_3, s.u1_23, a1.tau, a2.tau, a3.tau
                            );
                        }
                    }
                }
            }
        }
    }
    println!("worst rel = {worst_rel:e} at {worst:?}");
}
