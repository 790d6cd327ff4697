//! Higher-level solvers and sweeps: the self-consistent temperature of the
//! intermediate slab, non-additivity measures and their maxima over the
//! gap plane, and a generic parameter-sweep engine.

use rayon::prelude::*;

use crate::error::{Error, NumericsError, Result};
use crate::numerics::{bisect, QuadratureSpec};
use crate::slab::{
    additive_pressure_slab1, delta_slab2, observables, pressure_eq_slab1, FluxKind,
    ThreeSlabSystem,
};

/// Temperature of slab 2 at which the net radiative flux on it vanishes,
/// given `T1`, `T3`, and `Te` [K].
///
/// The default bracket spans the extreme fixed temperatures widened by 1 K.
/// Monotonicity of the flux in `T2` is verified on five interior samples
/// before bisection; a zero is guaranteed to exist inside the bracket but
/// its uniqueness is not, so it is checked rather than assumed.
pub fn equilibrium_temperature(
    sys: &ThreeSlabSystem,
    bracket: Option<(f64, f64)>,
    tol: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let t = &sys.temperatures;
    let (lo, hi) = bracket.unwrap_or_else(|| {
        let min = t.t1.min(t.t3).min(t.te);
        let max = t.t1.max(t.t3).max(t.te);
        (min - 1.0, max + 1.0)
    });
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::InvalidSystem(format!(
            "bad temperature bracket [{lo}, {hi}]"
        )));
    }

    let flux_at = |t2: f64| -> Result<f64> {
        let mut s = sys.clone();
        s.temperatures.t2 = t2;
        Ok(delta_slab2(&s, FluxKind::Heat, quad)?.0)
    };

    // Five interior samples certify a monotone flux.
    let mut samples = Vec::with_capacity(5);
    for i in 1..=5 {
        let t2 = lo + (hi - lo) * i as f64 / 6.0;
        samples.push(flux_at(t2)?);
    }
    let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for w in samples.windows(2) {
        if w[1] > w[0] + 1e-6 * scale {
            return Err(Error::NonMonotoneFlux);
        }
    }

    let slot = crate::slab::eq::ErrSlot::new();
    let root = bisect(
        |t2| slot.capture(flux_at(t2)),
        lo,
        hi,
        tol,
    );
    slot.check()?;
    match root {
        Ok(r) => Ok(r),
        Err(NumericsError::NoBracket { lo, hi, flo, fhi }) => Err(Error::Numerics(
            NumericsError::NoBracket { lo, hi, flo, fhi },
        )),
        Err(e) => Err(Error::Numerics(e)),
    }
}

/// Relative non-additivity of the equilibrium pressure on slab 1:
/// `(P_additive - P_exact) / P_exact` at temperature `t`.
pub fn nonadditivity(sys: &ThreeSlabSystem, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    let exact = pressure_eq_slab1(sys, t, quad)?;
    let additive = additive_pressure_slab1(sys, t, quad)?;
    if exact.abs() < 1e-300 {
        return Err(Error::DegenerateDenominator(format!(
            "three-body pressure is {exact:e} Pa"
        )));
    }
    Ok((additive - exact) / exact)
}

/// Location and value of the largest non-additivity over the gap plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonadditivityMax {
    pub d12: f64,
    pub d23: f64,
    pub delta_p: f64,
    /// Set when the coarse-scan maximum sits on the search-domain edge.
    pub on_boundary: bool,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Golden-section maximization of a smooth single-peak function.
fn golden_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        }
    }
    if f1 > f2 {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

/// Scan the `(d12, d23)` plane for the largest non-additivity at slab-2
/// thickness `delta2`, then refine each axis by golden-section search.
///
/// The scan grid is logarithmic over `domain` with `grid_per_axis` points
/// per axis; the result is deterministic for fixed inputs.
pub fn nonadditivity_max(
    sys: &ThreeSlabSystem,
    delta2: f64,
    domain: (f64, f64),
    grid_per_axis: usize,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<NonadditivityMax> {
    let (lo, hi) = domain;
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::InvalidSystem(format!(
            "bad search domain [{lo:e}, {hi:e}]"
        )));
    }
    let n = grid_per_axis.max(4);
    let grid = log_grid(lo, hi, n);

    let eval = |d12: f64, d23: f64| -> Result<f64> {
        let mut s = sys.clone();
        s.geometry.delta2 = delta2;
        s.geometry.d12 = d12;
        s.geometry.d23 = d23;
        nonadditivity(&s, t, quad)
    };

    // Coarse scan, parallel over rows, assembled in index order.
    let values: Vec<Vec<Result<f64>>> = grid
        .par_iter()
        .map(|&d12| grid.iter().map(|&d23| eval(d12, d23)).collect())
        .collect();
    let mut best = (0usize, 0usize, f64::NEG_INFINITY);
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            match v {
                Ok(v) => {
                    if *v > best.2 {
                        best = (i, j, *v);
                    }
                }
                Err(e) => {
                    return Err(e.clone().context(format!(
                        "non-additivity at d12={:e}, d23={:e}",
                        grid[i], grid[j]
                    )))
                }
            }
        }
    }
    let (bi, bj, _) = best;
    let on_boundary = bi == 0 || bj == 0 || bi == n - 1 || bj == n - 1;

    // Local refinement inside the neighboring cells, one axis at a time.
    let mut d12 = grid[bi];
    let mut d23 = grid[bj];
    let mut value = best.2;
    for _ in 0..2 {
        let a = grid[bi.saturating_sub(1)];
        let b = grid[(bi + 1).min(n - 1)];
        if b > a {
            let (x, v) = golden_max(|d| eval(d, d23), a, b, 12)?;
            if v > value {
                d12 = x;
                value = v;
            }
        }
        let a = grid[bj.saturating_sub(1)];
        let b = grid[(bj + 1).min(n - 1)];
        if b > a {
            let (x, v) = golden_max(|d| eval(d12, d), a, b, 12)?;
            if v > value {
                d23 = x;
                value = v;
            }
        }
    }

    Ok(NonadditivityMax {
        d12,
        d23,
        delta_p: value,
        on_boundary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Logarithmic,
}

/// A one-dimensional sweep grid; `lo > hi` produces a descending sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub scale: GridScale,
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::InvalidSystem("grid count must be >= 2".into()));
        }
        if self.scale == GridScale::Logarithmic && (self.lo <= 0.0 || self.hi <= 0.0) {
            return Err(Error::InvalidSystem(
                "logarithmic grid bounds must be positive".into(),
            ));
        }
        // Integer-symmetric interpolation: reversing lo and hi yields the
        // bit-identical points in reverse order, and the endpoints are hit
        // exactly.
        let n = self.count;
        let last = (n - 1) as f64;
        Ok((0..n)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == n - 1 {
                    return self.hi;
                }
                let (wa, wb) = ((n - 1 - i) as f64, i as f64);
                match self.scale {
                    GridScale::Linear => (self.lo * wa + self.hi * wb) / last,
                    GridScale::Logarithmic => {
                        ((self.lo.ln() * wa + self.hi.ln() * wb) / last).exp()
                    }
                }
            })
            .collect())
    }
}

/// Which field of the system a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    D12,
    D23,
    Delta1,
    Delta2,
    Delta3,
    T1,
    T2,
    T3,
    Te,
    /// Offset of the slab-2 center from the cavity center, at fixed span.
    Slab2Center,
    /// `d12`, with `d23` adjusted to keep the slab 1 - slab 3 span fixed.
    D12FixedSpan,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::D12 => "d12_m",
            SweepParameter::D23 => "d23_m",
            SweepParameter::Delta1 => "delta1_m",
            SweepParameter::Delta2 => "delta2_m",
            SweepParameter::Delta3 => "delta3_m",
            SweepParameter::T1 => "T1_K",
            SweepParameter::T2 => "T2_K",
            SweepParameter::T3 => "T3_K",
            SweepParameter::Te => "Te_K",
            SweepParameter::Slab2Center => "z2_m",
            SweepParameter::D12FixedSpan => "d12_m",
        }
    }

    pub fn apply(&self, sys: &ThreeSlabSystem, value: f64) -> Result<ThreeSlabSystem> {
        let mut s = sys.clone();
        match self {
            SweepParameter::D12 => s.geometry.d12 = value,
            SweepParameter::D23 => s.geometry.d23 = value,
            SweepParameter::Delta1 => s.geometry.delta1 = value,
            SweepParameter::Delta2 => s.geometry.delta2 = value,
            SweepParameter::Delta3 => s.geometry.delta3 = value,
            SweepParameter::T1 => s.temperatures.t1 = value,
            SweepParameter::T2 => s.temperatures.t2 = value,
            SweepParameter::T3 => s.temperatures.t3 = value,
            SweepParameter::Te => s.temperatures.te = value,
            SweepParameter::Slab2Center => return sys.with_slab2_center(value),
            SweepParameter::D12FixedSpan => {
                let span = sys.geometry.span();
                let d23 = span - sys.geometry.delta2 - value;
                if d23 <= 0.0 {
                    return Err(Error::InvalidSystem(format!(
                        "d12 = {value:e} exceeds the fixed span {span:e}"
                    )));
                }
                s.geometry.d12 = value;
                s.geometry.d23 = d23;
            }
        }
        s.geometry.validate().map_err(Error::from)?;
        s.temperatures.validate()?;
        Ok(s)
    }
}

/// What a sweep records at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepObservable {
    /// Exact three-body equilibrium pressure on slab 1 at temperature `t`.
    PressureEqSlab1 { t: f64 },
    /// Exact and pairwise-additive slab-1 pressures side by side.
    PressureWithAdditive { t: f64 },
    /// Relative non-additivity at temperature `t`.
    NonAdditivity { t: f64 },
    /// Self-consistent slab-2 temperature, to tolerance `tol` [K].
    EquilibriumT2 { tol: f64 },
    /// Heat fluxes and total pressures on all three slabs.
    Observables,
}

impl SweepObservable {
    pub fn columns(&self) -> Vec<&'static str> {
        match self {
            SweepObservable::PressureEqSlab1 { .. } => vec!["P1_eq_Pa"],
            SweepObservable::PressureWithAdditive { .. } => {
                vec!["P1_eq_Pa", "P1_additive_Pa"]
            }
            SweepObservable::NonAdditivity { .. } => vec!["deltaP"],
            SweepObservable::EquilibriumT2 { .. } => vec!["T2_eq_K"],
            SweepObservable::Observables => vec![
                "H1_W_per_m2",
                "H2_W_per_m2",
                "H3_W_per_m2",
                "P1_Pa",
                "P2_Pa",
                "P3_Pa",
            ],
        }
    }

    pub fn evaluate(&self, sys: &ThreeSlabSystem, quad: &QuadratureSpec) -> Result<Vec<f64>> {
        match self {
            SweepObservable::PressureEqSlab1 { t } => {
                Ok(vec![pressure_eq_slab1(sys, *t, quad)?])
            }
            SweepObservable::PressureWithAdditive { t } => Ok(vec![
                pressure_eq_slab1(sys, *t, quad)?,
                additive_pressure_slab1(sys, *t, quad)?,
            ]),
            SweepObservable::NonAdditivity { t } => Ok(vec![nonadditivity(sys, *t, quad)?]),
            SweepObservable::EquilibriumT2 { tol } => {
                Ok(vec![equilibrium_temperature(sys, None, *tol, quad)?])
            }
            SweepObservable::Observables => {
                let obs = observables(sys, quad)?;
                Ok(obs.heat.iter().chain(obs.pressure.iter()).copied().collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub grid: Grid,
    pub observable: SweepObservable,
}

/// One sweep row: the parameter value and either the observable columns or
/// the failure message for that point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub parameter: f64,
    pub values: std::result::Result<Vec<f64>, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter_name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

/// Evaluate an observable over a parameter grid. Points evaluate in
/// parallel but rows are emitted in grid order; per-point failures are
/// recorded in their row and do not abort the sweep.
pub fn sweep(spec: &SweepSpec, sys: &ThreeSlabSystem, quad: &QuadratureSpec) -> Result<SweepTable> {
    let points = spec.grid.points()?;
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&v| {
            let values = spec
                .parameter
                .apply(sys, v)
                .and_then(|s| spec.observable.evaluate(&s, quad))
                .map_err(|e| e.to_string());
            SweepRow {
                parameter: v,
                values,
            }
        })
        .collect();
    Ok(SweepTable {
        parameter_name: spec.parameter.name(),
        columns: spec.observable.columns(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::CavityGeometry;
    use crate::materials::MaterialModel;
    use crate::slab::Temperatures;

    fn sic_system() -> ThreeSlabSystem {
        ThreeSlabSystem::new(
            [
                MaterialModel::sic(),
                MaterialModel::sic(),
                MaterialModel::sic(),
            ],
            CavityGeometry::new(1e-6, 0.5e-6, 1e-6, 2e-6, 2e-6).unwrap(),
            Temperatures::uniform(300.0),
        )
        .unwrap()
    }

    #[test]
    fn uniform_temperatures_give_back_the_common_temperature() {
        let quad = QuadratureSpec::with_rel_tol(1e-4);
        let t2 = equilibrium_temperature(&sic_system(), None, 0.05, &quad).unwrap();
        assert!((t2 - 300.0).abs() < 0.1, "T2* = {t2}");
    }

    #[test]
    fn vacuum_middle_slab_is_additive() {
        let mut sys = sic_system();
        sys.materials[1] = MaterialModel::vacuum();
        sys.geometry.delta2 = 0.0;
        let dp = nonadditivity(&sys, 300.0, &QuadratureSpec::default()).unwrap();
        assert!(dp.abs() < 1e-4, "deltaP = {dp:e}");
    }

    #[test]
    fn single_point_sweep_equals_direct_call() {
        let sys = sic_system();
        let quad = QuadratureSpec::default();
        let spec = SweepSpec {
            parameter: SweepParameter::D12,
            grid: Grid {
                lo: 1.5e-6,
                hi: 2.5e-6,
                count: 2,
                scale: GridScale::Linear,
            },
            observable: SweepObservable::PressureEqSlab1 { t: 300.0 },
        };
        let table = sweep(&spec, &sys, &quad).unwrap();
        assert_eq!(table.rows.len(), 2);
        let direct = pressure_eq_slab1(
            &SweepParameter::D12.apply(&sys, 1.5e-6).unwrap(),
            300.0,
            &quad,
        )
        .unwrap();
        assert_eq!(table.rows[0].values.as_ref().unwrap()[0], direct);
    }

    #[test]
    fn reversed_grid_reverses_rows_and_sweeps_are_reproducible() {
        let sys = sic_system();
        let quad = QuadratureSpec::with_rel_tol(1e-4);
        let fwd = SweepSpec {
            parameter: SweepParameter::D12,
            grid: Grid {
                lo: 1e-6,
                hi: 3e-6,
                count: 4,
                scale: GridScale::Linear,
            },
            observable: SweepObservable::PressureEqSlab1 { t: 300.0 },
        };
        let mut rev = fwd.clone();
        rev.grid = Grid {
            lo: 3e-6,
            hi: 1e-6,
            count: 4,
            scale: GridScale::Linear,
        };
        let a = sweep(&fwd, &sys, &quad).unwrap();
        let b = sweep(&rev, &sys, &quad).unwrap();
        for (ra, rb) in a.rows.iter().zip(b.rows.iter().rev()) {
            assert_eq!(ra.parameter, rb.parameter);
            assert_eq!(ra.values, rb.values);
        }
        let again = sweep(&fwd, &sys, &quad).unwrap();
        assert_eq!(a, again, "sweeps must be bit-identical across runs");
    }

    #[test]
    fn per_point_failures_do_not_abort_the_sweep() {
        let sys = sic_system();
        let quad = QuadratureSpec::default();
        // d12 beyond the span makes D12FixedSpan fail on the last point.
        let spec = SweepSpec {
            parameter: SweepParameter::D12FixedSpan,
            grid: Grid {
                lo: 1e-6,
                hi: 5e-6,
                count: 3,
                scale: GridScale::Linear,
            },
            observable: SweepObservable::PressureEqSlab1 { t: 300.0 },
        };
        let table = sweep(&spec, &sys, &quad).unwrap();
        assert!(table.rows[0].values.is_ok());
        assert!(table.rows[2].values.is_err());
    }
}
