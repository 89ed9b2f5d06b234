//! Parameter sweeps over one axis, evaluated on a worker pool.
//!
//! Every grid point is a pure function of its configuration. Records are
//! collected in grid order, so the output is independent of the worker count.

use std::collections::{BTreeMap, BTreeSet};

use magwalk_core::estimation::{crb_rmse_omega, fi_omega_to_fi_field};
use magwalk_core::statistics::{moments, variance_difference};
use magwalk_core::{
    evolve_with_derivative, FieldSpec, FisherReport, LinearGrid, PhysicalConstants, SphereGrid, WalkConfig,
};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Flat key to value map; all records of one sweep share the same keys.
pub type SweepRecord = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    Omega(LinearGrid),
    Theta(LinearGrid),
    /// Field direction over the sphere at the base `ω`.
    Sphere(SphereGrid),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observable {
    PositionPd,
    Moments,
    DeltaVariance,
    Qfi,
    PositionFi,
    SpinFi,
    Ratios,
    /// Single-shot Cramér-Rao RMSE in `ω` and in tesla, per measurement.
    Rmse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: WalkConfig,
    pub axis: SweepAxis,
    pub observables: BTreeSet<Observable>,
    /// Repetitions `M` used by [`Observable::Rmse`].
    pub measurements: u64,
    pub constants: PhysicalConstants,
}

struct Point {
    cfg: WalkConfig,
    extra: Vec<(&'static str, f64)>,
}

impl SweepSpec {
    pub fn new(base: WalkConfig, axis: SweepAxis, observables: impl IntoIterator<Item = Observable>) -> Self {
        Self {
            base,
            axis,
            observables: observables.into_iter().collect(),
            measurements: 1,
            constants: PhysicalConstants::electron(),
        }
    }

    pub fn with_measurements(self, measurements: u64) -> Self {
        Self { measurements, ..self }
    }

    pub fn with_constants(self, constants: PhysicalConstants) -> Self {
        Self { constants, ..self }
    }

    /// Number of grid points, hence of records.
    pub fn len(&self) -> usize {
        match &self.axis {
            SweepAxis::Omega(g) | SweepAxis::Theta(g) => g.len(),
            SweepAxis::Sphere(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn points(&self) -> Vec<Point> {
        let base = self.base;
        match &self.axis {
            SweepAxis::Omega(g) => g.points().map(|w| Point { cfg: base.with_omega(w), extra: Vec::new() }).collect(),
            SweepAxis::Theta(g) => g.points().map(|th| Point { cfg: base.with_theta(th), extra: Vec::new() }).collect(),
            SweepAxis::Sphere(g) => g
                .directions()
                .into_iter()
                .map(|d| Point {
                    cfg: base.with_field(FieldSpec::new(base.field.omega, d.direction)),
                    extra: vec![("polar_index", d.polar_index as f64), ("azimuth_index", d.azimuth_index as f64)],
                })
                .collect(),
        }
    }

    fn needs_derivative(&self) -> bool {
        use Observable::*;
        self.observables.iter().any(|o| matches!(o, Qfi | PositionFi | SpinFi | Ratios | Rmse))
    }

    fn evaluate(&self, index: usize, point: &Point) -> Result<SweepRecord> {
        let cfg = &point.cfg;
        let mut rec = SweepRecord::new();
        let mut put = |k: &str, v: f64| {
            rec.insert(k.to_owned(), v);
        };
        let [nx, ny, nz] = cfg.field.direction.components();
        put("index", index as f64);
        put("theta", cfg.theta);
        put("omega", cfg.field.omega);
        put("nx", nx);
        put("ny", ny);
        put("nz", nz);
        put("steps", cfg.steps as f64);
        put("half_width", cfg.lattice.half_width() as f64);
        for &(k, v) in &point.extra {
            put(k, v);
        }

        let (state, report) = if self.needs_derivative() {
            let pair = evolve_with_derivative(cfg)?;
            let report = FisherReport::from_pair(cfg.field.omega, &pair);
            (pair.state, Some(report))
        } else {
            (magwalk_core::evolve(cfg)?, None)
        };
        let pd = state.position_marginal();

        for obs in &self.observables {
            match obs {
                Observable::PositionPd => {
                    for (i, p) in pd.probabilities().as_slice().iter().enumerate() {
                        put(&format!("pd_{i:05}"), *p);
                    }
                }
                Observable::Moments => {
                    let m = moments(&pd);
                    put("mean", m.mean);
                    put("variance", m.variance);
                    put("skewness", m.skewness);
                }
                Observable::DeltaVariance => put("delta_variance", variance_difference(cfg)?),
                Observable::Qfi => put("qfi", report.expect("derivative evaluated").qfi),
                Observable::PositionFi => put("position_fi", report.expect("derivative evaluated").position_fi),
                Observable::SpinFi => put("spin_fi", report.expect("derivative evaluated").spin_fi),
                Observable::Ratios => {
                    let r = report.expect("derivative evaluated");
                    put("ratio_position", r.ratio_position);
                    put("ratio_spin", r.ratio_spin);
                }
                Observable::Rmse => {
                    let r = report.expect("derivative evaluated");
                    for (name, fi) in [("position", r.position_fi), ("spin", r.spin_fi), ("qfi", r.qfi)] {
                        let omega = rmse_or_inf(fi, self.measurements);
                        let field = rmse_or_inf(fi_omega_to_fi_field(fi, &self.constants), self.measurements);
                        put(&format!("rmse_{name}_omega"), omega);
                        put(&format!("rmse_{name}_tesla"), field);
                    }
                }
            }
        }
        Ok(rec)
    }
}

fn rmse_or_inf(fi: f64, measurements: u64) -> f64 {
    crb_rmse_omega(fi, measurements).unwrap_or(f64::INFINITY)
}

/// Validates every grid point, then evaluates them on `workers` threads
/// (0 means one per available core). Records come back in grid order.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRecord>> {
    let points = spec.points();
    for (index, p) in points.iter().enumerate() {
        p.cfg.validate().map_err(|source| Error::InvalidPoint { index, source })?;
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    pool.install(|| {
        points.par_iter().enumerate().map(|(i, p)| spec.evaluate(i, p).map_err(|e| point_error(i, e))).collect()
    })
}

fn point_error(index: usize, e: Error) -> Error {
    match e {
        Error::Walk(source) => Error::InvalidPoint { index, source },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use magwalk_core::{Direction, LatticeSpec, SpinVector};
    use std::f64::consts::PI;

    fn base() -> WalkConfig {
        WalkConfig::new(0.3, FieldSpec::new(0.0, Direction::X), SpinVector::plus(), 10, LatticeSpec::bounded(10))
            .unwrap()
    }

    #[test]
    fn two_point_moments_sweep() {
        let spec =
            SweepSpec::new(base(), SweepAxis::Omega(LinearGrid::new(0.0, PI, 2).unwrap()), [Observable::Moments]);
        let recs = run_sweep(&spec, 1).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1]["omega"], PI);
        assert!(recs.iter().all(|r| r.contains_key("variance")));
        assert_eq!(recs[0].keys().collect::<Vec<_>>(), recs[1].keys().collect::<Vec<_>>());
    }

    #[test]
    fn sphere_records_carry_indices() {
        let spec = SweepSpec::new(
            base().with_omega(0.4),
            SweepAxis::Sphere(SphereGrid::new(3, 4).unwrap()),
            [Observable::DeltaVariance],
        );
        let recs = run_sweep(&spec, 2).unwrap();
        assert_eq!(recs.len(), 6);
        assert_eq!(recs[5]["polar_index"], 2.0);
        assert_eq!(recs[3]["azimuth_index"], 2.0);
    }

    #[test]
    fn zero_information_gives_infinite_rmse() {
        let spec = SweepSpec::new(
            base().with_steps(0),
            SweepAxis::Omega(LinearGrid::new(0.0, 1.0, 2).unwrap()),
            [Observable::Rmse, Observable::Qfi],
        );
        let recs = run_sweep(&spec, 1).unwrap();
        assert_eq!(recs[0]["qfi"], 0.0);
        assert_eq!(recs[0]["rmse_qfi_omega"], f64::INFINITY);
        assert_eq!(recs[0]["rmse_spin_tesla"], f64::INFINITY);
    }

    #[test]
    fn rmse_follows_the_bound() {
        let spec = SweepSpec::new(
            base(),
            SweepAxis::Omega(LinearGrid::new(0.1, 0.2, 2).unwrap()),
            [Observable::Rmse, Observable::Qfi],
        )
        .with_measurements(4);
        let r = &run_sweep(&spec, 1).unwrap()[0];
        assert!((r["rmse_qfi_omega"] - 1.0 / (4.0 * r["qfi"]).sqrt()).abs() < 1e-15);
    }
}
