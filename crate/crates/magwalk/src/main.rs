use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use magwalk_core::estimation::{crb_rmse_omega, fi_omega_to_fi_field, omega_to_tesla};
use magwalk_core::oracle::fold_check;
use magwalk_core::statistics::moments;
use magwalk_core::{evolve, WalkConfig};

use magwalk::config::{AngleValue, AxisName, BoundaryName, RunOptions};
use magwalk::export::render;
use magwalk::{run_sweep, Format, Observable, SweepAxis, SweepRecord, SweepSpec};

#[derive(Parser)]
#[command(name = "magwalk", version, about = "Quantum walk magnetometry simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve once and print the position distribution.
    Walk(Common),
    /// Moments and Δσ² along ω or θ.
    VarianceSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Option<AxisName>,
    },
    /// Δσ² over field directions on the sphere.
    SphereScan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        polar_count: Option<usize>,
        #[arg(long)]
        azimuth_count: Option<usize>,
    },
    /// QFI, position and spin Fisher information and their ratios along ω.
    FisherSweep(Common),
    /// Cramér-Rao RMSE in ω and in tesla.
    Rmse {
        #[command(flatten)]
        common: Common,
        /// Repetitions of the measurement.
        #[arg(long)]
        measurements: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        g_factor: Option<f64>,
        /// Use this Fisher information instead of maximizing over the grid.
        #[arg(long)]
        fisher: Option<f64>,
    },
    /// Compare a bounded walk with the folded unbounded one.
    FoldCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// Coin angle, radians or a multiple of pi such as 3pi/8.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Field strength ω, same syntax as --theta.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// x|y|z|-x|-y|-z or nx,ny,nz.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    /// plus|zero|one or two complex amplitudes a,b.
    #[arg(long, allow_hyphen_values = true)]
    spin: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    half_width: Option<usize>,
    #[arg(long, conflicts_with = "unbounded")]
    bounded: bool,
    #[arg(long)]
    unbounded: bool,
    /// start:stop:count
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn options(&self, extra: RunOptions) -> anyhow::Result<RunOptions> {
        let boundary = match (self.bounded, self.unbounded) {
            (true, _) => Some(BoundaryName::Bounded),
            (_, true) => Some(BoundaryName::Unbounded),
            _ => None,
        };
        let flags = RunOptions {
            theta: self.theta.clone().map(AngleValue::Text),
            omega: self.omega.clone().map(AngleValue::Text),
            direction: self.direction.clone(),
            spin: self.spin.clone(),
            steps: self.steps,
            half_width: self.half_width,
            boundary,
            grid: self.grid.clone(),
            format: self.format,
            workers: self.workers,
            ..extra
        };
        Ok(match &self.config {
            Some(path) => flags.or(RunOptions::load(path)?),
            None => flags,
        })
    }
}

fn emit(records: &[SweepRecord], common: &Common, opts: &RunOptions) -> anyhow::Result<()> {
    let text = render(records, opts.format.unwrap_or_default())?;
    match &common.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn record(pairs: impl IntoIterator<Item = (&'static str, f64)>) -> SweepRecord {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

fn walk(common: &Common) -> anyhow::Result<()> {
    let opts = common.options(RunOptions::default())?;
    let cfg = opts.resolve_walk()?;
    let pd = evolve(&cfg)?.position_marginal();
    let m = moments(&pd);
    eprintln!("mean {:.6} variance {:.6} skewness {:.6}", m.mean, m.variance, m.skewness);
    let records: Vec<_> = pd.iter().map(|(x, p)| record([("site", x as f64), ("probability", p)])).collect();
    emit(&records, common, &opts)
}

fn sweep(common: &Common, opts: &RunOptions, spec: SweepSpec) -> anyhow::Result<Vec<SweepRecord>> {
    let records = run_sweep(&spec, opts.resolve_workers())?;
    emit(&records, common, opts)?;
    Ok(records)
}

fn peak(records: &[SweepRecord], key: &str) -> (f64, f64) {
    records
        .iter()
        .map(|r| (r[key], r["omega"]))
        .fold((f64::NEG_INFINITY, 0.0), |best, x| if x.0 > best.0 { x } else { best })
}

fn fisher_spec(cfg: WalkConfig, opts: &RunOptions) -> anyhow::Result<SweepSpec> {
    use Observable::*;
    Ok(SweepSpec::new(cfg, SweepAxis::Omega(opts.resolve_grid("0:pi:629")?), [Qfi, PositionFi, SpinFi, Ratios]))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Walk(common) => walk(common),
        Command::VarianceSweep { common, axis } => {
            let opts = common.options(RunOptions { axis: *axis, ..Default::default() })?;
            let cfg = opts.resolve_walk()?;
            let grid = opts.resolve_grid("0:pi:101")?;
            let axis = match opts.axis.unwrap_or(AxisName::Omega) {
                AxisName::Omega => SweepAxis::Omega(grid),
                AxisName::Theta => SweepAxis::Theta(grid),
            };
            let spec = SweepSpec::new(cfg, axis, [Observable::Moments, Observable::DeltaVariance]);
            sweep(common, &opts, spec).map(drop)
        }
        Command::SphereScan { common, polar_count, azimuth_count } => {
            let opts = common.options(RunOptions {
                polar_count: *polar_count,
                azimuth_count: *azimuth_count,
                ..Default::default()
            })?;
            let spec = SweepSpec::new(
                opts.resolve_walk()?,
                SweepAxis::Sphere(opts.resolve_sphere()?),
                [Observable::DeltaVariance],
            );
            let records = sweep(common, &opts, spec)?;
            // same tie rule as sphere_argmax: within 1e-9 relative, lowest index wins
            let max = records.iter().map(|r| r["delta_variance"]).fold(f64::NEG_INFINITY, f64::max);
            let cut = max - 1e-9 * max.abs().max(1.0);
            let best = records.iter().find(|r| r["delta_variance"] >= cut).expect("non-empty grid");
            eprintln!(
                "largest delta_variance {:.6} at n = ({:.6}, {:.6}, {:.6})",
                best["delta_variance"], best["nx"], best["ny"], best["nz"]
            );
            Ok(())
        }
        Command::FisherSweep(common) => {
            let opts = common.options(RunOptions::default())?;
            let records = sweep(common, &opts, fisher_spec(opts.resolve_walk()?, &opts)?)?;
            for key in ["qfi", "position_fi", "spin_fi"] {
                let (v, w) = peak(&records, key);
                eprintln!("max {key} {v:.6} at omega {w:.6}");
            }
            Ok(())
        }
        Command::Rmse { common, measurements, g_factor, fisher } => {
            let opts = common.options(RunOptions {
                measurements: *measurements,
                g_factor: *g_factor,
                fisher: *fisher,
                ..Default::default()
            })?;
            let m = opts.measurements.unwrap_or(1);
            if m == 0 {
                bail!("--measurements must be positive");
            }
            let k = opts.resolve_constants();
            let rec = match opts.fisher {
                Some(f) => {
                    let d = crb_rmse_omega(f, m)?;
                    record([
                        ("fisher", f),
                        ("measurements", m as f64),
                        ("rmse_omega", d),
                        ("rmse_tesla", omega_to_tesla(d, &k)),
                    ])
                }
                None => {
                    let cfg = opts.resolve_walk()?;
                    let records = run_sweep(&fisher_spec(cfg, &opts)?, opts.resolve_workers())?;
                    let mut rec = record([("measurements", m as f64)]);
                    for (name, key) in [("position", "position_fi"), ("spin", "spin_fi"), ("qfi", "qfi")] {
                        let (fmax, w) = peak(&records, key);
                        let d = crb_rmse_omega(fmax, m).unwrap_or(f64::INFINITY);
                        let db = crb_rmse_omega(fi_omega_to_fi_field(fmax, &k), m).unwrap_or(f64::INFINITY);
                        rec.insert(format!("{name}_fi_max"), fmax);
                        rec.insert(format!("{name}_omega_at_max"), w);
                        rec.insert(format!("rmse_{name}_omega"), d);
                        rec.insert(format!("rmse_{name}_tesla"), db);
                    }
                    rec
                }
            };
            emit(&[rec], common, &opts)
        }
        Command::FoldCheck { common, tolerance } => {
            let opts = common.options(RunOptions { tolerance: *tolerance, ..Default::default() })?;
            let cfg = opts.resolve_walk()?;
            let report = fold_check(&cfg)?;
            let records: Vec<_> = report
                .site_pairs
                .iter()
                .map(|p| {
                    record([
                        ("unbounded_site", p.unbounded_site as f64),
                        ("bounded_site", p.bounded_site as f64),
                        ("p_unbounded", p.p_unbounded),
                        ("p_bounded", p.p_bounded),
                    ])
                })
                .collect();
            emit(&records, common, &opts)?;
            let tol = opts.tolerance.unwrap_or(1e-10);
            eprintln!("max abs error {:.3e} (tolerance {tol:.1e})", report.max_abs_error);
            if report.max_abs_error.is_nan() || report.max_abs_error > tol {
                bail!("fold identity violated: {:.3e} > {tol:.1e}", report.max_abs_error);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magwalk: {e:#}");
            ExitCode::FAILURE
        }
    }
}
