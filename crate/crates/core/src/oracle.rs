//! Independent cross-checks for the simulator.
//!
//! Nothing here takes part in producing the main observables. The finite
//! difference and fidelity routines only call [`evolve`], never the
//! derivative recursion they are meant to check, and [`reference_walk`] is a
//! separate field-free walk written without the operator module.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std float methods when std is in the build
use num_traits::Float;

use crate::error::{Error, Result};
use crate::evolution::{evolve, WalkConfig};
use crate::grid::LinearGrid;
use crate::operators::{Direction, FieldSpec};
use crate::statistics::moments;
use crate::walker::{LatticeSpec, PositionDistribution, ProbabilityVector, SpinVector};
use crate::C64;

/// One unbounded site and the bounded site it folds onto.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SitePair {
    pub unbounded_site: i64,
    pub bounded_site: i64,
    pub p_unbounded: f64,
    pub p_bounded: f64,
}

/// Comparison of a bounded walk's distribution with the folded unbounded one.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldReport {
    pub half_width: usize,
    pub max_abs_error: f64,
    pub site_pairs: Vec<SitePair>,
}

/// Mirror image of `x` about `±(a + ½)`; sites inside `[-a, a]` map to
/// themselves. `None` when one reflection does not bring `x` inside.
pub fn fold_site(x: i64, a: usize) -> Option<i64> {
    let a = a as i64;
    let y = if x > a {
        2 * a + 1 - x
    } else if x < -a {
        -2 * a - 1 - x
    } else {
        x
    };
    (-a..=a).contains(&y).then_some(y)
}

/// Folds an unbounded distribution back onto `[-a, a]`, so that
/// `p_B(a - (k - 1)) = p_∞(a + k)` for the tail sites.
///
/// Mass more than `2a + 1` sites past an edge cannot be reached by a single
/// fold and is rejected.
pub fn fold_unbounded(pd_inf: &PositionDistribution, a: usize) -> Result<PositionDistribution> {
    let mut folded = vec![0.0; 2 * a + 1];
    for (x, p) in pd_inf.iter() {
        match fold_site(x, a) {
            Some(y) => folded[(y + a as i64) as usize] += p,
            None if p != 0.0 => return Err(Error::FoldOutOfRange { site: x }),
            None => {}
        }
    }
    PositionDistribution::new(a, ProbabilityVector::from_raw(folded))
}

/// Per-site comparison of `bounded` against `fold_unbounded(unbounded)`.
pub fn fold_report(unbounded: &PositionDistribution, bounded: &PositionDistribution) -> Result<FoldReport> {
    let a = bounded.half_width();
    let folded = fold_unbounded(unbounded, a)?;
    let max_abs_error = folded.iter().map(|(x, p)| (p - bounded.at(x)).abs()).fold(0.0, f64::max);
    let site_pairs = unbounded
        .iter()
        .filter_map(|(x, p)| {
            fold_site(x, a).map(|y| SitePair {
                unbounded_site: x,
                bounded_site: y,
                p_unbounded: p,
                p_bounded: bounded.at(y),
            })
        })
        .collect();
    Ok(FoldReport { half_width: a, max_abs_error, site_pairs })
}

/// Runs `cfg` as given (bounded, half width `a`) and again unbounded on a
/// lattice of half width `T`, then compares the folded result.
pub fn fold_check(cfg: &WalkConfig) -> Result<FoldReport> {
    let bounded = evolve(&cfg.with_lattice(LatticeSpec::bounded(cfg.lattice.half_width())))?;
    let unbounded = evolve(&cfg.with_lattice(LatticeSpec::unbounded(cfg.steps.max(1))))?;
    fold_report(&unbounded.position_marginal(), &bounded.position_marginal())
}

/// Central difference `(Ψ(ω + h) - Ψ(ω - h)) / 2h`.
pub fn finite_diff_state(cfg: &WalkConfig, h: f64) -> Result<Vec<C64>> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::NonFinite("finite-difference step"));
    }
    let w = cfg.field.omega;
    let up = evolve(&cfg.with_omega(w + h))?;
    let dn = evolve(&cfg.with_omega(w - h))?;
    Ok(up.amplitudes().iter().zip(dn.amplitudes()).map(|(u, d)| (u - d) / (2.0 * h)).collect())
}

/// QFI from the fidelity expansion: `8 (1 - |⟨Ψ(ω)|Ψ(ω + h)⟩|) / h²`.
pub fn qfi_fidelity_fd(cfg: &WalkConfig, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::NonFinite("finite-difference step"));
    }
    let a = evolve(cfg)?;
    let b = evolve(&cfg.with_omega(cfg.field.omega + h))?;
    let overlap: C64 = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum();
    Ok(8.0 * (1.0 - overlap.norm()) / (h * h))
}

/// Position distribution of the field-free walk with coin
/// `[[cos θ, -i sin θ], [-i sin θ, cos θ]]` on the infinite line,
/// returned over `[-T, T]`.
pub fn reference_walk(theta: f64, spin0: C64, spin1: C64, steps: usize) -> PositionDistribution {
    let width = 2 * steps + 1;
    let (s, co) = (theta.sin(), theta.cos());
    let mi_s = C64::new(0.0, -s);
    // left[k], right[k]: amplitudes of |0⟩, |1⟩ at site k - T
    let mut left = vec![C64::new(0.0, 0.0); width + 2];
    let mut right = left.clone();
    left[steps + 1] = spin0;
    right[steps + 1] = spin1;
    for _ in 0..steps {
        let mut nl = vec![C64::new(0.0, 0.0); width + 2];
        let mut nr = nl.clone();
        for k in 1..=width {
            let l = left[k] * co + right[k] * mi_s;
            let r = left[k] * mi_s + right[k] * co;
            nl[k - 1] += l;
            nr[k + 1] += r;
        }
        left = nl;
        right = nr;
    }
    let probs = (1..=width).map(|k| left[k].norm_sqr() + right[k].norm_sqr()).collect();
    PositionDistribution::new(steps, ProbabilityVector::from_raw(probs)).expect("width matches by construction")
}

/// Largest interior 5-point Laplacian `|u_ωω + u_θθ|` of samples
/// `u(θ, ω)` on a uniform grid with equal spacing in both directions.
pub fn laplace_residual_of<F>(theta_grid: &LinearGrid, omega_grid: &LinearGrid, mut u: F) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let h = theta_grid.spacing();
    if (omega_grid.spacing() - h).abs() > 1e-9 * h {
        return Err(Error::InvalidGrid("theta and omega spacings must match"));
    }
    if theta_grid.len() < 3 || omega_grid.len() < 3 {
        return Err(Error::InvalidGrid("need at least 3 points per axis"));
    }
    let (nt, nw) = (theta_grid.len(), omega_grid.len());
    let mut values = Vec::with_capacity(nt * nw);
    for th in theta_grid.points() {
        for w in omega_grid.points() {
            values.push(u(th, w)?);
        }
    }
    let at = |i: usize, j: usize| values[i * nw + j];
    let mut worst = 0.0f64;
    for i in 1..nt - 1 {
        for j in 1..nw - 1 {
            let lap = (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / (h * h);
            worst = worst.max(lap.abs());
        }
    }
    Ok(worst)
}

/// Diagnostic residual of `σ²_x(ω, θ)` (field along `x̂`) under the
/// Laplacian. Reported only; it is not expected to vanish in general.
pub fn laplace_residual(
    theta_grid: &LinearGrid,
    omega_grid: &LinearGrid,
    steps: usize,
    spin: SpinVector,
    lattice: LatticeSpec,
) -> Result<f64> {
    let base = WalkConfig::new(0.0, FieldSpec::new(0.0, Direction::X), spin, steps, lattice)?;
    laplace_residual_of(theta_grid, omega_grid, |th, w| {
        let state = evolve(&base.with_theta(th).with_omega(w))?;
        Ok(moments(&state.position_marginal()).variance)
    })
}
