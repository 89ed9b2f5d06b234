//! Fisher information of position and spin measurements, quantum Fisher
//! information, efficiency ratios and Cramér-Rao bounds.
//!
//! All information quantities are per `ω²`. Use [`fi_omega_to_fi_field`]
//! and [`omega_to_tesla`] to move to the field magnitude `B₀`.

#[allow(unused_imports)] // shadowed by std float methods when std is in the build
use num_traits::Float;

use crate::error::{Error, Result};
use crate::evolution::{evolve_with_derivative, DerivativePair, WalkConfig};

/// Marginal probabilities below this contribute nothing to a Fisher sum.
pub const PROBABILITY_FLOOR: f64 = 1e-15;
const QFI_FLOOR: f64 = 1e-12;

/// `H = 4(⟨∂Ψ|∂Ψ⟩ - |⟨Ψ|∂Ψ⟩|²)`, the pure-state value of `Tr[ρ L²]` with
/// `L = 2∂ρ`. Rounding noise below zero is clamped.
pub fn qfi(pair: &DerivativePair) -> f64 {
    let h = 4.0 * (pair.derivative_norm_sqr() - pair.overlap().norm_sqr());
    h.max(0.0)
}

/// `Σ (∂p)²/p` over outcomes with `p >= 1e-15`.
fn fisher_sum(probs: impl Iterator<Item = (f64, f64)>) -> f64 {
    probs.filter(|&(p, _)| p >= PROBABILITY_FLOOR).map(|(p, dp)| dp * dp / p).sum()
}

/// Fisher information of a position measurement (spin traced out).
pub fn position_fi(pair: &DerivativePair) -> f64 {
    let n = pair.state.lattice().sites();
    let psi = pair.state.amplitudes();
    let d = &pair.dstate;
    fisher_sum((0..n).map(|i| {
        let p = psi[i].norm_sqr() + psi[n + i].norm_sqr();
        let dp = 2.0 * ((psi[i].conj() * d[i]).re + (psi[n + i].conj() * d[n + i]).re);
        (p, dp)
    }))
}

/// Fisher information of a spin (`σ_z`) measurement (position traced out).
pub fn spin_fi(pair: &DerivativePair) -> f64 {
    let n = pair.state.lattice().sites();
    let psi = pair.state.amplitudes();
    let d = &pair.dstate;
    fisher_sum((0..2).map(|s| {
        let block = s * n..(s + 1) * n;
        let p: f64 = psi[block.clone()].iter().map(|z| z.norm_sqr()).sum();
        let dp: f64 = 2.0 * psi[block.clone()].iter().zip(&d[block]).map(|(z, dz)| (z.conj() * dz).re).sum::<f64>();
        (p, dp)
    }))
}

/// `R = F/H`, with `0/0 = 0` (any `H < 1e-12` gives 0).
pub fn efficiency_ratio(fi: f64, qfi: f64) -> f64 {
    if qfi < QFI_FLOOR {
        0.0
    } else {
        fi / qfi
    }
}

/// Cramér-Rao RMSE `1/√(M F)` for `M` repetitions.
pub fn crb_rmse_omega(fi_max: f64, measurements: u64) -> Result<f64> {
    if fi_max.is_nan() || fi_max <= 0.0 {
        return Err(Error::NotEstimable { fisher_information: fi_max });
    }
    Ok(1.0 / (measurements as f64 * fi_max).sqrt())
}

/// Constants fixing the gyromagnetic ratio `γ = g_s μ_B / ħ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub g_factor: f64,
    /// Bohr magneton, J/T.
    pub bohr_magneton: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 Bohr magneton.
    pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
    /// CODATA 2018 reduced Planck constant.
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const ELECTRON_G: f64 = -2.0023;

    pub fn electron() -> Self {
        Self { g_factor: Self::ELECTRON_G, bohr_magneton: Self::BOHR_MAGNETON, hbar: Self::HBAR }
    }

    pub fn with_g_factor(self, g_factor: f64) -> Self {
        Self { g_factor, ..self }
    }

    /// `γ` in rad s⁻¹ T⁻¹ (signed).
    pub fn gyromagnetic_ratio(&self) -> f64 {
        self.g_factor * self.bohr_magneton / self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::electron()
    }
}

/// `δB = 2 δω / |γ|`.
pub fn omega_to_tesla(domega: f64, constants: &PhysicalConstants) -> f64 {
    2.0 * domega / constants.gyromagnetic_ratio().abs()
}

/// Chain rule from `ω` to `B₀`: `F_B = (γ/2)² F_ω`.
pub fn fi_omega_to_fi_field(fi_omega: f64, constants: &PhysicalConstants) -> f64 {
    let half_gamma = constants.gyromagnetic_ratio() / 2.0;
    half_gamma * half_gamma * fi_omega
}

/// All information quantities at one field value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherReport {
    pub omega: f64,
    pub qfi: f64,
    pub position_fi: f64,
    pub spin_fi: f64,
    pub ratio_position: f64,
    pub ratio_spin: f64,
}

impl FisherReport {
    pub fn from_pair(omega: f64, pair: &DerivativePair) -> Self {
        let h = qfi(pair);
        let fp = position_fi(pair);
        let fs = spin_fi(pair);
        Self {
            omega,
            qfi: h,
            position_fi: fp,
            spin_fi: fs,
            ratio_position: efficiency_ratio(fp, h),
            ratio_spin: efficiency_ratio(fs, h),
        }
    }
}

pub fn fisher_report(cfg: &WalkConfig) -> Result<FisherReport> {
    let pair = evolve_with_derivative(cfg)?;
    Ok(FisherReport::from_pair(cfg.field.omega, &pair))
}
