//! Time evolution `|Ψ(t)⟩ = Λ C_B |Ψ(t-1)⟩`, optionally carrying
//! `|∂_ω Ψ(t)⟩` along by the product rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operators::{effective_coin, effective_coin_domega, shift_into, CoinMatrix, FieldSpec};
use crate::walker::{BoundaryMode, LatticeSpec, SpinVector, WalkerState};
use crate::C64;

/// Every parameter of one walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub theta: f64,
    pub field: FieldSpec,
    pub initial_spin: SpinVector,
    pub steps: usize,
    pub lattice: LatticeSpec,
}

impl WalkConfig {
    pub fn new(
        theta: f64,
        field: FieldSpec,
        initial_spin: SpinVector,
        steps: usize,
        lattice: LatticeSpec,
    ) -> Result<Self> {
        let cfg = Self { theta, field, initial_spin, steps, lattice };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks finiteness and lattice size: bounded walks need `a >= 1`,
    /// unbounded walks need `a >= T`.
    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(Error::NonFinite("theta"));
        }
        if !self.field.omega.is_finite() {
            return Err(Error::NonFinite("omega"));
        }
        let a = self.lattice.half_width();
        let required = match self.lattice.boundary() {
            BoundaryMode::Bounded => 1,
            BoundaryMode::Unbounded => self.steps,
        };
        if a < required {
            return Err(Error::LatticeTooSmall { half_width: a, required });
        }
        Ok(())
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { field: self.field.with_omega(omega), ..self }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    pub fn with_field(self, field: FieldSpec) -> Self {
        Self { field, ..self }
    }

    pub fn with_steps(self, steps: usize) -> Self {
        Self { steps, ..self }
    }

    pub fn with_lattice(self, lattice: LatticeSpec) -> Self {
        Self { lattice, ..self }
    }

    pub fn with_spin(self, initial_spin: SpinVector) -> Self {
        Self { initial_spin, ..self }
    }
}

/// A state together with its (unnormalized) ω-derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativePair {
    pub state: WalkerState,
    pub dstate: Vec<C64>,
}

impl DerivativePair {
    /// `⟨Ψ|∂Ψ⟩`.
    pub fn overlap(&self) -> C64 {
        self.state.amplitudes().iter().zip(&self.dstate).map(|(p, d)| p.conj() * d).sum()
    }

    /// `⟨∂Ψ|∂Ψ⟩`.
    pub fn derivative_norm_sqr(&self) -> f64 {
        self.dstate.iter().map(|d| d.norm_sqr()).sum()
    }
}

/// One step: the coin on every site's spin pair, then the shift.
pub fn step(state: &WalkerState, coin: &CoinMatrix) -> Result<WalkerState> {
    let lattice = state.lattice();
    let mut amps = vec![C64::new(0.0, 0.0); 2 * lattice.sites()];
    coin_shift(state.amplitudes(), coin, lattice, &mut amps)?;
    WalkerState::from_amplitudes(lattice, amps)
}

#[inline]
fn coin_shift(src: &[C64], coin: &CoinMatrix, lattice: LatticeSpec, dst: &mut [C64]) -> Result<()> {
    let n = lattice.sites();
    shift_into(lattice, dst, |i| coin.apply(src[i], src[n + i]))
}

/// `T` steps with the effective coin of `cfg`.
pub fn evolve(cfg: &WalkConfig) -> Result<WalkerState> {
    cfg.validate()?;
    let lattice = cfg.lattice;
    let coin = effective_coin(cfg.theta, &cfg.field);
    let mut cur = WalkerState::new(cfg.initial_spin, lattice).into_amplitudes();
    let mut next = vec![C64::new(0.0, 0.0); cur.len()];
    for _ in 0..cfg.steps {
        coin_shift(&cur, &coin, lattice, &mut next)?;
        core::mem::swap(&mut cur, &mut next);
    }
    WalkerState::from_amplitudes(lattice, cur)
}

/// Evolves the state and `|∂_ω Ψ⟩` jointly:
/// `|∂Ψ(t)⟩ = Λ C_B |∂Ψ(t-1)⟩ + Λ (∂_ω C_B) |Ψ(t-1)⟩`, with `|∂Ψ(0)⟩ = 0`.
///
/// The state part is bitwise identical to [`evolve`].
pub fn evolve_with_derivative(cfg: &WalkConfig) -> Result<DerivativePair> {
    cfg.validate()?;
    let lattice = cfg.lattice;
    let n = lattice.sites();
    let coin = effective_coin(cfg.theta, &cfg.field);
    let dcoin = effective_coin_domega(cfg.theta, &cfg.field);
    let zero = C64::new(0.0, 0.0);

    let mut cur = WalkerState::new(cfg.initial_spin, lattice).into_amplitudes();
    let mut next = vec![zero; cur.len()];
    let mut dcur = vec![zero; cur.len()];
    let mut dnext = vec![zero; cur.len()];
    for _ in 0..cfg.steps {
        shift_into(lattice, &mut dnext, |i| {
            let (a0, a1) = coin.apply(dcur[i], dcur[n + i]);
            let (b0, b1) = dcoin.apply(cur[i], cur[n + i]);
            (a0 + b0, a1 + b1)
        })?;
        coin_shift(&cur, &coin, lattice, &mut next)?;
        core::mem::swap(&mut cur, &mut next);
        core::mem::swap(&mut dcur, &mut dnext);
    }
    Ok(DerivativePair { state: WalkerState::from_amplitudes(lattice, cur)?, dstate: dcur })
}
