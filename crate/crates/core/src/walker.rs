//! State representation of the walker on `C^2 ⊗ l^2([-a, a])`.
//!
//! Amplitudes are stored spin-major and site-minor: index
//! `spin * (2a + 1) + (x + a)`. This order is fixed so that serialized
//! states are reproducible.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by std float methods when std is in the build
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

const SPIN_NORM_TOL: f64 = 1e-9;
const NEGATIVE_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    /// Reflecting edges at `±a` with a spin flip.
    Bounded,
    /// Translation on the infinite line, realized on an array with `a >= T`.
    Unbounded,
}

/// A lattice of `2a + 1` sites spanning `x ∈ [-a, a]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    half_width: usize,
    boundary: BoundaryMode,
}

impl LatticeSpec {
    pub fn new(half_width: usize, boundary: BoundaryMode) -> Self {
        Self { half_width, boundary }
    }

    pub fn bounded(half_width: usize) -> Self {
        Self::new(half_width, BoundaryMode::Bounded)
    }

    pub fn unbounded(half_width: usize) -> Self {
        Self::new(half_width, BoundaryMode::Unbounded)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    /// Number of sites, `2a + 1`.
    pub fn sites(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Array offset of site `x`, or `None` outside `[-a, a]`.
    pub fn offset(&self, x: i64) -> Option<usize> {
        let a = self.half_width as i64;
        (-a..=a).contains(&x).then(|| (x + a) as usize)
    }

    /// Site coordinate at array offset `i`.
    pub fn site(&self, i: usize) -> i64 {
        i as i64 - self.half_width as i64
    }
}

/// A normalized state of the coin (spin) space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinVector {
    amp0: C64,
    amp1: C64,
}

impl SpinVector {
    /// Builds `amp0 |0⟩ + amp1 |1⟩`. Inputs off unit norm by more than 1e-9
    /// are rejected; anything closer is renormalized.
    pub fn new(amp0: C64, amp1: C64) -> Result<Self> {
        let norm_sqr = amp0.norm_sqr() + amp1.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > SPIN_NORM_TOL {
            return Err(Error::SpinNotNormalized { norm_sqr });
        }
        let norm = norm_sqr.sqrt();
        Ok(Self { amp0: amp0 / norm, amp1: amp1 / norm })
    }

    /// `|0⟩`, the `+z` eigenstate.
    pub fn zero() -> Self {
        Self { amp0: C64::new(1.0, 0.0), amp1: C64::new(0.0, 0.0) }
    }

    /// `|1⟩`, the `-z` eigenstate.
    pub fn one() -> Self {
        Self { amp0: C64::new(0.0, 0.0), amp1: C64::new(1.0, 0.0) }
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self { amp0: C64::new(h, 0.0), amp1: C64::new(h, 0.0) }
    }

    pub fn amp0(&self) -> C64 {
        self.amp0
    }

    pub fn amp1(&self) -> C64 {
        self.amp1
    }
}

/// A discrete probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Wraps raw probabilities, clamping rounding noise down to `-1e-15` to 0.
    pub fn from_raw(mut probs: Vec<f64>) -> Self {
        for p in probs.iter_mut() {
            if *p < 0.0 && *p >= -NEGATIVE_CLAMP {
                *p = 0.0;
            }
        }
        Self { probs }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.probs.get(i).copied()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// Position-measurement distribution over the sites `[-a, a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    half_width: usize,
    probs: ProbabilityVector,
}

impl PositionDistribution {
    pub fn new(half_width: usize, probs: ProbabilityVector) -> Result<Self> {
        let expected = 2 * half_width + 1;
        if probs.len() != expected {
            return Err(Error::ShapeMismatch { expected, found: probs.len() });
        }
        Ok(Self { half_width, probs })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.probs
    }

    /// Probability at site `x`; zero outside the lattice.
    pub fn at(&self, x: i64) -> f64 {
        let a = self.half_width as i64;
        if (-a..=a).contains(&x) {
            self.probs.as_slice()[(x + a) as usize]
        } else {
            0.0
        }
    }

    /// `(x, p(x))` pairs in increasing `x`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let a = self.half_width as i64;
        self.probs.as_slice().iter().enumerate().map(move |(i, &p)| (i as i64 - a, p))
    }
}

/// Full pure state of the walker.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    lattice: LatticeSpec,
    amps: Vec<C64>,
}

impl WalkerState {
    /// `|s⟩ ⊗ |x = 0⟩`.
    pub fn new(spin: SpinVector, lattice: LatticeSpec) -> Self {
        let n = lattice.sites();
        let mut amps = vec![C64::new(0.0, 0.0); 2 * n];
        let center = lattice.half_width();
        amps[center] = spin.amp0();
        amps[n + center] = spin.amp1();
        Self { lattice, amps }
    }

    /// Wraps a raw spin-major amplitude array.
    pub fn from_amplitudes(lattice: LatticeSpec, amps: Vec<C64>) -> Result<Self> {
        let expected = 2 * lattice.sites();
        if amps.len() != expected {
            return Err(Error::ShapeMismatch { expected, found: amps.len() });
        }
        Ok(Self { lattice, amps })
    }

    pub fn lattice(&self) -> LatticeSpec {
        self.lattice
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    /// Amplitude `ψ(spin, x)`; zero outside the lattice.
    pub fn amplitude(&self, spin: usize, x: i64) -> C64 {
        assert!(spin < 2, "spin index must be 0 or 1");
        match self.lattice.offset(x) {
            Some(i) => self.amps[spin * self.lattice.sites() + i],
            None => C64::new(0.0, 0.0),
        }
    }

    /// `⟨Ψ|Ψ⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `p(x) = Σ_s |ψ(s, x)|²`.
    pub fn position_marginal(&self) -> PositionDistribution {
        let n = self.lattice.sites();
        let (up, down) = self.amps.split_at(n);
        let probs = up.iter().zip(down).map(|(u, d)| u.norm_sqr() + d.norm_sqr()).collect();
        PositionDistribution { half_width: self.lattice.half_width(), probs: ProbabilityVector::from_raw(probs) }
    }

    /// `p(s) = Σ_x |ψ(s, x)|²` for `s = 0, 1`.
    pub fn spin_marginal(&self) -> ProbabilityVector {
        let n = self.lattice.sites();
        let (up, down) = self.amps.split_at(n);
        let p0 = up.iter().map(|z| z.norm_sqr()).sum();
        let p1 = down.iter().map(|z| z.norm_sqr()).sum();
        ProbabilityVector::from_raw(vec![p0, p1])
    }
}
