#![no_std]

//! Discrete-time quantum walk of a spin-half particle on a one-dimensional
//! lattice under a static homogeneous magnetic field, together with the
//! estimation quantities used to judge it as a magnetometer.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, sweeps and the command line live in the
//! `magwalk` crate.
//!
//! # Layout
//! - [`walker`]: lattice, spin and walker state types and their marginals.
//! - [`operators`]: coins, field unitaries, effective coins and the shift.
//! - [`evolution`]: stepping the walk, optionally with its field derivative.
//! - [`statistics`]: moments, variance differences and the sphere scan.
//! - [`estimation`]: Fisher information, quantum Fisher information and
//!   Cramér-Rao bounds.
//! - [`oracle`]: independent cross-checks (finite differences, fidelity QFI,
//!   reference walk, bounded/unbounded folding).

extern crate alloc;

pub mod error;
pub mod estimation;
pub mod evolution;
pub mod grid;
pub mod operators;
pub mod oracle;
pub mod statistics;
pub mod walker;

pub use crate::error::{Error, Result};
pub use crate::estimation::{FisherReport, PhysicalConstants};
pub use crate::evolution::{evolve, evolve_with_derivative, step, DerivativePair, WalkConfig};
pub use crate::grid::LinearGrid;
pub use crate::operators::{CoinMatrix, Direction, FieldSpec};
pub use crate::statistics::{MomentSummary, SphereGrid};
pub use crate::walker::{BoundaryMode, LatticeSpec, PositionDistribution, ProbabilityVector, SpinVector, WalkerState};

/// Double precision complex amplitude.
pub type C64 = num_complex::Complex<f64>;
