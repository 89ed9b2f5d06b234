//! Spin-space operators and the conditional shift.
//!
//! The field enters the walk only through the effective coin
//! `C_B = C(θ) · U_B(1)`, and every ω-derivative in the crate is taken
//! with respect to the dimensionless field parameter `ω = γB₀/2` (step time
//! fixed at 1 s).

use core::ops::{Mul, Neg};

#[allow(unused_imports)] // shadowed by std float methods when std is in the build
use num_traits::Float;

use crate::error::{Error, Result};
use crate::walker::{BoundaryMode, LatticeSpec, WalkerState};
use crate::C64;

const DIRECTION_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 2×2 complex matrix on the spin space, row-major.
///
/// Coins, field unitaries and effective coins are unitary. The ω-derivative
/// of an effective coin is stored in the same type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    m: [[C64; 2]; 2],
}

impl CoinMatrix {
    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self { m: [[m00, m01], [m10, m11]] }
    }

    pub fn identity() -> Self {
        Self::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn entries(&self) -> [[C64; 2]; 2] {
        self.m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * k, m[0][1] * k, m[1][0] * k, m[1][1] * k)
    }

    /// `M (v0, v1)ᵀ`.
    #[inline]
    pub fn apply(&self, v0: C64, v1: C64) -> (C64, C64) {
        let m = &self.m;
        (m[0][0] * v0 + m[0][1] * v1, m[1][0] * v0 + m[1][1] * v1)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for col in 0..2 {
                worst = worst.max((self.m[r][col] - other.m[r][col]).norm());
            }
        }
        worst
    }

    /// `M†M = I` elementwise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        let a = &self.m;
        let b = &rhs.m;
        CoinMatrix::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Neg for CoinMatrix {
    type Output = CoinMatrix;

    fn neg(self) -> CoinMatrix {
        self.scale(c(-1.0, 0.0))
    }
}

/// Unit vector giving the field direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    pub const X: Direction = Direction([1.0, 0.0, 0.0]);
    pub const Y: Direction = Direction([0.0, 1.0, 0.0]);
    pub const Z: Direction = Direction([0.0, 0.0, 1.0]);

    /// Rejects vectors whose norm is off 1 by more than 1e-9 and renormalizes
    /// the rest.
    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > DIRECTION_TOL {
            return Err(Error::DirectionNotUnit { norm });
        }
        Ok(Self([nx / norm, ny / norm, nz / norm]))
    }

    /// Direction at polar angle `polar` from `+z` and azimuth `azimuth`
    /// from `+x`.
    pub fn from_spherical(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self([sp * ca, sp * sa, cp])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }
}

impl Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        Direction([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// A static homogeneous field `B = B₀ n̂`, described by `ω = γB₀/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub omega: f64,
    pub direction: Direction,
}

impl FieldSpec {
    pub fn new(omega: f64, direction: Direction) -> Self {
        Self { omega, direction }
    }

    /// The field-free case.
    pub fn none() -> Self {
        Self::new(0.0, Direction::Z)
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { omega, ..self }
    }
}

/// `cos_part · I + i sin_part · (σ·n̂)`.
fn rotation(cos_part: f64, sin_part: f64, n: &Direction) -> CoinMatrix {
    let [nx, ny, nz] = n.components();
    CoinMatrix::new(
        c(cos_part, nz * sin_part),
        c(ny * sin_part, nx * sin_part),
        c(-ny * sin_part, nx * sin_part),
        c(cos_part, -nz * sin_part),
    )
}

/// The four-parameter U(2) coin
/// `e^{iτ} [[e^{iξ} cos θ, e^{iζ} sin θ], [-e^{-iζ} sin θ, e^{-iξ} cos θ]]`.
///
/// [`coin`] is the case `τ = ξ = 0`, `ζ = -π/2`.
pub fn general_coin(tau: f64, xi: f64, zeta: f64, theta: f64) -> CoinMatrix {
    let (s, co) = theta.sin_cos();
    let e_xi = C64::from_polar(1.0, xi);
    let e_zeta = C64::from_polar(1.0, zeta);
    CoinMatrix::new(e_xi * co, e_zeta * s, -e_zeta.conj() * s, e_xi.conj() * co).scale(C64::from_polar(1.0, tau))
}

/// `C(θ) = exp(-iθσ_x) = [[cos θ, -i sin θ], [-i sin θ, cos θ]]`.
pub fn coin(theta: f64) -> CoinMatrix {
    let (s, co) = theta.sin_cos();
    CoinMatrix::new(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
}

/// Field propagator over time `t`: `cos(ωt) I + i (σ·n̂) sin(ωt)`.
pub fn field_unitary(field: &FieldSpec, t: f64) -> CoinMatrix {
    let (s, co) = (field.omega * t).sin_cos();
    rotation(co, s, &field.direction)
}

/// `∂/∂ω` of [`field_unitary`].
pub fn field_unitary_domega(field: &FieldSpec, t: f64) -> CoinMatrix {
    let (s, co) = (field.omega * t).sin_cos();
    rotation(-t * s, t * co, &field.direction)
}

/// `C_B = C(θ) · U_B(1)`: the coin seen by the walker once the one-step
/// field propagator is folded in.
pub fn effective_coin(theta: f64, field: &FieldSpec) -> CoinMatrix {
    coin(theta) * field_unitary(field, 1.0)
}

/// Analytic `∂C_B/∂ω`.
///
/// Equal to `C(θ) U_B(ω + π/2)` for a unit direction, but treated as a plain
/// matrix: nothing relies on it being unitary.
pub fn effective_coin_domega(theta: f64, field: &FieldSpec) -> CoinMatrix {
    coin(theta) * field_unitary_domega(field, 1.0)
}

/// Routes post-coin amplitudes through the conditional shift.
///
/// `amp_at(i)` returns the spin pair at array offset `i`; spin 0 moves one
/// site left and spin 1 one site right. Every destination entry is written.
#[inline]
pub(crate) fn shift_into<F>(lattice: LatticeSpec, dst: &mut [C64], mut amp_at: F) -> Result<()>
where
    F: FnMut(usize) -> (C64, C64),
{
    let n = lattice.sites();
    debug_assert_eq!(dst.len(), 2 * n);
    let (down, up) = dst.split_at_mut(n);
    let zero = c(0.0, 0.0);
    match lattice.boundary() {
        BoundaryMode::Bounded => {
            for i in 0..n {
                let (u0, u1) = amp_at(i);
                if i == 0 {
                    // |0⟩⊗|-a⟩ → |1⟩⊗|-a⟩
                    up[0] = u0;
                } else {
                    down[i - 1] = u0;
                }
                if i == n - 1 {
                    // |1⟩⊗|a⟩ → |0⟩⊗|a⟩
                    down[n - 1] = u1;
                } else {
                    up[i + 1] = u1;
                }
            }
        }
        BoundaryMode::Unbounded => {
            up[0] = zero;
            down[n - 1] = zero;
            for i in 0..n {
                let (u0, u1) = amp_at(i);
                if i == 0 {
                    if u0 != zero {
                        return Err(Error::AmplitudeAtEdge { site: lattice.site(i) });
                    }
                } else {
                    down[i - 1] = u0;
                }
                if i == n - 1 {
                    if u1 != zero {
                        return Err(Error::AmplitudeAtEdge { site: lattice.site(i) });
                    }
                } else {
                    up[i + 1] = u1;
                }
            }
        }
    }
    Ok(())
}

/// Applies the conditional shift to a state.
pub fn apply_shift(state: &WalkerState) -> Result<WalkerState> {
    let lattice = state.lattice();
    let n = lattice.sites();
    let src = state.amplitudes();
    let mut out = WalkerState::new(crate::walker::SpinVector::zero(), lattice);
    shift_into(lattice, out.amplitudes_mut(), |i| (src[i], src[n + i]))?;
    Ok(out)
}
