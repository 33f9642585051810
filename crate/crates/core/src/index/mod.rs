//! Fredholm index bookkeeping for the linearized operators behind the curve
//! counts.
//!
//! Two layers live here. The formal dimension formulas are pure arithmetic in
//! the topological data of a map: complex dimension of the target, Euler
//! characteristic of the domain, Chern pairing, Maslov number. The weighted
//! dbar index is the Fredholm index of the standard Cauchy-Riemann operator on
//! an infinite cylinder (or strip, with real boundary conditions) whose ends
//! carry exponential weights `delta_minus`, `delta_plus`. The index is a
//! lattice count: each Fourier mode `m` contributes a kernel or cokernel
//! direction according to where `2*pi*m` sits relative to the weights, and the
//! count jumps exactly when a weight crosses a wall in `2*pi*Z`.
//!
//! [`dbar_index_numeric`] recomputes the same integer spectrally, by
//! discretizing each mode ODE and counting near-zero singular values, so the
//! closed formula and the discretization check each other.

mod numeric;

pub use numeric::{dbar_index_numeric, NumericParams};

use thiserror::Error;

/// Absolute distance to the nearest wall below which a weight is rejected.
const WALL_TOL: f64 = 1e-9;

const TAU: f64 = std::f64::consts::TAU;

/// Errors from the index computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    /// An exponential weight sits on (or within tolerance of) a wall in
    /// `2*pi*Z`, where the operator fails to be Fredholm.
    #[error("weight {0} lies on a spectral wall in 2*pi*Z")]
    OnWall(f64),
    /// A discretized mode produced a singular value too close to the kernel
    /// threshold to classify either way.
    #[error(
        "mode {mode}: singular value {sigma:.3e} falls in the inconclusive band; \
         refine the discretization"
    )]
    Inconclusive { mode: i64, sigma: f64 },
    /// A discretization parameter is out of range.
    #[error("bad discretization parameter: {0}")]
    BadParameter(String),
}

/// Topological data entering the formal dimension formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimInput {
    /// Complex dimension of the ambient space.
    pub ambient_dim: i64,
    /// Euler characteristic of the domain surface.
    pub euler: i64,
    /// Chern pairing of the ambient first Chern class with the image cycle.
    pub chern_pairing: i64,
    /// Maslov number of the boundary condition.
    pub maslov: i64,
}

/// Which one-manifold the dbar operator lives over: `Cylinder` carries the
/// complex index, `Strip` the real index with totally real boundary
/// conditions. Both use the same mode-counting sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryType {
    Cylinder,
    Strip,
}

/// Exponential weights at the two ends of the cylinder or strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub delta_minus: f64,
    pub delta_plus: f64,
    pub boundary: BoundaryType,
}

impl WeightPair {
    /// Builds a weight pair, rejecting weights on the walls `2*pi*Z`.
    pub fn new(
        delta_minus: f64,
        delta_plus: f64,
        boundary: BoundaryType,
    ) -> Result<Self, IndexError> {
        check_off_wall(delta_minus)?;
        check_off_wall(delta_plus)?;
        Ok(WeightPair {
            delta_minus,
            delta_plus,
            boundary,
        })
    }
}

pub(crate) fn check_off_wall(delta: f64) -> Result<(), IndexError> {
    if !delta.is_finite() {
        return Err(IndexError::BadParameter(format!(
            "weight {delta} is not finite"
        )));
    }
    let nearest = TAU * (delta / TAU).round();
    if (delta - nearest).abs() < WALL_TOL {
        return Err(IndexError::OnWall(delta));
    }
    Ok(())
}

/// Formal dimension of a closed-curve moduli problem:
/// `(n - 3) * chi + 2 * <c1>`.
pub fn formal_dim_closed(d: &DimInput) -> i64 {
    (d.ambient_dim - 3) * d.euler + 2 * d.chern_pairing
}

/// Formal dimension of a bordered-curve moduli problem:
/// `(n - 3) * chi + mu`.
pub fn formal_dim_open(d: &DimInput) -> i64 {
    (d.ambient_dim - 3) * d.euler + d.maslov
}

/// Number of lattice points `m` with `lo < 2*pi*m < hi`. Callers guarantee
/// that neither endpoint sits on a lattice point.
fn lattice_count(lo: f64, hi: f64) -> i64 {
    if hi <= lo {
        return 0;
    }
    (hi / TAU).floor() as i64 - (lo / TAU).floor() as i64
}

/// Fredholm index of the weighted dbar operator with the given end weights.
///
/// If `delta_minus <= -delta_plus` the index is the number of modes `m` with
/// `delta_minus < 2*pi*m < -delta_plus`; otherwise it is minus the number of
/// modes with `-delta_minus < 2*pi*m < delta_plus`. The two branches agree
/// (both vanish) when `delta_minus = -delta_plus`. The integer reads as a
/// complex index on the cylinder and a real index on the strip.
pub fn dbar_index(w: &WeightPair) -> Result<i64, IndexError> {
    check_off_wall(w.delta_minus)?;
    check_off_wall(w.delta_plus)?;
    if w.delta_minus <= -w.delta_plus {
        Ok(lattice_count(w.delta_minus, -w.delta_plus))
    } else {
        Ok(-lattice_count(-w.delta_minus, w.delta_plus))
    }
}
