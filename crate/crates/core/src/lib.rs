//! Framed skein-module link invariants and skein-valued curve counting.
//!
//! The crate is organized in layers: `laurent` provides the coefficient
//! rings, `diagram` the combinatorial link diagrams, `skein` the evaluation
//! of diagrams into skein modules, and `curvecount` the assembly of
//! holomorphic-curve data into skein-valued counts.  `geometry` and `index`
//! cover the analytic side: explicit local models for curves near a
//! Lagrangian and Fredholm index bookkeeping for their deformations.

pub mod cli;
pub mod curvecount;
pub mod diagram;
pub mod geometry;
pub mod index;
pub mod laurent;
pub mod skein;
