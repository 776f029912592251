//! Bound states of a spin-0 particle in a one-dimensional smooth potential well.
//!
//! The stationary Klein-Gordon equation in natural units (ħ = c = m = 1),
//!
//! ```text
//! φ''(x) + { [E - V(x)]² - 1 } φ(x) = 0,
//! ```
//!
//! is solved for the three-piece well
//!
//! ```text
//! V(x) = -V₀ e^{(x-x₀)/a}   for x < x₀,
//! V(x) = -V₀                for x₀ ≤ x ≤ 0,
//! V(x) = -V₀ e^{-x/a}       for x > 0,
//! ```
//!
//! which interpolates between a square well (a → 0) and a cusp well (x₀ = 0).
//! In the exponential wings the equation reduces to the Whittaker equation, so
//! the regular solutions are Whittaker M functions of a purely imaginary
//! argument; inside the flat bottom the solutions are plane waves. Imposing
//! continuity of φ and φ' at x = x₀ and x = 0 yields a transcendental
//! eigenvalue condition whose roots E ∈ (-1, 1) are the bound states.
//!
//! Bound states are classified by the indefinite Klein-Gordon norm
//! N = 2∫ [E - V(x)] |φ|² dx: particle states carry N > 0, antiparticle
//! states N < 0. As the well deepens the two branches approach each other and
//! coalesce at a critical depth V_cr into a single zero-norm state; past V_cr
//! no real bound pair exists. [`spectrum::critical_potential`] locates V_cr.
//!
//! Module layout:
//!
//! * [`specfun`] — complex-argument Kummer and Whittaker M functions,
//! * [`potential`] — the well and per-energy derived quantities,
//! * [`matching`] — region solutions, coefficient matching, eigenvalue residual,
//! * [`spectrum`] — root search, Klein-Gordon norm, sweeps, critical point,
//! * [`oracle`] — independent checks: direct shooting integration and
//!   closed-form square-well / cusp-well limits.
//!
//! Everything is a pure function of its inputs and safe to call from any
//! number of threads.

pub mod error;
pub mod matching;
pub mod oracle;
pub mod potential;
mod quad;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use matching::{EigenvalueResidual, MatchedWavefunction};
pub use potential::{EnergyQuantities, PotentialParams, Region};
pub use spectrum::{BoundState, ScanConfig, SpectrumCurve, StateKind};

/// Complex scalar used throughout the special-function and matching layers.
pub type Complex = num_complex::Complex64;
