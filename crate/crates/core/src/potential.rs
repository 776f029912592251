//! The smooth potential well and per-energy derived quantities.
//!
//! ```text
//! V(x) = -V₀ e^{(x-x₀)/a}   (region I,   x < x₀)
//! V(x) = -V₀                (region II,  x₀ ≤ x ≤ 0)
//! V(x) = -V₀ e^{-x/a}       (region III, x > 0)
//! ```
//!
//! The well is continuous at both joints, symmetric about x = x₀/2, and
//! reduces to a square well of width |x₀| as a → 0 and to the cusp well for
//! x₀ = 0 (the middle region then collapses to the single point {0}).

use crate::error::{Error, Result};
use crate::Complex;

/// Parameters (V₀, a, x₀) of the smooth well.
///
/// Valid instances satisfy V₀ > 0, a > 0, x₀ ≤ 0; construct via
/// [`PotentialParams::new`] so every downstream routine can rely on that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    v0: f64,
    a: f64,
    x0: f64,
}

impl PotentialParams {
    pub fn new(v0: f64, a: f64, x0: f64) -> Result<Self> {
        if !(v0 > 0.0 && v0.is_finite()) {
            return Err(Error::InvalidParameter(format!("well depth v0 must be > 0, got {v0}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("smoothness a must be > 0, got {a}")));
        }
        if !(x0 <= 0.0) || !x0.is_finite() {
            return Err(Error::InvalidParameter(format!("width marker x0 must be <= 0, got {x0}")));
        }
        Ok(PotentialParams { v0, a, x0 })
    }

    /// Well depth V₀.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Smoothness length a.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Width marker x₀ (left edge of the flat bottom).
    pub fn x0(&self) -> f64 {
        self.x0
    }
}

/// Which spatial piece of the well a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    I,
    II,
    III,
}

/// V(x) for the given parameters.
pub fn potential_value(params: &PotentialParams, x: f64) -> f64 {
    let (v0, a, x0) = (params.v0, params.a, params.x0);
    match region_of(params, x) {
        Region::I => -v0 * ((x - x0) / a).exp(),
        Region::II => -v0,
        Region::III => -v0 * (-x / a).exp(),
    }
}

/// Region containing x. Both joints belong to the closed middle interval,
/// which degenerates to {0} when x₀ = 0.
pub fn region_of(params: &PotentialParams, x: f64) -> Region {
    if x < params.x0 {
        Region::I
    } else if x <= 0.0 {
        Region::II
    } else {
        Region::III
    }
}

/// Quantities derived from an energy E in the bound-state window.
///
/// κ = -iaE and μ = a√(1-E²) are the Whittaker indices of the wing
/// solutions, q = √((E+V₀)² - 1) (principal root) the flat-bottom wave
/// number, and λ = √(1-E²) = μ/a the asymptotic decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuantities {
    pub e: f64,
    pub kappa: Complex,
    pub mu: f64,
    pub q: Complex,
    pub lambda: f64,
}

/// Computes [`EnergyQuantities`] for |e| < 1.
///
/// q is the principal complex square root, so (E+V₀)² < 1 yields a purely
/// imaginary q with positive imaginary part; the region-II plane waves then
/// become real exponentials and every matching formula stays valid verbatim.
pub fn energy_quantities(params: &PotentialParams, e: f64) -> Result<EnergyQuantities> {
    if !(e.abs() < 1.0) {
        return Err(Error::OutOfWindow { e });
    }
    let a = params.a;
    let lambda = (1.0 - e * e).sqrt();
    let q2 = (e + params.v0).powi(2) - 1.0;
    let q = Complex::new(q2, 0.0).sqrt();
    Ok(EnergyQuantities {
        e,
        kappa: Complex::new(0.0, -a * e),
        mu: a * lambda,
        q,
        lambda,
    })
}
