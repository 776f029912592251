//! Confluent hypergeometric (Kummer) and Whittaker M functions for complex
//! arguments, with first derivatives.
//!
//! The Kummer function is evaluated from its Taylor series
//!
//! ```text
//! M(a, b, z) = Σ_{n≥0} (a)_n z^n / [(b)_n n!],
//! ```
//!
//! and the Whittaker function through the standard reduction
//!
//! ```text
//! M_{κ,μ}(z) = e^{-z/2} z^{μ+1/2} M(μ - κ + 1/2, 1 + 2μ, z),
//! ```
//!
//! with the principal branch of `z^{μ+1/2}`. The physically relevant
//! arguments here lie on the positive imaginary axis (z = 2iaV₀·e^{±x/a},
//! |z| ≤ 2aV₀ ≲ 10), well inside the series regime, so no asymptotic
//! expansion is provided; arguments with |z| > 50 are rejected. For imaginary
//! z the series terms rotate in phase and naive summation loses about two
//! digits, so partial sums are accumulated with Neumaier compensation.
//!
//! The irregular Whittaker W function blows up at the regular endpoints of
//! the bound-state problem and is intentionally not implemented.

use crate::error::{Error, Result};
use crate::Complex;

/// Largest |z| accepted by the series evaluation.
pub const SERIES_MAX_ABS_Z: f64 = 50.0;

/// Truncation control for the power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    /// Stop once the running term is below `rel_tol` times the partial sum.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy { rel_tol: 1e-15, max_terms: 500 }
    }
}

impl SeriesPolicy {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::InvalidParameter(format!(
                "series policy requires rel_tol > 0 and max_terms >= 1, got rel_tol = {}, max_terms = {}",
                self.rel_tol, self.max_terms
            )));
        }
        Ok(())
    }
}

/// Complex accumulator with Neumaier compensation per component.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: Complex,
    comp: Complex,
}

impl CompensatedSum {
    fn add(&mut self, term: Complex) {
        self.comp.re += neumaier_step(&mut self.sum.re, term.re);
        self.comp.im += neumaier_step(&mut self.sum.im, term.im);
    }

    fn value(&self) -> Complex {
        self.sum + self.comp
    }
}

fn neumaier_step(sum: &mut f64, term: f64) -> f64 {
    let t = *sum + term;
    let correction = if sum.abs() >= term.abs() {
        (*sum - t) + term
    } else {
        (term - t) + *sum
    };
    *sum = t;
    correction
}

fn is_nonpositive_integer(v: Complex) -> bool {
    v.im == 0.0 && v.re <= 0.0 && v.re.fract() == 0.0
}

fn check_finite(label: &str, v: Complex) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{label} must be finite, got {v}")))
    }
}

/// Kummer confluent hypergeometric function M(a, b, z).
///
/// Requires b not to be zero or a negative integer (the series poles) and
/// |z| ≤ [`SERIES_MAX_ABS_Z`]. Terms are summed until
/// |term| < rel_tol · |partial sum| holds for two consecutive terms.
pub fn kummer_m(a: Complex, b: Complex, z: Complex, policy: SeriesPolicy) -> Result<Complex> {
    policy.validate()?;
    check_finite("a", a)?;
    check_finite("b", b)?;
    check_finite("z", z)?;
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidParameter(format!(
            "kummer_m pole: b = {b} is zero or a negative integer"
        )));
    }
    if z.norm() > SERIES_MAX_ABS_Z {
        return Err(Error::NonConvergence(format!(
            "|z| = {:.3e} exceeds the series region |z| <= {SERIES_MAX_ABS_Z}",
            z.norm()
        )));
    }

    let mut acc = CompensatedSum::default();
    let mut term = Complex::new(1.0, 0.0);
    acc.add(term);
    let mut small_streak = 0usize;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        acc.add(term);
        if term.norm() < policy.rel_tol * acc.value().norm() {
            small_streak += 1;
            if small_streak >= 2 {
                let value = acc.value();
                check_finite("kummer_m result", value)?;
                return Ok(value);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "kummer_m: {} terms at |z| = {:.3e} without meeting rel_tol = {:.1e}",
        policy.max_terms,
        z.norm(),
        policy.rel_tol
    )))
}

/// d/dz M(a, b, z) = (a/b) · M(a+1, b+1, z).
pub fn kummer_m_derivative(a: Complex, b: Complex, z: Complex, policy: SeriesPolicy) -> Result<Complex> {
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidParameter(format!(
            "kummer_m_derivative pole: b = {b} is zero or a negative integer"
        )));
    }
    let shifted = kummer_m(a + 1.0, b + 1.0, z, policy)?;
    Ok(a / b * shifted)
}

/// Whittaker function M_{κ,μ}(z) on the principal branch of z^{μ+1/2}.
///
/// Requires z ≠ 0 and 1 + 2μ not to be zero or a negative integer.
pub fn whittaker_m(kappa: Complex, mu: Complex, z: Complex, policy: SeriesPolicy) -> Result<Complex> {
    let (alpha, beta) = whittaker_to_kummer(kappa, mu)?;
    if z == Complex::new(0.0, 0.0) {
        return Err(Error::InvalidParameter(
            "whittaker_m requires z != 0 (branch point)".into(),
        ));
    }
    let m = kummer_m(alpha, beta, z, policy)?;
    let value = (-z / 2.0).exp() * z.powc(mu + 0.5) * m;
    check_finite("whittaker_m result", value)?;
    Ok(value)
}

/// d/dz M_{κ,μ}(z), by the product rule on e^{-z/2} z^{μ+1/2} M(α, β, z).
pub fn whittaker_m_derivative(
    kappa: Complex,
    mu: Complex,
    z: Complex,
    policy: SeriesPolicy,
) -> Result<Complex> {
    let (alpha, beta) = whittaker_to_kummer(kappa, mu)?;
    if z == Complex::new(0.0, 0.0) {
        return Err(Error::InvalidParameter(
            "whittaker_m_derivative requires z != 0 (branch point)".into(),
        ));
    }
    let m = kummer_m(alpha, beta, z, policy)?;
    let mp = kummer_m_derivative(alpha, beta, z, policy)?;
    let outer = (-z / 2.0).exp() * z.powc(mu + 0.5);
    let value = outer * ((mu + 0.5) / z * m - m / 2.0 + mp);
    check_finite("whittaker_m_derivative result", value)?;
    Ok(value)
}

/// Kummer indices (α, β) = (μ - κ + 1/2, 1 + 2μ) of M_{κ,μ}.
fn whittaker_to_kummer(kappa: Complex, mu: Complex) -> Result<(Complex, Complex)> {
    check_finite("kappa", kappa)?;
    check_finite("mu", mu)?;
    let beta = 1.0 + 2.0 * mu;
    if is_nonpositive_integer(beta) {
        return Err(Error::InvalidParameter(format!(
            "whittaker index degenerate: 1 + 2mu = {beta} is zero or a negative integer"
        )));
    }
    Ok((mu - kappa + 0.5, beta))
}
