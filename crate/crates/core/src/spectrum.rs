//! Root search over energy, Klein-Gordon norm and classification, parameter
//! sweeps, and location of the critical potential.
//!
//! Eigenvalues are located by scanning the dimensionless
//! [`root_indicator`](crate::matching::root_indicator) on an energy grid,
//! bracketing its local minima, and polishing each candidate with
//! derivative-free (Brent) minimization of the squared indicator. A candidate
//! is accepted as a root only if the polished indicator falls below 1e-8;
//! the complex residual is minimized in magnitude, with no assumption that
//! an overall phase makes it real on the real-E axis.
//!
//! The Klein-Gordon norm N = 2∫ [E - V(x)] |φ|² dx is indefinite: N > 0
//! marks particle states, N < 0 antiparticle states, and N → 0 as the two
//! branches coalesce at the critical depth V_cr. [`critical_potential`]
//! brackets V_cr by bisection on "the deep branch still has a bound state",
//! anchoring the deep window at the spectrum of the lower bracket endpoint.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matching::{match_coefficients, root_indicator, MatchedWavefunction};
use crate::potential::{energy_quantities, potential_value, PotentialParams};
use crate::quad;
use crate::Complex;

/// Polished-indicator level below which a candidate energy counts as a root.
pub const ROOT_ACCEPT_TOL: f64 = 1e-8;

/// Norm magnitude below which a state is classified as critical (zero-norm).
pub const NORM_CLASSIFICATION_TOL: f64 = 1e-3;

/// Energies closer than this are considered the same root.
const ROOT_DEDUP_TOL: f64 = 1e-9;

/// Sign of the Klein-Gordon norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Particle,
    Antiparticle,
    Critical,
}

impl StateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateKind::Particle => "particle",
            StateKind::Antiparticle => "antiparticle",
            StateKind::Critical => "critical",
        }
    }
}

/// A bound state: eigenvalue, Klein-Gordon norm under b₄ = 1, and its
/// particle/antiparticle classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub e: f64,
    pub norm: f64,
    pub kind: StateKind,
}

/// Energy-grid and refinement controls for the root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub e_min: f64,
    pub e_max: f64,
    pub grid_points: usize,
    pub refine_tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { e_min: -1.0 + 1e-6, e_max: 1.0 - 1e-6, grid_points: 2000, refine_tol: 1e-10 }
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<()> {
        if !(self.e_min < self.e_max) || self.grid_points < 2 || !(self.refine_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scan config requires e_min < e_max, grid_points >= 2, refine_tol > 0; got {self:?}"
            )));
        }
        if self.e_min <= -1.0 || self.e_max >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "scan window must lie strictly inside (-1, 1); got [{}, {}]",
                self.e_min, self.e_max
            )));
        }
        Ok(())
    }
}

/// One sweep sample: the well depth and its bound states, sorted in e.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub v0: f64,
    pub states: Vec<BoundState>,
}

/// Bound-state spectrum as a function of the well depth.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    pub a: f64,
    pub x0: f64,
    pub points: Vec<SpectrumPoint>,
}

/// Critical point of one well geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub x0: f64,
    pub v_cr: f64,
    pub e_cr: f64,
}

/// Brent minimization of f on [lo, hi] to x-tolerance `tol`.
fn brent_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105_2;
    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e_move: f64 = 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-15;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut take_golden = true;
        if e_move.abs() > tol1 {
            // parabolic fit through (v, w, x)
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e_move;
            e_move = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if m > x { tol1 } else { -tol1 };
                }
                take_golden = false;
            }
        }
        if take_golden {
            e_move = if x < m { b - x } else { a - x };
            d = GOLD * e_move;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + if d > 0.0 { tol1 } else { -tol1 } };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

fn insert_root(roots: &mut Vec<f64>, e: f64) {
    if roots.iter().any(|&r| (r - e).abs() <= ROOT_DEDUP_TOL) {
        return;
    }
    roots.push(e);
}

/// Polishes one bracketed candidate; pushes it if the indicator clears the
/// acceptance level.
fn polish_candidate(
    params: &PotentialParams,
    lo: f64,
    hi: f64,
    refine_tol: f64,
    roots: &mut Vec<f64>,
) -> Result<()> {
    let mut failed: Option<Error> = None;
    let (e, _) = brent_min(
        |e| match root_indicator(e, params) {
            Ok(v) => v * v,
            Err(err) => {
                failed.get_or_insert(err);
                f64::INFINITY
            }
        },
        lo,
        hi,
        refine_tol,
    );
    if let Some(err) = failed {
        return Err(err);
    }
    if root_indicator(e, params)? <= ROOT_ACCEPT_TOL {
        insert_root(roots, e);
    }
    Ok(())
}

/// Eigenvalues of the matching condition inside the scan window, ascending.
pub fn find_eigenvalues(params: &PotentialParams, scan: &ScanConfig) -> Result<Vec<f64>> {
    scan.validate()?;
    let n = scan.grid_points;
    let h = (scan.e_max - scan.e_min) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| scan.e_min + h * i as f64).collect();
    let values: Vec<f64> =
        grid.iter().map(|&e| root_indicator(e, params)).collect::<Result<_>>()?;

    let mut roots = Vec::new();
    for i in 1..n - 1 {
        if values[i] < values[i - 1] && values[i] <= values[i + 1] {
            polish_candidate(params, grid[i - 1], grid[i + 1], scan.refine_tol, &mut roots)?;
        }
    }
    // Branches enter the window through E = ∓1, so a minimum can sit inside
    // the first or last grid cell without an interior sample to flag it.
    polish_candidate(params, grid[0], grid[1], scan.refine_tol, &mut roots)?;
    polish_candidate(params, grid[n - 2], grid[n - 1], scan.refine_tol, &mut roots)?;

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

fn classify(norm: f64) -> StateKind {
    if norm > NORM_CLASSIFICATION_TOL {
        StateKind::Particle
    } else if norm < -NORM_CLASSIFICATION_TOL {
        StateKind::Antiparticle
    } else {
        StateKind::Critical
    }
}

fn attach_norms(params: &PotentialParams, roots: &[f64]) -> Result<Vec<BoundState>> {
    roots
        .iter()
        .map(|&e| {
            let state = match_coefficients(e, params)?;
            let norm = kg_norm(&state)?;
            Ok(BoundState { e, norm, kind: classify(norm) })
        })
        .collect()
}

/// All bound states of the well, with norms and classifications, ascending
/// in energy. An empty list is a valid result.
pub fn find_bound_states(params: &PotentialParams, scan: &ScanConfig) -> Result<Vec<BoundState>> {
    let roots = find_eigenvalues(params, scan)?;
    attach_norms(params, &roots)
}

/// Klein-Gordon norm N = 2∫ [E - V(x)] |φ|² dx of a matched state.
///
/// The three regional integrals over [x₀ - 40/λ, x₀], [x₀, 0], [0, 40/λ]
/// are done with adaptive Gauss-Kronrod quadrature; beyond the cut points the
/// integrand is bounded by its leading exponential e^{∓2λx}, and the
/// closed-form tail value 2E|φ(x_cut)|²/(2λ) is added for each side.
pub fn kg_norm(state: &MatchedWavefunction) -> Result<f64> {
    let p = &state.params;
    let e = state.e;
    let lambda = energy_quantities(p, e)?.lambda;
    let span = 40.0 / lambda;
    let x_lo = p.x0() - span;
    let x_hi = span;

    let integrand =
        |x: f64| 2.0 * (e - potential_value(p, x)) * crate::matching::wavefunction_eval(state, x).norm_sqr();

    let rel = 1e-9;
    let floor = 1e-13;
    let left = quad::integrate(integrand, x_lo, p.x0(), rel, floor)?;
    let middle = if p.x0() < 0.0 {
        quad::integrate(integrand, p.x0(), 0.0, rel, floor)?
    } else {
        0.0
    };
    let right = quad::integrate(integrand, 0.0, x_hi, rel, floor)?;

    let tail_left = e * crate::matching::wavefunction_eval(state, x_lo).norm_sqr() / lambda;
    let tail_right = e * crate::matching::wavefunction_eval(state, x_hi).norm_sqr() / lambda;

    Ok(left + middle + right + tail_left + tail_right)
}

/// Warm-started sweep of the spectrum over well depth.
///
/// Each point starts from a fresh grid scan and additionally polishes the
/// previous point's roots, so branches are followed through the coalescence
/// region where two minima of |residual|² sit closer than the grid spacing;
/// if warm roots collapse into one, the segment between them is re-scanned
/// on a fine local grid to separate the tangency.
pub fn sweep_v0(
    a: f64,
    x0: f64,
    v0_min: f64,
    v0_max: f64,
    steps: usize,
    scan: &ScanConfig,
) -> Result<SpectrumCurve> {
    validate_sweep(v0_min, v0_max, steps)?;
    let mut points = Vec::with_capacity(steps);
    let mut warm: Vec<f64> = Vec::new();
    for k in 0..steps {
        let v0 = v0_min + (v0_max - v0_min) * k as f64 / (steps - 1) as f64;
        let params = PotentialParams::new(v0, a, x0)?;
        let roots = eigenvalues_with_warm_starts(&params, scan, &warm)?;
        let states = attach_norms(&params, &roots)?;
        warm = roots;
        points.push(SpectrumPoint { v0, states });
    }
    Ok(SpectrumCurve { a, x0, points })
}

/// Cold sweep: every depth is solved independently (and in parallel); no
/// information flows along the branch.
pub fn sweep_v0_cold(
    a: f64,
    x0: f64,
    v0_min: f64,
    v0_max: f64,
    steps: usize,
    scan: &ScanConfig,
) -> Result<SpectrumCurve> {
    validate_sweep(v0_min, v0_max, steps)?;
    let points: Result<Vec<SpectrumPoint>> = (0..steps)
        .into_par_iter()
        .map(|k| {
            let v0 = v0_min + (v0_max - v0_min) * k as f64 / (steps - 1) as f64;
            let params = PotentialParams::new(v0, a, x0)?;
            let states = find_bound_states(&params, scan)?;
            Ok(SpectrumPoint { v0, states })
        })
        .collect();
    Ok(SpectrumCurve { a, x0, points: points? })
}

fn validate_sweep(v0_min: f64, v0_max: f64, steps: usize) -> Result<()> {
    if !(0.0 < v0_min && v0_min < v0_max) || steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "sweep requires 0 < v0_min < v0_max and steps >= 2, got [{v0_min}, {v0_max}] x {steps}"
        )));
    }
    Ok(())
}

fn eigenvalues_with_warm_starts(
    params: &PotentialParams,
    scan: &ScanConfig,
    warm: &[f64],
) -> Result<Vec<f64>> {
    let mut roots = find_eigenvalues(params, scan)?;
    let h = (scan.e_max - scan.e_min) / (scan.grid_points - 1) as f64;
    let w = (5.0 * h).max(0.01);
    for &r in warm {
        let lo = (r - w).max(scan.e_min);
        let hi = (r + w).min(scan.e_max);
        polish_candidate(params, lo, hi, scan.refine_tol, &mut roots)?;
    }
    // Tangency rescue: a pair of warm roots that no longer yields two
    // accepted roots is re-scanned finely in between.
    for pair in warm.windows(2) {
        let (r1, r2) = (pair[0], pair[1]);
        if r2 - r1 > 4.0 * w {
            continue;
        }
        let found = roots.iter().filter(|&&e| e >= r1 - w && e <= r2 + w).count();
        if found >= 2 {
            continue;
        }
        let lo = (r1 - w).max(scan.e_min);
        let hi = (r2 + w).min(scan.e_max);
        let fine = 256;
        let fh = (hi - lo) / (fine - 1) as f64;
        let vals: Vec<f64> = (0..fine)
            .map(|i| root_indicator(lo + fh * i as f64, params))
            .collect::<Result<_>>()?;
        for i in 1..fine - 1 {
            if vals[i] < vals[i - 1] && vals[i] <= vals[i + 1] {
                polish_candidate(
                    params,
                    lo + fh * (i - 1) as f64,
                    lo + fh * (i + 1) as f64,
                    scan.refine_tol,
                    &mut roots,
                )?;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

/// Locates the critical depth where the deep branch's particle and
/// antiparticle states coalesce and disappear.
///
/// The deep window is anchored at the spectrum of `v0_lo`: its lower edge is
/// E = -1, its upper edge sits just above the lowest root found there. The
/// bisection predicate is "the deep window still contains a bound state",
/// which flips exactly at V_cr (above it the pair has no real root; higher
/// branches live outside the window). Returns (v_cr, e_cr) with
/// |Δv0| ≤ 1e-4; e_cr is the midpoint of the last resolvable pair.
pub fn critical_potential(a: f64, x0: f64, v0_lo: f64, v0_hi: f64) -> Result<(f64, f64)> {
    if !(0.0 < v0_lo && v0_lo < v0_hi) {
        return Err(Error::InvalidParameter(format!(
            "critical_potential requires 0 < v0_lo < v0_hi, got [{v0_lo}, {v0_hi}]"
        )));
    }
    let params_lo = PotentialParams::new(v0_lo, a, x0)?;
    let all_lo = find_eigenvalues(&params_lo, &ScanConfig::default())?;
    if all_lo.is_empty() {
        return Err(Error::BracketInvalid { lo: v0_lo, hi: v0_hi });
    }
    let e_anchor = all_lo[0];
    let margin = match all_lo.get(1) {
        Some(&next) => (0.5 * (next - e_anchor)).clamp(0.005, 0.05),
        None => 0.05,
    };
    let e_cut = (e_anchor + margin).min(1.0 - 1e-6);

    let deep_scan = ScanConfig {
        e_min: -1.0 + 1e-7,
        e_max: e_cut,
        grid_points: 1600,
        refine_tol: 1e-12,
    };
    let deep = |v0: f64| -> Result<Vec<f64>> {
        let params = PotentialParams::new(v0, a, x0)?;
        find_eigenvalues(&params, &deep_scan)
    };

    if deep(v0_lo)?.is_empty() || !deep(v0_hi)?.is_empty() {
        return Err(Error::BracketInvalid { lo: v0_lo, hi: v0_hi });
    }
    let (mut lo, mut hi) = (v0_lo, v0_hi);
    let mut roots_lo = deep(lo)?;
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        let roots_mid = deep(mid)?;
        if roots_mid.is_empty() {
            hi = mid;
        } else {
            lo = mid;
            roots_lo = roots_mid;
        }
    }
    let e_cr = match roots_lo.len() {
        0 => unreachable!("bisection keeps the predicate true at lo"),
        1 => roots_lo[0],
        _ => 0.5 * (roots_lo[0] + roots_lo[1]),
    };
    Ok((0.5 * (lo + hi), e_cr))
}

/// Critical point per width marker, for the V_cr(x₀) and E_cr(x₀) trends.
/// Distinct x₀ values are independent and evaluated in parallel.
pub fn sweep_x0(a: f64, x0_values: &[f64]) -> Result<Vec<CriticalPoint>> {
    if let Some(&bad) = x0_values.iter().find(|&&x0| !(x0 <= 0.0)) {
        return Err(Error::InvalidParameter(format!("x0 values must be <= 0, got {bad}")));
    }
    x0_values
        .par_iter()
        .map(|&x0| {
            let (lo, hi) = bracket_ground_coalescence(a, x0)?;
            let (v_cr, e_cr) = critical_potential(a, x0, lo, hi)?;
            Ok(CriticalPoint { x0, v_cr, e_cr })
        })
        .collect()
}

/// Walks the depth upward in coarse steps and watches the lowest bound
/// state; the step on which the ground pair disappears (the lowest root
/// jumps up or the spectrum empties below it) brackets the coalescence.
fn bracket_ground_coalescence(a: f64, x0: f64) -> Result<(f64, f64)> {
    const STEP: f64 = 0.2;
    const V_MAX: f64 = 8.0;
    let scan = ScanConfig { grid_points: 1200, ..ScanConfig::default() };
    let mut prev: Option<(f64, f64)> = None;
    let mut v0 = 0.4;
    while v0 <= V_MAX {
        let params = PotentialParams::new(v0, a, x0)?;
        let roots = find_eigenvalues(&params, &scan)?;
        if let Some((prev_v0, prev_low)) = prev {
            let still_there = roots.first().is_some_and(|&r| r <= prev_low + 0.1);
            if !still_there {
                return Ok((prev_v0, v0));
            }
        }
        if let Some(&lowest) = roots.first() {
            prev = Some((v0, lowest));
        }
        v0 += STEP;
    }
    Err(Error::BracketInvalid { lo: 0.4, hi: V_MAX })
}

/// Scale-invariance helper used in tests: the norm of a state with all
/// coefficients multiplied by c is |c|² times the original.
pub fn rescale_state(state: &MatchedWavefunction, c: Complex) -> MatchedWavefunction {
    MatchedWavefunction {
        e: state.e,
        params: state.params,
        b1: state.b1 * c,
        b3: state.b3 * c,
        b4: state.b4 * c,
        b5: state.b5 * c,
    }
}
