//! Cumulative digit profiles `G(s)` and the frequency formulas built on them.
//!
//! A profile is a nondecreasing map `[0,1] -> [0,1]` with `G(0)=0` and
//! `G(1)=1` encoding the cumulative distribution of phases `{log10 x}`.
//! Block frequencies follow from the affine-plus-periodic representation
//!
//! ```text
//! rho(k) = a*(floor(log10(k+1)) - floor(log10 k)) + G({log10(k+1)}) - G({log10 k})
//! ```
//!
//! `G(s) = s` reproduces the classical logarithmic digit law; every other
//! admissible profile produces its own digit distribution through the same
//! formula.

mod families;
mod sequences;

pub use families::{
    benford_profile, equivalent_density_on_decade, powerlaw_profile, powerlaw_rho_extrema,
    powerlaw_window, product_uniforms_limit_profile, product_uniforms_profile,
    ratio_uniforms_profile, ratio_uniforms_rho, scale_invariant_profile, windowed_profile_from_cdf,
    PowerLawParams, ProductUniformsVariant,
};
pub use sequences::{
    arithmetic_limit_profile, arithmetic_sequence_profile, power_sequence_integral_profile,
    power_sequence_profile,
};

use std::sync::Arc;

use crate::digitcore::{log_phase, DigitBlock, LogPhase};
use crate::error::{Error, Result};

/// A window of consecutive decades `[10^m, 10^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WindowSpec {
    pub low: i32,
    pub high: i32,
}

impl WindowSpec {
    pub fn new(low: i32, high: i32) -> Result<Self> {
        if low >= high {
            return Err(Error::Domain(format!(
                "window needs low < high, got [{low}, {high})"
            )));
        }
        Ok(WindowSpec { low, high })
    }

    /// Number of decades `L = high - low`.
    pub fn len(&self) -> u32 {
        (self.high - self.low) as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Internal evaluation interface shared by every profile family.
pub(crate) trait Curve: Send + Sync {
    /// CDF-style value: mass of phases `<= s` (right-continuous at steps).
    fn eval(&self, s: f64) -> f64;

    /// Strict value: mass of phases `< s` (left limit at steps). Coincides
    /// with `eval` everywhere a profile is continuous.
    fn eval_strict(&self, s: f64) -> f64 {
        self.eval(s)
    }

    /// Derivative where it exists.
    fn derivative(&self, s: f64) -> Result<f64>;

    fn kind(&self) -> &'static str;
}

/// An evaluable cumulative digit profile.
#[derive(Clone)]
pub struct Profile {
    curve: Arc<dyn Curve>,
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Profile")
            .field("kind", &self.curve.kind())
            .finish()
    }
}

impl Profile {
    pub(crate) fn from_curve(curve: Arc<dyn Curve>) -> Self {
        Profile { curve }
    }

    /// Step profile of an observed sample of phases.
    pub fn empirical(mut phases: Vec<f64>) -> Self {
        phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Profile::from_curve(Arc::new(EmpiricalCurve { phases }))
    }

    /// Monotone piecewise-linear profile on a uniform grid over `[0, 1]`.
    ///
    /// `values` are the knot values `G(i/(len-1))`; they must be
    /// nondecreasing with endpoints 0 and 1 within `1e-10`.
    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Validation(
                "a tabulated profile needs >= 2 knots".into(),
            ));
        }
        if (values[0]).abs() > 1e-10 || (values[values.len() - 1] - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "tabulated endpoints must be 0 and 1, got {} and {}",
                values[0],
                values[values.len() - 1]
            )));
        }
        if values.windows(2).any(|w| w[1] < w[0] - 1e-12) {
            return Err(Error::Validation(
                "tabulated profile must be nondecreasing".into(),
            ));
        }
        Ok(Profile::from_curve(Arc::new(TabulatedCurve { values })))
    }

    /// `G(s)`, right-continuous at steps.
    pub fn eval(&self, s: f64) -> f64 {
        self.curve.eval(s.clamp(0.0, 1.0))
    }

    /// `G(s^-)`: the strict variant used by the frequency formulas, so that
    /// a phase sitting exactly on a block boundary is counted in the block
    /// to its right, matching the indicator kernel.
    pub fn eval_strict(&self, s: f64) -> f64 {
        self.curve.eval_strict(s.clamp(0.0, 1.0))
    }

    /// `G'(s)` where the profile is differentiable.
    pub fn derivative(&self, s: f64) -> Result<f64> {
        self.curve.derivative(s)
    }

    pub fn kind(&self) -> &'static str {
        self.curve.kind()
    }

    /// Sampled curve `(s, G(s))` on `points` equally spaced knots.
    pub fn curve_points(&self, points: usize) -> Vec<(f64, f64)> {
        let n = points.max(2);
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                (s, self.eval(s))
            })
            .collect()
    }

    /// Check the profile invariants on a grid: endpoints within `1e-10`
    /// (exact in the strict sense for empirical steps) and nondecreasing.
    pub fn validate(&self, grid: usize) -> Result<()> {
        let start = self.eval_strict(0.0);
        let end = self.eval_strict(1.0);
        if start.abs() > 1e-10 {
            return Err(Error::Validation(format!("G(0) = {start}, expected 0")));
        }
        if (end - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("G(1) = {end}, expected 1")));
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=grid {
            let s = i as f64 / grid as f64;
            let v = self.eval(s);
            if v < prev - 1e-10 {
                return Err(Error::Validation(format!(
                    "profile decreases near s = {s}: {v} < {prev}"
                )));
            }
            prev = prev.max(v);
        }
        Ok(())
    }
}

/// Split phase representation of `log10(k) - shift`, done part-wise so no
/// precision is lost recombining exponent and phase.
fn shifted_parts(lp: LogPhase, shift: f64) -> (f64, f64) {
    let mut e = f64::from(lp.exponent);
    let mut s = lp.phase - shift;
    if s < 0.0 {
        s += 1.0;
        e -= 1.0;
    }
    (e, s)
}

/// Main frequency formula: the block-`k` frequency induced by profile `g`
/// with boundary-jump coefficient `a`.
///
/// For `a = 1` the frequencies over a full decade telescope to
/// `G(1) - G(0) = 1`.
///
/// ```
/// use digitlaw::{rho_from_profile, DigitBlock};
/// use digitlaw::profiles::benford_profile;
///
/// let g = benford_profile();
/// let k = DigitBlock::new(1).unwrap();
/// assert!((rho_from_profile(&g, 1.0, &k) - 2f64.log10()).abs() < 1e-15);
/// ```
pub fn rho_from_profile(g: &Profile, a: f64, k: &DigitBlock) -> f64 {
    let lp1 = log_phase(k.value() as f64).expect("block value is positive");
    let lp2 = log_phase((k.value() + 1) as f64).expect("block value is positive");
    let decade_jump = f64::from(lp2.exponent) - f64::from(lp1.exponent);
    a * decade_jump + g.eval_strict(lp2.phase) - g.eval_strict(lp1.phase)
}

/// Two-term shift representation of the same frequency:
/// `G(log10(k+1) - d) - G(log10 k - d)` with `G` extended across unit
/// intervals by `W(y) = floor(y) + G({y})`.
///
/// Equals [`rho_from_profile`] with `a = 1` bit-for-bit when `d = 0`.
pub fn rho_two_term(g: &Profile, k: &DigitBlock, shift: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&shift), "shift must lie in [0, 1)");
    let (e1, s1) = shifted_parts(log_phase(k.value() as f64).unwrap(), shift);
    let (e2, s2) = shifted_parts(log_phase((k.value() + 1) as f64).unwrap(), shift);
    let decade_jump = e2 - e1;
    1.0 * decade_jump + g.eval_strict(s2) - g.eval_strict(s1)
}

/// First-order large-`k` frequency approximation
/// `G'({log10 k}) / (k ln 10)`; the error of the exact formula against this
/// is `O(1/k^2)` wherever `G` is differentiable.
pub fn rho_asymptotic(g: &Profile, k: &DigitBlock) -> Result<f64> {
    let lp = log_phase(k.value() as f64).unwrap();
    let slope = g.derivative(lp.phase)?;
    Ok(slope / (k.value() as f64 * std::f64::consts::LN_10))
}

/// Cumulative digit mapping `W(x) = a*floor(x) + G({x})`.
#[derive(Debug, Clone)]
pub struct Cdm {
    pub a: f64,
    pub g: Profile,
}

impl Cdm {
    pub fn new(a: f64, g: Profile) -> Self {
        Cdm { a, g }
    }

    /// `W(x)`; nondecreasing whenever `a >= 1` and `g` is a valid profile.
    pub fn eval(&self, x: f64) -> f64 {
        let floor = x.floor();
        self.a * floor + self.g.eval_strict(x - floor)
    }

    /// Block frequency induced by this mapping.
    pub fn rho(&self, k: &DigitBlock) -> f64 {
        rho_from_profile(&self.g, self.a, k)
    }
}

// ---------------------------------------------------------------------------
// Step and tabulated curves
// ---------------------------------------------------------------------------

struct EmpiricalCurve {
    phases: Vec<f64>, // sorted ascending
}

impl Curve for EmpiricalCurve {
    fn eval(&self, s: f64) -> f64 {
        let count = self.phases.partition_point(|&p| p <= s);
        count as f64 / self.phases.len() as f64
    }

    fn eval_strict(&self, s: f64) -> f64 {
        let count = self.phases.partition_point(|&p| p < s);
        count as f64 / self.phases.len() as f64
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        // A step function: report the nearest jump instead of a slope.
        let idx = self.phases.partition_point(|&p| p < s);
        let at = self
            .phases
            .get(idx)
            .or_else(|| self.phases.last())
            .copied()
            .unwrap_or(s);
        Err(Error::NotDifferentiable {
            at,
            what: "empirical profile is a step function".into(),
        })
    }

    fn kind(&self) -> &'static str {
        "empirical"
    }
}

struct TabulatedCurve {
    values: Vec<f64>, // knots on a uniform grid over [0, 1]
}

impl TabulatedCurve {
    fn step(&self) -> f64 {
        1.0 / (self.values.len() - 1) as f64
    }

    fn interp(&self, s: f64) -> f64 {
        let n = self.values.len() - 1;
        let t = s.clamp(0.0, 1.0) * n as f64;
        let i = (t.floor() as usize).min(n - 1);
        let frac = t - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }
}

impl Curve for TabulatedCurve {
    fn eval(&self, s: f64) -> f64 {
        self.interp(s)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        let h = self.step();
        let s = s.clamp(0.0, 1.0);
        let forward = (self.interp((s + h).min(1.0)) - self.interp(s)) / h;
        let backward = (self.interp(s) - self.interp((s - h).max(0.0))) / h;
        if s > h && s < 1.0 - h {
            let hi = forward.abs().max(backward.abs());
            let lo = forward.abs().min(backward.abs());
            if lo > 0.0 && hi / lo > 50.0 {
                return Err(Error::NotDifferentiable {
                    at: s,
                    what: "one-sided slopes disagree (jump or kink)".into(),
                });
            }
            // Central difference with one Richardson refinement.
            let d1 = (self.interp(s + h) - self.interp(s - h)) / (2.0 * h);
            let h2 = h / 2.0;
            let d2 = (self.interp(s + h2) - self.interp(s - h2)) / (2.0 * h2);
            Ok((4.0 * d2 - d1) / 3.0)
        } else if s <= h {
            Ok(forward)
        } else {
            Ok(backward)
        }
    }

    fn kind(&self) -> &'static str {
        "tabulated"
    }
}
