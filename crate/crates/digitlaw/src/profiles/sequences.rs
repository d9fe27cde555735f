//! Digit profiles of deterministic sequences.

use std::f64::consts::LN_10;
use std::sync::Arc;

use super::{Curve, Profile};
use crate::digitcore::log_phase;
use crate::error::{Error, Result};

/// Exact digit profile of the arithmetic sequence `a_i = alpha*i + beta`,
/// `i = 1..=n`: the empirical step function of the terms' phases.
pub fn arithmetic_sequence_profile(alpha: f64, beta: f64, n: u64) -> Result<Profile> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!(
            "slope alpha must be > 0, got {alpha}"
        )));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!(
            "offset beta must be >= 0, got {beta}"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyInput("arithmetic sequence needs n >= 1".into()));
    }
    let mut phases = Vec::with_capacity(n as usize);
    for i in 1..=n {
        phases.push(log_phase(alpha * i as f64 + beta)?.phase);
    }
    Ok(Profile::empirical(phases))
}

/// Large-`n` limit profile of an arithmetic sequence, parameterized by the
/// phase `{log10 b}` of the normalized endpoint `b = (alpha n + beta)/nu`:
///
/// ```text
/// J(s) = (10/9) 10^-{beta_b - s} - (10/9) 10^-beta_b - floor(beta_b - s)
/// ```
///
/// evaluated here in its two-branch form, which hits `J(0) = 0` and
/// `J(1) = 1` exactly. `{log10 b} = 0` gives the uniform slice
/// `(10^s - 1)/9`.
pub fn arithmetic_limit_profile(endpoint_phase: f64) -> Result<Profile> {
    if !(0.0..1.0).contains(&endpoint_phase) {
        return Err(Error::Domain(format!(
            "endpoint phase must lie in [0, 1), got {endpoint_phase}"
        )));
    }
    Ok(Profile::from_curve(Arc::new(ArithmeticLimitCurve {
        beta: endpoint_phase,
    })))
}

pub(crate) struct ArithmeticLimitCurve {
    pub(crate) beta: f64,
}

impl ArithmeticLimitCurve {
    pub(crate) fn value(&self, s: f64) -> f64 {
        let scale = 10f64.powf(-self.beta);
        if s <= self.beta {
            (10.0 / 9.0) * scale * (10f64.powf(s) - 1.0)
        } else {
            1.0 + scale * (10f64.powf(s) - 10.0) / 9.0
        }
    }
}

impl Curve for ArithmeticLimitCurve {
    fn eval(&self, s: f64) -> f64 {
        self.value(s)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        if self.beta > 0.0 && (s - self.beta).abs() < 1e-12 {
            return Err(Error::NotDifferentiable {
                at: self.beta,
                what: "limit profile has a kink at the endpoint phase".into(),
            });
        }
        let scale = 10f64.powf(-self.beta) * 10f64.powf(s) * LN_10;
        if s < self.beta {
            Ok((10.0 / 9.0) * scale)
        } else {
            Ok(scale / 9.0)
        }
    }

    fn kind(&self) -> &'static str {
        "arithmetic-limit"
    }
}

/// Exact digit profile of the power sequence `x_i = i^alpha`, `i = 1..=n`.
pub fn power_sequence_profile(alpha: f64, n: u64) -> Result<Profile> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!(
            "exponent alpha must be > 0, got {alpha}"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyInput("power sequence needs n >= 1".into()));
    }
    let mut phases = Vec::with_capacity(n as usize);
    if alpha == 1.0 {
        for i in 1..=n {
            phases.push(log_phase(i as f64)?.phase);
        }
    } else {
        for i in 1..=n {
            // {alpha * log10 i} without forming i^alpha, which overflows
            // long before the phase loses meaning.
            let t = alpha * (i as f64).log10();
            phases.push(t - t.floor());
        }
    }
    Ok(Profile::empirical(phases))
}

/// Integral companion of [`power_sequence_profile`]: the sum over indices
/// replaced by the integral with effective density `(1/alpha) y^(1/alpha-1)`
/// over `[1, n^alpha]`, normalized to total mass one.
pub fn power_sequence_integral_profile(alpha: f64, n: u64) -> Result<Profile> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!(
            "exponent alpha must be > 0, got {alpha}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(
            "the integral approximation needs n >= 2".into(),
        ));
    }
    Ok(Profile::from_curve(Arc::new(PowerIntegralCurve {
        alpha,
        top: alpha * (n as f64).log10(),
    })))
}

struct PowerIntegralCurve {
    alpha: f64,
    /// `log10(n^alpha)`.
    top: f64,
}

impl Curve for PowerIntegralCurve {
    fn eval(&self, s: f64) -> f64 {
        // Per decade j: the phase window [10^j, 10^(j+s)) capped at the
        // sequence endpoint contributes y^(1/alpha) mass.
        let inv = 1.0 / self.alpha;
        let total = 10f64.powf(self.top * inv) - 1.0;
        let mut sum = 0.0;
        let decades = self.top.ceil() as i32;
        for j in 0..=decades {
            let lo = f64::from(j);
            if lo >= self.top {
                break;
            }
            let hi = (lo + s).min(self.top);
            if hi > lo {
                sum += 10f64.powf(hi * inv) - 10f64.powf(lo * inv);
            }
        }
        sum / total
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        let kink = self.top - self.top.floor();
        if kink > 0.0 && (s - kink).abs() < 1e-12 {
            return Err(Error::NotDifferentiable {
                at: kink,
                what: "integral profile has a kink at the endpoint phase".into(),
            });
        }
        let inv = 1.0 / self.alpha;
        let total = 10f64.powf(self.top * inv) - 1.0;
        let mut sum = 0.0;
        let decades = self.top.ceil() as i32;
        for j in 0..=decades {
            let lo = f64::from(j);
            if lo >= self.top || lo + s >= self.top {
                break;
            }
            sum += inv * LN_10 * 10f64.powf((lo + s) * inv);
        }
        Ok(sum / total)
    }

    fn kind(&self) -> &'static str {
        "power-sequence-integral"
    }
}
