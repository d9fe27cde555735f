//! Closed-form profile families.

use std::f64::consts::LN_10;
use std::sync::Arc;

use super::{Curve, Profile, WindowSpec};
use crate::density::DecadeEquivalent;
use crate::digitcore::{log_phase, DigitBlock};
use crate::error::{Error, Result};
use crate::quad;
use crate::rng::Rng;

/// The diagonal profile `G(s) = s`; induces the logarithmic digit law.
pub fn benford_profile() -> Profile {
    Profile::from_curve(Arc::new(BenfordCurve))
}

struct BenfordCurve;

impl Curve for BenfordCurve {
    fn eval(&self, s: f64) -> f64 {
        s
    }

    fn derivative(&self, _s: f64) -> Result<f64> {
        Ok(1.0)
    }

    fn kind(&self) -> &'static str {
        "benford"
    }
}

/// Parameters of the power-law family: density `p x^(p-1) / b^p` on
/// `[0, b]`, optionally restricted to `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawParams {
    /// Exponent; `p -> 0` degenerates to the diagonal profile.
    pub exponent: f64,
    /// Upper bound of the support.
    pub upper: f64,
    /// Optional lower bound (0 means the full `[0, b]` support).
    pub lower: f64,
}

impl PowerLawParams {
    pub fn new(exponent: f64, upper: f64) -> Result<Self> {
        PowerLawParams::with_lower(exponent, upper, 0.0)
    }

    pub fn with_lower(exponent: f64, upper: f64, lower: f64) -> Result<Self> {
        if !(upper.is_finite() && upper > 0.0) {
            return Err(Error::Domain(format!(
                "power-law upper bound {upper} invalid"
            )));
        }
        if !exponent.is_finite() || exponent < -1.0 {
            return Err(Error::Domain(format!(
                "power-law exponent must be >= -1, got {exponent}"
            )));
        }
        if !(0.0..upper).contains(&lower) {
            return Err(Error::Domain(format!(
                "power-law lower bound must satisfy 0 <= a < b, got a={lower}, b={upper}"
            )));
        }
        if lower > 0.0 && exponent <= 0.0 {
            return Err(Error::Domain(
                "windowed power-law profile needs a positive exponent".into(),
            ));
        }
        Ok(PowerLawParams {
            exponent,
            upper,
            lower,
        })
    }
}

/// Exponents closer to zero than this are evaluated as the analytic
/// `p -> 0` limit `G(s) = s` instead of through the `10^p - 1` denominator.
const POWERLAW_EXPONENT_EPS: f64 = 1e-9;

/// Digit profile of the power-law density.
///
/// For `b` an exact power of ten this is `(10^(p s) - 1)/(10^p - 1)`; for
/// other bounds the curve is continuous but has a kink (a slope jump) at
/// `s = {log10 b}`, where the truncated top decade stops contributing.
pub fn powerlaw_profile(params: &PowerLawParams) -> Result<Profile> {
    if params.exponent.abs() < POWERLAW_EXPONENT_EPS {
        return Ok(benford_profile());
    }
    if params.lower > 0.0 {
        let b_curve = PowerLawCurve::new(params.exponent, params.upper)?;
        let a_curve = PowerLawCurve::new(params.exponent, params.lower)?;
        let wb = params.upper.powf(params.exponent);
        let wa = params.lower.powf(params.exponent);
        return Ok(Profile::from_curve(Arc::new(PowerLawWindowCurve {
            upper: b_curve,
            lower: a_curve,
            weight_upper: wb / (wb - wa),
            weight_lower: wa / (wb - wa),
        })));
    }
    Ok(Profile::from_curve(Arc::new(PowerLawCurve::new(
        params.exponent,
        params.upper,
    )?)))
}

struct PowerLawCurve {
    exponent: f64,
    /// `{log10 b}`; using only the fractional part makes the profile
    /// exactly periodic in `log10 b`.
    bound_phase: f64,
    /// `10^p / (10^p - 1)`.
    scale: f64,
}

impl PowerLawCurve {
    fn new(exponent: f64, upper: f64) -> Result<Self> {
        let bound_phase = log_phase(upper)?.phase;
        let tens = 10f64.powf(exponent);
        Ok(PowerLawCurve {
            exponent,
            bound_phase,
            scale: tens / (tens - 1.0),
        })
    }

    fn value(&self, s: f64) -> f64 {
        let p = self.exponent;
        let r = self.bound_phase - s;
        let r_floor = r.floor();
        let r_frac = r - r_floor;
        -r_floor - self.scale * 10f64.powf(-p * self.bound_phase)
            + self.scale * 10f64.powf(-p * r_frac)
    }

    fn slope(&self, s: f64) -> Result<f64> {
        let kink = self.bound_phase;
        if kink > 0.0 && (s - kink).abs() < 1e-12 {
            return Err(Error::NotDifferentiable {
                at: kink,
                what: "power-law profile has a kink where the support bound cuts the decade".into(),
            });
        }
        let p = self.exponent;
        let r = self.bound_phase - s;
        let r_frac = r - r.floor();
        Ok(self.scale * p * LN_10 * 10f64.powf(-p * r_frac))
    }
}

impl Curve for PowerLawCurve {
    fn eval(&self, s: f64) -> f64 {
        self.value(s)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        self.slope(s)
    }

    fn kind(&self) -> &'static str {
        "power-law"
    }
}

struct PowerLawWindowCurve {
    upper: PowerLawCurve,
    lower: PowerLawCurve,
    weight_upper: f64,
    weight_lower: f64,
}

impl Curve for PowerLawWindowCurve {
    fn eval(&self, s: f64) -> f64 {
        self.weight_upper * self.upper.value(s) - self.weight_lower * self.lower.value(s)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        Ok(self.weight_upper * self.upper.slope(s)? - self.weight_lower * self.lower.slope(s)?)
    }

    fn kind(&self) -> &'static str {
        "power-law-window"
    }
}

/// Windowed power-law profile value on `[a, b]` via the normalization
/// `G(s,[a,b]) = (b^p G(s,[0,b]) - a^p G(s,[0,a])) / (b^p - a^p)`.
pub fn powerlaw_window(s: f64, lower: f64, upper: f64, exponent: f64) -> Result<f64> {
    if lower == 0.0 {
        let g = powerlaw_profile(&PowerLawParams::new(exponent, upper)?)?;
        return Ok(g.eval(s));
    }
    if exponent <= 0.0 {
        return Err(Error::Domain(
            "windowed power-law profile needs a positive exponent".into(),
        ));
    }
    let g = powerlaw_profile(&PowerLawParams::with_lower(exponent, upper, lower)?)?;
    Ok(g.eval(s))
}

/// Extremes of the power-law block frequency `rho(k, b, p)` over the upper
/// bound `b`. The frequency is periodic in `log10 b` with period 1; the
/// maximum is attained at `{log10 b} = {log10(k+1)}` and the minimum at
/// `{log10 b} = {log10 k}`:
///
/// ```text
/// max = 10^p (1 - (k+1)^-p k^p) / (10^p - 1)
/// min = ((k+1)^p k^-p - 1) / (10^p - 1)
/// ```
pub fn powerlaw_rho_extrema(k: &DigitBlock, exponent: f64) -> Result<(f64, f64)> {
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(Error::Domain(format!(
            "extrema formulas need a positive exponent, got {exponent}"
        )));
    }
    let p = exponent;
    let kf = k.value() as f64;
    let tens = 10f64.powf(p);
    let ratio = ((kf + 1.0) / kf).powf(p);
    let max = tens * (1.0 - 1.0 / ratio) / (tens - 1.0);
    let min = (ratio - 1.0) / (tens - 1.0);
    Ok((max, min))
}

/// Digit profile of the ratio of two independent Uniform(0,1) variables:
/// `G(s) = 1/2 + 10^s/18 - (5/9) 10^-s`.
pub fn ratio_uniforms_profile() -> Profile {
    Profile::from_curve(Arc::new(RatioUniformsCurve))
}

struct RatioUniformsCurve;

impl Curve for RatioUniformsCurve {
    fn eval(&self, s: f64) -> f64 {
        0.5 + 10f64.powf(s) / 18.0 - (5.0 / 9.0) * 10f64.powf(-s)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        Ok(LN_10 * (10f64.powf(s) / 18.0 + (5.0 / 9.0) * 10f64.powf(-s)))
    }

    fn kind(&self) -> &'static str {
        "ratio-uniforms"
    }
}

/// Closed-form block frequency for the ratio of uniforms, with
/// `n = floor(log10 k)` the block's scale:
/// `rho(k) = 10^-n/18 - (5/9) 10^n (1/(k+1) - 1/k)`.
pub fn ratio_uniforms_rho(k: &DigitBlock) -> f64 {
    let n = k.decade();
    let kf = k.value() as f64;
    10f64.powi(-n) / 18.0 - (5.0 / 9.0) * 10f64.powi(n) * (1.0 / (kf + 1.0) - 1.0 / kf)
}

/// The single-decade density on `[1, 10]` whose profile coincides with the
/// ratio-of-uniforms profile: `f(x) = 1/18 + 5/(9 x^2)`.
pub fn equivalent_density_on_decade() -> DecadeEquivalent {
    DecadeEquivalent
}

/// Which window of the product-of-two-uniforms distribution to profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductUniformsVariant {
    /// Phases aggregated over the full support `(0, 1)`:
    /// `G(s) = 10^s (A s + B) - B` with `A = -ln10/9`, `B = 1/9 + 10 ln10/81`.
    Aggregate,
    /// Restricted to the last decade `[0.1, 1]` via the CDF:
    /// `G(s) = (10^s [1 + (1-s) ln10] - (1 + ln10)) / (9 - ln10)`.
    LastDecade,
}

/// Digit profile of the product of two independent Uniform(0,1) variables.
pub fn product_uniforms_profile(variant: ProductUniformsVariant) -> Profile {
    match variant {
        ProductUniformsVariant::Aggregate => Profile::from_curve(Arc::new(ProductAggregateCurve)),
        ProductUniformsVariant::LastDecade => Profile::from_curve(Arc::new(ProductLastDecadeCurve)),
    }
}

struct ProductAggregateCurve;

impl ProductAggregateCurve {
    const A: f64 = -LN_10 / 9.0;
    const B: f64 = 1.0 / 9.0 + 10.0 * LN_10 / 81.0;
}

impl Curve for ProductAggregateCurve {
    fn eval(&self, s: f64) -> f64 {
        10f64.powf(s) * (Self::A * s + Self::B) - Self::B
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        let pow = 10f64.powf(s);
        Ok(LN_10 * pow * (Self::A * s + Self::B) + pow * Self::A)
    }

    fn kind(&self) -> &'static str {
        "product-uniforms"
    }
}

struct ProductLastDecadeCurve;

impl Curve for ProductLastDecadeCurve {
    fn eval(&self, s: f64) -> f64 {
        (10f64.powf(s) * (1.0 + (1.0 - s) * LN_10) - (1.0 + LN_10)) / (9.0 - LN_10)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        Ok(LN_10 * LN_10 * (1.0 - s) * 10f64.powf(s) / (9.0 - LN_10))
    }

    fn kind(&self) -> &'static str {
        "product-uniforms-window"
    }
}

/// Empirical profile of a product of `factors` independent uniforms,
/// estimated from `samples` Monte Carlo draws. The phase distribution
/// flattens toward the diagonal as the factor count grows.
pub fn product_uniforms_limit_profile(factors: u32, samples: usize, seed: u64) -> Result<Profile> {
    if factors == 0 {
        return Err(Error::Domain("need at least one uniform factor".into()));
    }
    if samples == 0 {
        return Err(Error::EmptyInput("need at least one sample".into()));
    }
    let mut rng = Rng::new(seed);
    let mut phases = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut product = 1.0f64;
        for _ in 0..factors {
            product *= rng.next_open_f64();
        }
        phases.push(log_phase(product)?.phase);
    }
    Ok(Profile::empirical(phases))
}

/// Profile of a scale-invariant density `f(x) = psi({log10 x}) / x` over a
/// window of `L` consecutive decades: `G(s) = L ln10 * integral_0^s psi`.
///
/// `psi` must be normalized so `L ln10 * integral_0^1 psi = 1`; anything
/// else is rejected with the measured integral.
pub fn scale_invariant_profile<F>(psi: F, window: WindowSpec) -> Result<Profile>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let scale = f64::from(window.len()) * LN_10;
    let total = quad::integrate(&psi, 0.0, 1.0, 1e-11)?;
    if (scale * total - 1.0).abs() > 1e-6 {
        return Err(Error::Normalization {
            what: format!("scale-invariant generator over {} decades", window.len()),
            measured: scale * total,
            tol: 1e-6,
        });
    }
    Ok(Profile::from_curve(Arc::new(ScaleInvariantCurve {
        psi: Arc::new(psi),
        scale,
    })))
}

struct ScaleInvariantCurve {
    psi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    scale: f64,
}

impl Curve for ScaleInvariantCurve {
    fn eval(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let psi = &self.psi;
        self.scale * quad::integrate(&|t| psi(t), 0.0, s, 1e-12).unwrap_or(f64::NAN)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        Ok(self.scale * (self.psi)(s))
    }

    fn kind(&self) -> &'static str {
        "scale-invariant"
    }
}

/// Windowed profile of an arbitrary distribution function over the decades
/// `[10^m, 10^n)`:
///
/// ```text
/// G(s) = sum_{i=m}^{n-1} [F(10^(i+s)) - F(10^i)] / [F(10^n) - F(10^m)]
/// ```
pub fn windowed_profile_from_cdf<F>(cdf: F, window: WindowSpec) -> Result<Profile>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let mass = cdf(10f64.powi(window.high)) - cdf(10f64.powi(window.low));
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::DegenerateWindow(format!(
            "window [{}, {}) carries mass {mass}",
            window.low, window.high
        )));
    }
    Ok(Profile::from_curve(Arc::new(CdfWindowCurve {
        cdf: Arc::new(cdf),
        window,
        mass,
    })))
}

struct CdfWindowCurve {
    cdf: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    window: WindowSpec,
    mass: f64,
}

impl CdfWindowCurve {
    fn value(&self, s: f64) -> f64 {
        let cdf = &self.cdf;
        let mut sum = 0.0;
        for i in self.window.low..self.window.high {
            sum += cdf(10f64.powf(f64::from(i) + s)) - cdf(10f64.powi(i));
        }
        sum / self.mass
    }
}

impl Curve for CdfWindowCurve {
    fn eval(&self, s: f64) -> f64 {
        self.value(s)
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        // The underlying F is only known pointwise; central differences.
        let h = 1e-6;
        let lo = (s - h).max(0.0);
        let hi = (s + h).min(1.0);
        Ok((self.value(hi) - self.value(lo)) / (hi - lo))
    }

    fn kind(&self) -> &'static str {
        "cdf-window"
    }
}
