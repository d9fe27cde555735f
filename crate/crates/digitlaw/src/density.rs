//! Probability densities on the positive half-line.
//!
//! Every density knows its pdf, cdf, and support; the trait adds generic
//! quantile and mass-bound helpers so integration routines can truncate
//! infinite supports to the decades that actually carry mass.

use std::f64::consts::{LN_10, SQRT_2};

use crate::error::{Error, Result};

/// A probability density on `(0, inf)` (possibly with compact support).
pub trait Density: Send + Sync {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    /// Support interval; either end may be infinite.
    fn support(&self) -> (f64, f64);
    fn name(&self) -> String;

    /// `q`-quantile, by bisection on the cdf unless overridden.
    fn quantile(&self, q: f64) -> f64 {
        assert!((0.0..=1.0).contains(&q));
        let (lo, hi) = self.support();
        let mut lo = if lo > 0.0 { lo } else { 1e-300 };
        let mut hi = if hi.is_finite() {
            hi
        } else {
            grow_upper(self, lo)
        };
        for _ in 0..200 {
            let mid = if lo > 0.0 && hi / lo > 1e3 {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            };
            if self.cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi.abs() {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Interval outside which at most `eps` of the mass lives.
    fn mass_bounds(&self, eps: f64) -> (f64, f64) {
        let (lo, hi) = self.support();
        let lo = if lo > 0.0 { lo } else { self.quantile(eps) };
        let hi = if hi.is_finite() {
            hi
        } else {
            self.quantile(1.0 - eps)
        };
        (lo, hi)
    }
}

fn grow_upper(d: &(impl Density + ?Sized), lo: f64) -> f64 {
    let mut hi = lo.max(1.0);
    for _ in 0..2100 {
        if self_cdf_close_to_one(d, hi) {
            return hi;
        }
        hi *= 2.0;
    }
    hi
}

fn self_cdf_close_to_one(d: &(impl Density + ?Sized), x: f64) -> bool {
    d.cdf(x) >= 1.0 - 1e-16
}

/// Log-uniform density `1/(x ln 10)` on `[10^low, 10^high]`; the density
/// whose digit profile is exactly the diagonal.
#[derive(Debug, Clone)]
pub struct LogUniform {
    pub low_decade: i32,
    pub high_decade: i32,
}

impl LogUniform {
    pub fn unit_decade() -> Self {
        LogUniform {
            low_decade: 0,
            high_decade: 1,
        }
    }
}

impl Density for LogUniform {
    fn pdf(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x < a || x > b {
            0.0
        } else {
            1.0 / (x * LN_10 * f64::from(self.high_decade - self.low_decade))
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x <= a {
            0.0
        } else if x >= b {
            1.0
        } else {
            (x.log10() - f64::from(self.low_decade)) / f64::from(self.high_decade - self.low_decade)
        }
    }

    fn support(&self) -> (f64, f64) {
        (10f64.powi(self.low_decade), 10f64.powi(self.high_decade))
    }

    fn name(&self) -> String {
        format!("log-uniform[{}..{}]", self.low_decade, self.high_decade)
    }
}

/// Uniform density on `(0, b)`.
#[derive(Debug, Clone)]
pub struct Uniform {
    pub upper: f64,
}

impl Uniform {
    pub fn new(upper: f64) -> Result<Self> {
        if !(upper.is_finite() && upper > 0.0) {
            return Err(Error::Domain(format!(
                "uniform upper bound {upper} invalid"
            )));
        }
        Ok(Uniform { upper })
    }
}

impl Density for Uniform {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= self.upper {
            0.0
        } else {
            1.0 / self.upper
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        (x / self.upper).clamp(0.0, 1.0)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.upper)
    }

    fn name(&self) -> String {
        format!("uniform(0,{})", self.upper)
    }
}

/// Density of `Y/X` for independent `X, Y ~ Uniform(0,1)`:
/// constant `1/2` below 1, tail `1/(2 z^2)` above.
#[derive(Debug, Clone, Default)]
pub struct RatioUniforms;

impl Density for RatioUniforms {
    fn pdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            0.0
        } else if z < 1.0 {
            0.5
        } else {
            0.5 / (z * z)
        }
    }

    fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            0.0
        } else if z < 1.0 {
            0.5 * z
        } else {
            1.0 - 0.5 / z
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn name(&self) -> String {
        "ratio-uniforms".into()
    }

    fn quantile(&self, q: f64) -> f64 {
        if q <= 0.5 {
            2.0 * q
        } else {
            0.5 / (1.0 - q)
        }
    }
}

/// Density of the product of `n` independent Uniform(0,1) variables:
/// `(-ln z)^(n-1) / (n-1)!` on `(0, 1)`.
#[derive(Debug, Clone)]
pub struct ProductUniforms {
    pub factors: u32,
}

impl ProductUniforms {
    pub fn new(factors: u32) -> Result<Self> {
        if factors == 0 || factors > 20 {
            return Err(Error::Domain(format!(
                "product of uniforms supports 1..=20 factors, got {factors}"
            )));
        }
        Ok(ProductUniforms { factors })
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl Density for ProductUniforms {
    fn pdf(&self, z: f64) -> f64 {
        if z <= 0.0 || z >= 1.0 {
            return 0.0;
        }
        let n = self.factors;
        (-z.ln()).powi(n as i32 - 1) / factorial(n - 1)
    }

    fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        if z >= 1.0 {
            return 1.0;
        }
        // P(Z <= z) = z * sum_{j<n} (-ln z)^j / j!  (regularized upper gamma).
        let t = -z.ln();
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..self.factors {
            term *= t / f64::from(j);
            sum += term;
        }
        z * sum
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn name(&self) -> String {
        format!("product-uniforms({})", self.factors)
    }
}

/// The density `1/18 + 5/(9 x^2)` on `[1, 10]`: supported on a single
/// decade yet carrying the same digit profile as the ratio of uniforms.
#[derive(Debug, Clone, Default)]
pub struct DecadeEquivalent;

impl Density for DecadeEquivalent {
    fn pdf(&self, x: f64) -> f64 {
        if !(1.0..=10.0).contains(&x) {
            0.0
        } else {
            1.0 / 18.0 + 5.0 / (9.0 * x * x)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else if x >= 10.0 {
            1.0
        } else {
            (x - 1.0) / 18.0 + (5.0 / 9.0) * (1.0 - 1.0 / x)
        }
    }

    fn support(&self) -> (f64, f64) {
        (1.0, 10.0)
    }

    fn name(&self) -> String {
        "decade-equivalent".into()
    }
}

/// Two-parameter Weibull density.
#[derive(Debug, Clone, Copy)]
pub struct Weibull {
    pub shape: f64,
    pub scale: f64,
}

impl Weibull {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0) {
            return Err(Error::Domain(format!(
                "weibull parameters (shape={shape}, scale={scale}) invalid"
            )));
        }
        Ok(Weibull { shape, scale })
    }

    /// Log-density, stable for extreme arguments.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let (a, b) = (self.shape, self.scale);
        let t = x / b;
        a.ln() - b.ln() + (a - 1.0) * t.ln() - t.powf(a)
    }
}

impl Density for Weibull {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (a, b) = (self.shape, self.scale);
        let t = x / b;
        (a / b) * t.powf(a - 1.0) * (-t.powf(a)).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-((x / self.scale).powf(self.shape))).exp_m1()
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn name(&self) -> String {
        format!("weibull({},{})", self.shape, self.scale)
    }

    fn quantile(&self, q: f64) -> f64 {
        self.scale * (-(1.0 - q).ln()).powf(1.0 / self.shape)
    }
}

/// Power-law density `p x^(p-1) / b^p` on `[0, b]`, `p > 0`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLaw {
    pub exponent: f64,
    pub upper: f64,
}

impl PowerLaw {
    pub fn new(exponent: f64, upper: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0 && upper.is_finite() && upper > 0.0) {
            return Err(Error::Domain(format!(
                "power-law parameters (p={exponent}, b={upper}) invalid"
            )));
        }
        Ok(PowerLaw { exponent, upper })
    }
}

impl Density for PowerLaw {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x > self.upper {
            0.0
        } else {
            self.exponent * x.powf(self.exponent - 1.0) / self.upper.powf(self.exponent)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= self.upper {
            1.0
        } else {
            (x / self.upper).powf(self.exponent)
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.upper)
    }

    fn name(&self) -> String {
        format!("power-law({},{})", self.exponent, self.upper)
    }

    fn quantile(&self, q: f64) -> f64 {
        self.upper * q.powf(1.0 / self.exponent)
    }
}

/// Lognormal density: `ln X ~ Normal(mu, sigma^2)`.
#[derive(Debug, Clone, Copy)]
pub struct LogNormal {
    pub mu: f64,
    pub sigma: f64,
}

impl LogNormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Domain(format!(
                "lognormal parameters (mu={mu}, sigma={sigma}) invalid"
            )));
        }
        Ok(LogNormal { mu, sigma })
    }
}

impl Density for LogNormal {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.mu) / self.sigma;
        (-0.5 * z * z).exp() / (x * self.sigma * (2.0 * std::f64::consts::PI).sqrt())
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            standard_normal_cdf((x.ln() - self.mu) / self.sigma)
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn name(&self) -> String {
        format!("lognormal({},{})", self.mu, self.sigma)
    }
}

/// Normal density restricted to `(0, inf)` and renormalized.
#[derive(Debug, Clone, Copy)]
pub struct PositiveNormal {
    pub mu: f64,
    pub sigma: f64,
    mass: f64,
}

impl PositiveNormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Domain(format!(
                "normal parameters (mu={mu}, sigma={sigma}) invalid"
            )));
        }
        let mass = 1.0 - standard_normal_cdf(-mu / sigma);
        if mass <= 1e-300 {
            return Err(Error::DegenerateWindow(
                "normal distribution has no mass on (0, inf)".into(),
            ));
        }
        Ok(PositiveNormal { mu, sigma, mass })
    }
}

impl Density for PositiveNormal {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x - self.mu) / self.sigma;
        (-0.5 * z * z).exp() / (self.sigma * (2.0 * std::f64::consts::PI).sqrt() * self.mass)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let below_zero = standard_normal_cdf(-self.mu / self.sigma);
        ((standard_normal_cdf((x - self.mu) / self.sigma) - below_zero) / self.mass).clamp(0.0, 1.0)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn name(&self) -> String {
        format!("normal+({},{})", self.mu, self.sigma)
    }
}

/// Standard normal CDF, accurate to roughly one ulp of `erf`.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Total mass of a density over its practical support, integrated decade
/// by decade so widely spread supports stay well conditioned.
pub fn total_mass(d: &dyn Density, tail_eps: f64, tol: f64) -> Result<f64> {
    let (lo, hi) = d.mass_bounds(tail_eps);
    let lo_exp = lo.log10().floor() as i32;
    let hi_exp = hi.log10().ceil() as i32;
    let spans = (hi_exp - lo_exp).max(1) as f64;
    let per_decade = tol / spans;
    let mut mass = 0.0;
    for j in lo_exp..hi_exp {
        let a = 10f64.powi(j).max(lo);
        let b = 10f64.powi(j + 1).min(hi);
        if b > a {
            mass += crate::quad::integrate(&|x| d.pdf(x), a, b, per_decade)?;
        }
    }
    Ok(mass)
}
