//! The Euler–Maclaurin bridge between densities and digit frequencies.
//!
//! For a density `f` on the positive half-line, the block-`k` frequency is
//! the integral of `f` against the indicator kernel `V(k, .)`, and the sum
//! over decades decomposes exactly as `rho = J1 + J3`: `J1` is the
//! logarithmic (Benford) term `log10((k+1)/k) * mass`, the boundary term
//! `J2` vanishes, and `J3` carries the entire deviation from the
//! logarithmic law. `J3 = 0` for every block exactly when the density is
//! log-uniform.

use std::sync::Arc;

use serde::Serialize;

use crate::density::Density;
use crate::digitcore::DigitBlock;
use crate::error::{Error, Result};
use crate::profiles::{Curve, Profile};
use crate::quad;

/// Default absolute quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Block intervals with less mass than this are truncated away.
const INTERVAL_MASS_FLOOR: f64 = 1e-15;

/// Exact decomposition of a block frequency.
#[derive(Debug, Clone, Serialize)]
pub struct EmReport {
    pub k: u64,
    /// Logarithmic term `log10((k+1)/k) * total mass`.
    pub j1: f64,
    /// Deviation term; zero exactly for the log-uniform density.
    pub j3: f64,
    /// Block frequency `integral of f * V(k, .)`.
    pub rho: f64,
    /// Benford reference `log10((k+1)/k)`.
    pub benford_rho: f64,
}

impl EmReport {
    /// Signed deviation of the block frequency from the Benford reference.
    pub fn deviation(&self) -> f64 {
        self.rho - self.benford_rho
    }
}

fn check_normalized(f: &dyn Density) -> Result<f64> {
    let mass = crate::density::total_mass(f, 1e-15, 1e-10)?;
    if (mass - 1.0).abs() > 1e-8 {
        return Err(Error::Normalization {
            what: f.name(),
            measured: mass,
            tol: 1e-8,
        });
    }
    Ok(mass)
}

/// The decade copies `[k 10^j, (k+1) 10^j)` of block `k` clipped to
/// `[lo, hi]`, lowest decade first.
fn block_intervals(k: u64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let kf = k as f64;
    // j index range where the interval can intersect [lo, hi].
    let j_min = (lo / (kf + 1.0)).log10().floor() as i32;
    let j_max = (hi / kf).log10().ceil() as i32;
    let mut intervals = Vec::new();
    for j in j_min..=j_max {
        let scale = 10f64.powi(j);
        let a = (kf * scale).max(lo);
        let b = ((kf + 1.0) * scale).min(hi);
        if b > a {
            intervals.push((a, b));
        }
    }
    intervals
}

/// Block frequency `rho(k) = integral f(x) V(k, x) dx`, by adaptive
/// quadrature over every decade copy of the block inside the support.
pub fn rho_integral(f: &dyn Density, k: &DigitBlock, tol: f64) -> Result<f64> {
    check_normalized(f)?;
    rho_integral_unchecked(f, k, tol)
}

fn rho_integral_unchecked(f: &dyn Density, k: &DigitBlock, tol: f64) -> Result<f64> {
    let (lo, hi) = f.mass_bounds(1e-15);
    let intervals = block_intervals(k.value(), lo, hi);
    if intervals.is_empty() {
        return Ok(0.0);
    }
    let per_interval = tol / (2.0 * intervals.len() as f64);
    let mut rho = 0.0;
    for (a, b) in intervals {
        if quad::estimate(&|x| f.pdf(x), a, b).abs() < INTERVAL_MASS_FLOOR {
            continue;
        }
        rho += quad::integrate(&|x| f.pdf(x), a, b, per_interval)?;
    }
    Ok(rho)
}

/// Exact `rho = J1 + J3` decomposition for block `k`.
pub fn em_decompose(f: &dyn Density, k: &DigitBlock, tol: f64) -> Result<EmReport> {
    let mass = check_normalized(f)?;
    let kf = k.value() as f64;
    let benford_rho = ((kf + 1.0) / kf).log10();
    let j1 = benford_rho * mass;
    let rho = rho_integral_unchecked(f, k, tol)?;
    Ok(EmReport {
        k: k.value(),
        j1,
        j3: rho - j1,
        rho,
        benford_rho,
    })
}

/// Digit profile of a density: `G(s) = integral f(x) M(s, x) dx`, i.e. the
/// mass carried by phases below `s`, evaluated by per-decade quadrature at
/// the queried point (no interpolation error).
pub fn profile_from_density(f: Arc<dyn Density>, tol: f64) -> Result<Profile> {
    let mass = check_normalized(f.as_ref())?;
    let (lo, hi) = f.mass_bounds(1e-15);
    let low_decade = lo.log10().floor() as i32;
    let high_decade = hi.log10().ceil() as i32;
    Ok(Profile::from_curve(Arc::new(PhaseMassCurve {
        density: f,
        tol,
        mass,
        lo,
        hi,
        low_decade,
        high_decade,
    })))
}

struct PhaseMassCurve {
    density: Arc<dyn Density>,
    tol: f64,
    mass: f64,
    lo: f64,
    hi: f64,
    low_decade: i32,
    high_decade: i32,
}

impl Curve for PhaseMassCurve {
    fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let decades = (self.high_decade - self.low_decade + 1).max(1) as f64;
        let per_interval = self.tol / (2.0 * decades);
        let mut sum = 0.0;
        for j in self.low_decade..=self.high_decade {
            let scale = 10f64.powi(j);
            let a = scale.max(self.lo);
            let b = (10f64.powf(f64::from(j) + s)).min(self.hi);
            if b <= a {
                continue;
            }
            let f = &self.density;
            if quad::estimate(&|x| f.pdf(x), a, b).abs() < INTERVAL_MASS_FLOOR {
                continue;
            }
            sum += quad::integrate(&|x| f.pdf(x), a, b, per_interval).unwrap_or(f64::NAN);
        }
        sum / self.mass
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        // d/ds of each decade slice is f(10^(j+s)) * 10^(j+s) * ln 10.
        let mut slope = 0.0;
        for j in self.low_decade..=self.high_decade {
            let x = 10f64.powf(f64::from(j) + s);
            if x < self.lo || x > self.hi {
                continue;
            }
            slope += self.density.pdf(x) * x * std::f64::consts::LN_10;
        }
        Ok(slope / self.mass)
    }

    fn kind(&self) -> &'static str {
        "density-phase-mass"
    }
}

/// The three terms of the exact Euler–Maclaurin identity
/// `sum_{n=a}^{b} g(n) = integral + boundary + periodic` for a
/// continuously differentiable `g` on `[a, b]`:
///
/// ```text
/// integral = int_a^b g,   boundary = (g(a) + g(b)) / 2,
/// periodic = int_a^b (x - floor(x) - 1/2) g'(x) dx
/// ```
#[derive(Debug, Clone, Copy)]
pub struct EmTerms {
    pub integral: f64,
    pub boundary: f64,
    pub periodic: f64,
}

impl EmTerms {
    pub fn total(&self) -> f64 {
        self.integral + self.boundary + self.periodic
    }
}

/// Evaluate the identity's right-hand side for `g` with derivative `dg`.
/// The periodic correction is integrated one unit interval at a time since
/// the sawtooth weight is only piecewise smooth.
pub fn euler_maclaurin_terms<F, D>(g: F, dg: D, a: i64, b: i64) -> Result<EmTerms>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if a >= b {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    let integral = quad::integrate(&g, a as f64, b as f64, 1e-12)?;
    let boundary = 0.5 * (g(a as f64) + g(b as f64));
    let mut periodic = 0.0;
    for n in a..b {
        let weight = |x: f64| (x - n as f64 - 0.5) * dg(x);
        periodic += quad::integrate(&weight, n as f64, (n + 1) as f64, 1e-12)?;
    }
    Ok(EmTerms {
        integral,
        boundary,
        periodic,
    })
}
