//! Scale-change machinery: base slices, circular shifts, and the
//! R-representation.
//!
//! For a density `f` the base slice `g1(s) = sum_k int_{10^k}^{10^(k+s)} f`
//! is the digit profile at scale 1. Scaling the variable by `b` only shifts
//! phases by `beta = {log10 b}`, so every scaled profile is a circular
//! shift of `g1`, compactly written `g(s, b) = R(beta - s) - R(beta)` with
//! `R(u) = g1(1 - {u}) - 1 - floor(u)`.

use std::sync::Arc;

use crate::density::Density;
use crate::digitcore::log_phase;
use crate::error::{Error, Result};
use crate::profiles::{Curve, Profile};
use crate::quad;

/// Default tabulation resolution for base slices.
const SLICE_KNOTS: usize = 4096;
/// Decades whose mass falls below this are skipped in the slice sum.
const DECADE_MASS_FLOOR: f64 = 1e-12;
/// Default decade range for [`base_slice`]: `[1e-8, 1e8]`. Heavy-tailed
/// densities need a wider range or the truncation check fires.
pub const DEFAULT_TRUNCATION: (i32, i32) = (-8, 8);

/// The scale-1 digit profile of a density, plus provenance.
#[derive(Debug, Clone)]
pub struct BaseSlice {
    g1: Profile,
    source: String,
    /// Probability mass captured inside the truncation range.
    coverage: f64,
}

impl BaseSlice {
    /// Wrap an existing profile as a base slice (useful when `g1` has a
    /// closed form).
    pub fn from_profile(g1: Profile, source: impl Into<String>) -> Result<Self> {
        g1.validate(1024)?;
        Ok(BaseSlice {
            g1,
            source: source.into(),
            coverage: 1.0,
        })
    }

    pub fn g1(&self) -> &Profile {
        &self.g1
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn coverage(&self) -> f64 {
        self.coverage
    }
}

/// Tabulate the base slice of `f` by per-decade quadrature over the decade
/// range `truncation = (low, high)`, i.e. `[10^low, 10^high]`.
///
/// Errors if more than `1e-6` of the mass lies outside the range.
pub fn base_slice(f: &dyn Density, truncation: (i32, i32)) -> Result<BaseSlice> {
    let (low, high) = truncation;
    if low >= high {
        return Err(Error::Domain(format!(
            "truncation range [{low}, {high}] is empty"
        )));
    }
    let step = 1.0 / SLICE_KNOTS as f64;
    let mut knots = vec![0.0f64; SLICE_KNOTS + 1];
    let mut total = 0.0;
    let (sup_lo, sup_hi) = f.support();

    for decade in low..high {
        let d_lo = 10f64.powi(decade);
        let d_hi = 10f64.powi(decade + 1);
        if d_hi <= sup_lo || d_lo >= sup_hi {
            continue;
        }
        // Integrate in phase space: x = 10^(decade+s), dx = x ln10 ds.
        let base = f64::from(decade);
        let phase_integrand = |s: f64| {
            let x = 10f64.powf(base + s);
            f.pdf(x) * x * std::f64::consts::LN_10
        };
        // Clip the phase range to the support so every knot subinterval
        // sees a smooth integrand.
        let s_lo = if sup_lo > d_lo {
            (sup_lo.log10() - base).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let s_hi = if sup_hi < d_hi {
            (sup_hi.log10() - base).clamp(0.0, 1.0)
        } else {
            1.0
        };
        if quad::estimate(&phase_integrand, s_lo, s_hi).abs() <= DECADE_MASS_FLOOR {
            total += quad::integrate(&phase_integrand, s_lo, s_hi, 1e-14)?;
            continue;
        }
        let mut acc = 0.0;
        for i in 0..SLICE_KNOTS {
            let a = (i as f64 * step).clamp(s_lo, s_hi);
            let b = ((i + 1) as f64 * step).clamp(s_lo, s_hi);
            if b > a {
                acc += quad::integrate(&phase_integrand, a, b, 1e-14)?;
            }
            knots[i + 1] += acc;
        }
        total += acc;
    }

    let lost = 1.0 - total;
    if lost.abs() > 1e-6 {
        return Err(Error::Truncation { lost, low, high });
    }
    // Renormalize by the captured mass so the slice is an exact profile.
    for v in knots.iter_mut() {
        *v /= total;
    }
    knots[0] = 0.0;
    let last = SLICE_KNOTS;
    knots[last] = 1.0;
    // Quadrature noise can leave 1e-16-scale dips; clamp to monotone.
    for i in 1..knots.len() {
        if knots[i] < knots[i - 1] {
            knots[i] = knots[i - 1];
        }
    }
    Ok(BaseSlice {
        g1: Profile::tabulated(knots)?,
        source: f.name(),
        coverage: total,
    })
}

/// Profile of the density rescaled by `b`: the two-branch circular shift
///
/// ```text
/// g(s, b) = g1(1 - beta + s) - g1(1 - beta)      for s <= beta
/// g(s, b) = 1 + g1(s - beta) - g1(1 - beta)      for s >  beta
/// ```
///
/// with `beta = {log10 b}`. `b` and `10 b` give the same profile.
pub fn shift_profile(slice: &BaseSlice, b: f64) -> Result<Profile> {
    let beta = log_phase(b)?.phase;
    Ok(Profile::from_curve(Arc::new(ShiftedSliceCurve {
        g1: slice.g1.clone(),
        beta,
    })))
}

struct ShiftedSliceCurve {
    g1: Profile,
    beta: f64,
}

impl Curve for ShiftedSliceCurve {
    fn eval(&self, s: f64) -> f64 {
        let beta = self.beta;
        if beta == 0.0 {
            return self.g1.eval(s);
        }
        if s <= beta {
            self.g1.eval(1.0 - beta + s) - self.g1.eval(1.0 - beta)
        } else {
            1.0 + self.g1.eval(s - beta) - self.g1.eval(1.0 - beta)
        }
    }

    fn derivative(&self, s: f64) -> Result<f64> {
        let beta = self.beta;
        if beta > 0.0 && (s - beta).abs() < 1e-12 {
            return Err(Error::NotDifferentiable {
                at: beta,
                what: "shifted slice has a seam at beta".into(),
            });
        }
        if s < beta {
            self.g1.derivative(1.0 - beta + s)
        } else {
            self.g1.derivative(s - beta)
        }
    }

    fn kind(&self) -> &'static str {
        "shifted-slice"
    }
}

/// The R-representation of a base slice:
/// `R(u) = g1(1 - {u}) - 1 - floor(u)`, evaluated lazily from `g1` so no
/// second interpolation error is introduced.
#[derive(Debug, Clone)]
pub struct RRep {
    g1: Profile,
}

/// Build the R-representation. `R(u+1) = R(u) - 1` for all `u`, and
/// `R(0) = 0`.
pub fn build_r(slice: &BaseSlice) -> RRep {
    RRep {
        g1: slice.g1().clone(),
    }
}

impl RRep {
    pub fn eval(&self, u: f64) -> f64 {
        let floor = u.floor();
        self.g1.eval(1.0 - (u - floor)) - 1.0 - floor
    }
}

/// Evaluate the scaled profile through the R-representation:
/// `g(s, b) = R(beta - s) - R(beta)`.
pub fn eval_g_via_r(r: &RRep, s: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("phase s={s} outside [0, 1]")));
    }
    let beta = log_phase(b)?.phase;
    Ok(r.eval(beta - s) - r.eval(beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{LogUniform, Uniform, Weibull};
    use crate::profiles::{powerlaw_profile, PowerLawParams};
    use crate::rng::Rng;

    fn uniform_slice() -> BaseSlice {
        base_slice(&Uniform::new(1.0).unwrap(), (-12, 2)).unwrap()
    }

    #[test]
    fn uniform_base_slice_matches_closed_form() {
        let slice = uniform_slice();
        for i in 0..=200 {
            let s = i as f64 / 200.0;
            let expect = (10f64.powf(s) - 1.0) / 9.0;
            assert!(
                (slice.g1().eval(s) - expect).abs() < 5e-8,
                "s={s}: {} vs {expect}",
                slice.g1().eval(s)
            );
        }
        assert!((slice.coverage() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_uniform_base_slice_is_diagonal() {
        let slice = base_slice(&LogUniform::unit_decade(), (-2, 3)).unwrap();
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            assert!((slice.g1().eval(s) - s).abs() < 5e-8);
        }
    }

    #[test]
    fn exponential_slice_is_near_diagonal() {
        // Weibull with shape 1 has phases close to uniform.
        let slice = base_slice(&Weibull::new(1.0, 1.0).unwrap(), (-10, 4)).unwrap();
        let mut sup: f64 = 0.0;
        for i in 0..=200 {
            let s = i as f64 / 200.0;
            sup = sup.max((slice.g1().eval(s) - s).abs());
        }
        // The exp(1) phase distribution deviates from uniform by ~0.03.
        assert!(sup > 0.005 && sup < 0.05, "sup deviation {sup}");
    }

    #[test]
    fn truncation_error_reports_lost_mass() {
        let err = base_slice(&Weibull::new(0.5, 1.0).unwrap(), (0, 1));
        assert!(matches!(err, Err(Error::Truncation { .. })));
    }

    #[test]
    fn shift_by_one_is_identity() {
        let slice = uniform_slice();
        let shifted = shift_profile(&slice, 1.0).unwrap();
        for i in 0..=64 {
            let s = i as f64 / 64.0;
            assert_eq!(shifted.eval(s), slice.g1().eval(s));
        }
    }

    #[test]
    fn shift_branch_value_from_closed_form() {
        // Uniform slice, beta = 0.5, s = 0.25:
        // g = (10/9) 10^-0.5 (10^0.25 - 1).
        let exact = powerlaw_profile(&PowerLawParams::new(1.0, 1.0).unwrap()).unwrap();
        let slice = BaseSlice::from_profile(exact, "uniform closed form").unwrap();
        let shifted = shift_profile(&slice, 10f64.powf(0.5)).unwrap();
        let expect = (10.0 / 9.0) * 10f64.powf(-0.5) * (10f64.powf(0.25) - 1.0);
        assert!((shifted.eval(0.25) - expect).abs() < 1e-14);
    }

    #[test]
    fn period_one_in_scale() {
        let slice = uniform_slice();
        for b in [2.0f64, 3.7, 9.99] {
            let g_b = shift_profile(&slice, b).unwrap();
            let g_10b = shift_profile(&slice, 10.0 * b).unwrap();
            for i in 0..=128 {
                let s = i as f64 / 128.0;
                assert_eq!(g_b.eval(s).to_bits(), g_10b.eval(s).to_bits());
            }
        }
    }

    #[test]
    fn r_rep_reference_values() {
        let slice = uniform_slice();
        let r = build_r(&slice);
        // R(0) = g1(1) - 1 = 0 always.
        assert_eq!(r.eval(0.0), 0.0);
        // Uniform slice: R(0.3) = (10^0.7 - 10)/9.
        let expect = (10f64.powf(0.7) - 10.0) / 9.0;
        assert!((r.eval(0.3) - expect).abs() < 5e-8);
        // Defining recurrence.
        for u in [-2.3, -0.4, 0.3, 1.9] {
            assert!((r.eval(u + 1.0) - (r.eval(u) - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn r_route_matches_shift_route() {
        let slice = uniform_slice();
        let r = build_r(&slice);
        let mut rng = Rng::new(99);
        for _ in 0..1000 {
            let s = rng.next_f64();
            let b = 10f64.powf(3.0 * rng.next_f64() - 1.0);
            let via_r = eval_g_via_r(&r, s, b).unwrap();
            let via_shift = shift_profile(&slice, b).unwrap().eval(s);
            assert!(
                (via_r - via_shift).abs() <= 1e-12,
                "s={s}, b={b}: {via_r} vs {via_shift}"
            );
        }
    }

    #[test]
    fn r_route_endpoints() {
        let slice = uniform_slice();
        let r = build_r(&slice);
        for b in [1.0, 2.0, 31.6, 500.0] {
            assert_eq!(eval_g_via_r(&r, 0.0, b).unwrap(), 0.0);
            assert!((eval_g_via_r(&r, 1.0, b).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn default_truncation_covers_moderate_densities() {
        let slice = base_slice(&LogUniform::unit_decade(), DEFAULT_TRUNCATION).unwrap();
        assert!((slice.coverage() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn from_profile_accepts_closed_forms() {
        let g1 = powerlaw_profile(&PowerLawParams::new(1.0, 1.0).unwrap()).unwrap();
        let slice = BaseSlice::from_profile(g1, "uniform(0,1)").unwrap();
        assert_eq!(slice.source(), "uniform(0,1)");
        assert_eq!(slice.coverage(), 1.0);
    }
}
