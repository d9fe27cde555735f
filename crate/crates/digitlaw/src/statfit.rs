//! Empirical digit statistics and Weibull goodness of fit.
//!
//! First-digit tables with chi-square and Kullback–Leibler distances to the
//! logarithmic vector, Weibull maximum likelihood via the profile-likelihood
//! score, parametric bootstrap (with refit) for the Kolmogorov–Smirnov and
//! equiprobable-bin Pearson statistics, and seeded samplers for the
//! built-in families.

use serde::Serialize;

use crate::density::{Density, Weibull};
use crate::digitcore::{leading_block, Dataset};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// First-digit counts and shares of a dataset.
#[derive(Debug, Clone, Serialize)]
pub struct FirstDigitTable {
    /// Counts for digits 1..=9.
    pub counts: [u64; 9],
    /// `counts / total`.
    pub shares: [f64; 9],
    pub total: u64,
}

impl FirstDigitTable {
    pub fn from_counts(counts: [u64; 9]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyInput("first-digit table has no counts".into()));
        }
        let shares = std::array::from_fn(|i| counts[i] as f64 / total as f64);
        Ok(FirstDigitTable {
            counts,
            shares,
            total,
        })
    }
}

/// The logarithmic first-digit vector `p_d = log10(1 + 1/d)`.
pub fn benford_first_digit_vector() -> [f64; 9] {
    std::array::from_fn(|i| {
        let d = (i + 1) as f64;
        (1.0 + 1.0 / d).log10()
    })
}

/// Count first digits across a dataset.
pub fn first_digit_table(data: &Dataset) -> Result<FirstDigitTable> {
    if data.is_empty() {
        return Err(Error::EmptyInput("first-digit table needs data".into()));
    }
    let mut counts = [0u64; 9];
    for &x in data.values() {
        let d = leading_block(x, 1)?.value();
        counts[(d - 1) as usize] += 1;
    }
    FirstDigitTable::from_counts(counts)
}

/// Pearson chi-square of the observed digit counts against the logarithmic
/// vector: `sum (O_d - N p_d)^2 / (N p_d)`.
pub fn chi_square_benford(table: &FirstDigitTable) -> f64 {
    let p = benford_first_digit_vector();
    let n = table.total as f64;
    (0..9)
        .map(|i| {
            let expected = n * p[i];
            let diff = table.counts[i] as f64 - expected;
            diff * diff / expected
        })
        .sum()
}

/// Kullback–Leibler divergence of the observed shares from the logarithmic
/// vector, in nats. Empty digits contribute zero (`0 ln 0 := 0`).
pub fn kl_benford(table: &FirstDigitTable) -> f64 {
    let p = benford_first_digit_vector();
    (0..9)
        .map(|i| {
            let share = table.shares[i];
            if share > 0.0 {
                share * (share / p[i]).ln()
            } else {
                0.0
            }
        })
        .sum()
}

/// A fitted Weibull model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeibullFit {
    pub shape: f64,
    pub scale: f64,
    pub loglik: f64,
}

impl WeibullFit {
    pub fn density(&self) -> Weibull {
        Weibull {
            shape: self.shape,
            scale: self.scale,
        }
    }
}

/// Weibull log-likelihood of a sample at given parameters.
pub fn weibull_loglik(data: &Dataset, shape: f64, scale: f64) -> f64 {
    let w = Weibull { shape, scale };
    data.values().iter().map(|&x| w.log_pdf(x)).sum()
}

const MLE_MAX_ITER: usize = 200;
const MLE_SCORE_TOL: f64 = 1e-10;

/// Maximum-likelihood Weibull fit.
///
/// The scale has a closed form given the shape, so only the profile score
///
/// ```text
/// g(a) = sum x^a ln x / sum x^a - 1/a - mean(ln x)
/// ```
///
/// is solved, by safeguarded bisection/secant inside a sign-changing
/// bracket. Values are pre-scaled by their geometric mean so the powers
/// stay well conditioned.
pub fn weibull_mle(data: &Dataset) -> Result<WeibullFit> {
    let n = data.len();
    if n < 3 {
        return Err(Error::EmptyInput(format!(
            "weibull fit needs at least 3 observations, got {n}"
        )));
    }
    let ln_x: Vec<f64> = data.values().iter().map(|&x| x.ln()).collect();
    let mean_ln = ln_x.iter().sum::<f64>() / n as f64;
    let var_ln = ln_x.iter().map(|l| (l - mean_ln).powi(2)).sum::<f64>() / n as f64;
    if var_ln < 1e-24 {
        return Err(Error::Domain(
            "all observations are equal; the shape likelihood is unbounded".into(),
        ));
    }
    // Centered logs: score simplifies to S1(a)/S0(a) - 1/a.
    let centered: Vec<f64> = ln_x.iter().map(|l| l - mean_ln).collect();
    let score = |a: f64| -> f64 {
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for &l in &centered {
            let w = (a * l).exp();
            s0 += w;
            s1 += w * l;
        }
        s1 / s0 - 1.0 / a
    };

    // Moment-based initial guess: sd(ln x) ~ pi / (a sqrt 6).
    let init = (std::f64::consts::PI / (6f64.sqrt() * var_ln.sqrt())).clamp(1e-3, 1e3);
    let mut lo = init;
    let mut hi = init;
    let mut f_lo = score(lo);
    let mut f_hi = f_lo;
    let mut iterations = 0usize;
    while f_lo > 0.0 && lo > 1e-8 {
        lo /= 2.0;
        f_lo = score(lo);
        iterations += 1;
    }
    while f_hi < 0.0 && hi < 1e8 {
        hi *= 2.0;
        f_hi = score(hi);
        iterations += 1;
    }
    if !(f_lo <= 0.0 && f_hi >= 0.0) {
        return Err(Error::NoConvergence {
            iterations,
            low: lo,
            high: hi,
            residual: f_lo.abs().min(f_hi.abs()),
        });
    }

    let mut a = 0.5 * (lo + hi);
    let mut f_a = score(a);
    while iterations < MLE_MAX_ITER {
        iterations += 1;
        // Secant proposal, safeguarded to the bracket.
        let (x0, y0, x1, y1) = if f_a < 0.0 {
            (a, f_a, hi, f_hi)
        } else {
            (lo, f_lo, a, f_a)
        };
        let mut next = x1 - y1 * (x1 - x0) / (y1 - y0);
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if f_a < 0.0 {
            lo = a;
            f_lo = f_a;
        } else {
            hi = a;
            f_hi = f_a;
        }
        a = next;
        f_a = score(a);
        if f_a.abs() <= MLE_SCORE_TOL || (hi - lo) <= 1e-14 * a {
            let shape = a;
            let s0: f64 = centered.iter().map(|&l| (shape * l).exp()).sum();
            let scale_centered = (s0 / n as f64).powf(1.0 / shape);
            let scale = scale_centered * mean_ln.exp();
            // At the profile optimum sum (x/b)^a = n, so the likelihood
            // collapses to a closed form.
            let sum_ln: f64 = ln_x.iter().sum();
            let loglik = n as f64 * shape.ln() + (shape - 1.0) * sum_ln
                - shape * n as f64 * scale.ln()
                - n as f64;
            return Ok(WeibullFit {
                shape,
                scale,
                loglik,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations,
        low: lo,
        high: hi,
        residual: f_a.abs(),
    })
}

/// Two-sided Kolmogorov–Smirnov statistic of a sample against a CDF.
pub fn ks_statistic(data: &Dataset, cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted: Vec<f64> = data.values().to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    d
}

fn sample_weibull(fit: &WeibullFit, n: usize, rng: &mut Rng) -> Dataset {
    let values = (0..n).map(|_| {
        let u = rng.next_open_f64();
        fit.scale * (-(1.0 - u).ln()).powf(1.0 / fit.shape)
    });
    Dataset::from_values(values)
}

/// Parametric bootstrap for the KS statistic: observed `D` against the
/// fitted model, and the fraction of `replicates` refit resamples whose
/// `D*` reaches it. Deterministic given `seed`; replicate `i` always draws
/// from substream `i`.
pub fn ks_bootstrap(
    data: &Dataset,
    fit: &WeibullFit,
    replicates: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Err(Error::EmptyInput("KS bootstrap needs data".into()));
    }
    if replicates < 100 {
        return Err(Error::Domain(format!(
            "bootstrap needs at least 100 replicates, got {replicates}"
        )));
    }
    let model = fit.density();
    let d_obs = ks_statistic(data, |x| model.cdf(x));
    let n = data.len();
    let mut hits = 0usize;
    for rep in 0..replicates {
        let mut rng = Rng::stream(seed, rep as u64);
        let resample = sample_weibull(fit, n, &mut rng);
        let refit = weibull_mle(&resample)?;
        let refit_model = refit.density();
        let d_star = ks_statistic(&resample, |x| refit_model.cdf(x));
        if d_star >= d_obs {
            hits += 1;
        }
    }
    Ok((d_obs, hits as f64 / replicates as f64))
}

/// Pearson chi-square on `bins` equiprobable bins of the fitted model.
pub fn chi2_equiprob(data: &Dataset, fit: &WeibullFit, bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(Error::Domain(format!("need at least 2 bins, got {bins}")));
    }
    if data.is_empty() {
        return Err(Error::EmptyInput("chi-square needs data".into()));
    }
    let model = fit.density();
    let edges: Vec<f64> = (1..bins)
        .map(|i| model.quantile(i as f64 / bins as f64))
        .collect();
    let mut counts = vec![0u64; bins];
    for &x in data.values() {
        let bin = edges.partition_point(|&e| e <= x);
        counts[bin] += 1;
    }
    let expected = data.len() as f64 / bins as f64;
    Ok(counts
        .iter()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum())
}

/// Bootstrap substream offset separating the chi-square resamples from the
/// KS resamples drawn under the same seed.
const CHI2_STREAM_OFFSET: u64 = 1 << 32;

/// Parametric bootstrap (with refit) for the equiprobable-bin chi-square.
pub fn chi2_equiprob_bootstrap(
    data: &Dataset,
    fit: &WeibullFit,
    bins: usize,
    replicates: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if replicates < 100 {
        return Err(Error::Domain(format!(
            "bootstrap needs at least 100 replicates, got {replicates}"
        )));
    }
    let observed = chi2_equiprob(data, fit, bins)?;
    let n = data.len();
    let mut hits = 0usize;
    for rep in 0..replicates {
        let mut rng = Rng::stream(seed, CHI2_STREAM_OFFSET + rep as u64);
        let resample = sample_weibull(fit, n, &mut rng);
        let refit = weibull_mle(&resample)?;
        let stat = chi2_equiprob(&resample, &refit, bins)?;
        if stat >= observed {
            hits += 1;
        }
    }
    Ok((observed, hits as f64 / replicates as f64))
}

/// Akaike and Bayesian information criteria:
/// `aic = -2 l + 2 p`, `bic = -2 l + p ln N`.
pub fn info_criteria(loglik: f64, n_params: u32, n: u64) -> (f64, f64) {
    let aic = -2.0 * loglik + 2.0 * f64::from(n_params);
    let bic = -2.0 * loglik + f64::from(n_params) * (n as f64).ln();
    (aic, bic)
}

/// Full goodness-of-fit report for the Weibull model.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub shape: f64,
    pub scale: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub ks_d: f64,
    pub ks_p: f64,
    pub chi2: f64,
    pub chi2_p: f64,
    pub bins: usize,
    pub boot_ks: usize,
    pub boot_chi2: usize,
    pub seed: u64,
}

/// Fit, then bootstrap both goodness-of-fit statistics.
pub fn weibull_fit_report(
    data: &Dataset,
    boot_ks: usize,
    boot_chi2: usize,
    bins: usize,
    seed: u64,
) -> Result<FitReport> {
    let fit = weibull_mle(data)?;
    let (ks_d, ks_p) = ks_bootstrap(data, &fit, boot_ks, seed)?;
    let (chi2, chi2_p) = chi2_equiprob_bootstrap(data, &fit, bins, boot_chi2, seed)?;
    let (aic, bic) = info_criteria(fit.loglik, 2, data.len() as u64);
    Ok(FitReport {
        shape: fit.shape,
        scale: fit.scale,
        loglik: fit.loglik,
        aic,
        bic,
        ks_d,
        ks_p,
        chi2,
        chi2_p,
        bins,
        boot_ks,
        boot_chi2,
        seed,
    })
}

/// Families with seeded samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleFamily {
    /// `Y/X` with `X, Y ~ Uniform(0,1)` independent.
    RatioUniforms,
    /// Product of `factors` independent Uniform(0,1) draws.
    ProductUniforms { factors: u32 },
    /// Inverse-CDF Weibull draws.
    Weibull { shape: f64, scale: f64 },
    /// Uniform on `(0, upper)`.
    Uniform { upper: f64 },
    /// Power law on `(0, upper]`: `x = upper * u^(1/exponent)`.
    PowerLaw { exponent: f64, upper: f64 },
}

/// Draw `n` values, reproducibly for a given seed.
pub fn sample(family: &SampleFamily, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::EmptyInput("cannot sample 0 values".into()));
    }
    match family {
        SampleFamily::Weibull { shape, scale } if !(*shape > 0.0 && *scale > 0.0) => {
            return Err(Error::Domain("weibull parameters must be positive".into()));
        }
        SampleFamily::Uniform { upper } if !(upper.is_finite() && *upper > 0.0) => {
            return Err(Error::Domain("uniform upper bound must be positive".into()));
        }
        SampleFamily::PowerLaw { exponent, upper } if !(*exponent > 0.0 && *upper > 0.0) => {
            return Err(Error::Domain(
                "power-law parameters must be positive".into(),
            ));
        }
        SampleFamily::ProductUniforms { factors } if *factors == 0 => {
            return Err(Error::Domain("need at least one uniform factor".into()));
        }
        _ => {}
    }
    let mut rng = Rng::new(seed);
    let values: Vec<f64> = (0..n)
        .map(|_| match family {
            SampleFamily::RatioUniforms => rng.next_open_f64() / rng.next_open_f64(),
            SampleFamily::ProductUniforms { factors } => {
                (0..*factors).map(|_| rng.next_open_f64()).product()
            }
            SampleFamily::Weibull { shape, scale } => {
                scale * (-(1.0 - rng.next_open_f64()).ln()).powf(1.0 / shape)
            }
            SampleFamily::Uniform { upper } => upper * rng.next_open_f64(),
            SampleFamily::PowerLaw { exponent, upper } => {
                upper * rng.next_open_f64().powf(1.0 / exponent)
            }
        })
        .collect();
    Ok(Dataset::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_table_counts() {
        let data = Dataset::from_values((1..=9).map(|d| d as f64));
        let table = first_digit_table(&data).unwrap();
        assert_eq!(table.counts, [1; 9]);

        let tens = Dataset::from_values([10.0, 11.0, 19.0]);
        let t = first_digit_table(&tens).unwrap();
        assert_eq!(t.counts[0], 3);
    }

    #[test]
    fn chi_square_is_zero_on_benford_counts() {
        // Counts proportional to the logarithmic vector at huge N: both
        // distances collapse to rounding noise.
        let p = benford_first_digit_vector();
        let counts = std::array::from_fn(|i| (p[i] * 1e15).round() as u64);
        let table = FirstDigitTable::from_counts(counts).unwrap();
        assert!(chi_square_benford(&table) < 1e-12);
        assert!(kl_benford(&table) < 1e-12);
    }

    #[test]
    fn chi_square_detects_concentration() {
        let mut counts = [0u64; 9];
        counts[8] = 100;
        let table = FirstDigitTable::from_counts(counts).unwrap();
        let p9 = (10f64 / 9.0).log10();
        let expect: f64 = (0..8)
            .map(|i| 100.0 * benford_first_digit_vector()[i])
            .sum::<f64>()
            + (100.0 - 100.0 * p9).powi(2) / (100.0 * p9);
        assert!((chi_square_benford(&table) - expect).abs() < 1e-9);
    }

    #[test]
    fn kl_uniform_shares_reference_value() {
        let table = FirstDigitTable::from_counts([1; 9]).unwrap();
        let p = benford_first_digit_vector();
        let expect: f64 = (0..9)
            .map(|i| (1.0 / 9.0) * ((1.0 / 9.0) / p[i]).ln())
            .sum();
        assert!((kl_benford(&table) - expect).abs() < 1e-15);
        // Frozen from direct evaluation of the sum, in nats.
        assert!((expect - 0.191_205_400_1).abs() < 1e-9);
    }

    #[test]
    fn mle_recovers_exponential() {
        let data = sample(
            &SampleFamily::Weibull {
                shape: 1.0,
                scale: 1.0,
            },
            40_000,
            7,
        )
        .unwrap();
        let fit = weibull_mle(&data).unwrap();
        assert!((fit.shape - 1.0).abs() < 0.02, "shape {}", fit.shape);
        assert!((fit.scale - 1.0).abs() < 0.02, "scale {}", fit.scale);
    }

    #[test]
    fn mle_score_vanishes_at_optimum() {
        let data = sample(
            &SampleFamily::Weibull {
                shape: 0.6,
                scale: 3e5,
            },
            500,
            21,
        )
        .unwrap();
        let fit = weibull_mle(&data).unwrap();
        let n = data.len() as f64;
        let h_shape = fit.shape * 1e-6;
        let d_shape = (weibull_loglik(&data, fit.shape + h_shape, fit.scale)
            - weibull_loglik(&data, fit.shape - h_shape, fit.scale))
            / (2.0 * h_shape);
        let h_scale = fit.scale * 1e-6;
        let d_scale = (weibull_loglik(&data, fit.shape, fit.scale + h_scale)
            - weibull_loglik(&data, fit.shape, fit.scale - h_scale))
            / (2.0 * h_scale);
        assert!(
            d_shape.abs() <= 1e-6 * n * (1.0 + fit.shape.abs()),
            "{d_shape}"
        );
        assert!((d_scale * fit.scale).abs() <= 1e-6 * n * 10.0, "{d_scale}");
        // Closed-form likelihood matches the direct sum.
        let direct = weibull_loglik(&data, fit.shape, fit.scale);
        assert!((direct - fit.loglik).abs() < 1e-6 * n);
    }

    #[test]
    fn mle_rejects_degenerate_data() {
        let data = Dataset::from_values([5.0, 5.0, 5.0, 5.0]);
        assert!(weibull_mle(&data).is_err());
        let two = Dataset::from_values([1.0, 2.0]);
        assert!(weibull_mle(&two).is_err());
    }

    #[test]
    fn ks_statistic_on_exact_quantiles() {
        // Points at quantiles (i - 1/2)/n give D = 1/(2n).
        let fit = WeibullFit {
            shape: 1.0,
            scale: 1.0,
            loglik: 0.0,
        };
        let model = fit.density();
        let n = 100;
        let data =
            Dataset::from_values((0..n).map(|i| model.quantile((i as f64 + 0.5) / n as f64)));
        let d = ks_statistic(&data, |x| model.cdf(x));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn bootstraps_are_deterministic() {
        let data = sample(
            &SampleFamily::Weibull {
                shape: 0.8,
                scale: 100.0,
            },
            150,
            3,
        )
        .unwrap();
        let fit = weibull_mle(&data).unwrap();
        let a = ks_bootstrap(&data, &fit, 120, 42).unwrap();
        let b = ks_bootstrap(&data, &fit, 120, 42).unwrap();
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1.to_bits(), b.1.to_bits());
        let c = ks_bootstrap(&data, &fit, 120, 43).unwrap();
        assert!((a.1 - c.1).abs() < 0.2);
        assert!(ks_bootstrap(&data, &fit, 50, 1).is_err());
        let empty = Dataset::from_values(std::iter::empty());
        assert!(matches!(
            ks_bootstrap(&empty, &fit, 120, 1),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn bootstrap_p_is_calibrated_on_model_data() {
        // Data drawn from the fitted family itself: p-values spread over
        // (0, 1) rather than piling at the extremes.
        let mut ps = Vec::new();
        for meta in 0..11 {
            let data = sample(
                &SampleFamily::Weibull {
                    shape: 1.0,
                    scale: 1.0,
                },
                120,
                1000 + meta,
            )
            .unwrap();
            let fit = weibull_mle(&data).unwrap();
            let (_, p) = ks_bootstrap(&data, &fit, 100, meta).unwrap();
            ps.push(p);
        }
        ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = ps[ps.len() / 2];
        assert!((0.1..=0.9).contains(&median), "median p {median}");
    }

    #[test]
    fn chi2_equiprob_bins_and_edge_cases() {
        let data = sample(
            &SampleFamily::Weibull {
                shape: 1.3,
                scale: 10.0,
            },
            5_000,
            11,
        )
        .unwrap();
        let fit = weibull_mle(&data).unwrap();
        // Near-perfect model data: statistic stays near bins - 1 - 2.
        let chi2 = chi2_equiprob(&data, &fit, 10).unwrap();
        assert!(chi2 < 30.0, "chi2 {chi2}");
        // Two bins is a valid single-degree statistic.
        let chi1 = chi2_equiprob(&data, &fit, 2).unwrap();
        assert!(chi1 >= 0.0);
        assert!(chi2_equiprob(&data, &fit, 1).is_err());
    }

    #[test]
    fn info_criteria_identities() {
        let (aic, bic) = info_criteria(0.0, 2, 1);
        assert_eq!(aic, 4.0);
        assert_eq!(bic, 0.0);
        let n = 217u64;
        let (aic, bic) = info_criteria(-3813.4, 2, n);
        assert!((bic - aic - (2.0 * (n as f64).ln() - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn samplers_are_reproducible() {
        for family in [
            SampleFamily::RatioUniforms,
            SampleFamily::ProductUniforms { factors: 3 },
            SampleFamily::Weibull {
                shape: 0.5,
                scale: 2.0,
            },
            SampleFamily::Uniform { upper: 4.0 },
            SampleFamily::PowerLaw {
                exponent: 2.0,
                upper: 7.0,
            },
        ] {
            let a = sample(&family, 100, 5).unwrap();
            let b = sample(&family, 100, 5).unwrap();
            assert_eq!(a.values(), b.values());
            assert_eq!(a.len(), 100);
            assert!(a.values().iter().all(|&x| x > 0.0));
        }
        assert!(sample(&SampleFamily::Uniform { upper: -1.0 }, 10, 1).is_err());
        assert!(sample(&SampleFamily::RatioUniforms, 0, 1).is_err());
    }

    #[test]
    fn sampler_matches_model_cdf() {
        let family = SampleFamily::PowerLaw {
            exponent: 2.0,
            upper: 5.0,
        };
        let data = sample(&family, 50_000, 17).unwrap();
        let below = data.values().iter().filter(|&&x| x < 2.5).count() as f64;
        // P(X < b/2) = (1/2)^2.
        assert!((below / 50_000.0 - 0.25).abs() < 0.01);
    }
}
