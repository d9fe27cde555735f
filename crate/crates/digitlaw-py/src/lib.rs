//! Python bindings: digit profiles, block frequencies, and the Weibull
//! goodness-of-fit pipeline.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use digitlaw::density::{standard_normal_cdf, Density, LogNormal, Weibull};
use digitlaw::digitcore::{self, Dataset, DigitBlock};
use digitlaw::profiles::{
    arithmetic_limit_profile, benford_profile, powerlaw_profile, product_uniforms_profile,
    ratio_uniforms_profile, windowed_profile_from_cdf, PowerLawParams, ProductUniformsVariant,
    WindowSpec,
};
use digitlaw::statfit::{self, SampleFamily};

fn to_py_err(err: digitlaw::Error) -> PyErr {
    use digitlaw::Error::*;
    match err {
        Domain(_)
        | EmptyInput(_)
        | Validation(_)
        | DegenerateWindow(_)
        | Normalization { .. }
        | Truncation { .. } => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn block(k: u64) -> PyResult<DigitBlock> {
    DigitBlock::new(k).map_err(to_py_err)
}

/// Decompose x > 0 into (exponent, phase) with x = 10**(exponent + phase).
#[pyfunction]
fn log_phase(x: f64) -> PyResult<(i32, f64)> {
    let lp = digitcore::log_phase(x).map_err(to_py_err)?;
    Ok((lp.exponent, lp.phase))
}

/// Leading m-digit block of x as an integer in [10^(m-1), 10^m).
#[pyfunction]
fn leading_block(x: f64, m: u32) -> PyResult<u64> {
    Ok(digitcore::leading_block(x, m).map_err(to_py_err)?.value())
}

/// Indicator kernel V(k, x): 1 iff the leading block of x equals k.
#[pyfunction]
fn indicator_v(k: u64, x: f64) -> PyResult<u8> {
    digitcore::indicator_v(&block(k)?, x).map_err(to_py_err)
}

/// First-digit counts, shares, and distances to the logarithmic vector.
#[pyfunction]
fn analyze(py: Python<'_>, values: Vec<f64>) -> PyResult<Py<PyDict>> {
    let data = Dataset::from_values(values);
    let table = statfit::first_digit_table(&data).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("n", data.len())?;
    dict.set_item("n_dropped", data.n_dropped())?;
    dict.set_item("counts", table.counts.to_vec())?;
    dict.set_item("shares", table.shares.to_vec())?;
    dict.set_item("chi_square_benford", statfit::chi_square_benford(&table))?;
    dict.set_item("kl_benford_nats", statfit::kl_benford(&table))?;
    Ok(dict.into())
}

/// The logarithmic first-digit vector log10(1 + 1/d), d = 1..9.
#[pyfunction]
fn benford_vector() -> Vec<f64> {
    statfit::benford_first_digit_vector().to_vec()
}

/// Weibull maximum likelihood: returns shape, scale, loglik, aic, bic.
#[pyfunction]
fn weibull_fit(py: Python<'_>, values: Vec<f64>) -> PyResult<Py<PyDict>> {
    let data = Dataset::from_values(values);
    let fit = statfit::weibull_mle(&data).map_err(to_py_err)?;
    let (aic, bic) = statfit::info_criteria(fit.loglik, 2, data.len() as u64);
    let dict = PyDict::new(py);
    dict.set_item("shape", fit.shape)?;
    dict.set_item("scale", fit.scale)?;
    dict.set_item("loglik", fit.loglik)?;
    dict.set_item("aic", aic)?;
    dict.set_item("bic", bic)?;
    Ok(dict.into())
}

/// Full goodness-of-fit report with parametric bootstrap p-values.
#[pyfunction]
#[pyo3(signature = (values, boot_ks=300, boot_chi2=400, bins=10, seed=7))]
fn weibull_report(
    py: Python<'_>,
    values: Vec<f64>,
    boot_ks: usize,
    boot_chi2: usize,
    bins: usize,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let data = Dataset::from_values(values);
    let report =
        statfit::weibull_fit_report(&data, boot_ks, boot_chi2, bins, seed).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("shape", report.shape)?;
    dict.set_item("scale", report.scale)?;
    dict.set_item("loglik", report.loglik)?;
    dict.set_item("aic", report.aic)?;
    dict.set_item("bic", report.bic)?;
    dict.set_item("ks_d", report.ks_d)?;
    dict.set_item("ks_p", report.ks_p)?;
    dict.set_item("chi2", report.chi2)?;
    dict.set_item("chi2_p", report.chi2_p)?;
    dict.set_item("seed", report.seed)?;
    Ok(dict.into())
}

/// Reproducible draws from a named family.
#[pyfunction]
#[pyo3(signature = (family, n, seed=7, **params))]
fn sample(
    family: &str,
    n: usize,
    seed: u64,
    params: Option<&Bound<'_, PyDict>>,
) -> PyResult<Vec<f64>> {
    let get = |key: &str, default: f64| -> PyResult<f64> {
        match params {
            Some(p) => match p.get_item(key)? {
                Some(v) => v.extract(),
                None => Ok(default),
            },
            None => Ok(default),
        }
    };
    let family = match family {
        "ratio-uniforms" => SampleFamily::RatioUniforms,
        "product-uniforms" => SampleFamily::ProductUniforms {
            factors: get("factors", 2.0)? as u32,
        },
        "weibull" => SampleFamily::Weibull {
            shape: get("shape", 1.0)?,
            scale: get("scale", 1.0)?,
        },
        "uniform" => SampleFamily::Uniform {
            upper: get("b", 1.0)?,
        },
        "powerlaw" => SampleFamily::PowerLaw {
            exponent: get("p", 1.0)?,
            upper: get("b", 1.0)?,
        },
        other => return Err(PyValueError::new_err(format!("unknown family '{other}'"))),
    };
    Ok(statfit::sample(&family, n, seed)
        .map_err(to_py_err)?
        .values()
        .to_vec())
}

/// A cumulative digit profile G(s).
#[pyclass(name = "Profile")]
struct PyProfile {
    inner: digitlaw::Profile,
}

#[pymethods]
impl PyProfile {
    /// The diagonal (logarithmic-law) profile.
    #[staticmethod]
    fn benford() -> Self {
        PyProfile {
            inner: benford_profile(),
        }
    }

    #[staticmethod]
    fn ratio_uniforms() -> Self {
        PyProfile {
            inner: ratio_uniforms_profile(),
        }
    }

    /// Product of two uniforms; aggregate=True folds all decades,
    /// otherwise the [0.1, 1] window.
    #[staticmethod]
    #[pyo3(signature = (aggregate=true))]
    fn product_uniforms(aggregate: bool) -> Self {
        let variant = if aggregate {
            ProductUniformsVariant::Aggregate
        } else {
            ProductUniformsVariant::LastDecade
        };
        PyProfile {
            inner: product_uniforms_profile(variant),
        }
    }

    /// Power-law density p x^(p-1)/b^p on [a, b].
    #[staticmethod]
    #[pyo3(signature = (p, b, a=0.0))]
    fn powerlaw(p: f64, b: f64, a: f64) -> PyResult<Self> {
        let params = PowerLawParams::with_lower(p, b, a).map_err(to_py_err)?;
        Ok(PyProfile {
            inner: powerlaw_profile(&params).map_err(to_py_err)?,
        })
    }

    /// Large-n arithmetic-sequence limit with endpoint phase {log10 b}.
    #[staticmethod]
    fn arithmetic_limit(phase: f64) -> PyResult<Self> {
        Ok(PyProfile {
            inner: arithmetic_limit_profile(phase).map_err(to_py_err)?,
        })
    }

    /// Step profile of observed values.
    #[staticmethod]
    fn empirical(values: Vec<f64>) -> PyResult<Self> {
        let data = Dataset::from_values(values);
        Ok(PyProfile {
            inner: digitcore::empirical_profile(&data).map_err(to_py_err)?,
        })
    }

    /// Normal(mu, sigma) windowed to the decades [10^m, 10^n).
    #[staticmethod]
    #[pyo3(signature = (mu, sigma, m=0, n=1))]
    fn normal_window(mu: f64, sigma: f64, m: i32, n: i32) -> PyResult<Self> {
        if sigma <= 0.0 {
            return Err(PyValueError::new_err("sigma must be positive"));
        }
        let window = WindowSpec::new(m, n).map_err(to_py_err)?;
        let inner =
            windowed_profile_from_cdf(move |x: f64| standard_normal_cdf((x - mu) / sigma), window)
                .map_err(to_py_err)?;
        Ok(PyProfile { inner })
    }

    /// Lognormal(mu, sigma) windowed to the decades [10^m, 10^n).
    #[staticmethod]
    #[pyo3(signature = (mu, sigma, m=0, n=1))]
    fn lognormal_window(mu: f64, sigma: f64, m: i32, n: i32) -> PyResult<Self> {
        let d = LogNormal::new(mu, sigma).map_err(to_py_err)?;
        let window = WindowSpec::new(m, n).map_err(to_py_err)?;
        let inner = windowed_profile_from_cdf(move |x| d.cdf(x), window).map_err(to_py_err)?;
        Ok(PyProfile { inner })
    }

    /// Weibull(shape, scale) windowed to the decades [10^m, 10^n).
    #[staticmethod]
    #[pyo3(signature = (shape, scale, m=0, n=1))]
    fn weibull_window(shape: f64, scale: f64, m: i32, n: i32) -> PyResult<Self> {
        let d = Weibull::new(shape, scale).map_err(to_py_err)?;
        let window = WindowSpec::new(m, n).map_err(to_py_err)?;
        let inner = windowed_profile_from_cdf(move |x| d.cdf(x), window).map_err(to_py_err)?;
        Ok(PyProfile { inner })
    }

    /// G(s) (right-continuous at steps).
    fn eval(&self, s: f64) -> f64 {
        self.inner.eval(s)
    }

    /// G(s^-): the strict variant the frequency formulas use.
    fn eval_strict(&self, s: f64) -> f64 {
        self.inner.eval_strict(s)
    }

    /// G'(s); raises where the profile has a jump or kink.
    fn derivative(&self, s: f64) -> PyResult<f64> {
        self.inner.derivative(s).map_err(to_py_err)
    }

    /// Block-k frequency induced by this profile (main formula, a = 1).
    fn rho(&self, k: u64) -> PyResult<f64> {
        Ok(digitlaw::rho_from_profile(&self.inner, 1.0, &block(k)?))
    }

    /// Two-term form with a real shift d in [0, 1).
    #[pyo3(signature = (k, d=0.0))]
    fn rho_two_term(&self, k: u64, d: f64) -> PyResult<f64> {
        Ok(digitlaw::rho_two_term(&self.inner, &block(k)?, d))
    }

    /// Large-k approximation G'({log10 k}) / (k ln 10).
    fn rho_asymptotic(&self, k: u64) -> PyResult<f64> {
        digitlaw::rho_asymptotic(&self.inner, &block(k)?).map_err(to_py_err)
    }

    /// Induced first-digit vector.
    fn digit_vector(&self) -> PyResult<Vec<f64>> {
        (1..=9).map(|k| self.rho(k)).collect()
    }

    /// Sampled curve [(s, G(s)); points].
    #[pyo3(signature = (points=1001))]
    fn curve(&self, points: usize) -> Vec<(f64, f64)> {
        self.inner.curve_points(points)
    }

    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    fn __repr__(&self) -> String {
        format!("Profile(kind='{}')", self.inner.kind())
    }
}

/// Digit profile of a named density via the phase-mass integral.
#[pyfunction]
#[pyo3(signature = (family, tol=1e-10, **params))]
fn profile_from_density(
    family: &str,
    tol: f64,
    params: Option<&Bound<'_, PyDict>>,
) -> PyResult<PyProfile> {
    let get = |key: &str, default: f64| -> PyResult<f64> {
        match params {
            Some(p) => match p.get_item(key)? {
                Some(v) => v.extract(),
                None => Ok(default),
            },
            None => Ok(default),
        }
    };
    let density: Arc<dyn Density> = match family {
        "benford" => Arc::new(digitlaw::density::LogUniform {
            low_decade: get("m", 0.0)? as i32,
            high_decade: get("n", 1.0)? as i32,
        }),
        "uniform" => Arc::new(digitlaw::density::Uniform::new(get("b", 1.0)?).map_err(to_py_err)?),
        "ratio-uniforms" => Arc::new(digitlaw::density::RatioUniforms),
        "product-uniforms" => Arc::new(
            digitlaw::density::ProductUniforms::new(get("factors", 2.0)? as u32)
                .map_err(to_py_err)?,
        ),
        "decade-equivalent" => Arc::new(digitlaw::density::DecadeEquivalent),
        "weibull" => {
            Arc::new(Weibull::new(get("shape", 1.0)?, get("scale", 1.0)?).map_err(to_py_err)?)
        }
        "lognormal" => {
            Arc::new(LogNormal::new(get("mu", 0.0)?, get("sigma", 1.0)?).map_err(to_py_err)?)
        }
        other => return Err(PyValueError::new_err(format!("unknown density '{other}'"))),
    };
    Ok(PyProfile {
        inner: digitlaw::embridge::profile_from_density(density, tol).map_err(to_py_err)?,
    })
}

#[pymodule]
fn digitlaw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(log_phase, m)?)?;
    m.add_function(wrap_pyfunction!(leading_block, m)?)?;
    m.add_function(wrap_pyfunction!(indicator_v, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(benford_vector, m)?)?;
    m.add_function(wrap_pyfunction!(weibull_fit, m)?)?;
    m.add_function(wrap_pyfunction!(weibull_report, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(profile_from_density, m)?)?;
    m.add_class::<PyProfile>()?;
    Ok(())
}
