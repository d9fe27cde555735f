//! Parse `--family` / `--params` pairs into profiles, densities, and
//! sampler families.

use std::collections::HashMap;
use std::sync::Arc;

use digitlaw::density::{
    standard_normal_cdf, DecadeEquivalent, Density, LogNormal, LogUniform, PositiveNormal,
    PowerLaw, ProductUniforms, RatioUniforms, Uniform, Weibull,
};
use digitlaw::profiles::{
    arithmetic_limit_profile, arithmetic_sequence_profile, benford_profile, power_sequence_profile,
    powerlaw_profile, product_uniforms_limit_profile, product_uniforms_profile,
    ratio_uniforms_profile, windowed_profile_from_cdf, PowerLawParams, ProductUniformsVariant,
    Profile, WindowSpec,
};
use digitlaw::statfit::SampleFamily;

pub struct Params(HashMap<String, f64>);

pub fn parse_params(spec: &str) -> Result<Params, String> {
    let mut map = HashMap::new();
    for piece in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = piece
            .split_once('=')
            .ok_or_else(|| format!("parameter '{piece}' is not of the form key=value"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("parameter '{piece}' has a non-numeric value"))?;
        map.insert(key.trim().to_string(), value);
    }
    Ok(Params(map))
}

impl Params {
    fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    fn require(&self, key: &str, family: &str) -> Result<f64, String> {
        self.get(key)
            .ok_or_else(|| format!("family '{family}' needs parameter '{key}'"))
    }

    fn or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }
}

fn window_from(params: &Params) -> Result<WindowSpec, String> {
    WindowSpec::new(params.or("m", 0.0) as i32, params.or("n", 1.0) as i32)
        .map_err(|e| e.to_string())
}

/// Profile families accepted by `digitlaw profile`.
pub fn build_profile(family: &str, params: &Params) -> Result<Profile, String> {
    let err = |e: digitlaw::Error| e.to_string();
    match family {
        "benford" => Ok(benford_profile()),
        "powerlaw" => {
            let p = params.require("p", family)?;
            let b = params.require("b", family)?;
            let spec = match params.get("a") {
                Some(a) => PowerLawParams::with_lower(p, b, a),
                None => PowerLawParams::new(p, b),
            }
            .map_err(err)?;
            powerlaw_profile(&spec).map_err(err)
        }
        "ratio-uniforms" => Ok(ratio_uniforms_profile()),
        "product-uniforms" => {
            let variant = if params.or("window", 0.0) != 0.0 {
                ProductUniformsVariant::LastDecade
            } else {
                ProductUniformsVariant::Aggregate
            };
            Ok(product_uniforms_profile(variant))
        }
        "product-limit" => product_uniforms_limit_profile(
            params.or("factors", 2.0) as u32,
            params.or("samples", 200_000.0) as usize,
            params.or("seed", 7.0) as u64,
        )
        .map_err(err),
        "arithmetic" => arithmetic_sequence_profile(
            params.or("alpha", 1.0),
            params.or("beta", 0.0),
            params.require("count", family)? as u64,
        )
        .map_err(err),
        "arithmetic-limit" => {
            arithmetic_limit_profile(params.require("phase", family)?).map_err(err)
        }
        "power-seq" => power_sequence_profile(
            params.require("alpha", family)?,
            params.require("count", family)? as u64,
        )
        .map_err(err),
        "normal-window" => {
            let mu = params.or("mu", 0.0);
            let sigma = params.or("sigma", 1.0);
            if sigma <= 0.0 {
                return Err("sigma must be positive".into());
            }
            let window = window_from(params)?;
            windowed_profile_from_cdf(move |x: f64| standard_normal_cdf((x - mu) / sigma), window)
                .map_err(err)
        }
        "lognormal-window" => {
            let d = LogNormal::new(params.or("mu", 0.0), params.or("sigma", 1.0)).map_err(err)?;
            let window = window_from(params)?;
            windowed_profile_from_cdf(move |x| d.cdf(x), window).map_err(err)
        }
        "weibull-window" => {
            let d = Weibull::new(params.or("shape", 1.0), params.or("scale", 1.0)).map_err(err)?;
            let window = window_from(params)?;
            windowed_profile_from_cdf(move |x| d.cdf(x), window).map_err(err)
        }
        other => Err(format!(
            "unknown profile family '{other}'; available: benford, powerlaw, ratio-uniforms, \
             product-uniforms, product-limit, arithmetic, arithmetic-limit, power-seq, \
             normal-window, lognormal-window, weibull-window"
        )),
    }
}

/// Density families accepted by `digitlaw em`.
pub fn build_density(family: &str, params: &Params) -> Result<Arc<dyn Density>, String> {
    let err = |e: digitlaw::Error| e.to_string();
    match family {
        "benford" => Ok(Arc::new(LogUniform {
            low_decade: params.or("m", 0.0) as i32,
            high_decade: params.or("n", 1.0) as i32,
        })),
        "uniform" => Ok(Arc::new(Uniform::new(params.or("b", 1.0)).map_err(err)?)),
        "ratio-uniforms" => Ok(Arc::new(RatioUniforms)),
        "product-uniforms" => Ok(Arc::new(
            ProductUniforms::new(params.or("factors", 2.0) as u32).map_err(err)?,
        )),
        "decade-equivalent" => Ok(Arc::new(DecadeEquivalent)),
        "weibull" => Ok(Arc::new(
            Weibull::new(params.or("shape", 1.0), params.or("scale", 1.0)).map_err(err)?,
        )),
        "powerlaw" => Ok(Arc::new(
            PowerLaw::new(params.require("p", family)?, params.require("b", family)?)
                .map_err(err)?,
        )),
        "lognormal" => Ok(Arc::new(
            LogNormal::new(params.or("mu", 0.0), params.or("sigma", 1.0)).map_err(err)?,
        )),
        "normal-positive" => Ok(Arc::new(
            PositiveNormal::new(params.or("mu", 1.0), params.or("sigma", 1.0)).map_err(err)?,
        )),
        other => Err(format!(
            "unknown density family '{other}'; available: benford, uniform, ratio-uniforms, \
             product-uniforms, decade-equivalent, weibull, powerlaw, lognormal, normal-positive"
        )),
    }
}

/// Sampler families accepted by `digitlaw simulate`.
pub fn build_sampler(family: &str, params: &Params) -> Result<SampleFamily, String> {
    match family {
        "ratio-uniforms" => Ok(SampleFamily::RatioUniforms),
        "product-uniforms" => Ok(SampleFamily::ProductUniforms {
            factors: params.or("factors", 2.0) as u32,
        }),
        "weibull" => Ok(SampleFamily::Weibull {
            shape: params.or("shape", 1.0),
            scale: params.or("scale", 1.0),
        }),
        "uniform" => Ok(SampleFamily::Uniform {
            upper: params.or("b", 1.0),
        }),
        "powerlaw" => Ok(SampleFamily::PowerLaw {
            exponent: params.or("p", 1.0),
            upper: params.or("b", 1.0),
        }),
        other => Err(format!(
            "unknown sampler family '{other}'; available: ratio-uniforms, product-uniforms, \
             weibull, uniform, powerlaw"
        )),
    }
}
