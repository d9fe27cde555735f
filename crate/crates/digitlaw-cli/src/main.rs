//! `digitlaw`: leading-significant-digit analysis from the command line.
//!
//! Subcommands: `analyze`, `profile`, `invert`, `fit`, `em`, `simulate`.
//! Every command is deterministic given its flags and seed. Reports are
//! UTF-8 JSON (stdout, or `<out>.json`); curves are CSV with header `s,G`
//! (`<out>.csv`). Exit codes: 0 success, 2 usage or validation error,
//! 1 internal numeric failure.

mod csvio;
mod families;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use digitlaw::digitcore::{empirical_block_freq, empirical_profile, Dataset, DigitBlock};
use digitlaw::embridge::em_decompose;
use digitlaw::inversion::{invert_box_sum, BoxSumProblem};
use digitlaw::profiles::{rho_from_profile, Profile, WindowSpec};
use digitlaw::statfit::{
    chi_square_benford, first_digit_table, kl_benford, sample, weibull_fit_report,
};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "digitlaw",
    version,
    about = "Leading-significant-digit analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV file (header row required).
    #[arg(long)]
    input: PathBuf,
    /// Column to analyze, by header name or 0-based index.
    #[arg(long)]
    column: String,
}

#[derive(Args)]
struct OutArgs {
    /// Output base path: writes `<out>.json` (and `<out>.csv` for curve
    /// commands). Without it the JSON report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// First-digit table, distances to the logarithmic vector, block
    /// frequencies, and the empirical phase profile of a dataset.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Block length for the frequency table.
        #[arg(long, default_value_t = 1)]
        block_len: u32,
        /// Curve resolution (knots).
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate an analytic profile family and its induced digit vector.
    Profile {
        /// Family name (see `--family help` output on error).
        #[arg(long)]
        family: String,
        /// Family parameters as `key=value,key=value`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invert a windowed profile curve back to a distribution function.
    Invert {
        /// Curve CSV with header `s,G` (the target profile).
        #[arg(long)]
        input: PathBuf,
        /// Decade window as two integers `m n` (window is [10^m, 10^n)).
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        window: Vec<i32>,
        /// Grid resolution per unit interval.
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weibull maximum likelihood with bootstrap goodness of fit.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        /// Kolmogorov-Smirnov bootstrap replicates.
        #[arg(long, default_value_t = 300)]
        boot_ks: usize,
        /// Chi-square bootstrap replicates.
        #[arg(long, default_value_t = 400)]
        boot_chi2: usize,
        /// Equiprobable bins for the chi-square statistic.
        #[arg(long, default_value_t = 10)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact rho = J1 + J3 decomposition of block frequencies under a
    /// density family.
    Em {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        #[arg(long, default_value_t = 9)]
        k_max: u64,
        /// Absolute quadrature tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw a reproducible sample from a family and run the analyze
    /// pipeline on it.
    Simulate {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        block_len: u32,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<digitlaw::Error> for Failure {
    fn from(err: digitlaw::Error) -> Self {
        use digitlaw::Error::*;
        let code = match err {
            Domain(_)
            | EmptyInput(_)
            | Validation(_)
            | DegenerateWindow(_)
            | Normalization { .. }
            | Truncation { .. } => 2,
            Convergence { .. }
            | NoConvergence { .. }
            | NotDifferentiable { .. }
            | Resolution(_) => 1,
        };
        Failure {
            message: err.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("digitlaw: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn provenance(input_hash: Option<String>, seed: Option<u64>) -> serde_json::Value {
    json!({
        "tool": "digitlaw",
        "version": env!("CARGO_PKG_VERSION"),
        "input_hash": input_hash,
        "seed": seed,
    })
}

fn emit(out: &OutArgs, report: serde_json::Value, curve: Option<String>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &out.out {
        Some(base) => {
            let json_path = base.with_extension("json");
            std::fs::write(&json_path, text + "\n").map_err(|e| {
                Failure::usage(format!("cannot write {}: {e}", json_path.display()))
            })?;
            if let Some(curve) = curve {
                let csv_path = base.with_extension("csv");
                std::fs::write(&csv_path, curve).map_err(|e| {
                    Failure::usage(format!("cannot write {}: {e}", csv_path.display()))
                })?;
                eprintln!("wrote {} and {}", json_path.display(), csv_path.display());
            } else {
                eprintln!("wrote {}", json_path.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn read_input(input: &InputArgs) -> Result<(Dataset, String, usize, String), Failure> {
    let text = std::fs::read_to_string(&input.input)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", input.input.display())))?;
    let hash = csvio::fnv1a(text.as_bytes());
    let col = csvio::read_column(&text, &input.column).map_err(Failure::usage)?;
    Ok((col.dataset, col.column_name, col.rows, hash))
}

fn digit_vector(g: &Profile) -> Vec<f64> {
    (1..=9u64)
        .map(|k| rho_from_profile(g, 1.0, &DigitBlock::new(k).unwrap()))
        .collect()
}

fn analysis_report(
    data: &Dataset,
    block_len: u32,
    grid: usize,
) -> Result<(serde_json::Value, String), Failure> {
    if grid < 11 {
        return Err(Failure::usage("grid must be at least 11"));
    }
    if data.is_empty() {
        return Err(Failure::usage(
            "no positive finite values in the selected column",
        ));
    }
    let table = first_digit_table(data)?;
    let blocks = empirical_block_freq(data, block_len)?;
    let profile = empirical_profile(data)?;
    let curve = csvio::write_curve(&profile.curve_points(grid));
    let report = json!({
        "n": data.len(),
        "n_dropped": data.n_dropped(),
        "first_digit": table,
        "chi_square_benford": chi_square_benford(&table),
        "kl_benford_nats": kl_benford(&table),
        "block_len": block_len,
        "block_frequencies": blocks.entries(),
        "profile_grid": grid,
    });
    Ok((report, curve))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            input,
            block_len,
            grid,
            out,
        } => {
            let (data, column, rows, hash) = read_input(&input)?;
            let (mut report, curve) = analysis_report(&data, block_len, grid)?;
            report["command"] = json!("analyze");
            report["column"] = json!(column);
            report["rows"] = json!(rows);
            report["provenance"] = provenance(Some(hash), None);
            emit(&out, report, Some(curve))
        }
        Command::Profile {
            family,
            params,
            grid,
            out,
        } => {
            if grid < 11 {
                return Err(Failure::usage("grid must be at least 11"));
            }
            let params = families::parse_params(&params).map_err(Failure::usage)?;
            let profile = families::build_profile(&family, &params).map_err(Failure::usage)?;
            let curve = csvio::write_curve(&profile.curve_points(grid));
            let report = json!({
                "command": "profile",
                "family": family,
                "kind": profile.kind(),
                "first_digit_vector": digit_vector(&profile),
                "profile_grid": grid,
                "provenance": provenance(None, None),
            });
            emit(&out, report, Some(curve))
        }
        Command::Invert {
            input,
            window,
            grid,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", input.display())))?;
            let hash = csvio::fnv1a(text.as_bytes());
            let knots = csvio::read_curve(&text).map_err(Failure::usage)?;
            let spec = WindowSpec::new(window[0], window[1])?;
            // Resample the curve onto the solver's uniform grid.
            let target: Vec<f64> = (0..=grid)
                .map(|j| {
                    let s = j as f64 / grid as f64;
                    interp(&knots, s)
                })
                .collect();
            let problem = BoxSumProblem::new(spec, target)?;
            let rec = invert_box_sum(&problem)?;
            let report = json!({
                "command": "invert",
                "window": rec.window,
                "grid": rec.grid,
                "target": problem.target,
                "c": rec.c,
                "kernel_energy": rec.kernel_energy,
                "residual": rec.residual,
                "monotone_defect": rec.monotone_defect,
                "v_knots": rec.v_knots,
                "f_tilde": rec.f_tilde,
                "provenance": provenance(Some(hash), None),
            });
            emit(&out, report, None)
        }
        Command::Fit {
            input,
            boot_ks,
            boot_chi2,
            bins,
            seed,
            out,
        } => {
            let (data, column, _, hash) = read_input(&input)?;
            if data.is_empty() {
                return Err(Failure::usage(
                    "no positive finite values in the selected column",
                ));
            }
            let fit = weibull_fit_report(&data, boot_ks, boot_chi2, bins, seed)?;
            let mut report = serde_json::to_value(&fit).expect("fit serializes");
            report["command"] = json!("fit");
            report["column"] = json!(column);
            report["n"] = json!(data.len());
            report["provenance"] = provenance(Some(hash), Some(seed));
            emit(&out, report, None)
        }
        Command::Em {
            family,
            params,
            k_min,
            k_max,
            tol,
            out,
        } => {
            if k_min == 0 || k_min > k_max {
                return Err(Failure::usage("need 1 <= k-min <= k-max"));
            }
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Failure::usage("tolerance must be positive"));
            }
            let params = families::parse_params(&params).map_err(Failure::usage)?;
            let density = families::build_density(&family, &params).map_err(Failure::usage)?;
            let mut rows = Vec::new();
            for k in k_min..=k_max {
                let report = em_decompose(density.as_ref(), &DigitBlock::new(k)?, tol)?;
                rows.push(json!({
                    "k": report.k,
                    "j1": report.j1,
                    "j3": report.j3,
                    "rho": report.rho,
                    "benford_rho": report.benford_rho,
                    "deviation": report.deviation(),
                }));
            }
            let report = json!({
                "command": "em",
                "family": family,
                "tol": tol,
                "rows": rows,
                "provenance": provenance(None, None),
            });
            emit(&out, report, None)
        }
        Command::Simulate {
            family,
            params,
            n,
            seed,
            block_len,
            grid,
            out,
        } => {
            let params = families::parse_params(&params).map_err(Failure::usage)?;
            let sampler = families::build_sampler(&family, &params).map_err(Failure::usage)?;
            let data = sample(&sampler, n, seed)?;
            let (mut report, curve) = analysis_report(&data, block_len, grid)?;
            report["command"] = json!("simulate");
            report["family"] = json!(family);
            report["provenance"] = provenance(None, Some(seed));
            emit(&out, report, Some(curve))
        }
    }
}

fn interp(knots: &[(f64, f64)], s: f64) -> f64 {
    let first = knots.first().copied().unwrap_or((0.0, 0.0));
    let last = knots.last().copied().unwrap_or((1.0, 1.0));
    if s <= first.0 {
        return first.1;
    }
    if s >= last.0 {
        return last.1;
    }
    let idx = knots.partition_point(|&(x, _)| x <= s);
    let (x0, y0) = knots[idx - 1];
    let (x1, y1) = knots[idx];
    y0 + (s - x0) / (x1 - x0) * (y1 - y0)
}
