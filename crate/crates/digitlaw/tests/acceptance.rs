//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its headline numbers (visible with `--nocapture`).
//!
//! Run with `cargo test -p digitlaw --test acceptance`.

use std::sync::Arc;
use std::time::Instant;

use digitlaw::density::{
    DecadeEquivalent, Density, LogNormal, LogUniform, PowerLaw, ProductUniforms, RatioUniforms,
    Uniform, Weibull,
};
use digitlaw::digitcore::{
    empirical_block_freq, empirical_profile, log_phase, Dataset, DigitBlock,
};
use digitlaw::embridge::{em_decompose, profile_from_density, rho_integral};
use digitlaw::inversion::{box_sum_apply, invert_box_sum, reconstruct_cdf, BoxSumProblem};
use digitlaw::profiles::{
    benford_profile, powerlaw_profile, powerlaw_rho_extrema, ratio_uniforms_profile,
    rho_from_profile, windowed_profile_from_cdf, PowerLawParams, Profile, WindowSpec,
};
use digitlaw::scaling::{base_slice, build_r, eval_g_via_r, shift_profile};
use digitlaw::statfit::{
    chi2_equiprob_bootstrap, chi_square_benford, first_digit_table, info_criteria, kl_benford,
    ks_bootstrap, sample, weibull_mle, SampleFamily,
};

/// Default seed used across the acceptance runs and by the CLI.
const SEED: u64 = 7;

fn block(k: u64) -> DigitBlock {
    DigitBlock::new(k).unwrap()
}

fn population_fixture() -> Dataset {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/population_2023.csv"
    );
    let text = std::fs::read_to_string(path).expect("population fixture present");
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    Dataset::from_values(values)
}

fn sup_distance(a: &Profile, b: &Profile, n: usize) -> f64 {
    (0..=n)
        .map(|i| {
            let s = i as f64 / n as f64;
            (a.eval(s) - b.eval(s)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_block_table_exactness() {
    let start = Instant::now();
    let data = Dataset::from_values((100..1000).map(|k| k as f64));
    let t1 = empirical_block_freq(&data, 1).unwrap();
    assert_eq!(t1.frequency(1), 100.0 / 900.0);
    let t2 = empirical_block_freq(&data, 2).unwrap();
    assert_eq!(t2.frequency(23), 10.0 / 900.0);
    let t3 = empirical_block_freq(&data, 3).unwrap();
    assert_eq!(t3.frequency(314), 1.0 / 900.0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("[criterion 01] PASS block-frequency table exact (rho(1)=100/900, rho(23)=10/900, rho(314)=1/900) in {elapsed:?}");
}

#[test]
fn criterion_02_benford_benchmark() {
    let start = Instant::now();
    let g = benford_profile();
    for k in 1..=9999u64 {
        let rho = rho_from_profile(&g, 1.0, &block(k));
        let expect = ((k + 1) as f64 / k as f64).log10();
        assert!((rho - expect).abs() <= 1e-12, "k={k}: {rho} vs {expect}");
    }
    for d in 0..=3u32 {
        let lo = 10u64.pow(d);
        let sum: f64 = (lo..10 * lo)
            .map(|k| rho_from_profile(&g, 1.0, &block(k)))
            .sum();
        assert!((sum - 1.0).abs() <= 1e-9, "decade {d}: {sum}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("[criterion 02] PASS Benford benchmark to 1e-12 for k <= 9999, decade sums to 1e-9 in {elapsed:?}");
}

#[test]
fn criterion_03_population_case_study() {
    let start = Instant::now();
    let data = population_fixture();
    assert_eq!(data.len(), 217);
    let table = first_digit_table(&data).unwrap();
    assert_eq!(table.counts, [68, 36, 30, 16, 25, 16, 8, 9, 9]);
    let chi2 = chi_square_benford(&table);
    assert!((chi2 - 7.609).abs() <= 0.001, "chi2 {chi2}");
    let kl = kl_benford(&table);
    assert!((kl - 0.01738).abs() <= 1e-4, "kl {kl}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "[criterion 03] PASS population counts exact, chi2={chi2:.4}, KL={kl:.5} in {elapsed:?}"
    );
}

#[test]
fn criterion_04_weibull_fit_and_bootstrap() {
    let start = Instant::now();
    let data = population_fixture();
    let fit = weibull_mle(&data).unwrap();
    assert!((fit.shape - 0.467).abs() <= 0.005, "shape {}", fit.shape);
    assert!(
        (fit.scale / 1.37467e7 - 1.0).abs() <= 0.005,
        "scale {}",
        fit.scale
    );
    assert!((fit.loglik - -3813.4).abs() <= 0.5, "loglik {}", fit.loglik);
    let (aic, bic) = info_criteria(fit.loglik, 2, data.len() as u64);
    assert!((aic - 7630.8).abs() <= 1.0, "aic {aic}");
    assert!((bic - 7637.5).abs() <= 1.0, "bic {bic}");
    let (ks_d, ks_p) = ks_bootstrap(&data, &fit, 300, SEED).unwrap();
    assert!((ks_d - 0.0454).abs() <= 0.001, "D {ks_d}");
    assert!((0.27..=0.43).contains(&ks_p), "ks p {ks_p}");
    let (chi2, chi2_p) = chi2_equiprob_bootstrap(&data, &fit, 10, 400, SEED).unwrap();
    assert!((chi2 - 5.72).abs() <= 0.05, "chi2 {chi2}");
    assert!((0.54..=0.70).contains(&chi2_p), "chi2 p {chi2_p}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "[criterion 04] PASS weibull fit shape={:.4} scale={:.4e} loglik={:.1} aic={aic:.1} bic={bic:.1} D={ks_d:.4} (p={ks_p:.3}) chi2={chi2:.3} (p={chi2_p:.3}) in {elapsed:?}",
        fit.shape, fit.scale, fit.loglik
    );
}

#[test]
fn criterion_05_ratio_profile_cross_validation() {
    let start = Instant::now();
    let closed = ratio_uniforms_profile();
    let from_density = profile_from_density(Arc::new(RatioUniforms), 1e-10).unwrap();
    let quad_gap = sup_distance(&from_density, &closed, 1000);
    assert!(quad_gap <= 1e-9, "quadrature sup gap {quad_gap}");

    let mc = sample(&SampleFamily::RatioUniforms, 1_000_000, SEED).unwrap();
    let empirical = empirical_profile(&mc).unwrap();
    let mc_gap = sup_distance(&empirical, &closed, 1000);
    assert!(mc_gap <= 0.005, "monte carlo sup gap {mc_gap}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("[criterion 05] PASS ratio-of-uniforms profile: quadrature gap {quad_gap:.2e}, 1e6-sample gap {mc_gap:.2e} in {elapsed:?}");
}

#[test]
fn criterion_06_em_route_agreement() {
    let start = Instant::now();
    let builtins: Vec<Arc<dyn Density>> = vec![
        Arc::new(LogUniform::unit_decade()),
        Arc::new(Uniform::new(1.0).unwrap()),
        Arc::new(RatioUniforms),
        Arc::new(ProductUniforms::new(2).unwrap()),
        Arc::new(DecadeEquivalent),
        Arc::new(Weibull::new(1.0, 1.0).unwrap()),
        Arc::new(PowerLaw::new(2.0, 5.0).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for f in &builtins {
        let g = profile_from_density(f.clone(), 1e-10).unwrap();
        for k in 1..=99u64 {
            let b = block(k);
            let direct = rho_integral(f.as_ref(), &b, 1e-10).unwrap();
            let via_profile = rho_from_profile(&g, 1.0, &b);
            let gap = (direct - via_profile).abs();
            assert!(gap <= 2e-10, "{} k={k}: gap {gap}", f.name());
            worst = worst.max(gap);
        }
    }
    // The log-uniform density is the exact fixed point: J3 vanishes.
    let benford = LogUniform {
        low_decade: -2,
        high_decade: 4,
    };
    let mut worst_j3: f64 = 0.0;
    for k in 1..=999u64 {
        let report = em_decompose(&benford, &block(k), 1e-10).unwrap();
        assert!(report.j3.abs() <= 1e-10, "k={k}: J3 {}", report.j3);
        worst_j3 = worst_j3.max(report.j3.abs());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("[criterion 06] PASS EM routes agree (worst gap {worst:.2e} over {} densities, k <= 99; max |J3| = {worst_j3:.2e} on log-uniform) in {elapsed:?}", builtins.len());
}

#[test]
fn criterion_07_inversion_examples_and_round_trip() {
    let start = Instant::now();

    // Single decade: G(s) = s inverts to F proportional to log10 x.
    let window1 = WindowSpec::new(0, 1).unwrap();
    let p1 = BoxSumProblem::from_profile(window1, &benford_profile(), 512).unwrap();
    let rec1 = invert_box_sum(&p1).unwrap();
    let cdf = reconstruct_cdf(&rec1, 0.0, 1.0).unwrap();
    for x in [1.0, 2.0, 3.1623, 7.0, 9.999] {
        assert!((cdf.eval(x).unwrap() - x.log10()).abs() <= 1e-9, "x={x}");
    }

    // Three decades: the canonical solution is V(t) = t/3 with no
    // oscillatory content.
    let window3 = WindowSpec::new(-1, 2).unwrap();
    let p3 = BoxSumProblem::from_profile(window3, &benford_profile(), 512).unwrap();
    let rec3 = invert_box_sum(&p3).unwrap();
    for (u, &v) in rec3.v_knots.iter().enumerate() {
        let t = -1.0 + u as f64 / 512.0;
        assert!((v - t / 3.0).abs() <= 1e-9, "t={t}");
    }
    assert!(
        rec3.kernel_energy <= 1e-16,
        "kernel energy {}",
        rec3.kernel_energy
    );

    // Forward-then-invert round trip on a lognormal window.
    let lognormal =
        LogNormal::new(1.5 * std::f64::consts::LN_10, 0.9 * std::f64::consts::LN_10).unwrap();
    let window = WindowSpec::new(0, 3).unwrap();
    let g = windowed_profile_from_cdf(move |x| lognormal.cdf(x), window).unwrap();
    let problem = BoxSumProblem::from_profile(window, &g, 2048).unwrap();
    let rec = invert_box_sum(&problem).unwrap();
    let mut residual = 0.0f64;
    for (j, &target) in problem.target.iter().enumerate() {
        let s = j as f64 / 2048.0;
        let total = box_sum_apply(&|t| rec.v_at(t), &window, s);
        residual = residual.max((total - target).abs());
    }
    assert!(residual < 1e-6, "round-trip residual {residual}");
    assert!(rec.kernel_energy.is_finite());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("[criterion 07] PASS inversion: L=1 log CDF, L=3 affine V (kernel energy {:.1e}), lognormal round-trip residual {residual:.2e} in {elapsed:?}", rec3.kernel_energy);
}

#[test]
fn criterion_08_scaling_identity() {
    let start = Instant::now();
    let slice = base_slice(&Uniform::new(1.0).unwrap(), (-12, 2)).unwrap();
    let r = build_r(&slice);
    let mut rng = digitlaw::rng::Rng::new(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = rng.next_f64();
        let b = 10f64.powf(4.0 * rng.next_f64() - 2.0);
        let via_r = eval_g_via_r(&r, s, b).unwrap();
        let via_shift = shift_profile(&slice, b).unwrap().eval(s);
        let gap = (via_r - via_shift).abs();
        assert!(gap <= 1e-12, "s={s}, b={b}: {gap}");
        worst = worst.max(gap);
    }
    // Period-1 invariance in log10 b, pointwise.
    for b in [2.0f64, 3.7, 9.42, 123.0] {
        let g_b = shift_profile(&slice, b).unwrap();
        let g_10b = shift_profile(&slice, 10.0 * b).unwrap();
        for i in 0..=256 {
            let s = i as f64 / 256.0;
            assert_eq!(
                g_b.eval(s).to_bits(),
                g_10b.eval(s).to_bits(),
                "b={b}, s={s}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("[criterion 08] PASS scaling identity |R(b-s)-R(b)-g(s,b)| <= 1e-12 (worst {worst:.1e}), period-1 exact in {elapsed:?}");
}

#[test]
fn criterion_09_asymptotics() {
    let start = Instant::now();
    // Benford: rho(k) * k * ln10 -> 1 with error <= 1/k.
    let g = benford_profile();
    for k in 1..=1_000_000u64 {
        let rho = rho_from_profile(&g, 1.0, &block(k));
        let scaled = rho * k as f64 * std::f64::consts::LN_10;
        assert!((scaled - 1.0).abs() <= 1.0 / k as f64, "k={k}: {scaled}");
    }
    // Uniform window: rho is constant within each decade.
    let uniform = powerlaw_profile(&PowerLawParams::new(1.0, 10.0).unwrap()).unwrap();
    for d in 3..=5u32 {
        let lo = 10u64.pow(d);
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for k in lo..10 * lo {
            let rho = rho_from_profile(&uniform, 1.0, &block(k));
            min = min.min(rho);
            max = max.max(rho);
        }
        let rel = (max - min) / min;
        assert!(rel <= 1e-3, "decade {d}: relative spread {rel}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("[criterion 09] PASS asymptotics: k ln10 rho -> 1 (err <= 1/k to k=1e6); uniform-window rho constant per decade in {elapsed:?}");
}

#[test]
fn criterion_10_powerlaw_periodicity_and_extrema() {
    let start = Instant::now();
    let p = 1.0;
    // Periodicity in log10 b with period 1.
    let mut worst: f64 = 0.0;
    for k in [1u64, 3, 8] {
        let kb = block(k);
        for i in 0..1000 {
            let beta = i as f64 / 1000.0;
            let rho_lo = rho_from_profile(
                &powerlaw_profile(&PowerLawParams::new(p, 10f64.powf(beta)).unwrap()).unwrap(),
                1.0,
                &kb,
            );
            let rho_hi = rho_from_profile(
                &powerlaw_profile(&PowerLawParams::new(p, 10f64.powf(beta + 1.0)).unwrap())
                    .unwrap(),
                1.0,
                &kb,
            );
            let gap = (rho_lo - rho_hi).abs();
            assert!(gap < 1e-12, "k={k}, beta={beta}: {gap}");
            worst = worst.max(gap);
        }
    }
    // Extrema: max at {log10 b} = {log10(k+1)}.
    for (k, p) in [(1u64, 1.0), (1, 2.0), (3, 1.0), (8, 0.5), (9, 1.0)] {
        let kb = block(k);
        let (max_expect, min_expect) = powerlaw_rho_extrema(&kb, p).unwrap();
        let rho_at = |phase: f64| {
            let g = powerlaw_profile(&PowerLawParams::new(p, 10f64.powf(phase)).unwrap()).unwrap();
            rho_from_profile(&g, 1.0, &kb)
        };
        let at_max = rho_at(log_phase((k + 1) as f64).unwrap().phase);
        let at_min = rho_at(log_phase(k as f64).unwrap().phase);
        assert!((at_max - max_expect).abs() <= 1e-10, "k={k}, p={p} max");
        assert!((at_min - min_expect).abs() <= 1e-10, "k={k}, p={p} min");
        // Sampled frequencies stay inside the predicted envelope.
        for i in 0..500 {
            let rho = rho_at(i as f64 / 500.0);
            assert!(
                rho <= max_expect + 1e-9 && rho >= min_expect - 1e-9,
                "k={k}, p={p}"
            );
        }
    }
    let (max1, min1) = powerlaw_rho_extrema(&block(1), 1.0).unwrap();
    assert!((max1 - 5.0 / 9.0).abs() < 1e-14);
    assert!((min1 - 1.0 / 9.0).abs() < 1e-14);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("[criterion 10] PASS power-law rho periodic in log10 b (worst period gap {worst:.1e}); extrema match closed forms (k=1, p=1 max = 5/9) in {elapsed:?}");
}

#[test]
fn figure_reproductions_property_checks() {
    let start = Instant::now();
    // Normal-window profiles across shifted means: valid, monotone, and
    // progressing from concave-late to saturating-early as the mean moves
    // through the decade.
    let mut half_values = Vec::new();
    for mu in [-2.0, 0.0, 3.0, 8.0, 12.0] {
        let g = windowed_profile_from_cdf(
            move |x: f64| digitlaw::density::standard_normal_cdf(x - mu),
            WindowSpec::new(0, 1).unwrap(),
        )
        .unwrap();
        g.validate(1000).unwrap();
        half_values.push(g.eval(0.5));
    }
    // Mass concentrates at larger mantissas as mu grows, so G(1/2) falls.
    for w in half_values.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "G(1/2) sequence {half_values:?}");
    }

    // Weibull phase profiles: deviation from the diagonal grows with the
    // shape parameter (0.5 nearly Benford, 1 close, 2 visibly S-shaped).
    let diagonal = benford_profile();
    let mut deviations = Vec::new();
    for (i, shape) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let data = sample(
            &SampleFamily::Weibull { shape, scale: 1.0 },
            600_000,
            SEED + i as u64,
        )
        .unwrap();
        let g = empirical_profile(&data).unwrap();
        g.validate(500).unwrap();
        deviations.push(sup_distance(&g, &diagonal, 400));
    }
    assert!(
        deviations[0] < deviations[1] && deviations[1] < deviations[2],
        "deviation ordering {deviations:?}"
    );
    assert!(deviations[1] < 0.05, "shape-1 deviation {}", deviations[1]);
    assert!(deviations[2] > 0.08, "shape-2 deviation {}", deviations[2]);
    let elapsed = start.elapsed();
    println!("[figures] PASS normal-window ordering and Weibull shape ordering {deviations:?} in {elapsed:?}");
}
