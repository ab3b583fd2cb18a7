//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scopt::arch::{self, area_proportionate_scale, build_accelerator, Family, PeripheralCosts};
use scopt::optics::{
    bit_resolution, dbm_to_watts, laser_power_required, max_supported_n, noise_beta, solve_pd_sensitivity,
    OpticalLinkParams, SolveConfig,
};
use scopt::sc::adc::{sweep_mape, CALIBRATED_NOISE_SIGMA};
use scopt::sc::{
    generate_uncorrelated_pair, measure_vdp_error, round_half_even, AdcModel, BitstreamLut, PrecisionConfig,
    SignedOperand, Vdpe, WeightSigns,
};
use scopt::sim::functional::ToyNetwork;
use scopt::sim::{compare, Comparison};
use scopt::workload::{bundled, decompose, tensor_stats, KernelScope, NetworkSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn exhaustive_multiplication() -> Outcome {
    let p = PrecisionConfig::new(8).unwrap();
    let len = p.stream_length() as u32;
    let mut pairs = 0u32;
    let mut wrong = 0u32;
    for i in 0..=len {
        for w in 0..=len {
            let (a, b) = generate_uncorrelated_pair(i, w, p).unwrap();
            let ok = a.popcount() == u64::from(i)
                && b.popcount() == u64::from(w)
                && a.and_popcount(&b).unwrap() == round_half_even(u64::from(i * w), u64::from(len));
            pairs += 1;
            wrong += u32::from(!ok);
        }
    }
    outcome(pairs == 66_049 && wrong == 0, format!("{pairs} pairs, {wrong} mismatches"))
}

fn three_eighths() -> Outcome {
    let p = PrecisionConfig::new(3).unwrap();
    let (a, b) = generate_uncorrelated_pair(4, 6, p).unwrap();
    let and = a.and(&b).unwrap();
    outcome(
        and.len() == 8 && and.popcount() == 3,
        format!("4/8 AND 6/8 = {}/{}", and.popcount(), and.len()),
    )
}

fn noise_free_vdpe() -> Outcome {
    const N: usize = 176;
    let p = PrecisionConfig::new(8).unwrap();
    let vdpe = Vdpe::new(Arc::new(BitstreamLut::build(p).unwrap()), AdcModel::for_vdpe(N, 8), N).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let max = p.max_operand();
    let (mut worst, mut total) = (0.0f64, 0.0f64);
    let trials = 10_000;
    for _ in 0..trials {
        let div: Vec<u32> = (0..N).map(|_| rng.random_range(0..=max)).collect();
        let dkv: Vec<SignedOperand> = (0..N)
            .map(|_| SignedOperand::from_i64(rng.random_range(-i64::from(max)..=i64::from(max))))
            .collect();
        let exact: i64 = div.iter().zip(&dkv).map(|(&i, w)| i64::from(i) * w.value()).sum();
        let out = vdpe.dot::<ChaCha8Rng>(&div, &dkv, None).unwrap();
        let err = (out.value - exact as f64 / 256.0).abs();
        worst = worst.max(err);
        total += err;
    }
    let mean = total / f64::from(trials);
    outcome(
        worst <= 88.0 && mean <= 15.0,
        format!("{trials} VDPs, max |err| {worst:.3} (bound 88), mean {mean:.3} (limit 15)"),
    )
}

fn adc_calibration() -> Outcome {
    let adc = AdcModel::for_vdpe(176, 8);
    let mape = sweep_mape(&adc, adc.full_scale_counts as usize, Some(0));
    outcome(
        (mape - 0.013).abs() <= 0.002,
        format!("sigma {CALIBRATED_NOISE_SIGMA}, sweep MAPE {:.4}% (1.3 +/- 0.2)", mape * 100.0),
    )
}

fn decomposition_anchor() -> Outcome {
    let c = decompose(4608, 44).count;
    outcome(c == 105, format!("decompose(4608, 44) gives C = {c}"))
}

fn random_params(rng: &mut ChaCha8Rng) -> OpticalLinkParams {
    OpticalLinkParams {
        r_pd: rng.random_range(0.1..2.0),
        r_l: rng.random_range(10.0..1000.0),
        i_d: rng.random_range(0.0..1e-6),
        t: rng.random_range(1.0..400.0),
        rin_db_per_hz: rng.random_range(-170.0..-110.0),
        il_ec_db: rng.random_range(0.0..2.0),
        il_wg_db_per_mm: rng.random_range(0.0..2.0),
        el_splitter_db: rng.random_range(0.0..0.2),
        il_osm_db: rng.random_range(0.0..6.0),
        obl_osm_db: rng.random_range(0.0..0.1),
        obl_mrr_db: rng.random_range(0.0..0.1),
        il_mrr_db: rng.random_range(0.0..1.0),
        il_penalty_db: rng.random_range(0.0..10.0),
        d_osm_mm: rng.random_range(0.001..0.1),
        ..Default::default()
    }
}

/// `N_max` at the solved sensitivity; 0 when no sensitivity exists.
fn n_max_at(p: &OpticalLinkParams, bits: u32, bitrate: f64) -> u32 {
    let cfg = SolveConfig {
        bits,
        bitrate,
        ..SolveConfig::default()
    };
    match solve_pd_sensitivity(&cfg, p) {
        Ok(ppd) => max_supported_n(&cfg, p, ppd).unwrap(),
        Err(_) => 0,
    }
}

fn scalability() -> Outcome {
    let n = max_supported_n(&SolveConfig::default(), &OpticalLinkParams::default(), -28.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = Vec::new();
    for draw in 0..1000 {
        let p = random_params(&mut rng);
        let dbm = rng.random_range(-50.0..-5.0);
        let step = rng.random_range(0.01..1.0);
        let dr = rng.random_range(1e8..1e13);
        let (w0, w1) = (dbm_to_watts(dbm), dbm_to_watts(dbm + step));
        let nn = rng.random_range(1..300);
        let bits = rng.random_range(1..=8);
        let br = rng.random_range(1e9..40e9);
        let laser = |n: u32, ppd: f64| laser_power_required(n, n, ppd, &p, false).unwrap().total_dbm;
        let checks = [
            ("beta", noise_beta(w1, &p).unwrap() > noise_beta(w0, &p).unwrap()),
            ("b_res power", bit_resolution(w1, dr, &p).unwrap() > bit_resolution(w0, dr, &p).unwrap()),
            ("b_res rate", bit_resolution(w0, 2.0 * dr, &p).unwrap() < bit_resolution(w0, dr, &p).unwrap()),
            ("laser n", laser(nn + 1, dbm) > laser(nn, dbm)),
            ("laser p_pd", laser(nn, dbm + step) > laser(nn, dbm)),
            ("n_max rate", n_max_at(&p, bits, br) >= n_max_at(&p, bits, 2.0 * br)),
        ];
        violations.extend(checks.iter().filter(|c| !c.1).map(|c| format!("draw {draw}: {}", c.0)));
    }
    outcome(
        (130..=200).contains(&n) && violations.is_empty(),
        format!(
            "N_max at -28 dBm = {n} (band 130..=200, reference 176); {} monotonicity violations in 1000 draws{}",
            violations.len(),
            violations.first().map(|v| format!(", first {v}")).unwrap_or_default()
        ),
    )
}

fn kernel_counts() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, reference) in [("resnet50", (1u64, 26562u64)), ("googlenet", (13, 7554))] {
        let s = tensor_stats(&bundled::load(name).unwrap(), 44, KernelScope::ConvOnly);
        let total = reference.0 + reference.1;
        let residual = s.at_or_below.abs_diff(reference.0) + s.above.abs_diff(reference.1);
        let frac = residual as f64 / total as f64;
        pass &= frac <= 0.005;
        parts.push(format!(
            "{name} ({}, {}) vs ({}, {}), residual {:.3}%",
            s.at_or_below,
            s.above,
            reference.0,
            reference.1,
            frac * 100.0
        ));
    }
    outcome(pass, parts.join("; "))
}

fn area_scaling() -> Outcome {
    let costs = PeripheralCosts::default();
    let sconna = build_accelerator(&arch::preset("sconna-paper").unwrap(), &costs).unwrap();
    let reference = sconna.cost_summary().total_area_mm2;
    let mut pass = true;
    let mut parts = vec![format!("reference {reference:.2} mm2")];
    for (family, target) in [(Family::Mam, 3971.0), (Family::Amm, 3172.0)] {
        let s = area_proportionate_scale(&arch::AcceleratorConfig::baseline(family), &costs, reference).unwrap();
        let dev = f64::from(s.count) / target - 1.0;
        pass &= dev.abs() <= 0.05 && s.warning.is_none();
        parts.push(format!("{} {} VDPEs vs {target} ({:+.2}%)", family.as_str(), s.count, dev * 100.0));
    }
    outcome(pass, parts.join("; "))
}

fn bundled_networks() -> Vec<NetworkSpec> {
    bundled::ALL.iter().map(|(n, _)| bundled::load(n).unwrap()).collect()
}

fn comparison(networks: &[NetworkSpec], presets: &[&str]) -> Comparison {
    let costs = PeripheralCosts::default();
    let accels: Vec<_> = presets
        .iter()
        .map(|n| build_accelerator(&arch::preset(n).unwrap(), &costs).unwrap())
        .collect();
    compare(networks, &accels).unwrap()
}

fn trend_reproduction() -> Outcome {
    let cmp = comparison(&bundled_networks(), &arch::PRESET_NAMES);
    let g = |den: &str, metric: &str| cmp.gmean_of("sconna-paper", den, metric).unwrap_or(f64::NAN);
    let (fps_mam, fps_amm) = (g("mam-holylight", "fps"), g("amm-deapcnn", "fps"));
    let (eff_mam, eff_amm) = (g("mam-holylight", "fps_per_watt"), g("amm-deapcnn", "fps_per_watt"));
    let bands = [
        ("FPS vs MAM in [20, 130]", (20.0..=130.0).contains(&fps_mam)),
        ("FPS vs AMM in [40, 290]", (40.0..=290.0).contains(&fps_amm)),
        ("FPS/W vs MAM >= 20", eff_mam >= 20.0),
        ("FPS/W vs AMM >= 40", eff_amm >= 40.0),
    ];
    let mut ordering = true;
    for den in ["mam-holylight", "amm-deapcnn"] {
        let r = |net: &str| cmp.ratio_of(net, "sconna-paper", den, "fps").unwrap_or(f64::NAN);
        ordering &= r("googlenet").min(r("resnet50")) > r("mobilenet_v2").max(r("shufflenet_v2"));
    }
    let failed: Vec<_> = bands.iter().filter(|b| !b.1).map(|b| b.0).collect();
    outcome(
        failed.is_empty() && ordering,
        format!(
            "gmean FPS ratio {fps_mam:.3}x vs MAM, {fps_amm:.3}x vs AMM; FPS/W {eff_mam:.3}x, {eff_amm:.3}x; \
             large-over-small ordering {}; failed bands: {}",
            if ordering { "holds" } else { "violated" },
            if failed.is_empty() { "none".to_string() } else { failed.join(", ") }
        ),
    )
}

fn toy_network() -> Outcome {
    let report = ToyNetwork::bundled().evaluate(16).unwrap();
    outcome(
        report.within_bound(),
        format!(
            "{} neurons, {} outside the rounding bound, worst at {:.3} of its bound",
            report.neurons, report.violations, report.max_bound_fraction
        ),
    )
}

fn determinism() -> Outcome {
    let nets = vec![bundled::load("shufflenet_v2").unwrap()];
    let run = || {
        let c = comparison(&nets, &["sconna-paper", "amm-deapcnn"]);
        let toy = ToyNetwork::bundled().evaluate(16).unwrap();
        let p = PrecisionConfig::new(8).unwrap();
        let study = measure_vdp_error(500, 176, p, &AdcModel::for_vdpe(176, 8), 11, WeightSigns::Positive).unwrap();
        format!(
            "{}\n{}\n{}\n{}",
            c.long_csv(),
            c.ratio_csv(),
            serde_json::to_string(&c.metrics).unwrap(),
            serde_json::to_string(&(toy, study)).unwrap()
        )
    };
    let digest = |s: &str| {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        s.hash(&mut h);
        h.finish()
    };
    let (a, b) = (run(), run());
    outcome(
        a == b,
        format!("{} bytes, digests {:016x} / {:016x}", a.len(), digest(&a), digest(&b)),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "exhaustive stochastic multiplication", exhaustive_multiplication, 10),
        (2, "4/8 x 6/8 stream product", three_eighths, 1),
        (3, "noise-free VDPE fidelity", noise_free_vdpe, 30),
        (4, "converter calibration", adc_calibration, 10),
        (5, "decomposition anchor", decomposition_anchor, 1),
        (6, "scalability anchor and monotonicity", scalability, 5),
        (7, "kernel size counts", kernel_counts, 5),
        (8, "area-proportionate scaling", area_scaling, 5),
        (9, "system-level trend bands", trend_reproduction, 600),
        (10, "toy network bit-exact evaluation", toy_network, 60),
        (11, "determinism", determinism, 60),
    ];
    let mut failed = 0;
    for (id, name, check, limit_s) in criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= Duration::from_secs(limit_s);
        println!(
            "criterion {id:>2} {} {name}: {}; {elapsed:.2?} (limit {limit_s} s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += u32::from(!pass);
    }
    println!("{} of {} criteria passed", criteria.len() as u32 - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
