//! Accumulator read-out converter with a calibrated multiplicative error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean absolute percentage error of the accumulator's converter at the
/// 176-stream, 8-bit design point.
pub const TARGET_MAPE: f64 = 0.013;

/// Relative standard deviation of the converter's Gaussian gain error that
/// reproduces [`TARGET_MAPE`] over a uniform charge sweep at the design point
/// (16-bit converter, full scale 176·256 counts, seed 0). Found with
/// [`calibrate_noise_sigma`] and frozen here.
pub const CALIBRATED_NOISE_SIGMA: f64 = 0.016_368_489_032_343_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdcModel {
    pub resolution_bits: u32,
    /// Charge (in optical '1' counts) mapped to the top code.
    pub full_scale_counts: u64,
    pub target_mape: f64,
    /// Relative sigma of the gain error applied when noise is enabled.
    pub noise_sigma: f64,
    pub noise_seed: u64,
}

impl AdcModel {
    /// Converter sized for `vdpe_size` streams of `2^bits` bits, using the
    /// shipped calibration.
    pub fn for_vdpe(vdpe_size: usize, bits: u32) -> Self {
        Self {
            resolution_bits: 16,
            full_scale_counts: (vdpe_size as u64) << bits,
            target_mape: TARGET_MAPE,
            noise_sigma: CALIBRATED_NOISE_SIGMA,
            noise_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(1..=48).contains(&self.resolution_bits) {
            errs.push(format!("resolution_bits {} outside 1..=48", self.resolution_bits));
        }
        if self.full_scale_counts == 0 {
            errs.push("full_scale_counts must be positive".into());
        }
        if !(self.target_mape >= 0.0) {
            errs.push("target_mape must be non-negative".into());
        }
        if !(self.noise_sigma >= 0.0) {
            errs.push("noise_sigma must be non-negative".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    pub fn top_code(&self) -> u64 {
        (1u64 << self.resolution_bits) - 1
    }

    /// Charge represented by `code`.
    pub fn reconstruct(&self, code: u64) -> f64 {
        code as f64 * self.full_scale_counts as f64 / self.top_code() as f64
    }

    fn quantize_exact(&self, charge: u64) -> u64 {
        let top = u128::from(self.top_code());
        let fs = u128::from(self.full_scale_counts);
        ((2 * u128::from(charge) * top + fs) / (2 * fs)) as u64
    }

    fn quantize_real(&self, charge: f64) -> u64 {
        let x = charge * self.top_code() as f64 / self.full_scale_counts as f64;
        (x + 0.5).floor() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdcReading {
    pub code: u64,
    /// The input exceeded full scale and was clipped.
    pub saturated: bool,
}

/// Converts an accumulated charge to a code.
///
/// Without a noise source this is mid-tread quantization,
/// `floor(charge · (2^res - 1) / full_scale + 0.5)`. With one, the charge is
/// first scaled by `1 + σ·z`, `z ~ N(0, 1)`.
pub fn adc_convert<R: Rng + ?Sized>(
    charge: u64,
    adc: &AdcModel,
    noise: Option<&mut R>,
) -> AdcReading {
    let fs = adc.full_scale_counts;
    match noise {
        None => {
            let saturated = charge > fs;
            AdcReading {
                code: adc.quantize_exact(charge.min(fs)),
                saturated,
            }
        }
        Some(rng) => {
            let z: f64 = StandardNormal.sample(rng);
            let x = charge as f64 * (1.0 + adc.noise_sigma * z);
            let saturated = x > fs as f64;
            AdcReading {
                code: adc.quantize_real(x.clamp(0.0, fs as f64)),
                saturated,
            }
        }
    }
}

/// Charges `1..=full_scale` sampled at `points` evenly spaced positions.
fn sweep_charges(full_scale: u64, points: usize) -> impl Iterator<Item = u64> {
    let points = points.max(2) as u64;
    let span = full_scale.saturating_sub(1);
    (0..points).map(move |k| 1 + k * span / (points - 1))
}

/// Mean absolute percentage error of the reconstructed charge over a uniform
/// sweep. `seed = None` measures pure quantization.
pub fn sweep_mape(adc: &AdcModel, points: usize, seed: Option<u64>) -> f64 {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut total = 0.0;
    let mut n = 0usize;
    for c in sweep_charges(adc.full_scale_counts, points) {
        let r = adc_convert(c, adc, rng.as_mut());
        total += (adc.reconstruct(r.code) - c as f64).abs() / c as f64;
        n += 1;
    }
    total / n as f64
}

/// Finds the noise sigma whose sweep MAPE equals `target` under `seed`.
///
/// Every trial reuses the same normal draws, so the sweep error is monotone in
/// sigma and bisection converges.
pub fn calibrate_noise_sigma(adc: &AdcModel, target: f64, points: usize, seed: u64) -> f64 {
    let eval = |sigma: f64| {
        let m = AdcModel {
            noise_sigma: sigma,
            ..*adc
        };
        sweep_mape(&m, points, Some(seed))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
