//! Dot-product error study: rounding-only versus converter-included error
//! on random vectors, paired on identical operands.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sc::adc::AdcModel;
use crate::sc::bitstream::PrecisionConfig;
use crate::sc::lut::BitstreamLut;
use crate::sc::vdpe::{Sign, SignedOperand, Vdpe};

/// How random weights are signed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WeightSigns {
    /// All weights non-negative; the result is one accumulator's reading, so
    /// the percentage error isolates the converter.
    #[default]
    Positive,
    /// Independent random signs. Cancellation between the accumulators
    /// inflates percentage errors.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    /// Mean of `|result - exact| / |exact|` over trials with `exact != 0`.
    pub mape: f64,
    pub mean_abs_error: f64,
    pub max_abs_error: f64,
    /// Trials contributing to `mape`.
    pub mape_trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VdpErrorReport {
    pub trials: usize,
    pub length: usize,
    pub bits: u32,
    pub seed: u64,
    /// Noise-free read-out: only the per-term product rounding remains.
    pub rounding_only: ErrorStats,
    /// Noisy converter on both accumulators.
    pub with_adc: ErrorStats,
}

#[derive(Default)]
struct Acc {
    ape: f64,
    ape_n: usize,
    abs: f64,
    max: f64,
    n: usize,
}

impl Acc {
    fn push(&mut self, got: f64, exact: f64) {
        let e = (got - exact).abs();
        self.abs += e;
        self.max = self.max.max(e);
        self.n += 1;
        if exact != 0.0 {
            self.ape += e / exact.abs();
            self.ape_n += 1;
        }
    }

    fn finish(&self) -> ErrorStats {
        ErrorStats {
            mape: if self.ape_n == 0 { 0.0 } else { self.ape / self.ape_n as f64 },
            mean_abs_error: self.abs / self.n.max(1) as f64,
            max_abs_error: self.max,
            mape_trials: self.ape_n,
        }
    }
}

/// Runs `trials` random dot products of `length` terms. Errors are in charge
/// counts against the exact `Σ x·w / 2^B`.
pub fn measure_vdp_error(
    trials: usize,
    length: usize,
    precision: PrecisionConfig,
    adc: &AdcModel,
    seed: u64,
    signs: WeightSigns,
) -> Result<VdpErrorReport> {
    if trials == 0 {
        return Err(Error::range("trials", 0, 1, i64::MAX));
    }
    let lut = Arc::new(BitstreamLut::build(precision)?);
    measure_with_lut(trials, length, lut, adc, seed, signs)
}

pub(crate) fn measure_with_lut(
    trials: usize,
    length: usize,
    lut: Arc<BitstreamLut>,
    adc: &AdcModel,
    seed: u64,
    signs: WeightSigns,
) -> Result<VdpErrorReport> {
    let precision = lut.precision();
    let vdpe = Vdpe::new(lut, *adc, length)?;
    let max = precision.max_operand();
    let scale = precision.stream_length() as f64;

    let mut operands = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = ChaCha8Rng::seed_from_u64(seed ^ adc.noise_seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut off = Acc::default();
    let mut on = Acc::default();
    let mut div = vec![0u32; length];
    let mut dkv = vec![SignedOperand::new(0, Sign::Positive); length];
    for _ in 0..trials {
        for (x, w) in div.iter_mut().zip(dkv.iter_mut()) {
            *x = operands.random_range(0..=max);
            let sign = match signs {
                WeightSigns::Positive => Sign::Positive,
                WeightSigns::Mixed if operands.random::<bool>() => Sign::Negative,
                WeightSigns::Mixed => Sign::Positive,
            };
            *w = SignedOperand::new(operands.random_range(0..=max), sign);
        }
        let exact: i64 = div.iter().zip(&dkv).map(|(&x, w)| i64::from(x) * w.value()).sum();
        let exact = exact as f64 / scale;
        off.push(vdpe.dot::<ChaCha8Rng>(&div, &dkv, None)?.value, exact);
        on.push(vdpe.dot(&div, &dkv, Some(&mut noise))?.value, exact);
    }
    Ok(VdpErrorReport {
        trials,
        length,
        bits: precision.bits(),
        seed,
        rounding_only: off.finish(),
        with_adc: on.finish(),
    })
}
