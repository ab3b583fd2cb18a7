//! Bit-exact evaluation of convolutions through the stochastic VDPE model.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::sc::{AdcModel, BitstreamLut, PrecisionConfig, SignedOperand, Vdpe};
use crate::workload::{decompose, flatten_layer, KernelBank, LayerKind, LayerSpec, NetworkSpec, Tensor3};

type Quiet = Option<&'static mut ChaCha8Rng>;

/// Dot product of unsigned activations and signed weights evaluated segment
/// by segment on `vdpe`, noise off. Returns charge counts (units of 2^-B).
pub fn sc_dot(vdpe: &Vdpe, input: &[i64], kernel: &[i64]) -> Result<i64> {
    let seg = decompose(input.len().max(1) as u64, vdpe.size() as u64);
    let mut total = 0i64;
    for c in 0..seg.count {
        let div: Vec<u32> = seg.slice_padded(input, c).iter().map(|&x| x as u32).collect();
        let dkv: Vec<SignedOperand> = seg.slice_padded(kernel, c).into_iter().map(SignedOperand::from_i64).collect();
        let out = vdpe.dot(&div, &dkv, None as Quiet)?;
        total += out.positive_charge as i64 - out.negative_charge as i64;
    }
    Ok(total)
}

/// Whether `counts` is within half a count per term of `exact / 2^bits`.
pub fn within_rounding_bound(counts: i64, exact: i64, terms: usize, bits: u32) -> bool {
    let scale = 1i128 << bits;
    ((counts as i128) * scale - exact as i128).abs() <= (scale / 2) * terms as i128
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub layer: String,
    pub points: usize,
    pub terms_per_point: usize,
    /// Largest `|counts - exact / 2^B|`.
    pub max_abs_error_counts: f64,
    pub bound_counts: f64,
    pub within_bound: bool,
}

fn vdpe_for(bits: u32, size: usize) -> Result<Vdpe> {
    let precision = PrecisionConfig::new(bits)?;
    let lut = Arc::new(BitstreamLut::build(precision)?);
    Vdpe::new(lut, AdcModel::for_vdpe(size, bits), size)
}

/// Fills the layer with seeded random operands and checks up to `max_points`
/// evenly spaced output points against the exact integer result.
pub fn crosscheck_layer(layer: &LayerSpec, bits: u32, vdpe_size: usize, seed: u64, max_points: usize) -> Result<CrossCheck> {
    let vdpe = vdpe_for(bits, vdpe_size)?;
    let max = i64::from(vdpe.lut().precision().max_operand());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (h, w, d) = (layer.height as usize, layer.width as usize, layer.depth as usize);
    let input = Tensor3::new(h, w, d, (0..h * w * d).map(|_| rng.random_range(0..=max)).collect())?;
    let kd = if layer.kind == LayerKind::DepthwiseConv { 1 } else { d };
    let (k, l) = (layer.kernel as usize, layer.kernels as usize);
    let bank = KernelBank::new(k, kd, l, (0..k * k * kd * l).map(|_| rng.random_range(-max..=max)).collect())?;
    let total = layer.output_points() as usize;
    let step = total.div_ceil(max_points.max(1)).max(1);
    let terms = layer.vector_len() as usize;
    let scale = f64::from(1u32 << bits);
    let mut worst = 0f64;
    let mut ok = true;
    let mut points = 0;
    for p in flatten_layer(layer, &input, &bank)?.step_by(step) {
        let counts = sc_dot(&vdpe, &p.input, &p.kernel)?;
        let exact = p.dot();
        worst = worst.max((counts as f64 - exact as f64 / scale).abs());
        ok &= within_rounding_bound(counts, exact, terms, bits);
        points += 1;
    }
    Ok(CrossCheck {
        layer: layer.name.clone(),
        points,
        terms_per_point: terms,
        max_abs_error_counts: worst,
        bound_counts: 0.5 * terms as f64,
        within_bound: ok,
    })
}

pub const TOY_SEED: u64 = 0x70_7e;

/// Three-layer quantized network: two convolutions and a classifier, 8-bit
/// activations, sign-magnitude 8-bit weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyNetwork {
    pub network: NetworkSpec,
    pub weights: Vec<KernelBank>,
    /// Right shift applied after ReLU to requantize each layer's output.
    pub shifts: Vec<u32>,
    pub input: Tensor3,
    pub bits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToyReport {
    pub neurons: usize,
    pub violations: usize,
    pub max_abs_error_counts: f64,
    /// Largest error relative to that neuron's bound.
    pub max_bound_fraction: f64,
    pub exact_logits: Vec<i64>,
    pub sc_logits: Vec<i64>,
}

impl ToyReport {
    pub fn within_bound(&self) -> bool {
        self.violations == 0
    }
}

impl ToyNetwork {
    pub fn bundled() -> Self {
        Self::generate(TOY_SEED)
    }

    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let network = NetworkSpec {
            name: "toy3".into(),
            layers: vec![
                LayerSpec::conv("conv1", 8, 2, 3, 4, 1, 1),
                LayerSpec::conv("conv2", 8, 4, 3, 4, 2, 1),
                LayerSpec::fully_connected("fc", 64, 10),
            ],
        };
        let mut weights = Vec::new();
        for l in &network.layers {
            let n = (l.kernel * l.kernel * l.depth * l.kernels) as usize;
            let data = (0..n).map(|_| rng.random_range(-255..=255)).collect();
            weights.push(KernelBank::new(l.kernel as usize, l.depth as usize, l.kernels as usize, data).expect("sized"));
        }
        let input = Tensor3::new(8, 8, 2, (0..128).map(|_| rng.random_range(0..=255)).collect()).expect("sized");
        Self {
            network,
            weights,
            shifts: vec![10, 11, 0],
            input,
            bits: 8,
        }
    }

    fn requantize(&self, i: usize, pre: &[i64]) -> Vec<i64> {
        pre.iter().map(|&v| (v.max(0) >> self.shifts[i]).min(255)).collect()
    }

    fn layer_input(&self, i: usize, data: Vec<i64>) -> Tensor3 {
        let l = &self.network.layers[i];
        Tensor3::new(l.height as usize, l.width as usize, l.depth as usize, data).expect("layers chain")
    }

    /// Pre-activation outputs of every layer in exact integer arithmetic.
    pub fn forward_exact(&self) -> Vec<Vec<i64>> {
        let mut x = self.input.clone();
        let mut outs = Vec::new();
        for (i, (l, w)) in self.network.layers.iter().zip(&self.weights).enumerate() {
            let pre: Vec<i64> = flatten_layer(l, &x, w).expect("valid toy layer").map(|p| p.dot()).collect();
            if i + 1 < self.network.layers.len() {
                x = self.layer_input(i + 1, self.requantize(i, &pre));
            }
            outs.push(pre);
        }
        outs
    }

    /// Runs every neuron through the stochastic VDPE on the exact pass's
    /// activations and compares each against the per-term rounding bound.
    pub fn evaluate(&self, vdpe_size: usize) -> Result<ToyReport> {
        let vdpe = vdpe_for(self.bits, vdpe_size)?;
        let scale = f64::from(1u32 << self.bits);
        let mut x = self.input.clone();
        let mut report = ToyReport {
            neurons: 0,
            violations: 0,
            max_abs_error_counts: 0.0,
            max_bound_fraction: 0.0,
            exact_logits: Vec::new(),
            sc_logits: Vec::new(),
        };
        let last = self.network.layers.len() - 1;
        for (i, (l, w)) in self.network.layers.iter().zip(&self.weights).enumerate() {
            let terms = l.vector_len() as usize;
            let mut pre = Vec::new();
            for p in flatten_layer(l, &x, w)? {
                let exact = p.dot();
                let counts = sc_dot(&vdpe, &p.input, &p.kernel)?;
                let err = (counts as f64 - exact as f64 / scale).abs();
                report.neurons += 1;
                report.max_abs_error_counts = report.max_abs_error_counts.max(err);
                report.max_bound_fraction = report.max_bound_fraction.max(err / (0.5 * terms as f64));
                if !within_rounding_bound(counts, exact, terms, self.bits) {
                    report.violations += 1;
                }
                if i == last {
                    report.exact_logits.push(exact);
                    report.sc_logits.push(counts);
                }
                pre.push(exact);
            }
            if i < last {
                x = self.layer_input(i + 1, self.requantize(i, &pre));
            }
        }
        Ok(report)
    }
}
