use serde::Serialize;

use crate::arch::Accelerator;
use crate::error::{Error, Result};
use crate::workload::{decompose, LayerKind, LayerSpec, NetworkSpec, Segmentation};

/// Weight-stationary placement of one layer.
///
/// Segments are ordered `g = dkv · positions + position` with
/// `dkv = kernel · C + segment`, and VDPE `v` works through the contiguous
/// run `[v · waves, (v + 1) · waves)`. Every DKV a VDPE holds is therefore
/// used for consecutive waves before its weights change; DKVs straddling a
/// run boundary are replicated on the neighboring VDPE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerSchedule {
    pub name: String,
    pub kind: LayerKind,
    /// Output points (`H_out · W_out · L`).
    pub outputs: u64,
    /// Output positions sharing one DKV (`H_out · W_out`).
    pub positions: u64,
    pub out_width: u64,
    pub segmentation: Option<Segmentation>,
    /// Segments that run concurrently in one wave.
    pub parallel: u64,
    pub waves: u64,
    /// Waves in which at least one VDPE loads a new DKV, ascending.
    pub reload_waves: Vec<u64>,
    /// `(VDPE, DKV)` placements, i.e. weight loads.
    pub dkv_loads: u64,
}

/// Slot of one segment in the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub wave: u64,
    pub vdpe: u64,
    pub coord: (u64, u64, u64),
    pub segment: u64,
}

impl LayerSchedule {
    fn compute(layer: &LayerSpec, n: u64, parallel: u64) -> Self {
        let outputs = layer.output_points();
        let positions = layer.output_positions();
        let out_width = u64::from(layer.output_dims().1);
        let mut s = LayerSchedule {
            name: layer.name.clone(),
            kind: layer.kind,
            outputs,
            positions,
            out_width,
            segmentation: None,
            parallel,
            waves: 0,
            reload_waves: Vec::new(),
            dkv_loads: 0,
        };
        if !layer.kind.has_kernels() {
            return s;
        }
        let seg = decompose(layer.vector_len(), n);
        let total = outputs * seg.count;
        let waves = total.div_ceil(parallel);
        let dkvs = u64::from(layer.kernels) * seg.count;
        let mut reload = vec![false; waves as usize];
        for j in 0..dkvs {
            reload[((j * positions) % waves) as usize] = true;
        }
        s.reload_waves = reload
            .iter()
            .enumerate()
            .filter_map(|(w, &r)| r.then_some(w as u64))
            .collect();
        s.dkv_loads = (0..parallel)
            .map(|v| {
                let start = v * waves;
                let end = ((v + 1) * waves).min(total);
                if start >= end {
                    0
                } else {
                    (end - 1) / positions - start / positions + 1
                }
            })
            .sum();
        s.segmentation = Some(seg);
        s.waves = waves;
        s
    }

    pub fn segments(&self) -> u64 {
        self.segmentation.map_or(0, |s| s.count * self.outputs)
    }

    pub fn psum_depth(&self) -> u32 {
        self.segmentation.map_or(0, |s| s.psum_depth())
    }

    /// Pairwise additions reducing partial sums, `C - 1` per output.
    pub fn psum_adds(&self) -> u64 {
        self.segmentation.map_or(0, |s| (s.count - 1) * self.outputs)
    }

    pub fn is_reload_wave(&self, wave: u64) -> bool {
        self.reload_waves.binary_search(&wave).is_ok()
    }

    /// Every placed segment, wave-major.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        let c = self.segmentation.map_or(1, |s| s.count);
        let total = self.segments();
        let (waves, parallel, positions, width) = (self.waves, self.parallel, self.positions, self.out_width);
        (0..waves).flat_map(move |w| {
            (0..parallel).filter_map(move |v| {
                let g = v * waves + w;
                (g < total).then(|| {
                    let (dkv, pos) = (g / positions, g % positions);
                    Slot {
                        wave: w,
                        vdpe: v,
                        coord: (pos / width, pos % width, dkv / c),
                        segment: dkv % c,
                    }
                })
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule {
    pub network: String,
    pub accelerator: String,
    pub n: u64,
    pub layers: Vec<LayerSchedule>,
}

impl Schedule {
    pub fn total_waves(&self) -> u64 {
        self.layers.iter().map(|l| l.waves).sum()
    }
}

/// Decomposes every kernel layer into `n`-point segments and places them on
/// the accelerator's VDPEs, grouped by bit slices.
pub fn map_network(network: &NetworkSpec, accel: &Accelerator, n: u32) -> Result<Schedule> {
    let cfg = &accel.config;
    if n == 0 || n > cfg.n {
        return Err(Error::InvalidConfig(vec![format!(
            "mapping size N = {n} must be in 1..={} for `{}`",
            cfg.n, cfg.name
        )]));
    }
    network.validate()?;
    let parallel = u64::from(cfg.parallel_results());
    let layers = network
        .layers
        .iter()
        .map(|l| LayerSchedule::compute(l, u64::from(n), parallel))
        .collect();
    Ok(Schedule {
        network: network.name.clone(),
        accelerator: cfg.name.clone(),
        n: u64::from(n),
        layers,
    })
}
