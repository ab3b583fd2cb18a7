use serde::{Deserialize, Serialize};

use super::pipeline::{makespan, Stage};
use super::schedule::{LayerSchedule, Schedule};
use crate::arch::{Accelerator, Family};
use crate::workload::LayerKind;

/// Energy by component, J.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub lut: f64,
    pub serializer: f64,
    pub dac: f64,
    pub adc: f64,
    pub reduction: f64,
    pub edram: f64,
    pub activation: f64,
    pub pooling: f64,
    pub interconnect: f64,
    pub static_power: f64,
    pub laser: f64,
}

impl EnergyBreakdown {
    fn fields(&self) -> [f64; 11] {
        [
            self.lut,
            self.serializer,
            self.dac,
            self.adc,
            self.reduction,
            self.edram,
            self.activation,
            self.pooling,
            self.interconnect,
            self.static_power,
            self.laser,
        ]
    }

    pub fn total(&self) -> f64 {
        self.fields().iter().sum()
    }

    fn add(&mut self, o: &Self) {
        self.lut += o.lut;
        self.serializer += o.serializer;
        self.dac += o.dac;
        self.adc += o.adc;
        self.reduction += o.reduction;
        self.edram += o.edram;
        self.activation += o.activation;
        self.pooling += o.pooling;
        self.interconnect += o.interconnect;
        self.static_power += o.static_power;
        self.laser += o.laser;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerMetrics {
    pub layer: String,
    pub kind: LayerKind,
    pub waves: u64,
    pub segments: u64,
    pub psums: u64,
    pub psum_depth: u32,
    pub dkv_loads: u64,
    pub adc_conversions: u64,
    pub latency_s: f64,
    pub energy_j: f64,
    pub energy: EnergyBreakdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub waves: u64,
    pub segments: u64,
    pub psums: u64,
    pub dkv_loads: u64,
    pub adc_conversions: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub network: String,
    pub accelerator: String,
    pub layers: Vec<LayerMetrics>,
    pub total_latency_s: f64,
    pub total_energy_j: f64,
    pub area_mm2: f64,
    /// `None` when the network has no work (zero latency).
    pub fps: Option<f64>,
    pub fps_per_watt: Option<f64>,
    pub fps_per_watt_per_mm2: Option<f64>,
    pub energy: EnergyBreakdown,
    pub diagnostics: Diagnostics,
}

impl SimMetrics {
    pub fn average_power_w(&self) -> Option<f64> {
        (self.total_latency_s > 0.0).then(|| self.total_energy_j / self.total_latency_s)
    }

    /// `layer,kind,waves,latency_ns,energy_nj,psums`
    pub fn layer_csv(&self) -> String {
        let mut s = String::from("layer,kind,waves,latency_ns,energy_nj,psums\n");
        for l in &self.layers {
            s.push_str(&format!(
                "{},{},{},{:?},{:?},{}\n",
                l.layer,
                l.kind.as_str(),
                l.waves,
                l.latency_s * 1e9,
                l.energy_j * 1e9,
                l.psums
            ));
        }
        s
    }
}

const PJ: f64 = 1e-12;

struct Timing {
    buffer: f64,
    lut: f64,
    serializer: f64,
    dac: f64,
    adc: f64,
    reduction: f64,
    edram: f64,
    activation: f64,
    pooling: f64,
    bus: f64,
    router: f64,
}

impl Timing {
    fn of(a: &Accelerator) -> Self {
        let c = &a.costs;
        let adc = match a.family() {
            Family::Sconna => &c.adc_sconna,
            _ => &c.adc_baseline,
        };
        Self {
            buffer: c.buffer_latency_ns,
            lut: c.latency_ns(&c.lut_per_osm),
            serializer: c.latency_ns(&c.serializer_per_osm),
            dac: c.latency_ns(&c.dac),
            adc: c.latency_ns(adc),
            reduction: c.latency_ns(&c.reduction_network),
            edram: c.latency_ns(&c.edram),
            activation: c.latency_ns(&c.activation_unit),
            pooling: c.latency_ns(&c.pooling_unit),
            bus: c.latency_ns(&c.bus),
            router: c.latency_ns(&c.router),
        }
    }
}

/// Optical window of one wave: a full stream for SCONNA, one symbol per
/// slice (slices run on paired VDPEs) for the baselines.
fn optical_window_ns(a: &Accelerator) -> f64 {
    let cfg = &a.config;
    match cfg.family {
        Family::Sconna => f64::from(1u32 << cfg.target_bits) / cfg.line_rate * 1e9,
        Family::Mam | Family::Amm => 1e9 / cfg.line_rate,
    }
}

fn wave_stages(a: &Accelerator, t: &Timing, depth: u32) -> Vec<Stage> {
    let reload = Stage {
        reload_only: true,
        ..Stage::new(t.edram)
    };
    let mut st = match a.family() {
        Family::Sconna => vec![
            Stage::new(t.buffer),
            Stage::new(t.lut),
            Stage::new(t.serializer),
            reload,
            Stage::new(optical_window_ns(a)),
            Stage::new(t.adc),
        ],
        Family::Mam | Family::Amm => vec![
            Stage::new(t.buffer),
            Stage::new(t.dac),
            reload,
            Stage::new(optical_window_ns(a)),
            Stage::new(t.adc),
        ],
    };
    if depth > 0 {
        st.push(Stage {
            latency_ns: f64::from(depth) * t.reduction,
            interval_ns: t.reduction,
            reload_only: false,
        });
    }
    st
}

fn layer_metrics(a: &Accelerator, t: &Timing, l: &LayerSchedule) -> LayerMetrics {
    let cfg = &a.config;
    let c = &a.costs;
    let inv = &a.inventory;
    let tiles = inv.tiles as f64;
    let lanes = u64::from(cfg.parallel_results()).max(1);
    let slices = u64::from(cfg.bit_slices_per_result);
    let n = u64::from(cfg.n);
    let mut e = EnergyBreakdown::default();
    let mut adc_conversions = 0;

    // Movement of the layer's output tensor: one eDRAM write, bus and router
    // transaction per tile.
    let boundary_ns = t.edram + t.bus + t.router;
    e.edram += tiles * c.edram.power_mw * t.edram * PJ;
    e.interconnect += tiles * (c.bus.power_mw * t.bus + c.router.power_mw * t.router) * PJ;

    let busy_ns = match l.kind {
        LayerKind::Conv | LayerKind::DepthwiseConv | LayerKind::FullyConnected => {
            let segs = l.segments();
            let stages = wave_stages(a, t, l.psum_depth());
            let pipe = makespan(&stages, l.waves, |w| l.is_reload_wave(w));
            let window = optical_window_ns(a);
            match cfg.family {
                Family::Sconna => {
                    let osm_uses = (segs * n) as f64;
                    e.lut += osm_uses * c.lut_per_osm.power_mw * t.lut * PJ;
                    e.serializer += osm_uses * c.serializer_per_osm.power_mw * window * PJ;
                    adc_conversions = segs;
                    e.adc += segs as f64 * c.adc_sconna.power_mw * t.adc * PJ;
                }
                Family::Mam | Family::Amm => {
                    let slot_uses = segs * slices;
                    let div_conversions = if cfg.family == Family::Mam {
                        slot_uses.div_ceil(u64::from(cfg.m))
                    } else {
                        slot_uses
                    };
                    let dkv_conversions = l.dkv_loads * slices;
                    e.dac += (div_conversions + dkv_conversions) as f64 * c.dac.power_mw * t.dac * PJ;
                    adc_conversions = slot_uses;
                    e.adc += slot_uses as f64 * c.adc_baseline.power_mw * t.adc * PJ;
                }
            }
            e.reduction += l.psum_adds() as f64 * c.reduction_network.power_mw * t.reduction * PJ;
            e.edram += (l.dkv_loads * slices) as f64 * c.edram.power_mw * t.edram * PJ;
            e.activation += l.outputs as f64 * c.activation_unit.power_mw * t.activation * PJ;
            e.laser += inv.lasers as f64 * cfg.laser_power_mw * l.waves as f64 * window * PJ;
            pipe + t.activation
        }
        LayerKind::Pool => {
            e.pooling += l.outputs as f64 * c.pooling_unit.power_mw * t.pooling * PJ;
            l.outputs.div_ceil(lanes) as f64 * t.pooling
        }
        LayerKind::Activation => {
            e.activation += l.outputs as f64 * c.activation_unit.power_mw * t.activation * PJ;
            l.outputs.div_ceil(lanes) as f64 * t.activation
        }
    };
    let latency_ns = busy_ns + boundary_ns;
    let static_mw = inv.pcas as f64 * c.pca.power_mw + tiles * c.io_interface.power_mw;
    e.static_power += static_mw * latency_ns * PJ;
    LayerMetrics {
        layer: l.name.clone(),
        kind: l.kind,
        waves: l.waves,
        segments: l.segments(),
        psums: l.psum_adds(),
        psum_depth: l.psum_depth(),
        dkv_loads: l.dkv_loads,
        adc_conversions,
        latency_s: latency_ns * 1e-9,
        energy_j: e.total(),
        energy: e,
    }
}

/// Runs every layer of the schedule in order through the accelerator's
/// wave pipeline and accumulates latency and energy.
pub fn simulate(accel: &Accelerator, schedule: &Schedule) -> SimMetrics {
    let t = Timing::of(accel);
    let layers: Vec<LayerMetrics> = schedule.layers.iter().map(|l| layer_metrics(accel, &t, l)).collect();
    let total_latency_s: f64 = layers.iter().map(|l| l.latency_s).sum();
    let total_energy_j: f64 = layers.iter().map(|l| l.energy_j).sum();
    let mut energy = EnergyBreakdown::default();
    let mut d = Diagnostics::default();
    for l in &layers {
        energy.add(&l.energy);
        d.waves += l.waves;
        d.segments += l.segments;
        d.psums += l.psums;
        d.dkv_loads += l.dkv_loads;
        d.adc_conversions += l.adc_conversions;
    }
    let area_mm2 = accel.cost_summary().total_area_mm2;
    let fps = (total_latency_s > 0.0).then(|| 1.0 / total_latency_s);
    let fps_per_watt = fps.map(|f| f / (total_energy_j / total_latency_s));
    SimMetrics {
        network: schedule.network.clone(),
        accelerator: schedule.accelerator.clone(),
        layers,
        total_latency_s,
        total_energy_j,
        area_mm2,
        fps,
        fps_per_watt,
        fps_per_watt_per_mm2: fps_per_watt.map(|f| f / area_mm2),
        energy,
        diagnostics: d,
    }
}
