use serde::Serialize;

use super::config::{AcceleratorConfig, Family};
use super::costs::{Component, PeripheralCosts};
use crate::error::Result;

/// Component counts of one accelerator instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Inventory {
    pub tiles: u64,
    pub vdpcs: u64,
    pub vdpes: u64,
    pub lasers: u64,
    /// Optical stochastic multipliers (SCONNA).
    pub osms: u64,
    /// Sign-routing filter rings (SCONNA) or modulator rings (baselines).
    pub rings: u64,
    pub serializers: u64,
    pub luts: u64,
    pub pcas: u64,
    pub adcs: u64,
    pub dacs: u64,
}

impl Inventory {
    pub fn of(config: &AcceleratorConfig) -> Self {
        let vdpes = u64::from(config.total_vdpes);
        let n = u64::from(config.n);
        let vdpcs = u64::from(config.vdpcs());
        let base = Inventory {
            tiles: u64::from(config.tile_count),
            vdpcs,
            vdpes,
            lasers: n * vdpcs,
            ..Default::default()
        };
        match config.family {
            Family::Sconna => Inventory {
                osms: n * vdpes,
                rings: n * vdpes,
                serializers: n * vdpes,
                luts: n * vdpes,
                pcas: 2 * vdpes,
                adcs: vdpes,
                ..base
            },
            // DIVs are imprinted once per VDPC ahead of the splitter.
            Family::Mam => Inventory {
                rings: n * (vdpcs + vdpes),
                adcs: vdpes,
                dacs: vdpcs + vdpes,
                ..base
            },
            Family::Amm => Inventory {
                rings: 2 * n * vdpes,
                adcs: vdpes,
                dacs: 2 * vdpes,
                ..base
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostLine {
    pub component: &'static str,
    pub count: u64,
    pub unit_power_mw: f64,
    pub unit_area_mm2: f64,
    pub power_mw: f64,
    /// Area counted toward the chip total.
    pub area_mm2: f64,
    /// Why a present component contributes no area or power.
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostSummary {
    pub total_area_mm2: f64,
    /// Sum of component power ratings, lasers excluded.
    pub total_static_power_mw: f64,
    pub laser_power_mw: f64,
    pub lines: Vec<CostLine>,
}

impl CostSummary {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    /// `component,count,unit_power_mw,unit_area_mm2,power_mw,area_mm2,note`
    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("component,count,unit_power_mw,unit_area_mm2,power_mw,area_mm2,note\n");
        for l in &self.lines {
            s.push_str(&format!(
                "{},{},{:?},{:?},{:?},{:?},{}\n",
                l.component,
                l.count,
                l.unit_power_mw,
                l.unit_area_mm2,
                l.power_mw,
                l.area_mm2,
                l.note.unwrap_or("")
            ));
        }
        s
    }
}

/// A validated configuration with its costs and inventory.
#[derive(Debug, Clone, PartialEq)]
pub struct Accelerator {
    pub config: AcceleratorConfig,
    pub costs: PeripheralCosts,
    pub inventory: Inventory,
}

pub fn build_accelerator(config: &AcceleratorConfig, costs: &PeripheralCosts) -> Result<Accelerator> {
    config.validate()?;
    costs.validate()?;
    Ok(Accelerator {
        config: config.clone(),
        costs: costs.clone(),
        inventory: Inventory::of(config),
    })
}

const OPTICAL: &str = "passive optical device, no peripheral cost entry";
const OFF_CHIP: &str = "laser diodes are off-chip; power reported separately";
const OSM_AREA: &str = "per-OSM serializer/LUT area excluded from the chip total by configuration";

fn line(component: &'static str, count: u64, c: &Component) -> CostLine {
    let n = count as f64;
    CostLine {
        component,
        count,
        unit_power_mw: c.power_mw,
        unit_area_mm2: c.area_mm2,
        power_mw: n * c.power_mw,
        area_mm2: n * c.area_mm2,
        note: None,
    }
}

fn free(component: &'static str, count: u64, note: &'static str) -> CostLine {
    CostLine {
        component,
        count,
        unit_power_mw: 0.0,
        unit_area_mm2: 0.0,
        power_mw: 0.0,
        area_mm2: 0.0,
        note: Some(note),
    }
}

fn summarize(config: &AcceleratorConfig, costs: &PeripheralCosts, inv: &Inventory) -> CostSummary {
    let mut lines = vec![free("laser", inv.lasers, OFF_CHIP)];
    match config.family {
        Family::Sconna => {
            lines.push(free("osm_gate", inv.osms, OPTICAL));
            lines.push(free("filter_ring", inv.rings, OPTICAL));
            let mut ser = line("serializer_per_osm", inv.serializers, &costs.serializer_per_osm);
            let mut lut = line("lut_per_osm", inv.luts, &costs.lut_per_osm);
            if config.osm_peripherals_in_area == Some(false) {
                for l in [&mut ser, &mut lut] {
                    l.area_mm2 = 0.0;
                    l.note = Some(OSM_AREA);
                }
            }
            lines.push(ser);
            lines.push(lut);
            lines.push(line("pca", inv.pcas, &costs.pca));
            lines.push(line("adc_sconna", inv.adcs, &costs.adc_sconna));
        }
        Family::Mam | Family::Amm => {
            lines.push(free("modulator_ring", inv.rings, OPTICAL));
            lines.push(line("dac", inv.dacs, &costs.dac));
            lines.push(line("adc_baseline", inv.adcs, &costs.adc_baseline));
        }
    }
    for (name, c) in costs.tile_components() {
        lines.push(line(name, inv.tiles, c));
    }
    CostSummary {
        total_area_mm2: lines.iter().map(|l| l.area_mm2).sum(),
        total_static_power_mw: lines.iter().map(|l| l.power_mw).sum(),
        laser_power_mw: inv.lasers as f64 * config.laser_power_mw,
        lines,
    }
}

impl Accelerator {
    pub fn cost_summary(&self) -> CostSummary {
        summarize(&self.config, &self.costs, &self.inventory)
    }

    pub fn family(&self) -> Family {
        self.config.family
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleOutcome {
    pub count: u32,
    pub area_mm2: f64,
    pub warning: Option<String>,
}

/// Largest VDPE count whose total area fits `reference_area_mm2`, with the
/// VDPC and tile counts following the VDPE count.
pub fn area_proportionate_scale(
    baseline: &AcceleratorConfig,
    costs: &PeripheralCosts,
    reference_area_mm2: f64,
) -> Result<ScaleOutcome> {
    costs.validate()?;
    let area = |count: u32| {
        let c = baseline.with_vdpes(count);
        summarize(&c, costs, &Inventory::of(&c)).total_area_mm2
    };
    let fits = |count: u32| area(count) <= reference_area_mm2 * (1.0 + 1e-12);
    let min = baseline.bit_slices_per_result.max(1);
    if !fits(min) {
        return Ok(ScaleOutcome {
            count: 0,
            area_mm2: 0.0,
            warning: Some(format!(
                "reference area {reference_area_mm2} mm2 is below one VDPE set ({} mm2)",
                area(min)
            )),
        });
    }
    let (mut lo, mut hi) = (min, min.saturating_mul(2));
    while fits(hi) {
        if hi == u32::MAX {
            return Ok(ScaleOutcome {
                count: hi,
                area_mm2: area(hi),
                warning: Some("VDPE area is zero; count is unbounded".into()),
            });
        }
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ScaleOutcome {
        count: lo,
        area_mm2: area(lo),
        warning: None,
    })
}

/// Converter energy spent on one 8-bit result, pJ: a single ADC conversion
/// for SCONNA, a DAC and ADC conversion per slice for the baselines.
pub fn converter_energy_per_result_pj(config: &AcceleratorConfig, costs: &PeripheralCosts) -> f64 {
    let e = |c: &Component| c.power_mw * costs.latency_ns(c);
    match config.family {
        Family::Sconna => e(&costs.adc_sconna),
        Family::Mam | Family::Amm => f64::from(config.bit_slices_per_result) * (e(&costs.dac) + e(&costs.adc_baseline)),
    }
}
