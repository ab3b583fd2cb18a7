use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Latency of a peripheral, either absolute or in system clock cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Latency {
    Ns(f64),
    Cycles(u32),
}

impl Latency {
    pub fn to_ns(self, cycle_ns: f64) -> f64 {
        match self {
            Latency::Ns(ns) => ns,
            Latency::Cycles(c) => f64::from(c) * cycle_ns,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub power_mw: f64,
    pub area_mm2: f64,
    pub latency: Option<Latency>,
}

const fn ns(power_mw: f64, area_mm2: f64, ns: f64) -> Component {
    Component {
        power_mw,
        area_mm2,
        latency: Some(Latency::Ns(ns)),
    }
}

const fn cycles(power_mw: f64, area_mm2: f64, c: u32) -> Component {
    Component {
        power_mw,
        area_mm2,
        latency: Some(Latency::Cycles(c)),
    }
}

/// Per-unit power, area and latency of every peripheral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeripheralCosts {
    pub reduction_network: Component,
    pub activation_unit: Component,
    pub io_interface: Component,
    pub pooling_unit: Component,
    pub edram: Component,
    pub bus: Component,
    pub router: Component,
    pub dac: Component,
    pub adc_baseline: Component,
    pub adc_sconna: Component,
    pub serializer_per_osm: Component,
    pub lut_per_osm: Component,
    pub pca: Component,
    /// Scratchpad buffer read ahead of the LUT or DAC.
    pub buffer_latency_ns: f64,
    /// System clock period for cycle-denominated latencies.
    pub cycle_ns: f64,
}

impl Default for PeripheralCosts {
    fn default() -> Self {
        Self {
            reduction_network: ns(0.05, 3.0e-5, 3.125),
            activation_unit: ns(0.52, 6.0e-4, 0.78),
            io_interface: ns(140.18, 2.44e-2, 0.78),
            pooling_unit: ns(0.4, 2.4e-4, 3.125),
            edram: ns(41.1, 0.166, 1.56),
            bus: cycles(7.0, 9.0e-3, 5),
            router: cycles(42.0, 0.151, 2),
            dac: ns(30.0, 0.034, 0.78),
            adc_baseline: ns(29.0, 0.103, 0.78),
            adc_sconna: ns(2.55, 0.002, 0.78),
            serializer_per_osm: ns(5.0, 5.9, 0.03),
            lut_per_osm: ns(0.06, 0.09, 2.0),
            pca: Component {
                power_mw: 0.02,
                area_mm2: 0.28,
                latency: None,
            },
            buffer_latency_ns: 2.0,
            cycle_ns: 0.78,
        }
    }
}

impl PeripheralCosts {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn components(&self) -> [(&'static str, &Component); 13] {
        [
            ("reduction_network", &self.reduction_network),
            ("activation_unit", &self.activation_unit),
            ("io_interface", &self.io_interface),
            ("pooling_unit", &self.pooling_unit),
            ("edram", &self.edram),
            ("bus", &self.bus),
            ("router", &self.router),
            ("dac", &self.dac),
            ("adc_baseline", &self.adc_baseline),
            ("adc_sconna", &self.adc_sconna),
            ("serializer_per_osm", &self.serializer_per_osm),
            ("lut_per_osm", &self.lut_per_osm),
            ("pca", &self.pca),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        for (name, c) in self.components() {
            if !ok(c.power_mw) || !ok(c.area_mm2) {
                errs.push(format!("{name}: power and area must be finite and >= 0"));
            }
            if let Some(Latency::Ns(v)) = c.latency {
                if !ok(v) {
                    errs.push(format!("{name}: latency must be finite and >= 0"));
                }
            }
        }
        if !ok(self.buffer_latency_ns) {
            errs.push("buffer_latency_ns must be finite and >= 0".into());
        }
        if !(self.cycle_ns.is_finite() && self.cycle_ns > 0.0) {
            errs.push("cycle_ns must be > 0".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }

    /// Latency in ns; components without one take zero time.
    pub fn latency_ns(&self, c: &Component) -> f64 {
        c.latency.map_or(0.0, |l| l.to_ns(self.cycle_ns))
    }

    /// Area of the per-tile peripheral set.
    pub fn tile_area_mm2(&self) -> f64 {
        self.tile_components().iter().map(|(_, c)| c.area_mm2).sum()
    }

    pub fn tile_components(&self) -> [(&'static str, &Component); 7] {
        [
            ("reduction_network", &self.reduction_network),
            ("activation_unit", &self.activation_unit),
            ("io_interface", &self.io_interface),
            ("pooling_unit", &self.pooling_unit),
            ("edram", &self.edram),
            ("bus", &self.bus),
            ("router", &self.router),
        ]
    }
}
