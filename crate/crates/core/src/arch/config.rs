use serde::{Deserialize, Serialize};

use super::costs::PeripheralCosts;
use super::instance::{area_proportionate_scale, build_accelerator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Stochastic optical VDPCs with photo-charge accumulation.
    Sconna,
    /// Modulation, aggregation, modulation: DIVs imprinted before the split.
    Mam,
    /// Aggregation, modulation, modulation: both operands imprinted per VDPE.
    Amm,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Sconna => "sconna",
            Family::Mam => "mam",
            Family::Amm => "amm",
        }
    }

    pub fn is_baseline(self) -> bool {
        self != Family::Sconna
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceleratorConfig {
    pub name: String,
    pub family: Family,
    /// Precision one VDPE handles natively.
    #[serde(rename = "B_native")]
    pub b_native: u32,
    /// Operand precision of the workload.
    pub target_bits: u32,
    /// VDPE size.
    #[serde(rename = "N")]
    pub n: u32,
    /// VDPEs per VDPC.
    #[serde(rename = "M")]
    pub m: u32,
    /// VDPEs across the whole accelerator.
    pub total_vdpes: u32,
    pub vdpcs_per_tile: u32,
    pub tile_count: u32,
    /// Stochastic bitrate for SCONNA, analog symbol rate for the baselines.
    #[serde(rename = "BR_or_DR")]
    pub line_rate: f64,
    pub bit_slices_per_result: u32,
    #[serde(default = "default_laser_mw")]
    pub laser_power_mw: f64,
    /// Photodetector sensitivity the link is designed for, dBm.
    #[serde(default)]
    pub p_pd_dbm: Option<f64>,
    /// Whether per-OSM serializers and LUTs count toward chip area. SCONNA only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub osm_peripherals_in_area: Option<bool>,
}

fn default_laser_mw() -> f64 {
    10.0
}

/// Largest accepted VDPE size.
pub const MAX_VDPE_SIZE: u32 = 1 << 16;

pub const PRESET_NAMES: [&str; 3] = ["sconna-paper", "mam-holylight", "amm-deapcnn"];

/// Built-in configurations. Baseline VDPE counts are derived by area
/// scaling against `sconna-paper` under default costs.
pub fn preset(name: &str) -> Option<AcceleratorConfig> {
    match name {
        "sconna-paper" => Some(AcceleratorConfig::sconna_paper()),
        "mam-holylight" => Some(AcceleratorConfig::scaled_baseline(Family::Mam)),
        "amm-deapcnn" => Some(AcceleratorConfig::scaled_baseline(Family::Amm)),
        _ => None,
    }
}

impl AcceleratorConfig {
    pub fn sconna_paper() -> Self {
        let mut c = Self {
            name: "sconna-paper".into(),
            family: Family::Sconna,
            b_native: 8,
            target_bits: 8,
            n: 176,
            m: 176,
            total_vdpes: 1024,
            vdpcs_per_tile: 4,
            tile_count: 0,
            line_rate: 30e9,
            bit_slices_per_result: 1,
            laser_power_mw: 10.0,
            p_pd_dbm: Some(-28.0),
            osm_peripherals_in_area: Some(false),
        };
        c.tile_count = c.tiles_needed();
        c
    }

    /// An unscaled baseline with one VDPC.
    pub fn baseline(family: Family) -> Self {
        let (name, n) = match family {
            Family::Mam => ("mam-holylight", 22),
            Family::Amm => ("amm-deapcnn", 16),
            Family::Sconna => return Self::sconna_paper(),
        };
        Self {
            name: name.into(),
            family,
            b_native: 4,
            target_bits: 8,
            n,
            m: n,
            total_vdpes: n,
            vdpcs_per_tile: 4,
            tile_count: 1,
            line_rate: 5e9,
            bit_slices_per_result: 2,
            laser_power_mw: 10.0,
            p_pd_dbm: None,
            osm_peripherals_in_area: None,
        }
    }

    fn scaled_baseline(family: Family) -> Self {
        let costs = PeripheralCosts::default();
        let reference = build_accelerator(&Self::sconna_paper(), &costs)
            .expect("preset is valid")
            .cost_summary()
            .total_area_mm2;
        let base = Self::baseline(family);
        let count = area_proportionate_scale(&base, &costs, reference)
            .expect("preset is valid")
            .count;
        base.with_vdpes(count)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn vdpcs(&self) -> u32 {
        self.total_vdpes.div_ceil(self.m.max(1))
    }

    pub fn tiles_needed(&self) -> u32 {
        self.vdpcs().div_ceil(self.vdpcs_per_tile.max(1))
    }

    /// Same configuration resized to `count` VDPEs with the minimal tile count.
    pub fn with_vdpes(&self, count: u32) -> Self {
        let mut c = self.clone();
        c.total_vdpes = count;
        c.tile_count = c.tiles_needed();
        c
    }

    /// Results produced per wave: VDPEs grouped by bit slices.
    pub fn parallel_results(&self) -> u32 {
        self.total_vdpes / self.bit_slices_per_result.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        for (field, v) in [
            ("N", self.n),
            ("M", self.m),
            ("total_vdpes", self.total_vdpes),
            ("vdpcs_per_tile", self.vdpcs_per_tile),
            ("tile_count", self.tile_count),
            ("bit_slices_per_result", self.bit_slices_per_result),
            ("B_native", self.b_native),
        ] {
            if v == 0 {
                errs.push(format!("{field} must be >= 1"));
            }
        }
        if self.n > MAX_VDPE_SIZE {
            errs.push(format!("N must be at most {MAX_VDPE_SIZE}, got {}", self.n));
        }
        if !(1..=16).contains(&self.target_bits) {
            errs.push(format!("target_bits must be in 1..=16, got {}", self.target_bits));
        }
        if !(self.line_rate.is_finite() && self.line_rate > 0.0) {
            errs.push("BR_or_DR must be > 0".into());
        }
        if !(self.laser_power_mw.is_finite() && self.laser_power_mw >= 0.0) {
            errs.push("laser_power_mw must be >= 0".into());
        }
        if errs.is_empty() {
            let capacity = u64::from(self.tile_count) * u64::from(self.vdpcs_per_tile) * u64::from(self.m);
            if u64::from(self.total_vdpes) > capacity {
                errs.push(format!(
                    "total_vdpes {} exceeds tile_count x vdpcs_per_tile x M = {capacity}",
                    self.total_vdpes
                ));
            }
            let slices = self.target_bits.div_ceil(self.b_native);
            if self.bit_slices_per_result != slices {
                errs.push(format!(
                    "bit_slices_per_result must be ceil(target_bits / B_native) = {slices}, got {}",
                    self.bit_slices_per_result
                ));
            }
            if self.total_vdpes < self.bit_slices_per_result {
                errs.push("total_vdpes must cover at least one set of bit slices".into());
            }
        }
        match self.family {
            Family::Sconna if self.b_native != self.target_bits => {
                errs.push("B_native: SCONNA streams run at the target precision".into());
            }
            Family::Mam | Family::Amm if self.osm_peripherals_in_area.is_some() => {
                errs.push("osm_peripherals_in_area: only SCONNA has OSM peripherals".into());
            }
            _ => {}
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(errs))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_vdpe_size_is_rejected() {
        let c = AcceleratorConfig {
            n: u32::MAX,
            ..AcceleratorConfig::sconna_paper()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn presets_validate_and_round_trip() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate().unwrap();
            assert_eq!(c.name, name);
            assert_eq!(AcceleratorConfig::from_json_str(&c.to_json_string()).unwrap(), c);
        }
        assert!(preset("tpu").is_none());
    }

    #[test]
    fn sconna_packing() {
        let c = preset("sconna-paper").unwrap();
        assert_eq!((c.vdpcs(), c.tile_count), (6, 2));
        assert_eq!(c.parallel_results(), 1024);
    }

    #[test]
    fn baseline_settings() {
        let m = preset("mam-holylight").unwrap();
        assert_eq!((m.n, m.line_rate, m.bit_slices_per_result), (22, 5e9, 2));
        let a = preset("amm-deapcnn").unwrap();
        assert_eq!((a.n, a.b_native), (16, 4));
    }

    #[test]
    fn validation_lists_offending_fields() {
        let mut c = AcceleratorConfig::sconna_paper();
        c.tile_count = 0;
        c.line_rate = 0.0;
        let Err(Error::InvalidConfig(errs)) = c.validate() else {
            panic!("expected errors")
        };
        assert!(errs.iter().any(|e| e.contains("tile_count")));
        assert!(errs.iter().any(|e| e.contains("BR_or_DR")));

        let mut b = AcceleratorConfig::baseline(Family::Mam);
        b.bit_slices_per_result = 1;
        assert!(b.validate().is_err());
        b.bit_slices_per_result = 2;
        b.osm_peripherals_in_area = Some(true);
        assert!(b.validate().is_err());

        let mut s = AcceleratorConfig::sconna_paper();
        s.total_vdpes = 2000;
        assert!(s.validate().is_err());
    }

    #[test]
    fn family_discriminator_in_json() {
        let json = AcceleratorConfig::baseline(Family::Amm).to_json_string();
        assert!(json.contains(r#""family": "amm""#));
        let bad = json.replace(r#""family": "amm""#, r#""family": "tpu""#);
        assert!(AcceleratorConfig::from_json_str(&bad).is_err());
    }
}
