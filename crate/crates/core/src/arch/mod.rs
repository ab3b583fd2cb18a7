//! Accelerator instances as component inventories with Table-style
//! per-unit costs, plus area-proportionate scaling of the analog baselines.

mod config;
mod costs;
mod instance;

pub use config::{preset, AcceleratorConfig, Family, PRESET_NAMES};
pub use costs::{Component, Latency, PeripheralCosts};
pub use instance::{
    area_proportionate_scale, build_accelerator, converter_energy_per_result_pj, Accelerator, CostLine,
    CostSummary, Inventory, ScaleOutcome,
};
