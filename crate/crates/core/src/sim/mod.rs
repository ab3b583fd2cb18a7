//! Weight-stationary mapping and the event-driven wave pipeline that turns
//! a network and an accelerator into latency, energy and efficiency figures.

mod compare;
mod engine;
pub mod functional;
mod pipeline;
mod schedule;

pub use compare::{compare, gmean, Comparison, GmeanRow, RatioRow, METRICS};
pub use engine::{simulate, Diagnostics, EnergyBreakdown, LayerMetrics, SimMetrics};
pub use schedule::{map_network, LayerSchedule, Schedule, Slot};
