#![no_main]

use libfuzzer_sys::fuzz_target;
use scopt::arch::{build_accelerator, preset, PeripheralCosts, PRESET_NAMES};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(costs) = PeripheralCosts::from_json_str(text) {
        let _ = costs.tile_area_mm2();
        for name in PRESET_NAMES {
            let _ = build_accelerator(&preset(name).unwrap(), &costs).map(|a| a.cost_summary());
        }
    }
});
