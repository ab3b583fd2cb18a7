#![no_main]

use libfuzzer_sys::fuzz_target;
use scopt::arch::{build_accelerator, AcceleratorConfig, PeripheralCosts};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = AcceleratorConfig::from_json_str(text) {
        if let Ok(accel) = build_accelerator(&cfg, &PeripheralCosts::default()) {
            let summary = accel.cost_summary();
            let _ = summary.to_csv_string();
        }
    }
});
