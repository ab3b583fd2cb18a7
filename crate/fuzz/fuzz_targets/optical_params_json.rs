#![no_main]

use libfuzzer_sys::fuzz_target;
use scopt::optics::{max_supported_n, solve_pd_sensitivity, OpticalLinkParams, SolveConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(params) = OpticalLinkParams::from_json_str(text) {
        let cfg = SolveConfig::default();
        if let Ok(p) = solve_pd_sensitivity(&cfg, &params) {
            let _ = max_supported_n(&cfg, &params, p);
        }
    }
});
