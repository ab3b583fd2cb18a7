#![no_main]

use libfuzzer_sys::fuzz_target;
use scopt::workload::{tensor_stats, KernelScope, NetworkSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(net) = NetworkSpec::from_json_str(text) {
        for layer in &net.layers {
            let _ = layer.output_dims();
            let _ = layer.vector_len();
        }
        let _ = net.chain_breaks();
        let s = tensor_stats(&net, 44, KernelScope::ConvAndFc);
        assert!(s.total() >= tensor_stats(&net, 44, KernelScope::ConvOnly).total());
        let back = NetworkSpec::from_json_str(&net.to_json_string()).expect("round trip");
        assert_eq!(back, net);
    }
});
