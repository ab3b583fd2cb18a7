//! CNN layer descriptors, the direct convolution reference, flattening into
//! vector pairs and fixed-size decomposition.

mod conv;
mod decompose;
mod descriptor;
mod stats;

pub use conv::{conv_output_oracle, flatten_layer, FlatPair, KernelBank, Tensor3};
pub use decompose::{decompose, Segmentation, VdpTask};
pub use descriptor::{LayerKind, LayerSpec, NetworkSpec, MAX_EXTENT};
pub use stats::{tensor_stats, KernelScope, KernelStats};

/// Bundled descriptors of the four evaluated CNNs, as JSON.
pub mod bundled {
    pub const RESNET50: &str = include_str!("../../networks/resnet50.json");
    pub const GOOGLENET: &str = include_str!("../../networks/googlenet.json");
    pub const MOBILENET_V2: &str = include_str!("../../networks/mobilenet_v2.json");
    pub const SHUFFLENET_V2: &str = include_str!("../../networks/shufflenet_v2.json");

    /// `(name, json)` for every bundled network.
    pub const ALL: [(&str, &str); 4] = [
        ("googlenet", GOOGLENET),
        ("resnet50", RESNET50),
        ("mobilenet_v2", MOBILENET_V2),
        ("shufflenet_v2", SHUFFLENET_V2),
    ];

    pub fn load(name: &str) -> Option<super::NetworkSpec> {
        ALL.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, json)| super::NetworkSpec::from_json_str(json).expect("bundled descriptor parses"))
    }
}
