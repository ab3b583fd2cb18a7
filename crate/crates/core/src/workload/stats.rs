use serde::{Deserialize, Serialize};

use super::descriptor::{LayerKind, NetworkSpec};

/// Which layers contribute kernels to [`tensor_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelScope {
    /// Standard and depthwise convolutions only.
    #[default]
    ConvOnly,
    /// Convolutions plus fully connected layers.
    ConvAndFc,
}

impl KernelScope {
    fn includes(self, kind: LayerKind) -> bool {
        match kind {
            LayerKind::Conv | LayerKind::DepthwiseConv => true,
            LayerKind::FullyConnected => self == KernelScope::ConvAndFc,
            LayerKind::Pool | LayerKind::Activation => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelStats {
    pub threshold: u64,
    pub at_or_below: u64,
    pub above: u64,
}

impl KernelStats {
    pub fn total(&self) -> u64 {
        self.at_or_below + self.above
    }
}

/// Counts kernels by flattened size `S` against `threshold`.
pub fn tensor_stats(net: &NetworkSpec, threshold: u64, scope: KernelScope) -> KernelStats {
    let mut stats = KernelStats {
        threshold,
        at_or_below: 0,
        above: 0,
    };
    for l in net.layers.iter().filter(|l| scope.includes(l.kind)) {
        if l.vector_len() <= threshold {
            stats.at_or_below += u64::from(l.kernels);
        } else {
            stats.above += u64::from(l.kernels);
        }
    }
    stats
}
