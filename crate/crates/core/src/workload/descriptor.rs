use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted value of any layer dimension, stride or padding.
pub const MAX_EXTENT: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Conv,
    DepthwiseConv,
    FullyConnected,
    Pool,
    Activation,
}

impl LayerKind {
    /// Layers that map onto dot-product hardware.
    pub fn has_kernels(self) -> bool {
        matches!(self, LayerKind::Conv | LayerKind::DepthwiseConv | LayerKind::FullyConnected)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LayerKind::Conv => "conv",
            LayerKind::DepthwiseConv => "depthwise_conv",
            LayerKind::FullyConnected => "fully_connected",
            LayerKind::Pool => "pool",
            LayerKind::Activation => "activation",
        }
    }
}

/// Geometry of one layer: an `H×W×D` input, `L` kernels of `K×K×D` (or
/// `K×K` per channel for depthwise), stride and symmetric zero padding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    pub name: String,
    pub kind: LayerKind,
    #[serde(rename = "H")]
    pub height: u32,
    #[serde(rename = "W")]
    pub width: u32,
    #[serde(rename = "D")]
    pub depth: u32,
    #[serde(rename = "K")]
    pub kernel: u32,
    #[serde(rename = "L")]
    pub kernels: u32,
    pub stride: u32,
    #[serde(default)]
    pub padding: u32,
}

impl LayerSpec {
    pub fn conv(name: &str, hw: u32, depth: u32, kernel: u32, kernels: u32, stride: u32, padding: u32) -> Self {
        Self {
            name: name.into(),
            kind: LayerKind::Conv,
            height: hw,
            width: hw,
            depth,
            kernel,
            kernels,
            stride,
            padding,
        }
    }

    pub fn fully_connected(name: &str, inputs: u32, outputs: u32) -> Self {
        Self {
            name: name.into(),
            kind: LayerKind::FullyConnected,
            height: 1,
            width: 1,
            depth: inputs,
            kernel: 1,
            kernels: outputs,
            stride: 1,
            padding: 0,
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> Error {
        Error::InvalidLayer {
            layer: self.name.clone(),
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.padding > MAX_EXTENT {
            return Err(self.invalid(format!("padding exceeds {MAX_EXTENT}")));
        }
        for (field, v) in [
            ("H", self.height),
            ("W", self.width),
            ("D", self.depth),
            ("K", self.kernel),
            ("L", self.kernels),
            ("stride", self.stride),
        ] {
            if v == 0 {
                return Err(self.invalid(format!("{field} must be positive")));
            }
            if v > MAX_EXTENT {
                return Err(self.invalid(format!("{field} exceeds {MAX_EXTENT}")));
            }
        }
        let (h, w) = (self.height + 2 * self.padding, self.width + 2 * self.padding);
        if self.kernel > h || self.kernel > w {
            return Err(self.invalid(format!(
                "kernel {} does not fit the padded {h}x{w} input",
                self.kernel
            )));
        }
        match self.kind {
            LayerKind::FullyConnected if self.kernel != 1 || self.height != 1 || self.width != 1 => {
                Err(self.invalid("fully_connected layers need H = W = K = 1"))
            }
            LayerKind::DepthwiseConv | LayerKind::Pool | LayerKind::Activation if self.kernels != self.depth => {
                Err(self.invalid(format!("{} layers need L = D", self.kind.as_str())))
            }
            _ => Ok(()),
        }
    }

    /// `(H_out, W_out)` = `floor((H + 2P - K) / stride) + 1`.
    pub fn output_dims(&self) -> (u32, u32) {
        let f = |x: u32| (x + 2 * self.padding - self.kernel) / self.stride + 1;
        (f(self.height), f(self.width))
    }

    /// Flattened vector length `S`: `K·K·D`, or `K·K` for depthwise layers.
    pub fn vector_len(&self) -> u64 {
        let k2 = u64::from(self.kernel) * u64::from(self.kernel);
        match self.kind {
            LayerKind::DepthwiseConv => k2,
            _ => k2 * u64::from(self.depth),
        }
    }

    /// Number of output points, each one dot product for kernel layers.
    pub fn output_points(&self) -> u64 {
        let (h, w) = self.output_dims();
        u64::from(h) * u64::from(w) * u64::from(self.kernels)
    }

    pub fn output_positions(&self) -> u64 {
        let (h, w) = self.output_dims();
        u64::from(h) * u64::from(w)
    }

    /// Multiply-accumulates for kernel layers, zero otherwise.
    pub fn macs(&self) -> u64 {
        if self.kind.has_kernels() {
            self.output_points().saturating_mul(self.vector_len())
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub name: String,
    pub layers: Vec<LayerSpec>,
}

impl NetworkSpec {
    /// Parses and validates every layer.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let net: NetworkSpec = serde_json::from_str(s)?;
        net.validate()?;
        Ok(net)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.layers.iter().try_for_each(LayerSpec::validate)
    }

    /// Consecutive layer pairs whose depths or spatial sizes do not chain.
    ///
    /// The flat schema has no edges, so branching networks (inception
    /// modules, residual shortcuts, channel splits) legitimately report
    /// breaks; the list is diagnostic only.
    pub fn chain_breaks(&self) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        for (i, pair) in self.layers.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            let (h, w) = a.output_dims();
            let flat = u64::from(h) * u64::from(w) * u64::from(a.kernels);
            let ok = if b.kind == LayerKind::FullyConnected {
                u64::from(b.depth) == flat || b.depth == a.kernels
            } else {
                b.depth == a.kernels && b.height == h && b.width == w
            };
            if !ok {
                out.push((i + 1, format!("{} -> {}", a.name, b.name)));
            }
        }
        out
    }

    pub fn kernel_layers(&self) -> impl Iterator<Item = &LayerSpec> {
        self.layers.iter().filter(|l| l.kind.has_kernels())
    }

    pub fn total_macs(&self) -> u64 {
        self.layers.iter().map(LayerSpec::macs).fold(0, u64::saturating_add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oversized_extents_are_rejected() {
        let mut l = LayerSpec::conv("c", 8, 3, 3, 4, 1, 0);
        l.padding = u32::MAX;
        assert!(l.validate().is_err());
        let mut l = LayerSpec::conv("c", 8, 3, 3, 4, 1, 0);
        l.depth = u32::MAX;
        assert!(l.validate().is_err());
        let big = LayerSpec::conv("c", MAX_EXTENT, MAX_EXTENT, 1, MAX_EXTENT, 1, 0);
        big.validate().unwrap();
        assert_eq!(big.macs(), u64::MAX);
    }

    #[test]
    fn parses_documented_schema() {
        let json = r#"{"name":"n","layers":[
            {"name":"c","kind":"conv","H":8,"W":8,"D":3,"K":3,"L":4,"stride":1,"padding":1},
            {"name":"f","kind":"fully_connected","H":1,"W":1,"D":256,"K":1,"L":10,"stride":1}
        ]}"#;
        let net = NetworkSpec::from_json_str(json).unwrap();
        assert_eq!(net.layers[0].output_dims(), (8, 8));
        assert_eq!(net.layers[0].vector_len(), 27);
        assert_eq!(net.layers[1].padding, 0);
        assert!(net.chain_breaks().is_empty());
    }

    #[test]
    fn rejects_unknown_fields_and_bad_geometry() {
        let unknown = r#"{"name":"n","layers":[{"name":"c","kind":"conv","H":8,"W":8,"D":3,"K":3,"L":4,"stride":1,"dilation":2}]}"#;
        assert!(matches!(NetworkSpec::from_json_str(unknown), Err(Error::Parse(_))));
        let top = r#"{"name":"n","layers":[],"extra":1}"#;
        assert!(NetworkSpec::from_json_str(top).is_err());
        let big_kernel = r#"{"name":"n","layers":[{"name":"c","kind":"conv","H":2,"W":2,"D":3,"K":3,"L":4,"stride":1}]}"#;
        assert!(matches!(NetworkSpec::from_json_str(big_kernel), Err(Error::InvalidLayer { .. })));
        let zero_stride = r#"{"name":"n","layers":[{"name":"c","kind":"conv","H":4,"W":4,"D":3,"K":3,"L":4,"stride":0}]}"#;
        assert!(NetworkSpec::from_json_str(zero_stride).is_err());
        let fc_k = r#"{"name":"n","layers":[{"name":"f","kind":"fully_connected","H":1,"W":1,"D":3,"K":3,"L":4,"stride":1,"padding":1}]}"#;
        assert!(NetworkSpec::from_json_str(fc_k).is_err());
    }

    #[test]
    fn depthwise_vector_is_per_channel() {
        let l = LayerSpec {
            kind: LayerKind::DepthwiseConv,
            ..LayerSpec::conv("dw", 14, 96, 3, 96, 1, 1)
        };
        assert_eq!(l.vector_len(), 9);
        assert_eq!(l.output_points(), 14 * 14 * 96);
    }

    #[test]
    fn strided_output_dims() {
        assert_eq!(LayerSpec::conv("c", 224, 3, 7, 64, 2, 3).output_dims(), (112, 112));
        assert_eq!(LayerSpec::conv("c", 56, 64, 1, 128, 2, 0).output_dims(), (28, 28));
    }
}
