use crate::error::{Error, Result};

use super::descriptor::{LayerKind, LayerSpec};

/// Dense `H×W×D` integer tensor, channel-fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor3 {
    pub height: usize,
    pub width: usize,
    pub depth: usize,
    pub data: Vec<i64>,
}

impl Tensor3 {
    pub fn new(height: usize, width: usize, depth: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != height * width * depth {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: height * width * depth,
            });
        }
        Ok(Self { height, width, depth, data })
    }

    pub fn filled(height: usize, width: usize, depth: usize, value: i64) -> Self {
        Self {
            height,
            width,
            depth,
            data: vec![value; height * width * depth],
        }
    }

    pub fn get(&self, y: usize, x: usize, c: usize) -> i64 {
        self.data[(y * self.width + x) * self.depth + c]
    }

    /// Value at a possibly out-of-bounds position of the zero-padded tensor.
    fn padded(&self, y: i64, x: i64, c: usize) -> i64 {
        if y < 0 || x < 0 || y >= self.height as i64 || x >= self.width as i64 {
            0
        } else {
            self.get(y as usize, x as usize, c)
        }
    }
}

/// `L` kernels of `K×K×D`, indexed `[l][r][q][d]`. Depthwise banks use `D = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBank {
    pub size: usize,
    pub depth: usize,
    pub count: usize,
    pub data: Vec<i64>,
}

impl KernelBank {
    pub fn new(size: usize, depth: usize, count: usize, data: Vec<i64>) -> Result<Self> {
        let want = size * size * depth * count;
        if data.len() != want {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: want,
            });
        }
        Ok(Self { size, depth, count, data })
    }

    pub fn get(&self, l: usize, r: usize, q: usize, d: usize) -> i64 {
        self.data[((l * self.size + r) * self.size + q) * self.depth + d]
    }

    /// Kernel `l` flattened in `(r, q, d)` order.
    pub fn flat(&self, l: usize) -> &[i64] {
        let n = self.size * self.size * self.depth;
        &self.data[l * n..(l + 1) * n]
    }
}

fn out_dims(input: &Tensor3, k: usize, stride: usize, padding: usize) -> (usize, usize) {
    let f = |x: usize| {
        if x + 2 * padding < k {
            0
        } else {
            (x + 2 * padding - k) / stride + 1
        }
    };
    (f(input.height), f(input.width))
}

/// Output point `(i, j, l)` of a standard convolution, by direct triple sum.
/// `padding` zeros surround the input before the sum.
pub fn conv_output_oracle(
    input: &Tensor3,
    kernels: &KernelBank,
    stride: usize,
    padding: usize,
    (i, j, l): (usize, usize, usize),
) -> Result<i64> {
    if kernels.depth != input.depth {
        return Err(Error::LengthMismatch {
            left: kernels.depth,
            right: input.depth,
        });
    }
    if stride == 0 {
        return Err(Error::range("stride", 0, 1, i64::MAX));
    }
    let (ho, wo) = out_dims(input, kernels.size, stride, padding);
    let bound = |what, v: usize, n: usize| {
        if v >= n {
            Err(Error::range(what, v as i64, 0, n as i64 - 1))
        } else {
            Ok(())
        }
    };
    bound("i", i, ho)?;
    bound("j", j, wo)?;
    bound("l", l, kernels.count)?;
    let mut acc = 0i64;
    for r in 0..kernels.size {
        for q in 0..kernels.size {
            let y = (i * stride + r) as i64 - padding as i64;
            let x = (j * stride + q) as i64 - padding as i64;
            for d in 0..input.depth {
                acc += kernels.get(l, r, q, d) * input.padded(y, x, d);
            }
        }
    }
    Ok(acc)
}

/// One flattened operand pair and the output coordinate it produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPair {
    pub coord: (usize, usize, usize),
    pub input: Vec<i64>,
    pub kernel: Vec<i64>,
}

impl FlatPair {
    pub fn dot(&self) -> i64 {
        self.input.iter().zip(&self.kernel).map(|(a, b)| a * b).sum()
    }
}

/// Flattens a kernel layer into one `(input, kernel)` pair per output point,
/// in `(i, j, l)` row-major order.
///
/// Standard and fully connected layers produce `S = K·K·D`; depthwise layers
/// take a bank with `D = 1` and pair kernel `l` with input channel `l`.
pub fn flatten_layer<'a>(
    layer: &'a LayerSpec,
    input: &'a Tensor3,
    kernels: &'a KernelBank,
) -> Result<impl Iterator<Item = FlatPair> + 'a> {
    if !layer.kind.has_kernels() {
        return Err(Error::UnsupportedLayer {
            layer: layer.name.clone(),
            kind: layer.kind.as_str().into(),
        });
    }
    layer.validate()?;
    let depthwise = layer.kind == LayerKind::DepthwiseConv;
    let shape_ok = input.height == layer.height as usize
        && input.width == layer.width as usize
        && input.depth == layer.depth as usize
        && kernels.size == layer.kernel as usize
        && kernels.count == layer.kernels as usize
        && kernels.depth == if depthwise { 1 } else { input.depth };
    if !shape_ok {
        return Err(Error::InvalidLayer {
            layer: layer.name.clone(),
            reason: "tensor shapes disagree with the layer geometry".into(),
        });
    }
    let (ho, wo) = layer.output_dims();
    let (ho, wo, nl) = (ho as usize, wo as usize, kernels.count);
    let (k, stride, pad) = (kernels.size, layer.stride as usize, layer.padding as i64);
    Ok((0..ho * wo * nl).map(move |idx| {
        let (i, j, l) = (idx / (wo * nl), idx / nl % wo, idx % nl);
        let mut v = Vec::with_capacity(kernels.flat(l).len());
        for r in 0..k {
            for q in 0..k {
                let y = (i * stride + r) as i64 - pad;
                let x = (j * stride + q) as i64 - pad;
                if depthwise {
                    v.push(input.padded(y, x, l));
                } else {
                    v.extend((0..input.depth).map(|d| input.padded(y, x, d)));
                }
            }
        }
        FlatPair {
            coord: (i, j, l),
            input: v,
            kernel: kernels.flat(l).to_vec(),
        }
    }))
}
