//! One stochastic vector-dot-product element: `N` optical multipliers, a
//! sign-steered filter bank and a pair of photo-charge accumulators.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sc::adc::{adc_convert, AdcModel};
use crate::sc::bitstream::{osm_multiply, pca_accumulate, Bitstream};
use crate::sc::lut::BitstreamLut;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Weight magnitude plus sign bit. Activations are unsigned (post-ReLU) and
/// travel as plain magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedOperand {
    pub magnitude: u32,
    pub sign: Sign,
}

impl SignedOperand {
    pub fn new(magnitude: u32, sign: Sign) -> Self {
        Self { magnitude, sign }
    }

    pub fn from_i64(v: i64) -> Self {
        let sign = if v < 0 { Sign::Negative } else { Sign::Positive };
        Self {
            magnitude: v.unsigned_abs() as u32,
            sign,
        }
    }

    pub fn value(self) -> i64 {
        match self.sign {
            Sign::Positive => i64::from(self.magnitude),
            Sign::Negative => -i64::from(self.magnitude),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdpeOutput {
    /// Signed result in charge counts, i.e. units of `2^-B` of the integer
    /// dot product.
    pub value: f64,
    pub positive_charge: u64,
    pub negative_charge: u64,
    /// Either converter clipped.
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub struct Vdpe {
    lut: Arc<BitstreamLut>,
    adc: AdcModel,
    size: usize,
}

impl Vdpe {
    pub fn new(lut: Arc<BitstreamLut>, adc: AdcModel, size: usize) -> Result<Self> {
        adc.validate()?;
        if size == 0 {
            return Err(Error::InvalidConfig(vec!["VDPE size must be positive".into()]));
        }
        Ok(Self { lut, adc, size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn adc(&self) -> &AdcModel {
        &self.adc
    }

    pub fn lut(&self) -> &BitstreamLut {
        &self.lut
    }

    /// Product streams for each term, split by the weight's sign bit.
    pub fn route(&self, div: &[u32], dkv: &[SignedOperand]) -> Result<(Vec<Bitstream>, Vec<Bitstream>)> {
        if div.len() != dkv.len() {
            return Err(Error::LengthMismatch {
                left: div.len(),
                right: dkv.len(),
            });
        }
        if div.len() > self.size {
            return Err(Error::VectorTooLong {
                len: div.len(),
                capacity: self.size,
            });
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (&x, w) in div.iter().zip(dkv) {
            let e = self.lut.get(x, w.magnitude)?;
            let product = osm_multiply(&e.input, &e.weight)?;
            match w.sign {
                Sign::Positive => pos.push(product),
                Sign::Negative => neg.push(product),
            }
        }
        Ok((pos, neg))
    }

    /// Evaluates one decomposed dot product. With `noise = None` both
    /// accumulators are read exactly; otherwise each goes through the noisy
    /// converter and is mapped back to counts.
    pub fn dot<R: Rng + ?Sized>(
        &self,
        div: &[u32],
        dkv: &[SignedOperand],
        noise: Option<&mut R>,
    ) -> Result<VdpeOutput> {
        let (pos, neg) = self.route(div, dkv)?;
        let positive_charge = pca_accumulate(&pos);
        let negative_charge = pca_accumulate(&neg);
        let (value, saturated) = match noise {
            None => (positive_charge as f64 - negative_charge as f64, false),
            Some(rng) => {
                let p = adc_convert(positive_charge, &self.adc, Some(&mut *rng));
                let n = adc_convert(negative_charge, &self.adc, Some(&mut *rng));
                (
                    self.adc.reconstruct(p.code) - self.adc.reconstruct(n.code),
                    p.saturated || n.saturated,
                )
            }
        };
        Ok(VdpeOutput {
            value,
            positive_charge,
            negative_charge,
            saturated,
        })
    }
}
