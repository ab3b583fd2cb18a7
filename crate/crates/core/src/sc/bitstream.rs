//! Unipolar stochastic bit-streams.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported precision. Streams are `2^B` bits long.
pub const MAX_PRECISION_BITS: u32 = 16;

/// Binary precision `B` and the derived stream length `2^B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionConfig {
    bits: u32,
}

impl PrecisionConfig {
    pub fn new(bits: u32) -> Result<Self> {
        if !(1..=MAX_PRECISION_BITS).contains(&bits) {
            return Err(Error::range("precision bits", bits, 1, MAX_PRECISION_BITS as i64));
        }
        Ok(Self { bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn stream_length(self) -> usize {
        1usize << self.bits
    }

    /// Largest B-bit operand magnitude, `2^B - 1`.
    pub fn max_operand(self) -> u32 {
        (1u32 << self.bits) - 1
    }
}

/// Fixed-length bit vector, packed LSB-first into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so word-level popcounts
/// are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstream {
    words: Vec<u64>,
    len: usize,
}

impl Bitstream {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        s.clear_tail();
        s
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(64) {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1u64 << (len % 64);
            }
            len += 1;
        }
        Self { words, len }
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        debug_assert_eq!(words.len(), len.div_ceil(64));
        let mut s = Self { words, len };
        s.clear_tail();
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, k: usize) -> bool {
        assert!(k < self.len, "bit index {k} out of range {}", self.len);
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn set(&mut self, k: usize, value: bool) {
        assert!(k < self.len, "bit index {k} out of range {}", self.len);
        let mask = 1u64 << (k % 64);
        if value {
            self.words[k / 64] |= mask;
        } else {
            self.words[k / 64] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }

    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Encoded unipolar value `popcount / len`.
    pub fn value(&self) -> f64 {
        if self.len == 0 {
            return 0.0;
        }
        self.popcount() as f64 / self.len as f64
    }

    /// Popcount of `self AND other` without materializing the product.
    pub fn and_popcount(&self, other: &Bitstream) -> Result<u64> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a & b).count_ones()))
            .sum())
    }

    fn check_len(&self, other: &Bitstream) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    /// Bitwise AND, the optical AND gate's transfer function.
    pub fn and(&self, other: &Bitstream) -> Result<Bitstream> {
        self.check_len(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(Bitstream { words, len: self.len })
    }
}

impl fmt::Debug for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstream({}/{}: ", self.popcount(), self.len)?;
        for b in self.iter().take(64) {
            f.write_str(if b { "1" } else { "0" })?;
        }
        if self.len > 64 {
            f.write_str("…")?;
        }
        f.write_str(")")
    }
}

/// Marks `count` of `slots` slots, spread as evenly as possible.
///
/// Slot `k` is marked iff `floor((k+1)·count/slots) > floor(k·count/slots)`,
/// the Bresenham rate pattern. Exactly `count` slots are marked.
pub(crate) fn spread(count: usize, slots: usize) -> impl Iterator<Item = bool> {
    debug_assert!(count <= slots);
    (0..slots).map(move |k| ((k + 1) * count) / slots > (k * count) / slots)
}

/// Encodes an integer `value` in `[0, 2^B]` as a stream with exactly
/// `value` ones, evenly spaced.
pub fn encode_unipolar(value: u32, precision: PrecisionConfig) -> Result<Bitstream> {
    let len = precision.stream_length();
    if value as usize > len {
        return Err(Error::range("unipolar value", value, 0, len as i64));
    }
    Ok(Bitstream::from_bits(spread(value as usize, len)))
}

/// Optical stochastic multiply: position-wise AND of two equal-length streams.
pub fn osm_multiply(input: &Bitstream, weight: &Bitstream) -> Result<Bitstream> {
    input.and(weight)
}

/// Total optical '1's reaching one photo-charge accumulator.
///
/// The accumulator integrates charge linearly in the number of incident ones;
/// the redundant capacitor swap never stalls accumulation, so the count is the
/// plain sum of popcounts.
pub fn pca_accumulate<'a, I>(streams: I) -> u64
where
    I: IntoIterator<Item = &'a Bitstream>,
{
    streams.into_iter().map(Bitstream::popcount).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u32) -> PrecisionConfig {
        PrecisionConfig::new(bits).unwrap()
    }

    #[test]
    fn precision_bounds() {
        assert!(PrecisionConfig::new(0).is_err());
        assert!(PrecisionConfig::new(17).is_err());
        assert_eq!(p(8).stream_length(), 256);
        assert_eq!(p(8).max_operand(), 255);
    }

    #[test]
    fn encode_extremes() {
        let z = encode_unipolar(0, p(8)).unwrap();
        assert_eq!(z.len(), 256);
        assert_eq!(z.popcount(), 0);
        let o = encode_unipolar(256, p(8)).unwrap();
        assert_eq!(o, Bitstream::ones(256));
        assert!(encode_unipolar(257, p(8)).is_err());
    }

    #[test]
    fn encode_half_of_eight() {
        let s = encode_unipolar(4, p(3)).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.popcount(), 4);
        assert_eq!(s.value(), 0.5);
    }

    #[test]
    fn encode_every_value_has_exact_popcount() {
        for b in 1..=10 {
            let prec = p(b);
            for v in 0..=prec.stream_length() as u32 {
                assert_eq!(encode_unipolar(v, prec).unwrap().popcount(), u64::from(v));
            }
        }
    }

    #[test]
    fn multiply_identity_and_mismatch() {
        let w = encode_unipolar(77, p(8)).unwrap();
        let ones = Bitstream::ones(256);
        assert_eq!(osm_multiply(&ones, &w).unwrap(), w);
        let short = Bitstream::ones(128);
        assert!(matches!(
            osm_multiply(&short, &w),
            Err(Error::LengthMismatch { left: 128, right: 256 })
        ));
    }

    #[test]
    fn ones_tail_is_clear() {
        let s = Bitstream::ones(70);
        assert_eq!(s.popcount(), 70);
        assert_eq!(s.words()[1], (1 << 6) - 1);
    }

    #[test]
    fn pca_empty_and_capacity_point() {
        assert_eq!(pca_accumulate(std::iter::empty()), 0);
        let ones = Bitstream::ones(256);
        let streams = vec![ones; 176];
        assert_eq!(pca_accumulate(&streams), 45_056);
    }
}
