//! Precomputed uncorrelated bit-stream pairs.
//!
//! Each entry holds an input stream and a weight stream whose AND has exactly
//! `round_half_even(I_b·W_b / 2^B)` ones, so a single gate multiplies with at
//! most half a count of error. The pair is built by rate matching: the input's
//! ones are spread evenly over the stream, then the weight's ones are spread
//! evenly inside the input's ones (product count) and inside its zeros (the
//! remainder). The conditional density of the weight given the input then
//! equals its marginal density up to integer rounding.

use crate::error::{Error, Result};
use crate::sc::bitstream::{spread, Bitstream, PrecisionConfig};

/// Largest precision for which a full pair-keyed table is built in memory.
pub const MAX_LUT_BITS: u32 = 9;

/// `num / den` rounded to nearest, ties to even.
pub fn round_half_even(num: u64, den: u64) -> u64 {
    assert!(den > 0);
    let q = num / den;
    let r = num % den;
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => q + (q & 1),
        std::cmp::Ordering::Less => q,
    }
}

/// Builds the input/weight stream pair for operands in `[0, 2^B]`.
pub fn generate_uncorrelated_pair(
    input: u32,
    weight: u32,
    precision: PrecisionConfig,
) -> Result<(Bitstream, Bitstream)> {
    let len = precision.stream_length();
    for (what, v) in [("input operand", input), ("weight operand", weight)] {
        if v as usize > len {
            return Err(Error::range(what, v, 0, len as i64));
        }
    }
    let (a, b) = (input as usize, weight as usize);
    let overlap = round_half_even((a * b) as u64, len as u64) as usize;
    // overlap <= a and b - overlap <= len - a hold because
    // a·b/len <= a and a·b/len >= a + b - len.
    let rest = b - overlap;

    let mut inside = spread(overlap, a);
    let mut outside = spread(rest, len - a);
    let mut w = Bitstream::zeros(len);
    let i = Bitstream::from_bits(spread(a, len));
    for k in 0..len {
        let hit = if i.get(k) {
            inside.next()
        } else {
            outside.next()
        };
        if hit == Some(true) {
            w.set(k, true);
        }
    }
    Ok((i, w))
}

/// One stored stream pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LutEntry {
    pub input: Bitstream,
    pub weight: Bitstream,
}

/// Pair-keyed table of uncorrelated streams for every pair of B-bit operand
/// magnitudes `[0, 2^B - 1]²`.
///
/// The hardware indexes its table by `I_b XOR W_b` and reports `2^B` entries;
/// that hash maps distinct operand pairs to the same slot, so the functional
/// model keys by the full pair and keeps the hardware figures only for
/// sizing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitstreamLut {
    precision: PrecisionConfig,
    entries: Vec<LutEntry>,
}

const MAGIC: &[u8; 4] = b"SCLT";
const FORMAT_VERSION: u8 = 1;
const HEADER_LEN: usize = 16;

impl BitstreamLut {
    pub fn build(precision: PrecisionConfig) -> Result<Self> {
        if precision.bits() > MAX_LUT_BITS {
            return Err(Error::range(
                "LUT precision bits",
                precision.bits(),
                1,
                MAX_LUT_BITS as i64,
            ));
        }
        let side = 1u32 << precision.bits();
        let mut entries = Vec::with_capacity((side * side) as usize);
        for i in 0..side {
            for w in 0..side {
                let (input, weight) = generate_uncorrelated_pair(i, w, precision)?;
                entries.push(LutEntry { input, weight });
            }
        }
        Ok(Self { precision, entries })
    }

    pub fn precision(&self) -> PrecisionConfig {
        self.precision
    }

    fn side(&self) -> usize {
        1 << self.precision.bits()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, input: u32, weight: u32) -> Result<&LutEntry> {
        let side = self.side();
        let max = side as i64 - 1;
        if input as usize >= side {
            return Err(Error::range("input operand", input, 0, max));
        }
        if weight as usize >= side {
            return Err(Error::range("weight operand", weight, 0, max));
        }
        Ok(&self.entries[input as usize * side + weight as usize])
    }

    /// Iterates `((I_b, W_b), entry)` in input-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &LutEntry)> {
        let side = self.side();
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, e)| (((k / side) as u32, (k % side) as u32), e))
    }

    /// Hardware table depth, `2^B`.
    pub fn reported_hw_entry_count(&self) -> usize {
        self.side()
    }

    /// Hardware entry width: two `2^B`-bit vectors.
    pub fn reported_entry_width_bits(&self) -> usize {
        2 * self.precision.stream_length()
    }

    /// Slot the hardware hash would use for an operand pair.
    pub fn hardware_index(input: u32, weight: u32) -> u32 {
        input ^ weight
    }

    /// Serializes to the sidecar image.
    ///
    /// Layout, all integers little-endian:
    ///
    /// ```text
    /// offset size  field
    ///      0    4  magic "SCLT"
    ///      4    1  format version (1)
    ///      5    1  precision B
    ///      6    2  reserved, zero
    ///      8    4  entry count (2^B · 2^B)
    ///     12    4  row length in bytes
    ///     16    .  rows, input-major
    /// ```
    ///
    /// A row is `I_b: u16, W_b: u16` followed by the input and weight vectors,
    /// each `2^B / 8` bytes (rounded up) with bit `k` at byte `k / 8`, bit
    /// `k % 8`.
    pub fn encode(&self) -> Vec<u8> {
        let vec_bytes = self.precision.stream_length().div_ceil(8);
        let row = 4 + 2 * vec_bytes;
        let mut out = Vec::with_capacity(HEADER_LEN + row * self.entries.len());
        out.extend_from_slice(MAGIC);
        out.push(FORMAT_VERSION);
        out.push(self.precision.bits() as u8);
        out.extend_from_slice(&[0, 0]);
        out.extend_from_slice(&(self.entries.len() as u32).to_le_bytes());
        out.extend_from_slice(&(row as u32).to_le_bytes());
        for ((i, w), e) in self.iter() {
            out.extend_from_slice(&(i as u16).to_le_bytes());
            out.extend_from_slice(&(w as u16).to_le_bytes());
            pack_bits(&e.input, vec_bytes, &mut out);
            pack_bits(&e.weight, vec_bytes, &mut out);
        }
        out
    }

    /// Parses and validates a sidecar image. Every row must carry the operand
    /// pair its position implies, and its vectors must satisfy the popcount and
    /// product invariants.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let bad = |m: String| Error::LutFormat(m);
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[0..4] != MAGIC {
            return Err(bad("bad magic".into()));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {}", bytes[4])));
        }
        let bits = u32::from(bytes[5]);
        if bits == 0 || bits > MAX_LUT_BITS {
            return Err(bad(format!("precision {bits} outside 1..={MAX_LUT_BITS}")));
        }
        let precision = PrecisionConfig::new(bits)?;
        if bytes[6] != 0 || bytes[7] != 0 {
            return Err(bad("reserved bytes are not zero".into()));
        }
        let count = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let row = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let side = 1usize << bits;
        let len = precision.stream_length();
        let vec_bytes = len.div_ceil(8);
        if count != side * side {
            return Err(bad(format!("entry count {count}, expected {}", side * side)));
        }
        if row != 4 + 2 * vec_bytes {
            return Err(bad(format!("row length {row}, expected {}", 4 + 2 * vec_bytes)));
        }
        let body = &bytes[HEADER_LEN..];
        if body.len() != count * row {
            return Err(bad(format!("body is {} bytes, expected {}", body.len(), count * row)));
        }
        let mut entries = Vec::with_capacity(count);
        for (k, chunk) in body.chunks_exact(row).enumerate() {
            let i = u16::from_le_bytes([chunk[0], chunk[1]]) as usize;
            let w = u16::from_le_bytes([chunk[2], chunk[3]]) as usize;
            if (i, w) != (k / side, k % side) {
                return Err(bad(format!("row {k} carries operands ({i}, {w})")));
            }
            let input = unpack_bits(&chunk[4..4 + vec_bytes], len)?;
            let weight = unpack_bits(&chunk[4 + vec_bytes..], len)?;
            let expect = round_half_even((i * w) as u64, len as u64);
            if input.popcount() != i as u64
                || weight.popcount() != w as u64
                || input.and_popcount(&weight)? != expect
            {
                return Err(bad(format!("row {k} violates the pair invariants")));
            }
            entries.push(LutEntry { input, weight });
        }
        Ok(Self { precision, entries })
    }
}

fn pack_bits(s: &Bitstream, n_bytes: usize, out: &mut Vec<u8>) {
    let start = out.len();
    out.resize(start + n_bytes, 0);
    for (k, word) in s.words().iter().enumerate() {
        for (j, byte) in word.to_le_bytes().iter().enumerate() {
            let at = k * 8 + j;
            if at < n_bytes {
                out[start + at] = *byte;
            }
        }
    }
}

fn unpack_bits(bytes: &[u8], len: usize) -> Result<Bitstream> {
    let mut words = vec![0u64; len.div_ceil(64)];
    for (at, byte) in bytes.iter().enumerate() {
        words[at / 8] |= u64::from(*byte) << (8 * (at % 8));
    }
    let s = Bitstream::from_words(words.clone(), len);
    if s.words() != words.as_slice() {
        return Err(Error::LutFormat("padding bits past the stream end are set".into()));
    }
    Ok(s)
}
