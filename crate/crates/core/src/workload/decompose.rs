use std::ops::Range;

use serde::Serialize;

/// Split of an `S`-point vector into `C = ceil(S/N)` slices of `N` points.
/// The final slice may be short; hardware pads it with zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segmentation {
    pub s: u64,
    pub n: u64,
    pub count: u64,
}

/// Computes the segmentation of an `S`-point vector for `N`-point VDPEs.
///
/// # Panics
/// If `s` or `n` is zero.
pub fn decompose(s: u64, n: u64) -> Segmentation {
    assert!(s >= 1 && n >= 1, "decompose needs S >= 1 and N >= 1");
    Segmentation { s, n, count: s.div_ceil(n) }
}

impl Segmentation {
    /// Index range of segment `c` in the flattened vector.
    pub fn segment(&self, c: u64) -> Range<u64> {
        let start = c * self.n;
        start..(start + self.n).min(self.s)
    }

    pub fn segments(&self) -> impl Iterator<Item = Range<u64>> + '_ {
        (0..self.count).map(|c| self.segment(c))
    }

    /// Zero points appended to the last segment.
    pub fn padding(&self) -> u64 {
        self.count * self.n - self.s
    }

    /// Reduction-tree depth for summing the partial sums, `ceil(log2 C)`.
    pub fn psum_depth(&self) -> u32 {
        if self.count <= 1 {
            0
        } else {
            64 - (self.count - 1).leading_zeros()
        }
    }

    /// Segment `c` of `v`, zero-padded to exactly `N` points.
    pub fn slice_padded<T: Copy + Default>(&self, v: &[T], c: u64) -> Vec<T> {
        let r = self.segment(c);
        let mut out = v[r.start as usize..r.end as usize].to_vec();
        out.resize(self.n as usize, T::default());
        out
    }
}

/// One output point's dot product and its segmentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VdpTask {
    pub coord: (usize, usize, usize),
    pub segmentation: Segmentation,
}

impl VdpTask {
    pub fn new(coord: (usize, usize, usize), s: u64, n: u64) -> Self {
        Self {
            coord,
            segmentation: decompose(s, n),
        }
    }

    pub fn s(&self) -> u64 {
        self.segmentation.s
    }

    pub fn div_count(&self) -> u64 {
        self.segmentation.count
    }
}
