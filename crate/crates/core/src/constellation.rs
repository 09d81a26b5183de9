//! Unit-energy QPSK with rotation and Gray labelling.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::math;

/// Rotation that maximizes the minimum product distance `|Δx_R·Δx_I|` of
/// axis-aligned QPSK: `½·atan(½)` in degrees. Commonly quoted as 13.28° or
/// 13.29°.
pub const CIOD_QPSK_ROTATION_DEG: f64 = 13.282525588538995;

/// Rotation used by the three-antenna codes.
pub const GCIOD_QPSK_ROTATION_DEG: f64 = 16.0;

/// Gray labels of the four QPSK points, counterclockwise from the first.
const QPSK_GRAY: [u32; 4] = [0b00, 0b01, 0b11, 0b10];

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<C64>,
    /// `labels[i]` is the bit pattern carried by `points[i]`.
    labels: Vec<u32>,
    /// `by_label[l]` is the point index carrying label `l`.
    by_label: Vec<usize>,
    bits_per_symbol: usize,
    rotation_deg: f64,
}

/// QPSK with points on the real and imaginary axes, `e^{j(kπ/2 + rotation)}`
/// for `k = 0..3`, labelled 00, 01, 11, 10 counterclockwise.
pub fn make_qpsk(rotation_deg: f64) -> Constellation {
    let points = (0..4)
        .map(|k| math::phasor_deg(90.0 * k as f64 + rotation_deg))
        .collect();
    Constellation::new(points, QPSK_GRAY.to_vec(), rotation_deg)
        .expect("QPSK labels are a bijection")
}

impl Constellation {
    /// Builds a constellation from points and labels. Labels must be a
    /// permutation of `0..M` with `M` a power of two.
    pub fn new(points: Vec<C64>, labels: Vec<u32>, rotation_deg: f64) -> Result<Self> {
        let m = points.len();
        if labels.len() != m {
            return Err(Error::LengthMismatch { expected: m, actual: labels.len() });
        }
        if m == 0 || !m.is_power_of_two() {
            return Err(Error::InvalidArgument(alloc::format!("constellation size {m} is not a power of two")));
        }
        let mut by_label = alloc::vec![usize::MAX; m];
        for (i, &l) in labels.iter().enumerate() {
            let l = l as usize;
            if l >= m || by_label[l] != usize::MAX {
                return Err(Error::InvalidArgument("labels are not a bijection onto 0..M".into()));
            }
            by_label[l] = i;
        }
        Ok(Self { points, labels, by_label, bits_per_symbol: m.trailing_zeros() as usize, rotation_deg })
    }

    #[inline]
    pub fn points(&self) -> &[C64] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    #[inline]
    pub fn rotation_deg(&self) -> f64 {
        self.rotation_deg
    }

    /// Average energy `(1/M)·Σ|p|²`.
    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// Point index carrying the given label.
    #[inline]
    pub fn index_of_label(&self, label: u32) -> usize {
        self.by_label[label as usize]
    }

    /// Maps bits (MSB first within each group, one bit per byte, values 0/1)
    /// to point indices.
    pub fn bits_to_indices(&self, bits: &[u8]) -> Result<Vec<usize>> {
        let b = self.bits_per_symbol;
        if bits.len() % b != 0 {
            return Err(Error::LengthMismatch {
                expected: bits.len().div_ceil(b) * b,
                actual: bits.len(),
            });
        }
        Ok(bits
            .chunks(b)
            .map(|g| {
                let label = g.iter().fold(0u32, |acc, &bit| (acc << 1) | u32::from(bit & 1));
                self.index_of_label(label)
            })
            .collect())
    }

    /// Appends the bits of each point index to `out`.
    pub fn indices_to_bits(&self, indices: &[usize], out: &mut Vec<u8>) {
        let b = self.bits_per_symbol;
        for &i in indices {
            let label = self.labels[i];
            for k in (0..b).rev() {
                out.push(((label >> k) & 1) as u8);
            }
        }
    }

    pub fn map_bits(&self, bits: &[u8]) -> Result<Vec<C64>> {
        Ok(self.bits_to_indices(bits)?.into_iter().map(|i| self.points[i]).collect())
    }

    /// Index of the point nearest to `z`.
    pub fn nearest(&self, z: C64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (p - z).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Hard-decision demapping to bits through the nearest point.
    pub fn demap_symbols(&self, symbols: &[C64]) -> Vec<u8> {
        let idx: Vec<usize> = symbols.iter().map(|&z| self.nearest(z)).collect();
        let mut out = Vec::with_capacity(idx.len() * self.bits_per_symbol);
        self.indices_to_bits(&idx, &mut out);
        out
    }
}

/// Distinct values `a − b` over all ordered pairs of points, in order of
/// first appearance (so `0` is always first).
pub fn difference_set(c: &Constellation) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for a in c.points() {
        for b in c.points() {
            let d = a - b;
            if !out.iter().any(|u| (u - d).norm() < 1e-12) {
                out.push(d);
            }
        }
    }
    out
}
