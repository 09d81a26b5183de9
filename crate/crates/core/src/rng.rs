//! Counter-addressed random streams.
//!
//! Every Monte-Carlo trial gets its own ChaCha8 stream keyed by
//! `(seed, domain, index)` and selected by `trial`, so a trial's draws depend
//! only on its address and never on which worker ran it or in what order.

use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, C64};
use crate::math;

/// Domain tags keep independent experiments from sharing streams.
pub mod domain {
    pub const CHANNEL: u64 = 0x4348_414e;
    pub const BER: u64 = 0x4245_5221;
    pub const DECODE_CHECK: u64 = 0x4443_4b21;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random stream for trial `trial` of experiment `(seed, domain, index)`.
pub fn trial_stream(seed: u64, domain: u64, index: u64, trial: u64) -> TrialRng {
    let mut key = [0u8; 32];
    let mut h = splitmix64(seed ^ splitmix64(domain));
    h = splitmix64(h ^ index.rotate_left(17));
    for chunk in key.chunks_mut(8) {
        h = splitmix64(h);
        chunk.copy_from_slice(&h.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    TrialRng { rng }
}

pub struct TrialRng {
    rng: ChaCha8Rng,
}

impl TrialRng {
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `(0, 1]`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Circular complex Gaussian `N_C(0, 1)` by Box–Muller; one uniform pair
    /// per sample.
    #[inline]
    pub fn complex_normal(&mut self) -> C64 {
        let r = math::sqrt(-math::ln(self.uniform_open0()));
        let (s, c) = math::sin_cos(2.0 * math::PI * self.uniform());
        C64::new(r * c, r * s)
    }

    /// `rows x cols` matrix of i.i.d. `N_C(0, variance)` entries, filled row-major.
    pub fn complex_normal_matrix(&mut self, rows: usize, cols: usize, variance: f64) -> ComplexMatrix {
        let sd = math::sqrt(variance);
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal() * sd)
    }

    /// Fills `out` with uniformly random bits (one per byte).
    #[inline]
    pub fn bits(&mut self, out: &mut [u8]) {
        let mut word = 0u64;
        for (i, b) in out.iter_mut().enumerate() {
            if i % 64 == 0 {
                word = self.next_u64();
            }
            *b = (word & 1) as u8;
            word >>= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_address_same_stream() {
        let mut a = trial_stream(7, domain::CHANNEL, 2, 99);
        let mut b = trial_stream(7, domain::CHANNEL, 2, 99);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = trial_stream(7, domain::CHANNEL, 2, 100);
        let mut d = trial_stream(7, domain::CHANNEL, 3, 99);
        let x = trial_stream(7, domain::CHANNEL, 2, 99).next_u64();
        assert_ne!(c.next_u64(), x);
        assert_ne!(d.next_u64(), x);
    }

    #[test]
    fn uniforms_stay_in_range() {
        let mut r = trial_stream(1, 2, 3, 4);
        for _ in 0..10_000 {
            let u = r.uniform_open0();
            assert!(u > 0.0 && u <= 1.0);
            let v = r.uniform();
            assert!((0.0..1.0).contains(&v));
        }
    }
}
