//! Exhaustive and conditional maximum-likelihood decoding.
//!
//! The conditional decoder enumerates the `M^λ` overlay hypotheses, cancels
//! each from the received block, and decodes the orthogonal core symbol by
//! symbol from Alamouti-combined signals. The per-symbol metrics are the exact
//! separable terms of the conditional Frobenius metric, so the final decision
//! coincides with exhaustive ML.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::codes::{CodeSpec, BLOCK_LEN, CORE_SYMBOLS};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Decided constellation point index per symbol.
    pub indices: Vec<usize>,
    pub symbols: Vec<C64>,
    /// `‖Y − X̂H‖²_F` at the decision.
    pub metric: f64,
    pub metric_computations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Exhaustive,
    Conditional,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Exhaustive => "exhaustive",
            DecoderKind::Conditional => "conditional",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exhaustive" | "ml" => Ok(DecoderKind::Exhaustive),
            "conditional" => Ok(DecoderKind::Conditional),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown decoder `{other}` (valid: exhaustive, conditional)"
            ))),
        }
    }
}

pub fn decode(kind: DecoderKind, y: &ComplexMatrix, h: &ComplexMatrix, code: &CodeSpec, c: &Constellation) -> Result<DecodeResult> {
    match kind {
        DecoderKind::Exhaustive => ml_decode_exhaustive(y, h, code, c),
        DecoderKind::Conditional => conditional_ml_decode(y, h, code, c),
    }
}

fn check_dims(y: &ComplexMatrix, h: &ComplexMatrix, code: &CodeSpec) -> Result<usize> {
    let n_r = h.cols();
    if h.rows() != code.num_tx() || y.rows() != BLOCK_LEN || y.cols() != n_r {
        return Err(Error::DimensionMismatch(alloc::format!(
            "Y is {}x{}, H is {}x{}; expected {}x{} and {}x{}",
            y.rows(),
            y.cols(),
            h.rows(),
            h.cols(),
            BLOCK_LEN,
            n_r,
            code.num_tx(),
            n_r
        )));
    }
    Ok(n_r)
}

/// `power_scale · dispersion(i, point m) · H`, flattened, for every symbol
/// position `i` and point `m`.
struct Contributions {
    len: usize,
    m: usize,
    data: Vec<C64>,
}

impl Contributions {
    fn new(code: &CodeSpec, c: &Constellation, h: &ComplexMatrix) -> Self {
        let len = BLOCK_LEN * h.cols();
        let mut data = Vec::with_capacity(code.k_total() * c.len() * len);
        for i in 0..code.k_total() {
            for &p in c.points() {
                let x = code.symbol_dispersion(i, p).scale_real(code.power_scale());
                data.extend_from_slice((&x * h).as_slice());
            }
        }
        Self { len, m: c.len(), data }
    }

    #[inline]
    fn get(&self, pos: usize, point: usize) -> &[C64] {
        let start = (pos * self.m + point) * self.len;
        &self.data[start..start + self.len]
    }
}

fn residual_norm(r: &[C64], sub: &[C64]) -> f64 {
    r.iter().zip(sub).map(|(a, b)| (a - b).norm_sqr()).sum()
}

/// Direct ML: every one of the `M^k` symbol vectors. Ties go to the
/// lexicographically smallest index vector.
pub fn ml_decode_exhaustive(y: &ComplexMatrix, h: &ComplexMatrix, code: &CodeSpec, c: &Constellation) -> Result<DecodeResult> {
    check_dims(y, h, code)?;
    let contrib = Contributions::new(code, c, h);
    let k = code.k_total();
    let m = c.len();
    let len = contrib.len;
    // partial[j]: Y minus the contributions of positions 0..j.
    let mut partial = vec![y.as_slice().to_vec(); k];
    let mut digits = vec![0usize; k];
    for j in 1..k {
        let (prev, cur) = partial.split_at_mut(j);
        for e in 0..len {
            cur[0][e] = prev[j - 1][e] - contrib.get(j - 1, 0)[e];
        }
    }
    let mut best = (f64::INFINITY, vec![0usize; k]);
    let mut count = 0u64;
    loop {
        let acc = &partial[k - 1];
        for d in 0..m {
            let metric = residual_norm(acc, contrib.get(k - 1, d));
            count += 1;
            if metric < best.0 {
                digits[k - 1] = d;
                best = (metric, digits.clone());
            }
        }
        let mut level = k - 1;
        loop {
            if level == 0 {
                let indices = best.1;
                let symbols = indices.iter().map(|&i| c.points()[i]).collect();
                return Ok(DecodeResult { indices, symbols, metric: best.0, metric_computations: count });
            }
            level -= 1;
            digits[level] += 1;
            if digits[level] < m {
                break;
            }
            digits[level] = 0;
        }
        for j in level..k - 1 {
            let (prev, cur) = partial.split_at_mut(j + 1);
            let add = contrib.get(j, digits[j]);
            for e in 0..len {
                cur[0][e] = prev[j][e] - add[e];
            }
        }
    }
}

/// Alamouti-combined signals of the core and the channel energies of its two
/// antenna pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreCombination {
    pub y: [C64; 4],
    /// `Σ_i |h_{i,1}|² + |h_{i,2}|²`.
    pub alpha: f64,
    /// `Σ_i |h_{i,3}|² + |h_{i,4}|²`.
    pub beta: f64,
}

/// Combines the interference-free block `Z` (`T x n_R`) over the receive
/// antennas. `H` is `n_T x n_R`; for three antennas `h_{i,4} = 0`.
///
/// The second and fourth time slots enter conjugated, as in Alamouti
/// combining; without the conjugation the imaginary halves of `ỹ` do not
/// separate.
pub fn combine_core(z: &ComplexMatrix, h: &ComplexMatrix, n_tx: usize) -> CoreCombination {
    let zero = C64::new(0.0, 0.0);
    let mut y = [zero; 4];
    let (mut alpha, mut beta) = (0.0, 0.0);
    for i in 0..z.cols() {
        let h1 = h[(0, i)];
        let h2 = h[(1, i)];
        let h3 = h[(2, i)];
        let h4 = if n_tx == 4 { h[(3, i)] } else { zero };
        let (z1, z2, z3, z4) = (z[(0, i)], z[(1, i)], z[(2, i)], z[(3, i)]);
        y[0] += h1.conj() * z1 + h2 * z2.conj();
        y[1] += h2.conj() * z1 - h1 * z2.conj();
        y[2] += h3.conj() * z3 + h4 * z4.conj();
        y[3] += h4.conj() * z3 - h3 * z4.conj();
        alpha += h1.norm_sqr() + h2.norm_sqr();
        beta += h3.norm_sqr() + h4.norm_sqr();
    }
    CoreCombination { y, alpha, beta }
}

/// Coordinate recombination `x̂_i` of the combined signals.
pub fn core_estimates(comb: &CoreCombination) -> [C64; 4] {
    let y = &comb.y;
    [
        C64::new(y[0].re, y[2].im),
        C64::new(y[1].re, y[3].im),
        C64::new(y[2].re, y[0].im),
        C64::new(y[3].re, y[1].im),
    ]
}

/// Per-symbol conditional ML metric for core symbol `i` and candidate `x`
/// of a codeword scaled by `scale`.
#[inline]
fn core_metric(i: usize, est: C64, x: C64, alpha: f64, beta: f64, scale: f64) -> f64 {
    let (wr, wi) = if i < 2 { (beta, alpha) } else { (alpha, beta) };
    let (gr, gi) = if i < 2 { (alpha, beta) } else { (beta, alpha) };
    let dr = est.re - gr * scale * x.re;
    let di = est.im - gi * scale * x.im;
    wr * dr * dr + wi * di * di
}

/// Conditional ML: `M^λ` overlay hypotheses, each with `k_core·M`
/// single-symbol metrics for the core.
pub fn conditional_ml_decode(y: &ComplexMatrix, h: &ComplexMatrix, code: &CodeSpec, c: &Constellation) -> Result<DecodeResult> {
    let n_r = check_dims(y, h, code)?;
    let lambda = code.lambda();
    if lambda == 0 {
        return Err(Error::NoOverlay(code.id().name()));
    }
    let contrib = Contributions::new(code, c, h);
    let m = c.len();
    let k = code.k_total();
    let len = contrib.len;
    let hypotheses = m.pow(lambda as u32);
    let mut best = (f64::INFINITY, vec![0usize; k]);
    let mut count = 0u64;
    let mut overlay = vec![0usize; lambda];
    let mut z = ComplexMatrix::zeros(BLOCK_LEN, n_r);
    let mut residual = vec![C64::new(0.0, 0.0); len];
    for hyp in 0..hypotheses {
        // Row-major: x4 is the most significant digit.
        let mut r = hyp;
        for o in overlay.iter_mut().rev() {
            *o = r % m;
            r /= m;
        }
        z.as_mut_slice().copy_from_slice(y.as_slice());
        for (j, &o) in overlay.iter().enumerate() {
            for (a, b) in z.as_mut_slice().iter_mut().zip(contrib.get(CORE_SYMBOLS + j, o)) {
                *a -= b;
            }
        }
        let comb = combine_core(&z, h, code.num_tx());
        let est = core_estimates(&comb);
        let mut core = [0usize; CORE_SYMBOLS];
        for (i, slot) in core.iter_mut().enumerate() {
            let mut best_m = (f64::INFINITY, 0);
            for (pi, &p) in c.points().iter().enumerate() {
                let v = core_metric(i, est[i], p, comb.alpha, comb.beta, code.power_scale());
                count += 1;
                if v < best_m.0 {
                    best_m = (v, pi);
                }
            }
            *slot = best_m.1;
        }
        residual.copy_from_slice(z.as_slice());
        for (i, &ci) in core.iter().enumerate() {
            for (a, b) in residual.iter_mut().zip(contrib.get(i, ci)) {
                *a -= b;
            }
        }
        let metric: f64 = residual.iter().map(|v| v.norm_sqr()).sum();
        if metric < best.0 {
            let mut idx = core.to_vec();
            idx.extend_from_slice(&overlay);
            best = (metric, idx);
        }
    }
    let indices = best.1;
    let symbols = indices.iter().map(|&i| c.points()[i]).collect();
    Ok(DecodeResult { indices, symbols, metric: best.0, metric_computations: count })
}
