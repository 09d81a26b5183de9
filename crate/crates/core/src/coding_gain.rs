//! Minimum determinant, rank and θ optimization.
//!
//! Dispersion codes are real-linear, so `X(s) − X(ŝ) = X(s − ŝ)` and the
//! minimum over codeword pairs equals the minimum over nonzero vectors of
//! symbol differences. For QPSK that is `9^k − 1` vectors instead of
//! `(4^k)^2` pairs.
//!
//! Determinants are taken at the printed scale of each layout (no
//! `power_scale`): the four-antenna codes all carry energy 2 per symbol and the
//! three-antenna codes 1.5 per symbol, so codes of one family compare at equal
//! energy per symbol.

use alloc::vec;
use alloc::vec::Vec;

use crate::codes::{im_coord, re_coord, CodeId, CodeSpec, BLOCK_LEN};
use crate::constellation::{difference_set, Constellation};
use crate::error::{Error, Result};
use crate::linalg::{self, det_in_place, ComplexMatrix, C64, DEFAULT_RANK_TOL};
use crate::math;
use crate::par;

/// Determinants at or below this are treated as rank deficient.
pub const SINGULAR_TOL: f64 = 1e-9;

const MAX_ENTRIES: usize = 16;
type Block = [C64; MAX_ENTRIES];
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub code_id: CodeId,
    pub theta_deg: f64,
    pub rotation_deg: f64,
    pub delta_min: f64,
    /// `delta_min^(1/n_T)`.
    pub coding_gain: f64,
    pub min_rank: usize,
    pub argmin_difference: Vec<C64>,
    pub search_space_size: u64,
}

/// `det(ΔX^H ΔX)` of the unscaled codeword of difference vector `d`. For the
/// 4x4 codes this is `det(ΔX ΔX^H)`; for the 4x3 codes it is the product of
/// the nonzero eigenvalues of `ΔX ΔX^H`.
pub fn delta_of_difference(code: &CodeSpec, d: &[C64]) -> Result<f64> {
    let x = code.raw_codeword(d)?;
    if d.iter().all(|z| *z == ZERO) {
        return Err(Error::ZeroDifference);
    }
    Ok(linalg::det(&linalg::gram(&x))?.re)
}

/// Per-position table of `Re(δ)·A_i + Im(δ)·B_i` for every difference `δ`.
struct DiffTable {
    k: usize,
    nd: usize,
    rows: usize,
    cols: usize,
    diffs: Vec<C64>,
    mats: Vec<Block>,
}

impl DiffTable {
    fn new(code: &CodeSpec, c: &Constellation) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::EmptySearch);
        }
        let diffs = difference_set(c);
        let (rows, cols) = (BLOCK_LEN, code.num_tx());
        let k = code.k_total();
        let mut mats = Vec::with_capacity(k * diffs.len());
        for i in 0..k {
            let a = &code.basis()[re_coord(i)];
            let b = &code.basis()[im_coord(i)];
            for d in &diffs {
                let mut m = [ZERO; MAX_ENTRIES];
                for (e, (x, y)) in m.iter_mut().zip(a.as_slice().iter().zip(b.as_slice())) {
                    *e = x * d.re + y * d.im;
                }
                mats.push(m);
            }
        }
        Ok(Self { k, nd: diffs.len(), rows, cols, diffs, mats })
    }

    #[inline]
    fn get(&self, pos: usize, di: usize) -> &Block {
        &self.mats[pos * self.nd + di]
    }

    /// Nonzero difference indices, and for each the index of its negation.
    fn negation(&self) -> Vec<usize> {
        self.diffs
            .iter()
            .map(|d| self.diffs.iter().position(|e| (e + d).norm() < 1e-12).expect("symmetric set"))
            .collect()
    }

    /// Leading values for a full scan (every nonzero difference) or a half
    /// scan (one representative of each `±δ` pair).
    fn lead_values(&self, half: bool) -> Vec<usize> {
        let neg = self.negation();
        (1..self.nd).filter(|&v| !half || v < neg[v]).collect()
    }

    fn space_size(&self) -> u64 {
        (self.nd as u64).pow(self.k as u32) - 1
    }

    /// All vectors whose first nonzero entry sits at `pos` with value `lead`.
    /// `visit` gets the summed matrix and the lexicographic counter over the
    /// trailing positions; returning `false` stops the scan.
    fn scan(&self, pos: usize, lead: usize, mut visit: impl FnMut(&Block, u64) -> bool) {
        let base = *self.get(pos, lead);
        let free = self.k - 1 - pos;
        if free == 0 {
            visit(&base, 0);
            return;
        }
        let n = self.rows * self.cols;
        let first = pos + 1;
        let last = self.k - 1;
        // partial[j]: base plus free positions first..first+j (exclusive of the last).
        let mut partial = vec![base; free];
        let mut digits = vec![0usize; free];
        let mut counter = 0u64;
        let mut m = [ZERO; MAX_ENTRIES];
        loop {
            let acc = &partial[free - 1];
            for d in 0..self.nd {
                let add = self.get(last, d);
                for e in 0..n {
                    m[e] = acc[e] + add[e];
                }
                if !visit(&m, counter) {
                    return;
                }
                counter += 1;
            }
            // Carry into the non-innermost free positions.
            let mut level = free - 1;
            loop {
                if level == 0 {
                    return;
                }
                level -= 1;
                digits[level] += 1;
                if digits[level] < self.nd {
                    break;
                }
                digits[level] = 0;
            }
            for j in level..free - 1 {
                let prev = if j == 0 { base } else { partial[j] };
                let add = self.get(first + j, digits[j]);
                let mut next = [ZERO; MAX_ENTRIES];
                for e in 0..n {
                    next[e] = prev[e] + add[e];
                }
                partial[j + 1] = next;
            }
        }
    }

    fn chunks(&self, half: bool) -> Vec<(usize, usize)> {
        let leads = self.lead_values(half);
        (0..self.k).flat_map(|p| leads.iter().map(move |&v| (p, v))).collect()
    }

    /// Difference indices for chunk `(pos, lead)` at trailing counter `counter`.
    fn digits(&self, pos: usize, lead: usize, mut counter: u64) -> Vec<usize> {
        let mut idx = vec![0usize; self.k];
        idx[pos] = lead;
        for p in (pos + 1..self.k).rev() {
            idx[p] = (counter % self.nd as u64) as usize;
            counter /= self.nd as u64;
        }
        idx
    }

    fn vector(&self, pos: usize, lead: usize, counter: u64) -> Vec<C64> {
        self.digits(pos, lead, counter).into_iter().map(|i| self.diffs[i]).collect()
    }

    /// Determinant of a nonzero index vector, summed in scan order.
    fn det_of(&self, idx: &[usize]) -> f64 {
        let n = self.rows * self.cols;
        let first = idx.iter().position(|&i| i != 0).expect("nonzero vector");
        let mut m = *self.get(first, idx[first]);
        for (p, &i) in idx.iter().enumerate().skip(first + 1) {
            let add = self.get(p, i);
            for e in 0..n {
                m[e] += add[e];
            }
        }
        gram_det(&m, self.rows, self.cols)
    }

    fn to_matrix(&self, m: &Block) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.rows, self.cols, m[..self.rows * self.cols].to_vec())
            .expect("finite block")
    }
}

/// `det(X^H X)` for a `rows x cols` block, `cols <= 4`.
#[inline]
fn gram_det(x: &Block, rows: usize, cols: usize) -> f64 {
    let mut g = [ZERO; MAX_ENTRIES];
    for i in 0..cols {
        for j in i..cols {
            let mut s = ZERO;
            for r in 0..rows {
                s += x[r * cols + i].conj() * x[r * cols + j];
            }
            g[i * cols + j] = s;
            g[j * cols + i] = s.conj();
        }
    }
    match cols {
        3 => {
            let (g00, g11, g22) = (g[0].re, g[4].re, g[8].re);
            g00 * g11 * g22 + 2.0 * (g[1] * g[5] * g[6]).re
                - g00 * g[5].norm_sqr()
                - g11 * g[2].norm_sqr()
                - g22 * g[1].norm_sqr()
        }
        _ => det_in_place(&mut g[..cols * cols], cols).re,
    }
}

#[derive(Clone, Copy)]
struct ChunkMin {
    det: f64,
    counter: u64,
    min_rank: usize,
}

fn chunk_min(table: &DiffTable, pos: usize, lead: usize, with_rank: bool) -> ChunkMin {
    let (rows, cols) = (table.rows, table.cols);
    let mut best = ChunkMin { det: f64::INFINITY, counter: 0, min_rank: cols };
    table.scan(pos, lead, |m, counter| {
        let d = gram_det(m, rows, cols);
        if d < best.det {
            best.det = d;
            best.counter = counter;
        }
        if with_rank && d <= SINGULAR_TOL {
            let r = linalg::rank(&table.to_matrix(m), DEFAULT_RANK_TOL);
            best.min_rank = best.min_rank.min(r);
        }
        true
    });
    best
}

/// Exhaustive minimum determinant over every nonzero difference vector of
/// `c` (which should be the code's rotated constellation) at overlay phase
/// `theta_deg`.
pub fn delta_min_search(code: &CodeSpec, c: &Constellation, theta_deg: f64) -> Result<DeltaReport> {
    let code = code.retheta(theta_deg);
    let table = DiffTable::new(&code, c)?;
    let chunks = table.chunks(false);
    let results = par::map_indexed(chunks.len(), |i| chunk_min(&table, chunks[i].0, chunks[i].1, true));
    let mut best = (f64::INFINITY, 0usize, 0u64);
    let mut min_rank = code.num_tx();
    for (i, r) in results.iter().enumerate() {
        if r.det < best.0 {
            best = (r.det, i, r.counter);
        }
        min_rank = min_rank.min(r.min_rank);
    }
    let (pos, lead) = chunks[best.1];
    let delta_min = best.0.max(0.0);
    Ok(DeltaReport {
        code_id: code.id(),
        theta_deg: code.theta_deg(),
        rotation_deg: c.rotation_deg(),
        delta_min,
        coding_gain: math::powf(delta_min, 1.0 / code.num_tx() as f64),
        min_rank,
        argmin_difference: table.vector(pos, lead, best.2),
        search_space_size: table.space_size(),
    })
}

/// Minimum determinant only, scanning one vector of each `±d` pair
/// (`det` is invariant under `d → −d`). Used for θ sweeps.
pub fn min_determinant(code: &CodeSpec, c: &Constellation, theta_deg: f64) -> Result<f64> {
    let code = code.retheta(theta_deg);
    let table = DiffTable::new(&code, c)?;
    let chunks = table.chunks(true);
    let results = par::map_indexed(chunks.len(), |i| chunk_min(&table, chunks[i].0, chunks[i].1, false));
    Ok(results.iter().map(|r| r.det).fold(f64::INFINITY, f64::min).max(0.0))
}

/// True iff every nonzero codeword difference has rank `n_T`. Stops at the
/// first rank-deficient difference.
pub fn full_diversity_check(code: &CodeSpec, c: &Constellation, theta_deg: f64) -> Result<bool> {
    let code = code.retheta(theta_deg);
    let table = DiffTable::new(&code, c)?;
    let (rows, cols) = (table.rows, table.cols);
    let chunks = table.chunks(true);
    let deficient = par::map_indexed(chunks.len(), |i| {
        let mut found = false;
        table.scan(chunks[i].0, chunks[i].1, |m, _| {
            if gram_det(m, rows, cols) <= SINGULAR_TOL
                && linalg::rank(&table.to_matrix(m), DEFAULT_RANK_TOL) < cols
            {
                found = true;
            }
            !found
        });
        found
    });
    Ok(!deficient.into_iter().any(|f| f))
}

/// One evaluated grid point: `δ_min(θ)`, or `None` when the point was
/// pruned because it is provably below the best point seen before it.
pub type TracePoint = (f64, Option<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSearch {
    pub best_theta: f64,
    pub report: DeltaReport,
    /// Grid points in grid order.
    pub trace: Vec<TracePoint>,
}

/// Witnesses kept from earlier grid points for quick rejection.
const HOT_WITNESSES: usize = 32;

/// Relative tolerance under which two `δ_min` values count as tied.
pub const TIE_RTOL: f64 = 1e-9;

/// True if `d` is strictly worse than the incumbent maximum `best`.
fn loses(best: Option<f64>, d: f64) -> bool {
    best.is_some_and(|b| d < b - TIE_RTOL * b)
}

enum ChunkScan {
    Min(f64, u64),
    Witness(u64),
}

fn chunk_scan(table: &DiffTable, pos: usize, lead: usize, reject: impl Fn(f64) -> bool) -> ChunkScan {
    let (rows, cols) = (table.rows, table.cols);
    let (mut min, mut arg, mut witness) = (f64::INFINITY, 0u64, None);
    table.scan(pos, lead, |m, counter| {
        let d = gram_det(m, rows, cols);
        if reject(d) {
            witness = Some(counter);
            return false;
        }
        if d < min {
            min = d;
            arg = counter;
        }
        true
    });
    match witness {
        Some(w) => ChunkScan::Witness(w),
        None => ChunkScan::Min(min, arg),
    }
}

/// Bit-reversal ordering of `0..n`; spreads early evaluations over the grid
/// so the incumbent improves quickly.
fn spread_order(n: usize) -> Vec<usize> {
    let bits = usize::BITS - n.saturating_sub(1).leading_zeros();
    (0..1usize << bits)
        .map(|r| if bits == 0 { 0 } else { r.reverse_bits() >> (usize::BITS - bits) })
        .filter(|&i| i < n)
        .collect()
}

/// `δ_min` over `grid`. With `prune`, points that cannot beat the incumbent
/// are rejected as soon as one difference proves it, leaving `None` in the
/// trace; the best point is the same either way.
fn sweep(
    code: &CodeSpec,
    c: &Constellation,
    grid: &[f64],
    prune: bool,
    hot: &mut Vec<Vec<usize>>,
) -> Result<Vec<TracePoint>> {
    let mut out: Vec<TracePoint> = grid.iter().map(|&t| (t, None)).collect();
    let order: Vec<usize> = if prune { spread_order(grid.len()) } else { (0..grid.len()).collect() };
    let mut best: Option<f64> = None;
    for i in order {
        let theta = grid[i];
        let table = DiffTable::new(&code.retheta(theta), c)?;
        let incumbent = if prune { best } else { None };
        let reject = move |d: f64| loses(incumbent, d);
        if hot.iter().any(|w| reject(table.det_of(w))) {
            continue;
        }
        let chunks = table.chunks(true);
        let results = par::map_indexed(chunks.len(), |j| chunk_scan(&table, chunks[j].0, chunks[j].1, reject));
        let mut min = (f64::INFINITY, 0usize, 0u64);
        let mut witness = None;
        for (j, r) in results.iter().enumerate() {
            match *r {
                ChunkScan::Witness(w) => {
                    witness = Some((j, w));
                    break;
                }
                ChunkScan::Min(d, arg) if d < min.0 => min = (d, j, arg),
                ChunkScan::Min(..) => {}
            }
        }
        let (j, counter) = witness.unwrap_or((min.1, min.2));
        if prune {
            hot.insert(0, table.digits(chunks[j].0, chunks[j].1, counter));
            hot.truncate(HOT_WITNESSES);
        }
        if witness.is_some() {
            continue;
        }
        let d = min.0.max(0.0);
        out[i].1 = Some(d);
        best = Some(best.map_or(d, |b| b.max(d)));
    }
    Ok(out)
}

/// Best θ over `grid`. Tied maxima resolve to the centre of the longest run
/// of consecutive tied grid points. `prune` skips the full scan at points
/// that cannot win.
pub fn theta_search(code: &CodeSpec, c: &Constellation, grid: &[f64], prune: bool) -> Result<ThetaSearch> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty θ grid".into()));
    }
    let trace = sweep(code, c, grid, prune, &mut Vec::new())?;
    let best_theta = best_of(&trace);
    let report = delta_min_search(code, c, best_theta)?;
    Ok(ThetaSearch { best_theta, report, trace })
}

/// The centre of the longest run of consecutive tied maxima (lower centre
/// for even runs); equal runs go to the one at smaller θ.
fn best_of(trace: &[TracePoint]) -> f64 {
    let dmax = trace.iter().filter_map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let tied = |p: &TracePoint| p.1.is_some_and(|d| !loses(Some(dmax), d));
    let (mut best, mut i) = ((0usize, 0usize), 0usize);
    while i < trace.len() {
        if !tied(&trace[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < trace.len() && tied(&trace[i]) {
            i += 1;
        }
        if i - start > best.1 {
            best = (start, i - start);
        }
    }
    assert!(best.1 > 0, "at least one exact point");
    trace[best.0 + (best.1 - 1) / 2].0
}

/// `lo, lo+step, …` up to `hi` inclusive, built from integer multiples.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && hi >= lo);
    let n = math::floor((hi - lo) / step + 1e-9) as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageSearch {
    pub coarse: Vec<TracePoint>,
    pub fine: Vec<TracePoint>,
    pub best_theta: f64,
    pub report: DeltaReport,
}

/// Coarse sweep of `[0°, 90°]` at `coarse_step`, then a `fine_step` sweep
/// of one coarse step either side of the coarse peak.
pub fn theta_search_two_stage(
    code: &CodeSpec,
    c: &Constellation,
    coarse_step: f64,
    fine_step: f64,
    prune: bool,
) -> Result<TwoStageSearch> {
    if !(coarse_step > 0.0 && fine_step > 0.0) {
        return Err(Error::InvalidArgument("θ steps must be positive".into()));
    }
    let mut hot = Vec::new();
    let coarse = sweep(code, c, &grid(0.0, 90.0, coarse_step), prune, &mut hot)?;
    let peak = best_of(&coarse);
    let lo = (peak - coarse_step).max(0.0);
    let hi = (peak + coarse_step).min(90.0);
    // Snap the fine grid to multiples of the fine step.
    let first = math::round(lo / fine_step);
    let count = math::floor((hi - lo) / fine_step + 1e-9) as usize;
    let fine_grid: Vec<f64> =
        (0..=count).map(|i| math::round((first + i as f64) * fine_step * 1e9) / 1e9).collect();
    let fine = sweep(code, c, &fine_grid, prune, &mut hot)?;
    let best_theta = best_of(&fine);
    let report = delta_min_search(code, c, best_theta)?;
    Ok(TwoStageSearch { coarse, fine, best_theta, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::make_qpsk;

    #[test]
    fn zero_difference_is_rejected() {
        let code = CodeSpec::new(CodeId::Q44);
        assert_eq!(delta_of_difference(&code, &[ZERO; 4]), Err(Error::ZeroDifference));
    }

    #[test]
    fn three_antenna_delta_is_product_of_nonzero_eigenvalues() {
        let c = make_qpsk(16.0);
        let ds = difference_set(&c);
        for id in [CodeId::Q34, CodeId::X38, CodeId::X36] {
            let code = CodeSpec::new(id);
            for n in 1..200u64 {
                let d: Vec<C64> = (0..code.k_total())
                    .map(|i| ds[((n * 7919 + i as u64 * 104729) % 9) as usize])
                    .collect();
                if d.iter().all(|z| *z == ZERO) {
                    continue;
                }
                let x = code.raw_codeword(&d).unwrap();
                let dist = &x * &x.hermitian();
                let ev = linalg::hermitian_eigenvalues(&dist).unwrap();
                // Largest three of the four eigenvalues; the smallest is zero.
                let oracle: f64 = ev[1..].iter().product();
                let got = delta_of_difference(&code, &d).unwrap();
                assert!(got >= -1e-12);
                assert!((got - oracle).abs() <= 1e-9 * oracle.abs().max(1e-12), "{got} vs {oracle}");
            }
        }
    }

    #[test]
    fn gram_det_kernel_matches_linalg() {
        let c = make_qpsk(16.0);
        for id in [CodeId::X48, CodeId::X38] {
            let code = CodeSpec::new(id);
            let table = DiffTable::new(&code, &c).unwrap();
            let mut n = 0;
            table.scan(1, 3, |m, counter| {
                let d = table.vector(1, 3, counter);
                let want = delta_of_difference(&code, &d).unwrap();
                let got = gram_det(m, table.rows, table.cols);
                assert!((got - want).abs() < 1e-10 * want.abs().max(1.0));
                n += 1;
                n < 5000
            });
        }
    }

    #[test]
    fn scan_visits_every_vector_once() {
        let code = CodeSpec::new(CodeId::Q44);
        let c = make_qpsk(0.0);
        let table = DiffTable::new(&code, &c).unwrap();
        let mut seen = alloc::collections::BTreeSet::new();
        let mut total = 0u64;
        for (p, v) in table.chunks(false) {
            table.scan(p, v, |_, counter| {
                let vec = table.vector(p, v, counter);
                let key: Vec<(i64, i64)> =
                    vec.iter().map(|z| ((z.re * 1e9) as i64, (z.im * 1e9) as i64)).collect();
                assert!(seen.insert(key));
                total += 1;
                true
            });
        }
        assert_eq!(total, 9u64.pow(4) - 1);
        let half: u64 = table
            .chunks(true)
            .iter()
            .map(|&(p, v)| {
                let mut n = 0;
                table.scan(p, v, |_, _| {
                    n += 1;
                    true
                });
                n
            })
            .sum();
        assert_eq!(half, (9u64.pow(4) - 1) / 2);
    }

    #[test]
    fn single_point_constellation_is_an_empty_search() {
        let c = Constellation::new(vec![C64::new(1.0, 0.0)], vec![0], 0.0).unwrap();
        let code = CodeSpec::new(CodeId::Q44);
        assert_eq!(delta_min_search(&code, &c, 0.0), Err(Error::EmptySearch));
    }

    #[test]
    fn q44_report_fields() {
        let code = CodeSpec::new(CodeId::Q44);
        let r = delta_min_search(&code, &code.constellation(), 0.0).unwrap();
        assert_eq!(r.search_space_size, 6560);
        assert!((r.coding_gain - math::powf(r.delta_min, 0.25)).abs() < 1e-12);
        assert_eq!(r.min_rank, 4);
        let at_argmin = delta_of_difference(&code, &r.argmin_difference).unwrap();
        assert!((at_argmin - r.delta_min).abs() < 1e-12);
    }

    #[test]
    fn pruning_keeps_the_best_point() {
        let code = CodeSpec::new(CodeId::X46);
        let c = code.constellation();
        let g = grid(0.0, 90.0, 7.5);
        let full = theta_search(&code, &c, &g, false).unwrap();
        let pruned = theta_search(&code, &c, &g, true).unwrap();
        assert_eq!(full.best_theta, pruned.best_theta);
        assert!(full.trace.iter().all(|p| p.1.is_some()));
        for (a, b) in full.trace.iter().zip(&pruned.trace) {
            if let Some(d) = b.1 {
                assert_eq!(a.1, Some(d));
            }
        }
    }

    #[test]
    fn ties_resolve_to_centre_of_longest_run() {
        let t = |v: &[Option<f64>]| -> Vec<TracePoint> { v.iter().enumerate().map(|(i, &d)| (i as f64, d)).collect() };
        assert_eq!(best_of(&t(&[Some(1.0), Some(2.0), Some(2.0), Some(2.0), Some(1.0)])), 2.0);
        assert_eq!(best_of(&t(&[Some(2.0), None, Some(2.0), Some(2.0)])), 2.0);
        assert_eq!(best_of(&t(&[Some(2.0), Some(1.0), Some(2.0 * (1.0 - 1e-12))])), 0.0);
        assert_eq!(best_of(&t(&[Some(1.0), Some(3.0), Some(3.0)])), 1.0);
    }

    #[test]
    fn x36_coarse_grid_picks_45() {
        let code = CodeSpec::new(CodeId::X36);
        let r = theta_search(&code, &code.constellation(), &grid(0.0, 90.0, 15.0), true).unwrap();
        assert_eq!(r.best_theta, 45.0);
        assert!((r.report.delta_min - 0.3381).abs() < 5e-4);
    }

    #[test]
    fn spread_order_is_a_permutation() {
        for n in [1, 2, 7, 181] {
            let mut o = spread_order(n);
            assert_eq!(o[0], 0);
            o.sort_unstable();
            assert_eq!(o, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn grid_builder() {
        assert_eq!(grid(0.0, 90.0, 15.0), vec![0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0]);
        assert_eq!(grid(0.0, 90.0, 0.5).len(), 181);
        assert_eq!(grid(5.0, 5.0, 1.0), vec![5.0]);
    }

    #[test]
    fn single_point_grid_returns_that_point() {
        let code = CodeSpec::new(CodeId::X36);
        let r = theta_search(&code, &code.constellation(), &[30.0], true).unwrap();
        assert_eq!(r.best_theta, 30.0);
        assert_eq!(r.trace.len(), 1);
    }
}
