//! Ergodic capacity and maximum mutual information of the codes under
//! Gaussian inputs.
//!
//! All estimators draw the channel of trial `t` from the same stream, so
//! curves computed with one seed share their fading realizations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::channel_sim::sample_channel;
use crate::codes::{CodeId, CodeSpec, BLOCK_LEN};
use crate::error::{Error, Result};
use crate::linalg::{det, gram, ComplexMatrix, C64};
use crate::math;
use crate::par;
use crate::rng::{domain, trial_stream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// `E log2 det(I + ρ/n_T HᴴH)`.
    Ergodic,
    /// Mutual information of the code's equivalent channel.
    Mmi(CodeId),
    /// Closed form for the orthogonal-core codes.
    CiodClosedForm(CodeId),
    /// Rate-`R` orthogonal design.
    Ostbc { rate: f64 },
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::Ergodic => f.write_str("ergodic"),
            Estimator::Mmi(id) => write!(f, "mmi-{id}"),
            Estimator::CiodClosedForm(id) => write!(f, "closed-{id}"),
            Estimator::Ostbc { rate } => write!(f, "ostbc-{rate}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityPoint {
    pub snr_db: f64,
    pub bits_per_channel_use: f64,
    pub estimator: Estimator,
    pub trials: usize,
    /// Standard error of the Monte Carlo mean.
    pub std_error: f64,
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::InvalidArgument("need at least 2 trials".into()));
    }
    Ok(())
}

/// Mean and standard error of per-trial values.
fn summarize(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, math::sqrt(var / n))
}

fn monte_carlo<F>(snr_db: f64, estimator: Estimator, trials: usize, per_trial: F) -> Result<CapacityPoint>
where
    F: Fn(usize) -> Result<f64> + Sync + Send,
{
    check_trials(trials)?;
    let values = par::map_indexed(trials, per_trial).into_iter().collect::<Result<Vec<f64>>>()?;
    let (mean, se) = summarize(&values);
    Ok(CapacityPoint { snr_db, bits_per_channel_use: mean, estimator, trials, std_error: se })
}

/// `log2 det(I + ρ/n_T HᴴH)` for one `n_T x n_R` realization.
pub fn capacity_realization(h: &ComplexMatrix, rho: f64) -> f64 {
    let n_t = h.rows() as f64;
    let mut g = gram(h).scale_real(rho / n_t);
    for i in 0..g.rows() {
        g[(i, i)] += 1.0;
    }
    log2_det(&g)
}

fn log2_det(m: &ComplexMatrix) -> f64 {
    math::log2(det(m).expect("square").re)
}

fn channel(seed: u64, trial: usize, n_t: usize, n_r: usize) -> ComplexMatrix {
    sample_channel(n_t, n_r, &mut trial_stream(seed, domain::CHANNEL, 0, trial as u64))
}

fn check_dims(n_t: usize, n_r: usize) -> Result<()> {
    if n_t == 0 || n_r == 0 {
        return Err(Error::InvalidArgument("antenna counts must be positive".into()));
    }
    Ok(())
}

/// Ergodic capacity `C(ρ, n_T, n_R)` of the i.i.d. Rayleigh channel.
pub fn ergodic_capacity(snr_db: f64, n_t: usize, n_r: usize, trials: usize, seed: u64) -> Result<CapacityPoint> {
    check_dims(n_t, n_r)?;
    let rho = math::db_to_linear(snr_db);
    monte_carlo(snr_db, Estimator::Ergodic, trials, |t| Ok(capacity_realization(&channel(seed, t, n_t, n_r), rho)))
}

/// The code's channel seen by the interleaved symbol vector:
/// `transform(vec(Y)) = matrix · v + noise`. Rows are indexed `l·T + t`;
/// rows flagged in `conjugated_rows` are conjugated before use.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannel {
    pub matrix: ComplexMatrix,
    pub conjugated_rows: Vec<bool>,
}

impl EquivalentChannel {
    /// Stacks the columns of `y` and conjugates the flagged rows.
    pub fn transform_received(&self, y: &ComplexMatrix) -> Result<Vec<C64>> {
        let t_len = self.conjugated_rows.len() / y.cols().max(1);
        if y.rows() != t_len || y.rows() * y.cols() != self.conjugated_rows.len() {
            return Err(Error::DimensionMismatch(alloc::format!(
                "received block is {}x{}, equivalent channel has {} rows",
                y.rows(),
                y.cols(),
                self.conjugated_rows.len()
            )));
        }
        let mut out = Vec::with_capacity(self.conjugated_rows.len());
        for l in 0..y.cols() {
            for t in 0..y.rows() {
                let v = y[(t, l)];
                out.push(if self.conjugated_rows[l * t_len + t] { v.conj() } else { v });
            }
        }
        Ok(out)
    }
}

/// Whether each codeword row depends antilinearly on the symbols.
fn antilinear_rows(code: &CodeSpec) -> Vec<bool> {
    let basis = code.basis();
    (0..BLOCK_LEN)
        .map(|t| {
            for v in code.interleaved_vars().iter().filter(|v| v.is_full()) {
                let (a, b) = (&basis[v.re.unwrap()], &basis[v.im.unwrap()]);
                for col in 0..code.num_tx() {
                    let (ra, rb) = (a[(t, col)], b[(t, col)]);
                    if ra.norm_sqr() > 1e-24 {
                        return (rb + C64::i() * ra).norm_sqr() < 1e-18;
                    }
                }
            }
            false
        })
        .collect()
}

pub fn equivalent_channel(code: &CodeSpec, h: &ComplexMatrix) -> Result<EquivalentChannel> {
    if h.rows() != code.num_tx() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "channel has {} rows, code uses {} antennas",
            h.rows(),
            code.num_tx()
        )));
    }
    let n_r = h.cols();
    let s = code.power_scale();
    let flags = antilinear_rows(code);
    let basis = code.basis();
    let vars = code.interleaved_vars();
    let bh: Vec<ComplexMatrix> = basis.iter().map(|b| b.matmul(h).expect("shapes").scale_real(s)).collect();
    let mut m = ComplexMatrix::zeros(BLOCK_LEN * n_r, vars.len());
    let mut conjugated_rows = vec![false; BLOCK_LEN * n_r];
    for l in 0..n_r {
        for t in 0..BLOCK_LEN {
            let row = l * BLOCK_LEN + t;
            let anti = flags[t];
            conjugated_rows[row] = anti;
            for (col, v) in vars.iter().enumerate() {
                m[(row, col)] = match (v.re, anti) {
                    (Some(a), false) => bh[a][(t, l)],
                    (Some(a), true) => bh[a][(t, l)].conj(),
                    (None, false) => -C64::i() * bh[v.im.unwrap()][(t, l)],
                    (None, true) => -C64::i() * bh[v.im.unwrap()][(t, l)].conj(),
                };
            }
        }
    }
    Ok(EquivalentChannel { matrix: m, conjugated_rows })
}

/// `(1/T) log2 det(I + ρ/n_T H_eqᴴ H_eq)`; needs every interleaved variable
/// to be a full complex symbol.
pub fn mmi_complex(code: &CodeSpec, h: &ComplexMatrix, rho: f64) -> Result<f64> {
    if !code.interleaved_vars().iter().all(|v| v.is_full()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "{} has real-valued variables; use the real-valued route",
            code.id()
        )));
    }
    let heq = equivalent_channel(code, h)?;
    let mut g = gram(&heq.matrix).scale_real(rho / code.num_tx() as f64);
    for i in 0..g.rows() {
        g[(i, i)] += 1.0;
    }
    Ok(log2_det(&g) / BLOCK_LEN as f64)
}

/// Real-valued form: `(1/2T) log2 det(I + ρ/n_T Re(WᴴW))` with one column
/// `vec(s·B_k H)` per real coordinate. Valid for every code.
pub fn mmi_real(code: &CodeSpec, h: &ComplexMatrix, rho: f64) -> Result<f64> {
    if h.rows() != code.num_tx() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "channel has {} rows, code uses {} antennas",
            h.rows(),
            code.num_tx()
        )));
    }
    let s = code.power_scale();
    let cols: Vec<ComplexMatrix> =
        code.basis().iter().map(|b| b.matmul(h).expect("shapes").scale_real(s)).collect();
    let k = cols.len();
    let k_rho = rho / code.num_tx() as f64;
    let mut g = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let ip: f64 = cols[i].as_slice().iter().zip(cols[j].as_slice()).map(|(a, b)| (a.conj() * b).re).sum();
            g[(i, j)] = C64::new(k_rho * ip + if i == j { 1.0 } else { 0.0 }, 0.0);
        }
    }
    Ok(log2_det(&g) / (2 * BLOCK_LEN) as f64)
}

/// Mutual information of one realization, by the complex route when it
/// applies and the real route otherwise.
pub fn mmi_realization(code: &CodeSpec, h: &ComplexMatrix, rho: f64) -> Result<f64> {
    if code.interleaved_vars().iter().all(|v| v.is_full()) {
        mmi_complex(code, h, rho)
    } else {
        mmi_real(code, h, rho)
    }
}

pub fn mmi_monte_carlo(code: &CodeSpec, snr_db: f64, n_r: usize, trials: usize, seed: u64) -> Result<CapacityPoint> {
    check_dims(code.num_tx(), n_r)?;
    let rho = math::db_to_linear(snr_db);
    let n_t = code.num_tx();
    monte_carlo(snr_db, Estimator::Mmi(code.id()), trials, |t| mmi_realization(code, &channel(seed, t, n_t, n_r), rho))
}

/// `log2(1 + ρ/n · Σ|h_i|²)` over `n` fresh fading coefficients.
fn miso_realization(rng: &mut crate::rng::TrialRng, n: usize, rho: f64) -> f64 {
    let h = sample_channel(n, 1, rng);
    math::log2(1.0 + rho / n as f64 * h.frobenius_norm_sq())
}

/// Closed-form MMI of the orthogonal-core codes, evaluated by Monte Carlo
/// over the scalar fading gains:
/// four antennas `C(n_R ρ, 2n_R, 1)`, three antennas
/// `½[C(4n_R ρ/3, 2n_R, 1) + C(2n_R ρ/3, n_R, 1)]`.
pub fn mmi_ciod_closed_form(id: CodeId, snr_db: f64, n_r: usize, trials: usize, seed: u64) -> Result<CapacityPoint> {
    check_dims(id.num_tx(), n_r)?;
    let rho = math::db_to_linear(snr_db);
    let nr = n_r as f64;
    let per_trial = |t: usize| -> Result<f64> {
        let mut rng = trial_stream(seed, domain::CHANNEL, 0, t as u64);
        match id {
            CodeId::Q44 => Ok(miso_realization(&mut rng, 2 * n_r, nr * rho)),
            CodeId::Q34 => {
                let a = miso_realization(&mut rng, 2 * n_r, 4.0 * nr * rho / 3.0);
                let b = miso_realization(&mut rng, n_r, 2.0 * nr * rho / 3.0);
                Ok(0.5 * (a + b))
            }
            other => Err(Error::UnknownCode(alloc::format!("no closed form for {other}"))),
        }
    };
    if !matches!(id, CodeId::Q44 | CodeId::Q34) {
        return Err(Error::UnknownCode(alloc::format!("no closed form for {id}")));
    }
    monte_carlo(snr_db, Estimator::CiodClosedForm(id), trials, per_trial)
}

/// Mutual information `R·C(n_R ρ/R, n_T n_R, 1)` of a rate-`R` orthogonal
/// design.
pub fn ostbc_capacity(rate: f64, n_t: usize, snr_db: f64, n_r: usize, trials: usize, seed: u64) -> Result<CapacityPoint> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidRate(rate));
    }
    check_dims(n_t, n_r)?;
    let rho = math::db_to_linear(snr_db);
    monte_carlo(snr_db, Estimator::Ostbc { rate }, trials, |t| {
        let h = channel(seed, t, n_t, n_r);
        Ok(rate * math::log2(1.0 + rho / (rate * n_t as f64) * h.frobenius_norm_sq()))
    })
}
