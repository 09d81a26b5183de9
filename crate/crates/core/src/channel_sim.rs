//! Quasi-static Rayleigh fading Monte Carlo for bit error rate.
//!
//! Received SNR `ρ` is the SNR per receive antenna: codewords carry unit
//! average power per transmit antenna per channel use and fading is unit
//! variance, so the noise variance is `N0 = n_T / ρ`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::codes::{CodeId, CodeSpec, BLOCK_LEN};
use crate::constellation::Constellation;
use crate::decoding::{decode, DecoderKind};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::math;
use crate::par;
use crate::rng::{domain, trial_stream, TrialRng};

/// Codewords simulated between stopping-rule checks. The rule is only
/// evaluated at batch boundaries, which keeps results independent of the
/// worker count.
pub const BATCH: u64 = 256;

/// `n_T x n_R` matrix of i.i.d. `N_C(0, 1)` entries.
pub fn sample_channel(n_tx: usize, n_rx: usize, rng: &mut TrialRng) -> ComplexMatrix {
    rng.complex_normal_matrix(n_tx, n_rx, 1.0)
}

/// What the SNR axis of a sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrKind {
    /// Received SNR per receive antenna (symbol energy based).
    #[default]
    Es,
    /// Energy per information bit; converted through the bits carried per
    /// channel use.
    Eb,
}

impl FromStr for SnrKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "es" => Ok(SnrKind::Es),
            "eb" => Ok(SnrKind::Eb),
            other => Err(Error::InvalidArgument(alloc::format!("unknown SNR kind `{other}` (valid: es, eb)"))),
        }
    }
}

impl fmt::Display for SnrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrKind::Es => "es",
            SnrKind::Eb => "eb",
        })
    }
}

/// Noise variance for received SNR `snr_db` per receive antenna.
pub fn received_snr_to_n0(snr_db: f64, code: &CodeSpec) -> f64 {
    code.num_tx() as f64 / math::db_to_linear(snr_db)
}

/// Received SNR (dB) corresponding to `snr_db` of the given kind.
pub fn to_received_snr_db(snr_db: f64, kind: SnrKind, code: &CodeSpec, c: &Constellation) -> f64 {
    match kind {
        SnrKind::Es => snr_db,
        SnrKind::Eb => {
            let bits_per_use = code.rate() * c.bits_per_symbol() as f64;
            snr_db + 10.0 * libm::log10(bits_per_use)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    /// Stop once this many bit errors are counted (0 disables).
    pub min_bit_errors: u64,
    /// Stop after this many codewords (0 disables).
    pub max_codewords: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_bit_errors: 500, max_codewords: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub bit_errors: u64,
    pub bits_simulated: u64,
    pub codewords: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<BerPoint>,
    pub code_id: CodeId,
    pub n_rx: usize,
    pub seed: u64,
    pub decoder: DecoderKind,
}

#[derive(Debug, Clone)]
pub struct BerConfig {
    pub snr_db: Vec<f64>,
    pub n_rx: usize,
    pub stop: StopRule,
    pub decoder: DecoderKind,
    pub seed: u64,
    pub snr_kind: SnrKind,
}

struct Transmission {
    bits: Vec<u8>,
    y: ComplexMatrix,
    h: ComplexMatrix,
}

/// Random bits through the code, the fading channel and the noise.
fn transmit(code: &CodeSpec, c: &Constellation, n_rx: usize, n0: f64, rng: &mut TrialRng) -> Result<Transmission> {
    let nbits = code.k_total() * c.bits_per_symbol();
    let mut bits = vec![0u8; nbits];
    rng.bits(&mut bits);
    let indices = c.bits_to_indices(&bits)?;
    let symbols: Vec<_> = indices.iter().map(|&i| c.points()[i]).collect();
    let x = code.encode(&symbols)?;
    let h = sample_channel(code.num_tx(), n_rx, rng);
    let noise = rng.complex_normal_matrix(BLOCK_LEN, n_rx, n0);
    let y = &(&x * &h) + &noise;
    Ok(Transmission { bits, y, h })
}

/// Transmits and decodes codeword `index` of SNR point `point`; returns
/// `(bit_errors, bits)`.
fn run_codeword(code: &CodeSpec, c: &Constellation, cfg: &BerConfig, point: usize, n0: f64, index: u64) -> Result<(u64, u64)> {
    let mut rng = trial_stream(cfg.seed, domain::BER, point as u64, index);
    let tx = transmit(code, c, cfg.n_rx, n0, &mut rng)?;
    let decided = decode(cfg.decoder, &tx.y, &tx.h, code, c)?;
    let mut out = Vec::with_capacity(tx.bits.len());
    c.indices_to_bits(&decided.indices, &mut out);
    let errors = tx.bits.iter().zip(&out).filter(|(a, b)| a != b).count() as u64;
    Ok((errors, tx.bits.len() as u64))
}

/// BER versus SNR. Points come back sorted by SNR; the random stream of each
/// codeword is addressed by `(seed, SNR index, codeword index)`.
pub fn simulate_ber(code: &CodeSpec, c: &Constellation, cfg: &BerConfig) -> Result<SweepResult> {
    if cfg.stop.min_bit_errors == 0 && cfg.stop.max_codewords == 0 {
        return Err(Error::InvalidStop);
    }
    if cfg.decoder == DecoderKind::Conditional && code.lambda() == 0 {
        return Err(Error::NoOverlay(code.id().name()));
    }
    if cfg.n_rx == 0 {
        return Err(Error::InvalidArgument("n_R must be at least 1".into()));
    }
    let mut snrs = cfg.snr_db.clone();
    snrs.sort_by(f64::total_cmp);
    let mut points = Vec::with_capacity(snrs.len());
    for (p, &snr_db) in snrs.iter().enumerate() {
        let n0 = received_snr_to_n0(to_received_snr_db(snr_db, cfg.snr_kind, code, c), code);
        let (mut errors, mut bits, mut sent) = (0u64, 0u64, 0u64);
        loop {
            let mut batch = BATCH;
            if cfg.stop.max_codewords > 0 {
                batch = batch.min(cfg.stop.max_codewords - sent);
            }
            let results = par::map_indexed(batch as usize, |i| run_codeword(code, c, cfg, p, n0, sent + i as u64));
            for r in results {
                let (e, b) = r?;
                errors += e;
                bits += b;
            }
            sent += batch;
            let enough_errors = cfg.stop.min_bit_errors > 0 && errors >= cfg.stop.min_bit_errors;
            let enough_words = cfg.stop.max_codewords > 0 && sent >= cfg.stop.max_codewords;
            if enough_errors || enough_words {
                break;
            }
        }
        points.push(BerPoint {
            snr_db,
            ber: errors as f64 / bits as f64,
            bit_errors: errors,
            bits_simulated: bits,
            codewords: sent,
        });
    }
    Ok(SweepResult { points, code_id: code.id(), n_rx: cfg.n_rx, seed: cfg.seed, decoder: cfg.decoder })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub snr_db: f64,
    pub trials: u64,
    pub agreements: u64,
    /// Metric evaluations per block of each decoder.
    pub exhaustive_metrics: u64,
    pub conditional_metrics: u64,
    /// Largest difference between the two decoders' final metrics.
    pub max_metric_gap: f64,
    /// Trial index of the first disagreement.
    pub first_mismatch: Option<u64>,
}

impl AgreementReport {
    pub fn rate(&self) -> f64 {
        self.agreements as f64 / self.trials as f64
    }
}

/// Decodes the same noisy blocks with both decoders and counts identical
/// decisions. `point` selects the random stream so several SNR points of one
/// run stay independent.
pub fn decoder_agreement(
    code: &CodeSpec,
    c: &Constellation,
    snr_db: f64,
    n_rx: usize,
    trials: u64,
    seed: u64,
    point: u64,
) -> Result<AgreementReport> {
    if code.lambda() == 0 {
        return Err(Error::NoOverlay(code.id().name()));
    }
    if n_rx == 0 || trials == 0 {
        return Err(Error::InvalidArgument("n_R and the trial count must be positive".into()));
    }
    let n0 = received_snr_to_n0(snr_db, code);
    let outcomes = par::map_indexed(trials as usize, |t| -> Result<(bool, f64, u64, u64)> {
        let mut rng = trial_stream(seed, domain::DECODE_CHECK, point, t as u64);
        let tx = transmit(code, c, n_rx, n0, &mut rng)?;
        let full = decode(DecoderKind::Exhaustive, &tx.y, &tx.h, code, c)?;
        let cond = decode(DecoderKind::Conditional, &tx.y, &tx.h, code, c)?;
        let gap = (full.metric - cond.metric).abs();
        Ok((full.indices == cond.indices, gap, full.metric_computations, cond.metric_computations))
    });
    let mut report = AgreementReport {
        snr_db,
        trials,
        agreements: 0,
        exhaustive_metrics: 0,
        conditional_metrics: 0,
        max_metric_gap: 0.0,
        first_mismatch: None,
    };
    for (t, o) in outcomes.into_iter().enumerate() {
        let (same, gap, e, k) = o?;
        report.max_metric_gap = report.max_metric_gap.max(gap);
        if same {
            report.agreements += 1;
        } else if report.first_mismatch.is_none() {
            report.first_mismatch = Some(t as u64);
        }
        report.exhaustive_metrics = report.exhaustive_metrics.max(e);
        report.conditional_metrics = report.conditional_metrics.max(k);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n0_examples() {
        let four = CodeSpec::new(CodeId::X48);
        let three = CodeSpec::new(CodeId::X38);
        assert!((received_snr_to_n0(0.0, &four) - 4.0).abs() < 1e-12);
        assert!((received_snr_to_n0(10.0, &three) - 0.3).abs() < 1e-12);
        let a = received_snr_to_n0(7.0, &four);
        let b = received_snr_to_n0(7.0 + 10.0 * libm::log10(2.0), &four);
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn channel_statistics() {
        let n = 100_000u64;
        let (mut power, mut mean) = (0.0, crate::C64::new(0.0, 0.0));
        for t in 0..n {
            let mut rng = trial_stream(3, domain::CHANNEL, 0, t);
            let h = sample_channel(1, 1, &mut rng);
            power += h[(0, 0)].norm_sqr();
            mean += h[(0, 0)];
        }
        assert!((power / n as f64 - 1.0).abs() < 0.02);
        assert!((mean / n as f64).norm() < 0.02);
        let a = sample_channel(4, 2, &mut trial_stream(8, 1, 2, 3));
        let b = sample_channel(4, 2, &mut trial_stream(8, 1, 2, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_stop_rule() {
        let code = CodeSpec::new(CodeId::X46);
        let cfg = BerConfig {
            snr_db: vec![0.0],
            n_rx: 1,
            stop: StopRule { min_bit_errors: 0, max_codewords: 0 },
            decoder: DecoderKind::Conditional,
            seed: 0,
            snr_kind: SnrKind::Es,
        };
        assert_eq!(simulate_ber(&code, &code.constellation(), &cfg), Err(Error::InvalidStop));
    }

    #[test]
    fn sweep_bookkeeping() {
        let code = CodeSpec::new(CodeId::X36);
        let cfg = BerConfig {
            snr_db: vec![6.0, 0.0],
            n_rx: 1,
            stop: StopRule { min_bit_errors: 0, max_codewords: 300 },
            decoder: DecoderKind::Conditional,
            seed: 4,
            snr_kind: SnrKind::Es,
        };
        let r = simulate_ber(&code, &code.constellation(), &cfg).unwrap();
        assert_eq!(r.points[0].snr_db, 0.0);
        for p in &r.points {
            assert_eq!(p.codewords, 300);
            assert_eq!(p.bits_simulated, 300 * 12);
            assert_eq!(p.ber, p.bit_errors as f64 / p.bits_simulated as f64);
        }
    }

    #[test]
    fn decoders_agree_on_x36() {
        let code = CodeSpec::new(CodeId::X36);
        let r = decoder_agreement(&code, &code.constellation(), 10.0, 1, 200, 1, 0).unwrap();
        assert_eq!(r.agreements, 200);
        assert_eq!(r.first_mismatch, None);
        assert!(r.max_metric_gap < 1e-9);
        assert_eq!((r.exhaustive_metrics, r.conditional_metrics), (4096, 256));
        let q = CodeSpec::new(CodeId::Q44);
        assert!(decoder_agreement(&q, &q.constellation(), 10.0, 1, 10, 1, 0).is_err());
    }

    #[test]
    fn eb_conversion_adds_bits_per_use() {
        let code = CodeSpec::new(CodeId::X48);
        let c = code.constellation();
        // Rate 2 with QPSK: 4 bits per channel use.
        let got = to_received_snr_db(0.0, SnrKind::Eb, &code, &c);
        assert!((got - 10.0 * libm::log10(4.0)).abs() < 1e-12);
    }
}
