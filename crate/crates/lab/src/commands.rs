use stbc_core::capacity::{ergodic_capacity, mmi_ciod_closed_form, mmi_monte_carlo, ostbc_capacity, CapacityPoint};
use stbc_core::channel_sim::{decoder_agreement, simulate_ber, BerConfig, StopRule};
use stbc_core::coding_gain::{delta_min_search, grid, theta_search, theta_search_two_stage, TracePoint};
use stbc_core::codes::CodeSpec;
use stbc_core::C64;

use crate::args::{BerArgs, CapacityArgs, Cli, CodeArgs, Command, Curve, DecodeCheckArgs, DeltaMinArgs, ThetaArgs};
use crate::error::LabError;
use crate::output::Table;

/// What a subcommand produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub summary: String,
    /// Set when a cross-check failed.
    pub mismatch: Option<String>,
}

fn ok(table: Table, summary: String) -> Result<Outcome, LabError> {
    Ok(Outcome { table, summary, mismatch: None })
}

fn build_code(a: &CodeArgs) -> CodeSpec {
    let code = CodeSpec::with_theta(a.code, a.theta.unwrap_or(a.code.default_theta_deg()));
    match a.rotation {
        Some(r) => code.with_rotation(r),
        None => code,
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, LabError> {
    match &cli.command {
        Command::DeltaMin(a) => delta_min(a),
        Command::ThetaSearch(a) => theta(a),
        Command::Ber(a) => ber(a, cli.seed),
        Command::Capacity(a) => capacity(a, cli.seed),
        Command::DecodeCheck(a) => decode_check(a, cli.seed),
    }
}

fn complex_list(v: &[C64]) -> String {
    v.iter().map(|z| format!("{}{:+}j", z.re, z.im)).collect::<Vec<_>>().join(";")
}

fn delta_min(a: &DeltaMinArgs) -> Result<Outcome, LabError> {
    let code = build_code(&a.code);
    let r = delta_min_search(&code, &code.constellation(), code.theta_deg())?;
    let mut t = Table::new(&[
        "code",
        "theta_deg",
        "rotation_deg",
        "delta_min",
        "coding_gain",
        "min_rank",
        "search_space_size",
        "argmin_difference",
    ]);
    t.push(vec![
        r.code_id.to_string(),
        r.theta_deg.to_string(),
        r.rotation_deg.to_string(),
        r.delta_min.to_string(),
        r.coding_gain.to_string(),
        r.min_rank.to_string(),
        r.search_space_size.to_string(),
        complex_list(&r.argmin_difference),
    ]);
    let summary = format!(
        "{} theta={} rotation={} delta_min={:.6} coding_gain={:.6} min_rank={} searched={}",
        r.code_id, r.theta_deg, r.rotation_deg, r.delta_min, r.coding_gain, r.min_rank, r.search_space_size
    );
    ok(t, summary)
}

fn trace_rows(t: &mut Table, stage: &str, trace: &[TracePoint]) {
    for &(theta, d) in trace {
        let (value, status) = match d {
            Some(d) => (d.to_string(), "exact"),
            None => (String::new(), "pruned"),
        };
        t.push(vec![stage.to_string(), theta.to_string(), value, status.to_string()]);
    }
}

fn theta(a: &ThetaArgs) -> Result<Outcome, LabError> {
    if !(a.coarse > 0.0) || a.fine < 0.0 {
        return Err(LabError::Usage("--coarse must be positive and --fine non-negative".into()));
    }
    let mut code = CodeSpec::new(a.code);
    if let Some(r) = a.rotation {
        code = code.with_rotation(r);
    }
    let c = code.constellation();
    let prune = !a.full_trace;
    let mut t = Table::new(&["stage", "theta_deg", "delta_min", "status"]);
    let (best, delta) = if a.fine == 0.0 {
        let r = theta_search(&code, &c, &grid(0.0, 90.0, a.coarse), prune)?;
        trace_rows(&mut t, "coarse", &r.trace);
        (r.best_theta, r.report.delta_min)
    } else {
        let r = theta_search_two_stage(&code, &c, a.coarse, a.fine, prune)?;
        trace_rows(&mut t, "coarse", &r.coarse);
        trace_rows(&mut t, "fine", &r.fine);
        (r.best_theta, r.report.delta_min)
    };
    let exact = t.rows().iter().filter(|r| r[3] == "exact").count();
    let summary = format!(
        "{} best_theta={} delta_min={:.6} ({} grid points, {} evaluated exactly)",
        a.code,
        best,
        delta,
        t.rows().len(),
        exact
    );
    ok(t, summary)
}

fn ber(a: &BerArgs, seed: u64) -> Result<Outcome, LabError> {
    let code = build_code(&a.code);
    let c = code.constellation();
    let cfg = BerConfig {
        snr_db: a.snr.0.clone(),
        n_rx: a.nr,
        stop: StopRule { min_bit_errors: a.min_errors, max_codewords: a.max_codewords },
        decoder: a.decoder,
        seed,
        snr_kind: a.snr_kind,
    };
    let r = simulate_ber(&code, &c, &cfg)?;
    let mut t = Table::new(&["snr_db", "ber", "bit_errors", "bits", "codewords"]);
    for p in &r.points {
        t.push(vec![
            p.snr_db.to_string(),
            p.ber.to_string(),
            p.bit_errors.to_string(),
            p.bits_simulated.to_string(),
            p.codewords.to_string(),
        ]);
    }
    let (first, last) = (r.points[0], r.points[r.points.len() - 1]);
    let summary = format!(
        "{} n_R={} decoder={}: {} points, BER {:.3e} at {} dB to {:.3e} at {} dB",
        a.code.code,
        a.nr,
        a.decoder,
        r.points.len(),
        first.ber,
        first.snr_db,
        last.ber,
        last.snr_db
    );
    ok(t, summary)
}

fn capacity_point(a: &CapacityArgs, curve: Curve, snr: f64, seed: u64) -> Result<CapacityPoint, LabError> {
    Ok(match curve {
        Curve::Mmi(id) => mmi_monte_carlo(&CodeSpec::new(id), snr, a.nr, a.trials, seed)?,
        Curve::Actual => ergodic_capacity(snr, a.nt, a.nr, a.trials, seed)?,
        Curve::Ostbc => ostbc_capacity(a.ostbc_rate, a.nt, snr, a.nr, a.trials, seed)?,
        Curve::Closed(id) => mmi_ciod_closed_form(id, snr, a.nr, a.trials, seed)?,
    })
}

fn capacity(a: &CapacityArgs, seed: u64) -> Result<Outcome, LabError> {
    let mut t = Table::new(&["snr_db", "code", "bits_per_use", "std_error", "trials"]);
    for &curve in &a.codes {
        for &snr in &a.snr.0 {
            let p = capacity_point(a, curve, snr, seed)?;
            t.push(vec![
                snr.to_string(),
                curve.label(),
                p.bits_per_channel_use.to_string(),
                p.std_error.to_string(),
                p.trials.to_string(),
            ]);
        }
    }
    let summary =
        format!("{} curves x {} SNR points, n_R={}, {} trials each", a.codes.len(), a.snr.0.len(), a.nr, a.trials);
    ok(t, summary)
}

/// Largest tolerated difference between the two decoders' final metrics.
pub const METRIC_GAP_TOL: f64 = 1e-9;

fn decode_check(a: &DecodeCheckArgs, seed: u64) -> Result<Outcome, LabError> {
    let code = build_code(&a.code);
    let c = code.constellation();
    let mut t = Table::new(&[
        "snr_db",
        "trials",
        "agreements",
        "agreement",
        "exhaustive_metrics",
        "conditional_metrics",
        "max_metric_gap",
    ]);
    let (mut trials, mut agree) = (0u64, 0u64);
    let mut mismatch = None;
    let mut counts = (0, 0);
    for (p, &snr) in a.snr.0.iter().enumerate() {
        let r = decoder_agreement(&code, &c, snr, a.nr, a.trials, seed, p as u64)?;
        trials += r.trials;
        agree += r.agreements;
        counts = (r.exhaustive_metrics, r.conditional_metrics);
        if let (Some(i), None) = (r.first_mismatch, &mismatch) {
            mismatch = Some(format!("decoders disagree at {snr} dB, trial {i}"));
        }
        if r.max_metric_gap > METRIC_GAP_TOL && mismatch.is_none() {
            mismatch = Some(format!("decision metrics differ by {} at {snr} dB", r.max_metric_gap));
        }
        t.push(vec![
            snr.to_string(),
            r.trials.to_string(),
            r.agreements.to_string(),
            r.rate().to_string(),
            r.exhaustive_metrics.to_string(),
            r.conditional_metrics.to_string(),
            r.max_metric_gap.to_string(),
        ]);
    }
    let summary = format!(
        "{} agreement {:.3} over {} trials (metrics per block: exhaustive {}, conditional {})",
        a.code.code,
        agree as f64 / trials as f64,
        trials,
        counts.0,
        counts.1
    );
    Ok(Outcome { table: t, summary, mismatch })
}
