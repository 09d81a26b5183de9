use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use stbc_core::channel_sim::SnrKind;
use stbc_core::codes::CodeId;
use stbc_core::decoding::DecoderKind;

#[derive(Parser, Debug, Clone)]
#[command(name = "stbc-lab", version, about = "Space-time block code experiments", args_override_self = true)]
pub struct Cli {
    /// key=value file supplying defaults; flags on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, env = "STBC_LAB_THREADS")]
    pub threads: Option<usize>,
    /// Write CSV here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exhaustive minimum determinant of one code
    #[command(args_override_self = true)]
    DeltaMin(DeltaMinArgs),
    /// Coarse-then-fine search for the overlay phase maximizing δ_min
    #[command(args_override_self = true)]
    ThetaSearch(ThetaArgs),
    /// Bit error rate over quasi-static Rayleigh fading
    #[command(args_override_self = true)]
    Ber(BerArgs),
    /// Ergodic capacity and code mutual information
    #[command(args_override_self = true)]
    Capacity(CapacityArgs),
    /// Compare conditional and exhaustive ML decisions on the same blocks
    #[command(args_override_self = true)]
    DecodeCheck(DecodeCheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DeltaMin(_) => "delta-min",
            Command::ThetaSearch(_) => "theta-search",
            Command::Ber(_) => "ber",
            Command::Capacity(_) => "capacity",
            Command::DecodeCheck(_) => "decode-check",
        }
    }

    pub const NAMES: [&'static str; 5] = ["delta-min", "theta-search", "ber", "capacity", "decode-check"];
}

pub fn parse_code(s: &str) -> Result<CodeId, String> {
    s.parse().map_err(|e: stbc_core::Error| e.to_string())
}

fn parse_decoder(s: &str) -> Result<DecoderKind, String> {
    s.parse().map_err(|e: stbc_core::Error| e.to_string())
}

fn parse_snr_kind(s: &str) -> Result<SnrKind, String> {
    s.parse().map_err(|e: stbc_core::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    #[arg(long, value_parser = parse_code)]
    pub code: CodeId,
    /// Overlay phase in degrees [default: the code's optimum]
    #[arg(long)]
    pub theta: Option<f64>,
    /// QPSK rotation in degrees [default: the code's optimum]
    #[arg(long)]
    pub rotation: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct DeltaMinArgs {
    #[command(flatten)]
    pub code: CodeArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ThetaArgs {
    #[arg(long, value_parser = parse_code)]
    pub code: CodeId,
    #[arg(long)]
    pub rotation: Option<f64>,
    /// Coarse step over [0, 90] degrees
    #[arg(long, default_value_t = 0.5)]
    pub coarse: f64,
    /// Fine step around the coarse peak; 0 skips the fine stage
    #[arg(long, default_value_t = 0.01)]
    pub fine: f64,
    /// Evaluate δ_min at every grid point instead of pruning losers
    #[arg(long)]
    pub full_trace: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BerArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    /// start:step:stop in dB, a single value, or a comma list
    #[arg(long)]
    pub snr: SnrGrid,
    #[arg(long, default_value = "es", value_parser = parse_snr_kind)]
    pub snr_kind: SnrKind,
    #[arg(long, default_value_t = 500)]
    pub min_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_codewords: u64,
    #[arg(long, default_value = "conditional", value_parser = parse_decoder)]
    pub decoder: DecoderKind,
}

#[derive(Args, Debug, Clone)]
pub struct CapacityArgs {
    /// Curves: code ids, `actual`, `ostbc`, `closed-q44`, `closed-q34`
    #[arg(long, value_delimiter = ',', required = true)]
    pub codes: Vec<Curve>,
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    /// Transmit antennas for `actual` and `ostbc`
    #[arg(long, default_value_t = 4)]
    pub nt: usize,
    #[arg(long)]
    pub snr: SnrGrid,
    #[arg(long, default_value_t = 20_000)]
    pub trials: usize,
    /// Rate of the `ostbc` curve
    #[arg(long, default_value_t = 0.75)]
    pub ostbc_rate: f64,
}

#[derive(Args, Debug, Clone)]
pub struct DecodeCheckArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    #[arg(long, default_value = "10")]
    pub snr: SnrGrid,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

/// One capacity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Mmi(CodeId),
    Actual,
    Ostbc,
    Closed(CodeId),
}

impl FromStr for Curve {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "actual" => Ok(Curve::Actual),
            "ostbc" => Ok(Curve::Ostbc),
            "closed-q44" => Ok(Curve::Closed(CodeId::Q44)),
            "closed-q34" => Ok(Curve::Closed(CodeId::Q34)),
            other => parse_code(other).map(Curve::Mmi).map_err(|_| {
                format!(
                    "unknown curve `{other}` (valid: q44, x48, x47, x46, q34, x38, x36, actual, ostbc, closed-q44, closed-q34)"
                )
            }),
        }
    }
}

impl Curve {
    pub fn label(&self) -> String {
        match self {
            Curve::Mmi(id) => id.to_string(),
            Curve::Actual => "actual".into(),
            Curve::Ostbc => "ostbc".into(),
            Curve::Closed(id) => format!("closed-{id}"),
        }
    }
}

/// SNR points in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid(pub Vec<f64>);

impl FromStr for SnrGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad SNR value `{t}`"));
        let parts: Vec<&str> = s.split(':').collect();
        let points = match parts.as_slice() {
            [start, step, stop] => {
                let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
                if !(step > 0.0) || !step.is_finite() {
                    return Err("SNR step must be positive".into());
                }
                if stop < start {
                    return Err("SNR stop must not be below start".into());
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
            [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("SNR grid `{s}` is not start:step:stop")),
        };
        if points.is_empty() {
            return Err("SNR grid is empty".into());
        }
        Ok(SnrGrid(points))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "default".into(), |x| x.to_string())
}

fn grid_text(g: &SnrGrid) -> String {
    g.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Cli {
    /// Settings that determine the output, as `key=value` pairs. Thread count
    /// and output path are left out since they do not change results.
    pub fn describe(&self) -> String {
        let mut s = format!("{} seed={}", self.command.name(), self.seed);
        let code = |s: &mut String, c: &CodeArgs| {
            let _ = write!(s, " code={} theta={} rotation={}", c.code, opt(c.theta), opt(c.rotation));
        };
        match &self.command {
            Command::DeltaMin(a) => code(&mut s, &a.code),
            Command::ThetaSearch(a) => {
                let _ = write!(
                    s,
                    " code={} rotation={} coarse={} fine={} full-trace={}",
                    a.code,
                    opt(a.rotation),
                    a.coarse,
                    a.fine,
                    a.full_trace
                );
            }
            Command::Ber(a) => {
                code(&mut s, &a.code);
                let _ = write!(
                    s,
                    " nr={} snr={} snr-kind={} min-errors={} max-codewords={} decoder={}",
                    a.nr,
                    grid_text(&a.snr),
                    a.snr_kind,
                    a.min_errors,
                    a.max_codewords,
                    a.decoder
                );
            }
            Command::Capacity(a) => {
                let curves: Vec<String> = a.codes.iter().map(Curve::label).collect();
                let _ = write!(
                    s,
                    " codes={} nr={} nt={} snr={} trials={} ostbc-rate={}",
                    curves.join(","),
                    a.nr,
                    a.nt,
                    grid_text(&a.snr),
                    a.trials,
                    a.ostbc_rate
                );
            }
            Command::DecodeCheck(a) => {
                code(&mut s, &a.code);
                let _ = write!(s, " nr={} snr={} trials={}", a.nr, grid_text(&a.snr), a.trials);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_grid_forms() {
        assert_eq!("0:2:16".parse::<SnrGrid>().unwrap().0.len(), 9);
        assert_eq!("10".parse::<SnrGrid>().unwrap().0, vec![10.0]);
        assert_eq!("0,5,20".parse::<SnrGrid>().unwrap().0, vec![0.0, 5.0, 20.0]);
        assert_eq!("0:0.5:1".parse::<SnrGrid>().unwrap().0, vec![0.0, 0.5, 1.0]);
        assert!("0:0:10".parse::<SnrGrid>().is_err());
        assert!("10:1:0".parse::<SnrGrid>().is_err());
        assert!("a:b".parse::<SnrGrid>().is_err());
    }

    #[test]
    fn curve_tokens() {
        assert_eq!("X48".parse::<Curve>().unwrap(), Curve::Mmi(CodeId::X48));
        assert_eq!("actual".parse::<Curve>().unwrap(), Curve::Actual);
        assert_eq!("closed-q34".parse::<Curve>().unwrap(), Curve::Closed(CodeId::Q34));
        assert!("bogus".parse::<Curve>().is_err());
    }
}
