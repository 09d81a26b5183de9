//! `key=value` config files, merged into the command line as flags.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use crate::args::Command;
use crate::error::LabError;

/// Flags read from `path`: `key = value` becomes `--key value`, and boolean
/// keys set to `true` become `--key`. Blank lines and `#` comments are
/// skipped.
pub fn read_flags(path: &Path) -> Result<Vec<OsString>, LabError> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Config { path: path.to_path_buf(), source })?;
    let mut flags = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| LabError::Usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "config" {
            continue;
        }
        match value {
            "true" => flags.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                flags.push(format!("--{key}").into());
                flags.push(value.into());
            }
        }
    }
    Ok(flags)
}

/// The `--config` path given on the command line, if any.
fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices config-file flags in right after the subcommand name so that
/// flags given on the command line, which come later, override them.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, LabError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let flags = read_flags(&path)?;
    let at = argv
        .iter()
        .position(|a| Command::NAMES.iter().any(|n| a == n))
        .map_or(argv.len(), |i| i + 1);
    let mut out = argv[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn config_flags_precede_command_line_flags() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# sweep\nnr = 2\nsnr=0:2:4\nfull-trace = true\nseed=9 # trailing").unwrap();
        let argv: Vec<OsString> = ["stbc-lab", "--config", f.path().to_str().unwrap(), "ber", "--nr", "3"]
            .iter()
            .map(OsString::from)
            .collect();
        let merged: Vec<String> = merge(argv).unwrap().into_iter().map(|s| s.into_string().unwrap()).collect();
        assert_eq!(&merged[3..], ["ber", "--nr", "2", "--snr", "0:2:4", "--full-trace", "--seed", "9", "--nr", "3"]);
    }

    #[test]
    fn malformed_line_is_a_usage_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "nr 2").unwrap();
        let e = read_flags(f.path()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
