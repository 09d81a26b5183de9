use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::LabError;

/// A CSV table with one provenance comment line on top.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self, provenance: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {provenance}");
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// Writes `text` to a temporary file next to `path` and renames it into
/// place, so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), LabError> {
    let io = |source| LabError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Reads a CSV written by [`Table::render`] back as `(header, rows)`,
/// skipping comment lines.
pub fn read_csv(path: &Path) -> std::io::Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let split = |l: &str| l.split(',').map(str::to_string).collect::<Vec<_>>();
    let header = lines.next().map(split).unwrap_or_default();
    Ok((header, lines.map(split).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_read_back() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "0.5".into()]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_atomic(&p, &t.render("test seed=0")).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("# test seed=0\na,b\n"));
        let (h, rows) = read_csv(&p).unwrap();
        assert_eq!(h, ["a", "b"]);
        assert_eq!(rows, vec![vec!["1".to_string(), "0.5".to_string()]]);
    }

    #[test]
    fn unwritable_path_fails_cleanly() {
        let e = write_atomic(Path::new("/nonexistent-dir/x.csv"), "x").unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }
}
