//! Deterministic CSV emission: fixed column order, 9 significant digits,
//! LF line endings, header always present.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

/// Formats `x` in fixed notation with 9 significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return "NaN".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s == "-0" || s.trim_start_matches(['-', '0', '.']).is_empty() {
        "0".to_string()
    } else {
        s
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<(), CliError> {
        write_file(dir, name, &self.render())
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::internal(format!("creating {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::internal(format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(num(12.636227902), "12.6362279");
        assert_eq!(num(0.004563048883), "0.00456304888");
        assert_eq!(num(1200.0), "1200.00000");
        assert_eq!(num(-117.0), "-117.000000");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(123456789012.0), "123456789012");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(opt_num(None), "");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(), "a,b\n1,2\n");
        assert_eq!(Table::new(&["x"]).render(), "x\n");
    }
}
