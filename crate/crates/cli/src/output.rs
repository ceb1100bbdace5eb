use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA_LINE: &str = "# torus-hopf schema v1";

/// Reports that can be written as one CSV table.
pub trait Tabular: Serialize {
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

/// Fixed 17-significant-digit scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

pub fn render<R: Tabular>(report: &R, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.header()).map_err(|e| CliError::io(e.to_string()))?;
            for row in report.rows() {
                w.write_record(row).map_err(|e| CliError::io(e.to_string()))?;
            }
            let body = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
            let mut s = String::from(SCHEMA_LINE);
            s.push('\n');
            s.push_str(&String::from_utf8(body).map_err(|e| CliError::io(e.to_string()))?);
            Ok(s)
        }
    }
}
