//! Sweep tables and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{HarnessError, Result};

const SIGNIFICANT_DIGITS: i32 = 6;

/// Formats `v` with six significant digits in plain decimal notation.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v.is_infinite() { format!("{v}") } else { "0".into() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding can turn -0.0000004 into "-0.00000".
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        return "0".into();
    }
    s
}

/// Rounds to the value the CSV will carry.
pub fn quantize(v: f64) -> f64 {
    format_sig(v).parse().unwrap_or(v)
}

/// Named numeric columns; the first column is the pressure and strictly ascends.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn last_value(&self, name: &str) -> Option<f64> {
        self.column(name)?.last().copied()
    }

    /// Appends a row, rounding every cell to the precision written to CSV.
    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(HarnessError::Config(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        let row: Vec<f64> = row.into_iter().map(quantize).collect();
        if let Some(prev) = self.rows.last() {
            if row[0].is_nan() || row[0] <= prev[0] {
                return Err(HarnessError::Config(format!(
                    "pressures must strictly ascend ({} after {})",
                    row[0], prev[0]
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| format_sig(v)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|source| HarnessError::Csv {
                path: path.to_path_buf(),
                source,
            })
    }

    pub fn read_csv<R: Read>(reader: R) -> csv::Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let columns = r.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|cell| cell.trim().parse::<f64>().unwrap_or(f64::NAN))
                .collect();
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig(230.0), "230.000");
        assert_eq!(format_sig(229.99999999997), "230.000");
        assert_eq!(format_sig(4.0), "4.00000");
        assert_eq!(format_sig(0.000123456789), "0.000123457");
        assert_eq!(format_sig(-38.33333333), "-38.3333");
        assert_eq!(format_sig(123456789.0), "123456789");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
    }

    #[test]
    fn quantize_is_idempotent_across_decades() {
        for v in [9.999995, 99.99996, 0.09999996, 1.0, 12.3456789] {
            let q = quantize(v);
            assert_eq!(quantize(q), q, "{v}");
            assert_eq!(format_sig(q).parse::<f64>().unwrap(), q);
        }
    }

    #[test]
    fn rejects_ragged_and_unordered_rows() {
        let mut t = SweepTable::new(["pressure_kPa", "force_N"]);
        assert!(t.push_row(vec![0.0]).is_err());
        t.push_row(vec![10.0, 1.0]).unwrap();
        assert!(t.push_row(vec![10.0, 1.0]).is_err());
        assert!(t.push_row(vec![5.0, 1.0]).is_err());
    }

    #[test]
    fn csv_header_and_cells() {
        let mut t = SweepTable::new(["pressure_kPa", "force_N"]);
        t.push_row(vec![0.0, 0.0]).unwrap();
        t.push_row(vec![165.0, 4.0]).unwrap();
        assert_eq!(t.to_csv_string(), "pressure_kPa,force_N\n0,0\n165.000,4.00000\n");
    }
}
