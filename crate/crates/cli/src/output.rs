use std::io::Write;

use anyhow::Result;
use hecke_cells::cache::OutputFormat;
use serde_json::Value;

/// One command result in all three renderings.
pub struct Report {
    pub json: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub text: String,
}

impl Report {
    pub fn emit(&self, format: OutputFormat, out: &mut impl Write) -> Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)?;
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.csv_header)?;
                for row in &self.csv_rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            OutputFormat::Text => out.write_all(self.text.as_bytes())?,
        }
        Ok(())
    }
}
