//! Writers for the CSV, JSON and plot-data outputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::Format;
use super::report::{format_f64, Curve, RunReport, Table};
use super::CliError;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output(format!("{}: {e}", path.display()))
}

pub fn write_csv(table: &Table, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(&table.columns).map_err(|e| io_err(path, e))?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render()))
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_plotdata(curve: &Curve, header: &str, path: &Path) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(&format!("# {header}\n"));
    for c in &curve.comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(&format!("# {}\n", curve.columns.join(" ")));
    for row in &curve.rows {
        // a blank line breaks the curve for gnuplot
        if let Some(values) = row {
            let line: Vec<String> = values.iter().map(|v| format_f64(*v)).collect();
            out.push_str(&line.join(" "));
        }
        out.push('\n');
    }
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

/// Writes every requested format into `dir`; returns the files written.
pub fn write_outputs(report: &RunReport, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    let mut formats = formats.to_vec();
    formats.sort_by_key(|f| *f as u8);
    formats.dedup();
    for format in formats {
        match format {
            Format::Json => {
                let path = dir.join(format!("{}.json", report.command));
                fs::write(&path, report.to_json()? + "\n").map_err(|e| io_err(&path, e))?;
                written.push(path);
            }
            Format::Csv => {
                for t in &report.tables {
                    let path = dir.join(format!("{}.csv", t.name));
                    write_csv(t, &path)?;
                    written.push(path);
                }
            }
            Format::Plotdata => {
                let header = format!("fiberband {} {}", report.command, report.version);
                for c in &report.curves {
                    let path = dir.join(format!("{}.dat", c.name));
                    write_plotdata(c, &header, &path)?;
                    written.push(path);
                }
            }
        }
    }
    Ok(written)
}
