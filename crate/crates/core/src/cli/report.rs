//! Run reports: records, verdicts, tables and the reproducibility hash.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::CliError;

/// One check or computation, with the operation and inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub module: String,
    pub operation: String,
    pub inputs: Value,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Record {
    pub fn new<I: Serialize, R: Serialize>(
        module: &str,
        operation: &str,
        inputs: I,
        result: R,
        pass: Option<bool>,
    ) -> Result<Self, CliError> {
        Ok(Self {
            module: module.into(),
            operation: operation.into(),
            inputs: to_value(inputs)?,
            result: to_value(result)?,
            pass,
        })
    }
}

fn to_value<T: Serialize>(v: T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Output(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictLine {
    pub subject: String,
    pub verdict: String,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Doubles with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Numeric columns for one plot file; `None` rows become blank separator lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Option<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub verdicts: Vec<VerdictLine>,
    /// Excluded from the hash.
    pub wall_clock_seconds: f64,
    pub hash: String,
    #[serde(skip)]
    pub tables: Vec<Table>,
    #[serde(skip)]
    pub curves: Vec<Curve>,
}

impl RunReport {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: config.grid.solver.seed,
            config: config.clone(),
            records: Vec::new(),
            verdicts: Vec::new(),
            wall_clock_seconds: 0.0,
            hash: String::new(),
            tables: Vec::new(),
            curves: Vec::new(),
        }
    }

    pub fn verdict(&mut self, subject: String, verdict: String, inconclusive: bool) {
        self.verdicts.push(VerdictLine {
            subject,
            verdict,
            inconclusive,
        });
    }

    pub fn has_inconclusive(&self) -> bool {
        self.verdicts.iter().any(|v| v.inconclusive)
    }

    /// SHA-256 of the canonical JSON form without the wall clock, the hash
    /// and the output destination.
    pub fn compute_hash(&self) -> Result<String, CliError> {
        let mut v = to_value(self)?;
        if let Value::Object(m) = &mut v {
            m.remove("wall_clock_seconds");
            m.remove("hash");
            if let Some(Value::Object(cfg)) = m.get_mut("config") {
                cfg.remove("output");
            }
        }
        let bytes = serde_json::to_vec(&v).map_err(|e| CliError::Output(e.to_string()))?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }

    pub fn seal(&mut self, seconds: f64) -> Result<(), CliError> {
        self.wall_clock_seconds = seconds;
        self.hash = self.compute_hash()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(1.0), "1.0000000000000000e0");
        let v = 0.1 + 0.2;
        assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn hash_ignores_wall_clock() {
        let cfg = RunConfig::from_toml("[profile]\nkind = \"gaussian\"\n").unwrap();
        let mut a = RunReport::new("slice", &cfg);
        a.verdict("x".into(), "y".into(), false);
        let mut b = a.clone();
        a.seal(1.0).unwrap();
        b.seal(2.0).unwrap();
        assert_eq!(a.hash, b.hash);
        assert_eq!(a.hash.len(), 64);
        b.verdict("z".into(), "w".into(), true);
        assert_ne!(a.compute_hash().unwrap(), b.compute_hash().unwrap());
    }
}
