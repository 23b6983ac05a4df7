//! Tabular output with a provenance block, carried as CSV or JSON.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            Cell::Num(_) => None,
        }
    }

    fn parse(field: &str) -> Cell {
        match field.parse::<f64>() {
            Ok(v) => Cell::Num(v),
            Err(_) => Cell::Text(field.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

// Display of f64 is the shortest string that parses back to the same value.
impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    /// The resolved run configuration, keyed like the command-line flags.
    pub config: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl Provenance {
    pub fn new(config: BTreeMap<String, Value>) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            config,
            details: BTreeMap::new(),
        }
    }
}

/// UTC time of the run, or `SOURCE_DATE_EPOCH` when that is set.
pub fn timestamp() -> String {
    let secs =
        std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse::<i64>().ok()).unwrap_or_else(|| {
            let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap_or_default();
            now.as_secs() as i64
        });
    chrono::DateTime::from_timestamp(secs, 0).unwrap_or_default().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: Provenance,
}

const PROVENANCE_TAG: &str = "# provenance: ";
const SCHEMA_TAG: &str = "# schema: ";

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed dataset: {0}")]
    Malformed(String),
}

impl Dataset {
    pub fn new(schema: &str, columns: &[&str], provenance: Provenance) -> Self {
        Dataset {
            schema: schema.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Two comment lines (schema, provenance as one-line JSON), the header, then the rows. LF endings.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut out = io::BufWriter::new(out);
        writeln!(out, "{SCHEMA_TAG}{}", self.schema)?;
        writeln!(out, "{PROVENANCE_TAG}{}", serde_json::to_string(&self.provenance)?)?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Dataset, ReadError> {
        let mut schema = None;
        let mut provenance = None;
        let mut line = String::new();
        while schema.is_none() || provenance.is_none() {
            line.clear();
            if input.read_line(&mut line)? == 0 {
                return Err(ReadError::Malformed("missing schema or provenance line".into()));
            }
            let l = line.trim_end_matches('\n');
            if let Some(s) = l.strip_prefix(SCHEMA_TAG) {
                schema = Some(s.to_string());
            } else if let Some(p) = l.strip_prefix(PROVENANCE_TAG) {
                provenance = Some(serde_json::from_str(p)?);
            } else {
                return Err(ReadError::Malformed(format!("unexpected line before header: {l}")));
            }
        }
        let mut r = csv::ReaderBuilder::new().from_reader(input);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(Cell::parse).collect());
        }
        Ok(Dataset { schema: schema.unwrap(), columns, rows, provenance: provenance.unwrap() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datasets hold only finite numbers and strings")
    }

    pub fn from_json(s: &str) -> Result<Dataset, ReadError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let mut config = BTreeMap::new();
        config.insert("a".to_string(), Value::from(1.5));
        let mut d = Dataset::new("test/1", &["b", "label"], Provenance::new(config));
        d.push(vec![Cell::from(0.1 + 0.2), Cell::from("chains_absent")]);
        d.push(vec![Cell::from(-1.9538014003257546), Cell::from("a,b \"quoted\"")]);
        d.push(vec![Cell::from(1e-300), Cell::from(-0.0)]);
        d
    }

    #[test]
    fn csv_round_trip() {
        let d = sample();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert!(!buf.contains(&b'\r'));
        let back = Dataset::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn json_round_trip() {
        let d = sample();
        assert_eq!(Dataset::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn shortest_number_text() {
        assert_eq!(Cell::from(0.1).to_string(), "0.1");
        assert_eq!(Cell::from(6usize).to_string(), "6");
    }

    #[test]
    fn source_date_epoch_is_honoured() {
        std::env::set_var("SOURCE_DATE_EPOCH", "0");
        assert_eq!(timestamp(), "1970-01-01T00:00:00Z");
        std::env::remove_var("SOURCE_DATE_EPOCH");
    }
}
