//! Append-only JSON-lines record of every run.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub command: String,
    pub parameters: Map<String, Value>,
    /// Every file the run wrote.
    pub outputs: Vec<String>,
    pub library_version: String,
    /// UTC, RFC 3339.
    pub timestamp: String,
}

impl RunRecord {
    pub fn new(command: &str, parameters: Map<String, Value>, outputs: Vec<String>) -> Self {
        Self {
            command: command.to_owned(),
            parameters,
            outputs,
            library_version: cvtele_core::VERSION.to_owned(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        }
    }

    pub fn timestamp(&self) -> Option<DateTime<Utc>> {
        DateTime::parse_from_rfc3339(&self.timestamp)
            .ok()
            .map(|t| t.with_timezone(&Utc))
    }
}

pub fn append(path: &Path, record: &RunRecord) -> Result<()> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let write_err = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(write_err)?;
    file.write_all(line.as_bytes()).map_err(write_err)
}

/// Parses one ledger line, rejecting records whose timestamp is not RFC 3339.
pub fn parse_record(line: &str) -> std::result::Result<RunRecord, String> {
    let rec: RunRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if rec.timestamp().is_none() {
        return Err(format!("timestamp {:?} is not RFC 3339", rec.timestamp));
    }
    Ok(rec)
}

/// Parses a whole ledger; blank lines are skipped.
pub fn read_ledger(text: &str) -> Result<Vec<RunRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_record(l).map_err(|reason| CliError::Ledger { line: i + 1, reason }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut params = Map::new();
        params.insert("r".into(), Value::from(0.5));
        let rec = RunRecord::new("optimize", params, vec!["out.json".into()]);
        let line = serde_json::to_string(&rec).unwrap();
        assert_eq!(parse_record(&line).unwrap(), rec);
        assert!(rec.timestamp.ends_with('Z'));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(read_ledger("{}\n").is_err());
        let bad_time = r#"{"command":"x","parameters":{},"outputs":[],"library_version":"0","timestamp":"yesterday"}"#;
        assert!(matches!(read_ledger(bad_time), Err(CliError::Ledger { line: 1, .. })));
        assert!(read_ledger("\n\n").unwrap().is_empty());
    }
}
