//! Scan checkpoints: line-oriented text, one `completed_through=<n>`
//! header followed by the CSV rows emitted so far. Writes go to a
//! temporary file in the same directory and land via atomic rename, so a
//! kill mid-write never leaves a torn checkpoint behind.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::wieferich::FwRecord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub completed_through: u64,
    pub records: Vec<FwRecord>,
}

pub fn save(path: &Path, completed_through: u64, records: &[FwRecord]) -> Result<()> {
    let mut body = String::with_capacity(32 + records.len() * 32);
    body.push_str(&format!("completed_through={completed_through}\n"));
    for r in records {
        body.push_str(&r.csv_row());
        body.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Load and validate a checkpoint; Ok(None) when the file does not exist.
pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CheckpointCorrupt("empty checkpoint file".into()))?;
    let completed_through = header
        .strip_prefix("completed_through=")
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| Error::CheckpointCorrupt(format!("bad header line {header:?}")))?;
    let mut records = Vec::new();
    let mut last_p = 0u64;
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let record = FwRecord::parse_csv_row(line)?;
        if record.p <= last_p {
            return Err(Error::CheckpointCorrupt(format!(
                "rows out of order at p = {}",
                record.p
            )));
        }
        if record.p > completed_through {
            return Err(Error::CheckpointCorrupt(format!(
                "row p = {} beyond completed_through = {completed_through}",
                record.p
            )));
        }
        last_p = record.p;
        records.push(record);
    }
    Ok(Some(Checkpoint { completed_through, records }))
}
