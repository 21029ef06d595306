//! Delimited-text pitch ingestion.
//!
//! Columns are looked up by header name through a [`Schema`], so exports
//! with different column names can be read by remapping instead of editing
//! the file. Rows that fail to parse are collected with their line numbers;
//! they only become fatal when no row survives.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use pitchmbc_core::{DataError, PitchDataset, PitchRecord};
use serde::{Deserialize, Serialize};

/// Logical field → column header, plus the field delimiter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Schema {
    pub delimiter: char,
    pub pitcher_id: String,
    pub season: String,
    pub start_speed: String,
    pub back_spin: String,
    pub side_spin: String,
    /// External reference classification; optional in the file.
    pub pitch_type: String,
    /// `0`/`1` (or `true`/`false`); optional in the file.
    pub intentional: String,
}

impl Default for Schema {
    fn default() -> Self {
        Self {
            delimiter: ',',
            pitcher_id: "pitcher_id".into(),
            season: "season".into(),
            start_speed: "start_speed".into(),
            back_spin: "back_spin".into(),
            side_spin: "side_spin".into(),
            pitch_type: "pitch_type".into(),
            intentional: "intentional".into(),
        }
    }
}

impl Schema {
    pub const FIELDS: [&'static str; 7] =
        ["pitcher_id", "season", "start_speed", "back_spin", "side_spin", "pitch_type", "intentional"];

    /// Points logical `field` at column `column`.
    pub fn remap(&mut self, field: &str, column: &str) -> Result<(), IngestError> {
        let slot = match field {
            "pitcher_id" => &mut self.pitcher_id,
            "season" => &mut self.season,
            "start_speed" => &mut self.start_speed,
            "back_spin" => &mut self.back_spin,
            "side_spin" => &mut self.side_spin,
            "pitch_type" => &mut self.pitch_type,
            "intentional" => &mut self.intentional,
            _ => return Err(IngestError::UnknownField(field.into())),
        };
        *slot = column.into();
        Ok(())
    }

    fn delimiter_byte(&self) -> Result<u8, IngestError> {
        u8::try_from(self.delimiter).map_err(|_| IngestError::BadDelimiter(self.delimiter))
    }
}

/// A rejected input row.
#[derive(Debug, Clone, PartialEq)]
pub struct MalformedRow {
    /// 1-based line in the file, header included.
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for MalformedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("required column `{column}` (field {field}) not found in header")]
    MissingColumn { field: &'static str, column: String },
    #[error("no valid pitches ({} malformed rows)", .malformed.len())]
    EmptyDataset { malformed: Vec<MalformedRow> },
    #[error("input holds {} pitchers ({}); choose one", .ids.len(), .ids.join(", "))]
    MultiplePitchers { ids: Vec<String> },
    #[error("pitcher `{0}` not found in input")]
    UnknownPitcher(String),
    #[error("unknown schema field `{0}`")]
    UnknownField(String),
    #[error("delimiter {0:?} is not a single-byte character")]
    BadDelimiter(char),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Every valid row of a file, in file order, plus the rejects.
#[derive(Debug, Clone, PartialEq)]
pub struct PitchTable {
    pub records: Vec<PitchRecord>,
    pub malformed: Vec<MalformedRow>,
}

impl PitchTable {
    /// Distinct pitcher ids, sorted.
    pub fn pitcher_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.records.iter().map(|r| r.pitcher_id.clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    }

    /// Records grouped by pitcher id, file order kept inside each group.
    pub fn by_pitcher(&self) -> BTreeMap<String, Vec<PitchRecord>> {
        let mut groups: BTreeMap<String, Vec<PitchRecord>> = BTreeMap::new();
        for r in &self.records {
            groups.entry(r.pitcher_id.clone()).or_default().push(r.clone());
        }
        groups
    }

    /// The records of one pitcher as a dataset. With `pitcher = None` the
    /// table must hold exactly one pitcher.
    pub fn dataset(&self, pitcher: Option<&str>) -> Result<PitchDataset, IngestError> {
        let records: Vec<PitchRecord> = match pitcher {
            Some(id) => {
                let picked: Vec<_> = self.records.iter().filter(|r| r.pitcher_id == id).cloned().collect();
                if picked.is_empty() {
                    return Err(IngestError::UnknownPitcher(id.into()));
                }
                picked
            }
            None => {
                let ids = self.pitcher_ids();
                if ids.len() > 1 {
                    return Err(IngestError::MultiplePitchers { ids });
                }
                self.records.clone()
            }
        };
        Ok(PitchDataset::new(records)?)
    }
}

struct Columns {
    pitcher_id: usize,
    start_speed: usize,
    back_spin: usize,
    side_spin: usize,
    season: Option<usize>,
    pitch_type: Option<usize>,
    intentional: Option<usize>,
}

impl Columns {
    fn locate(header: &csv::StringRecord, schema: &Schema) -> Result<Self, IngestError> {
        let find = |name: &str| header.iter().position(|h| h.trim() == name);
        let required = |field: &'static str, name: &str| {
            find(name).ok_or_else(|| IngestError::MissingColumn { field, column: name.into() })
        };
        Ok(Self {
            pitcher_id: required("pitcher_id", &schema.pitcher_id)?,
            start_speed: required("start_speed", &schema.start_speed)?,
            back_spin: required("back_spin", &schema.back_spin)?,
            side_spin: required("side_spin", &schema.side_spin)?,
            season: find(&schema.season),
            pitch_type: find(&schema.pitch_type),
            intentional: find(&schema.intentional),
        })
    }

    fn record(&self, row: &csv::StringRecord) -> Result<PitchRecord, String> {
        let cell = |i: usize| row.get(i).map(str::trim).unwrap_or("");
        let optional = |i: Option<usize>| i.map(cell).filter(|v| !v.is_empty()).map(String::from);
        let number = |i: usize, name: &str| -> Result<f64, String> {
            let raw = cell(i);
            raw.parse::<f64>().map_err(|_| format!("{name} `{raw}` is not a number"))
        };
        let pitcher_id = cell(self.pitcher_id);
        let is_intentional_ball = match self.intentional.map(cell).unwrap_or("") {
            "" | "0" | "false" | "FALSE" | "False" => false,
            "1" | "true" | "TRUE" | "True" => true,
            other => return Err(format!("intentional `{other}` is not 0/1")),
        };
        let record = PitchRecord {
            pitcher_id: pitcher_id.into(),
            start_speed: number(self.start_speed, "start_speed")?,
            back_spin: number(self.back_spin, "back_spin")?,
            side_spin: number(self.side_spin, "side_spin")?,
            season: optional(self.season),
            reference_label: optional(self.pitch_type),
            is_intentional_ball,
        };
        record.validate().map_err(|e| e.to_string())?;
        Ok(record)
    }
}

/// Reads every row of a header-bearing delimited stream.
///
/// Returns `EmptyDataset` (carrying the rejects) when no row is valid.
pub fn read_pitch_table(source: impl Read, schema: &Schema) -> Result<PitchTable, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter_byte()?)
        .flexible(true)
        .from_reader(source);
    let header = reader.headers()?.clone();
    if header.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::EmptyDataset { malformed: Vec::new() });
    }
    let columns = Columns::locate(&header, schema)?;
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(e.into());
                }
                malformed.push(MalformedRow { line, reason: e.to_string() });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        match columns.record(&row) {
            Ok(r) => records.push(r),
            Err(reason) => malformed.push(MalformedRow { line, reason }),
        }
    }
    if records.is_empty() {
        return Err(IngestError::EmptyDataset { malformed });
    }
    Ok(PitchTable { records, malformed })
}

/// Parses a single-pitcher stream into a dataset, returning the rejects
/// alongside. Intentional balls are kept; see `filter_pitches`.
pub fn parse_pitch_csv(
    source: impl Read,
    schema: &Schema,
) -> Result<(PitchDataset, Vec<MalformedRow>), IngestError> {
    let table = read_pitch_table(source, schema)?;
    let dataset = table.dataset(None)?;
    Ok((dataset, table.malformed))
}

/// Writes records under `schema`'s column names. Floats use the shortest
/// representation that parses back to the same value, so reading the
/// output again reproduces the records exactly.
pub fn write_pitch_csv<'a>(
    sink: impl Write,
    records: impl IntoIterator<Item = &'a PitchRecord>,
    schema: &Schema,
) -> Result<(), IngestError> {
    let mut writer = csv::WriterBuilder::new().delimiter(schema.delimiter_byte()?).from_writer(sink);
    writer.write_record([
        &schema.pitcher_id,
        &schema.season,
        &schema.start_speed,
        &schema.back_spin,
        &schema.side_spin,
        &schema.pitch_type,
        &schema.intentional,
    ])?;
    for r in records {
        writer.write_record([
            r.pitcher_id.as_str(),
            r.season.as_deref().unwrap_or(""),
            &r.start_speed.to_string(),
            &r.back_spin.to_string(),
            &r.side_spin.to_string(),
            r.reference_label.as_deref().unwrap_or(""),
            if r.is_intentional_ball { "1" } else { "0" },
        ])?;
    }
    writer.flush()?;
    Ok(())
}
