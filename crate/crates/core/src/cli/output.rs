//! Series files: CSV with `#` metadata lines, or a JSON array with a
//! `.meta.json` sidecar.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, IoError, Result};
use crate::measures::Phase;
use crate::rgflow::ScanRecord;

pub const CSV_HEADER: &str = "parameter,entropy,mi,negativity_proxy,multipartite,phase,rate";

const ERROR_TAG: &str = "error at ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(HoloError::Config(format!(
                "unknown output format `{other}`"
            ))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Renders a series. `metadata` lines are written without the `#` prefix;
/// record errors are appended to them.
pub fn render_csv(records: &[ScanRecord], metadata: &[String]) -> Result<String> {
    if records.is_empty() {
        return Err(IoError::EmptySeries.into());
    }
    let mut out = String::new();
    for line in metadata {
        for piece in line.split('\n') {
            let _ = writeln!(out, "# {piece}");
        }
    }
    for r in records {
        if let Some(e) = &r.error {
            let _ = writeln!(
                out,
                "# {ERROR_TAG}{}: {}",
                fmt_num(r.parameter_value),
                e.replace('\n', " ")
            );
        }
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let phase = r.phase.map(Phase::as_str).unwrap_or("");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_num(r.parameter_value),
            fmt_opt(r.entropy),
            fmt_opt(r.mi),
            fmt_opt(r.negativity_proxy),
            fmt_opt(r.multipartite),
            phase,
            fmt_opt(r.rate)
        );
    }
    Ok(out)
}

fn json_num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => fmt_num(v),
        _ => "null".into(),
    }
}

pub fn render_json(records: &[ScanRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(IoError::EmptySeries.into());
    }
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        let phase = match r.phase {
            Some(p) => format!("\"{}\"", p.as_str()),
            None => "null".into(),
        };
        let _ = write!(
            out,
            "  {{\"parameter\": {}, \"entropy\": {}, \"mi\": {}, \"negativity_proxy\": {}, \"multipartite\": {}, \"phase\": {}, \"rate\": {}",
            json_num(Some(r.parameter_value)),
            json_num(r.entropy),
            json_num(r.mi),
            json_num(r.negativity_proxy),
            json_num(r.multipartite),
            phase,
            json_num(r.rate)
        );
        if let Some(e) = &r.error {
            let _ = write!(
                out,
                ", \"error\": {}",
                serde_json::to_string(e).map_err(IoError::from)?
            );
        }
        out.push('}');
        out.push_str(if i + 1 < records.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    Ok(out)
}

/// Writes the series to `path`. For JSON the metadata goes to a sidecar.
pub fn emit_series(
    records: &[ScanRecord],
    metadata: &[String],
    format: Format,
    path: &Path,
) -> Result<()> {
    match format {
        Format::Csv => fs::write(path, render_csv(records, metadata)?)?,
        Format::Json => {
            fs::write(path, render_json(records)?)?;
            let meta = serde_json::to_string_pretty(&metadata).map_err(IoError::from)? + "\n";
            fs::write(sidecar_path(path), meta)?;
        }
    }
    Ok(())
}

fn parse_field(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|_| IoError::Malformed(format!("`{s}` is not a number")).into())
}

fn parse_phase(s: &str) -> Result<Option<Phase>> {
    match s {
        "" => Ok(None),
        "connected" => Ok(Some(Phase::Connected)),
        "disconnected" => Ok(Some(Phase::Disconnected)),
        other => Err(IoError::Malformed(format!("unknown phase `{other}`")).into()),
    }
}

/// Reads a series written by [`emit_series`], returning its metadata lines
/// (record errors excluded) and records.
pub fn parse_series(path: &Path, format: Format) -> Result<(Vec<String>, Vec<ScanRecord>)> {
    let text = fs::read_to_string(path)?;
    match format {
        Format::Csv => parse_csv(&text),
        Format::Json => {
            let records: Vec<ScanRecord> = serde_json::from_str(&text).map_err(IoError::from)?;
            let side = sidecar_path(path);
            let metadata = if side.exists() {
                serde_json::from_str(&fs::read_to_string(side)?).map_err(IoError::from)?
            } else {
                Vec::new()
            };
            Ok((metadata, records))
        }
    }
}

pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<ScanRecord>)> {
    let mut metadata = Vec::new();
    let mut errors: Vec<(String, String)> = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        if let Some(meta) = line.strip_prefix("# ") {
            match meta
                .strip_prefix(ERROR_TAG)
                .and_then(|r| r.split_once(": "))
            {
                Some((at, msg)) => errors.push((at.to_owned(), msg.to_owned())),
                None => metadata.push(meta.to_owned()),
            }
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    let header = reader
        .headers()
        .map_err(IoError::from)?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(IoError::Malformed(format!("unexpected header `{header}`")).into());
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(IoError::from)?;
        if row.len() != 7 {
            return Err(IoError::Malformed(format!("expected 7 fields, got {}", row.len())).into());
        }
        let parameter_value = parse_field(&row[0])?
            .ok_or_else(|| HoloError::from(IoError::Malformed("missing parameter".into())))?;
        let key = fmt_num(parameter_value);
        let error = errors
            .iter()
            .find(|(at, _)| *at == key)
            .map(|(_, m)| m.clone());
        records.push(ScanRecord {
            parameter_value,
            entropy: parse_field(&row[1])?,
            mi: parse_field(&row[2])?,
            negativity_proxy: parse_field(&row[3])?,
            multipartite: parse_field(&row[4])?,
            phase: parse_phase(&row[5])?,
            rate: parse_field(&row[6])?,
            error,
        });
    }
    Ok((metadata, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ScanRecord> {
        (0..10)
            .map(|i| ScanRecord {
                parameter_value: 0.1 * (i + 1) as f64,
                entropy: None,
                mi: Some(if i < 3 { 1.0 / (i + 1) as f64 } else { 0.0 }),
                negativity_proxy: None,
                multipartite: None,
                phase: Some(if i < 3 {
                    Phase::Connected
                } else {
                    Phase::Disconnected
                }),
                rate: None,
                error: (i == 9).then(|| "numerical failure: x".to_string()),
            })
            .collect()
    }

    #[test]
    fn csv_structure_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let meta = vec!["config: {\"a\":1}".to_string()];
        emit_series(&sample(), &meta, Format::Csv, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let rows = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(rows, 11);
        assert!(text.contains("1.00000000000e-1,,1.00000000000e0,,,connected,\n"));
        let (m, recs) = parse_series(&path, Format::Csv).unwrap();
        assert_eq!(m, meta);
        let again = dir.path().join("t.csv");
        emit_series(&recs, &m, Format::Csv, &again).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let meta = vec!["command: scan".to_string()];
        emit_series(&sample(), &meta, Format::Json, &path).unwrap();
        let (m, recs) = parse_series(&path, Format::Json).unwrap();
        assert_eq!(m, meta);
        assert_eq!(recs.len(), 10);
        let again = dir.path().join("t.json");
        emit_series(&recs, &m, Format::Json, &again).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
        let v: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        assert!(v.is_array());
    }

    #[test]
    fn empty_series_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let e = emit_series(&[], &[], Format::Csv, &dir.path().join("e.csv")).unwrap_err();
        assert!(matches!(e, HoloError::Io(IoError::EmptySeries)));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let e = emit_series(
            &sample(),
            &[],
            Format::Csv,
            Path::new("/nonexistent/dir/x.csv"),
        )
        .unwrap_err();
        assert!(matches!(e, HoloError::Io(IoError::Os(_))));
    }
}
