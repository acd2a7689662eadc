//! Multi-channel CSV ingestion and recording bookkeeping.
//!
//! Input format: one column per channel, a header row with channel
//! names, one sample row per sampling period.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Result, WaveError};
use crate::transform::Signal;

/// Species tag, carrying the paper's dominant-frequency defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Canine,
    Human,
}

impl Species {
    /// Default dominant frequency in cycles per minute (canine band
    /// midpoint 5 cpm; human 3 cpm).
    pub fn dominant_cpm(&self) -> f64 {
        match self {
            Species::Canine => 5.0,
            Species::Human => 3.0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "canine" => Ok(Species::Canine),
            "human" => Ok(Species::Human),
            _ => Err(WaveError::InvalidParameter(format!(
                "unknown species '{s}' (expected canine|human)"
            ))),
        }
    }
}

/// A multi-channel recording with shared sampling period.
#[derive(Debug, Clone)]
pub struct RecordingFile {
    pub subject: String,
    pub species: Option<Species>,
    pub channel_names: Vec<String>,
    pub channels: Vec<Signal>,
    /// Segment bounds in samples, when the recording was cut.
    pub segment: Option<(usize, usize)>,
}

/// Parse a multi-channel CSV recording.
pub fn load_recording(path: &Path, sample_period: f64) -> Result<RecordingFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| WaveError::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| WaveError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if names.is_empty() {
        return Err(WaveError::Parse {
            line: 1,
            message: "empty header row".to_string(),
        });
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx + 2; // 1-based, after the header
        let record = record.map_err(|e| WaveError::Parse {
            line,
            message: e.to_string(),
        })?;
        if record.len() != names.len() {
            return Err(WaveError::Parse {
                line,
                message: format!(
                    "ragged row: {} cells, expected {}",
                    record.len(),
                    names.len()
                ),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| WaveError::Parse {
                line,
                message: format!("non-numeric cell '{}' in column '{}'", cell, names[col]),
            })?;
            if !value.is_finite() {
                return Err(WaveError::Parse {
                    line,
                    message: format!("non-finite value in column '{}'", names[col]),
                });
            }
            columns[col].push(value);
        }
    }
    if columns[0].is_empty() {
        return Err(WaveError::Parse {
            line: 1,
            message: "file contains a header but no sample rows".to_string(),
        });
    }

    let channels = columns
        .into_iter()
        .map(|c| Signal::new(c, sample_period))
        .collect::<Result<Vec<_>>>()?;
    let subject = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "recording".to_string());
    Ok(RecordingFile {
        subject,
        species: None,
        channel_names: names,
        channels,
        segment: None,
    })
}

/// Write channels as a multi-channel CSV (the `load_recording` format).
pub fn write_recording_csv(path: &Path, names: &[String], channels: &[Signal]) -> Result<()> {
    if names.len() != channels.len() {
        return Err(WaveError::Shape(format!(
            "{} names for {} channels",
            names.len(),
            channels.len()
        )));
    }
    let n = channels.first().map(|c| c.len()).unwrap_or(0);
    if channels.iter().any(|c| c.len() != n) {
        return Err(WaveError::Shape("channels have unequal lengths".to_string()));
    }
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", names.join(","))?;
    for i in 0..n {
        let row: Vec<String> = channels.iter().map(|c| c.samples()[i].to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Bounds of the centered power-of-two trim window for a channel of
/// length `len`: returns `(start, n)` with `n` the largest power of
/// two not exceeding `len`.
pub fn center_trim_bounds(len: usize) -> Result<(usize, usize)> {
    if len < 2 {
        return Err(WaveError::Shape(format!(
            "channel of length {len} cannot be trimmed to a power of two"
        )));
    }
    let n = if len.is_power_of_two() {
        len
    } else {
        len.next_power_of_two() / 2
    };
    Ok(((len - n) / 2, n))
}

/// Center-trim a channel to the largest power-of-two length.
pub fn center_trim(x: &Signal) -> Result<(Signal, usize)> {
    let (start, n) = center_trim_bounds(x.len())?;
    let trimmed = Signal::new(
        x.samples()[start..start + n].to_vec(),
        x.sample_period(),
    )?;
    Ok((trimmed, start))
}

/// Cut a `[start, end)` sample segment out of a channel.
pub fn cut_segment(x: &Signal, start: usize, end: usize) -> Result<Signal> {
    if start >= end || end > x.len() {
        return Err(WaveError::Shape(format!(
            "segment {start}:{end} out of range for length {}",
            x.len()
        )));
    }
    Signal::new(x.samples()[start..end].to_vec(), x.sample_period())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_two_channels() {
        let f = write_tmp("ch1,ch2\n1.0,2.0\n3.0,4.0\n5.0,6.0\n7.0,8.0\n");
        let rec = load_recording(f.path(), 0.1).unwrap();
        assert_eq!(rec.channel_names, vec!["ch1", "ch2"]);
        assert_eq!(rec.channels.len(), 2);
        assert_eq!(rec.channels[0].samples(), &[1.0, 3.0, 5.0, 7.0]);
        assert_eq!(rec.channels[1].len(), 4);
    }

    #[test]
    fn nan_cell_names_row_and_column() {
        let f = write_tmp("a,b\n1.0,2.0\n3.0,NaN\n");
        let err = load_recording(f.path(), 0.1).unwrap_err();
        match err {
            WaveError::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("'b'"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_rejected() {
        let f = write_tmp("a\n1.0\noops\n");
        let err = load_recording(f.path(), 0.1).unwrap_err();
        match err {
            WaveError::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("oops"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ragged_and_empty_files_rejected() {
        let f = write_tmp("a,b\n1.0\n");
        assert!(matches!(
            load_recording(f.path(), 0.1),
            Err(WaveError::Parse { line: 2, .. })
        ));
        let f = write_tmp("a,b\n");
        assert!(load_recording(f.path(), 0.1).is_err());
    }

    #[test]
    fn trim_is_centered() {
        assert_eq!(center_trim_bounds(6000).unwrap(), (952, 4096));
        assert_eq!(center_trim_bounds(4096).unwrap(), (0, 4096));
        assert_eq!(center_trim_bounds(4100).unwrap(), (2, 4096));
        assert!(center_trim_bounds(1).is_err());
        // index-arithmetic oracle: margins differ by at most one sample
        for len in [5, 100, 1023, 4100, 6000] {
            let (start, n) = center_trim_bounds(len).unwrap();
            let end_margin = len - start - n;
            assert!(end_margin == start || end_margin == start + 1, "len={len}");
        }
    }

    #[test]
    fn segment_cut() {
        let x = Signal::new((0..10).map(|i| i as f64).collect(), 0.1).unwrap();
        let seg = cut_segment(&x, 2, 6).unwrap();
        assert_eq!(seg.samples(), &[2.0, 3.0, 4.0, 5.0]);
        assert!(cut_segment(&x, 6, 2).is_err());
        assert!(cut_segment(&x, 0, 11).is_err());
    }

    #[test]
    fn recording_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rec.csv");
        let channels = vec![
            Signal::new(vec![0.5, -1.25, 3.0], 0.1).unwrap(),
            Signal::new(vec![1.0, 2.0, 3.0], 0.1).unwrap(),
        ];
        let names = vec!["c1".to_string(), "c2".to_string()];
        write_recording_csv(&path, &names, &channels).unwrap();
        let rec = load_recording(&path, 0.1).unwrap();
        assert_eq!(rec.channel_names, names);
        assert_eq!(rec.channels[0].samples(), channels[0].samples());
    }
}
