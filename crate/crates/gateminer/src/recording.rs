//! Recording data model and bit-exact CSV + JSON-manifest I/O.
//!
//! A recording is a CSV file (`t,<ch0>,<ch1>[,...],sync`, LF endings, `.`
//! decimal separator) with a JSON manifest sidecar sharing its basename
//! (`run.csv` -> `run.manifest.json`). Voltages are stored in volts using
//! the shortest round-trip float rendering, so write-then-read is identity
//! on sample values.
//!
//! Input bit-string convention: the leftmost character is input A (the
//! first electrode).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordingError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("ragged row {row}: expected {want} fields, found {got}")]
    RaggedRow { row: usize, want: usize, got: usize },
    #[error("non-monotone time column at row {row}")]
    NonMonotoneTime { row: usize },
    #[error("missing sync column (manifest declares sync: channel)")]
    MissingSyncColumn,
    #[error("duplicate channel name {0:?}")]
    DuplicateChannel(String),
    #[error("bad numeric field at row {row}, column {col}: {value:?}")]
    BadField {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("invalid recording: {0}")]
    Invalid(String),
    #[error("manifest sidecar {0} not found")]
    MissingManifest(PathBuf),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest parse error: {0}")]
    Manifest(#[from] serde_json::Error),
}

/// Whether segmentation uses the sync trace or fixed-duration windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyncMode {
    Channel,
    None,
}

/// Per-run metadata stored in the manifest sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub n_inputs: usize,
    pub state_duration_s: f64,
    pub sample_rate_hz: f64,
    pub repeat_index: u64,
    pub thresholds_mv: Vec<f64>,
    pub output_channel: String,
    pub sync: SyncMode,
    /// Identity of the generator RNG for synthetic recordings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

impl RunManifest {
    pub fn validate(&self) -> Result<(), RecordingError> {
        if self.n_inputs == 0 || self.n_inputs > crate::logic::MAX_INPUTS {
            return Err(RecordingError::Invalid(format!(
                "n_inputs {} out of range",
                self.n_inputs
            )));
        }
        if !(self.state_duration_s > 0.0) {
            return Err(RecordingError::Invalid(
                "state_duration_s must be positive".into(),
            ));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(RecordingError::Invalid(
                "sample_rate_hz must be positive".into(),
            ));
        }
        if self.thresholds_mv.iter().any(|&t| !(t > 0.0)) {
            return Err(RecordingError::Invalid(
                "thresholds_mv must all be positive".into(),
            ));
        }
        if self.thresholds_mv.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(RecordingError::Invalid(
                "thresholds_mv must be strictly ascending".into(),
            ));
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        1usize << self.n_inputs
    }

    /// Samples per fixed-duration state window.
    pub fn window_samples(&self) -> usize {
        (self.state_duration_s * self.sample_rate_hz).round() as usize
    }
}

/// One named voltage trace, in volts.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub name: String,
    pub samples: Vec<f64>,
}

/// Time-indexed multichannel voltage recording plus sync track and manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub sample_rate_hz: f64,
    pub channels: Vec<Trace>,
    pub sync: Option<Vec<f64>>,
    pub meta: RunManifest,
}

impl Recording {
    pub fn new(
        channels: Vec<Trace>,
        sync: Option<Vec<f64>>,
        meta: RunManifest,
    ) -> Result<Self, RecordingError> {
        let rec = Self {
            sample_rate_hz: meta.sample_rate_hz,
            channels,
            sync,
            meta,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<(), RecordingError> {
        self.meta.validate()?;
        if self.channels.is_empty() {
            return Err(RecordingError::Invalid("no channels".into()));
        }
        let len = self.channels[0].samples.len();
        if len == 0 {
            return Err(RecordingError::Invalid("zero-length traces".into()));
        }
        for tr in &self.channels {
            if tr.samples.len() != len {
                return Err(RecordingError::Invalid(format!(
                    "channel {:?} length {} != {}",
                    tr.name,
                    tr.samples.len(),
                    len
                )));
            }
        }
        if let Some(sync) = &self.sync {
            if sync.len() != len {
                return Err(RecordingError::Invalid(format!(
                    "sync length {} != {}",
                    sync.len(),
                    len
                )));
            }
        } else if self.meta.sync == SyncMode::Channel {
            return Err(RecordingError::MissingSyncColumn);
        }
        for i in 0..self.channels.len() {
            for j in i + 1..self.channels.len() {
                if self.channels[i].name == self.channels[j].name {
                    return Err(RecordingError::DuplicateChannel(
                        self.channels[i].name.clone(),
                    ));
                }
            }
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(RecordingError::Invalid("sample_rate_hz must be > 0".into()));
        }
        let needed =
            self.meta.n_states() as f64 * self.meta.state_duration_s * self.meta.sample_rate_hz;
        if (len as f64) < needed {
            return Err(RecordingError::Invalid(format!(
                "trace length {len} < required {needed} samples for {} states",
                self.meta.n_states()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.channels[0].samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, name: &str) -> Option<&Trace> {
        self.channels.iter().find(|t| t.name == name)
    }
}

/// One applied input state; leftmost bit is input A.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InputState {
    pub bits: String,
    pub ordinal: u32,
}

impl InputState {
    pub fn new(n_inputs: usize, ordinal: u32) -> Self {
        let bits = (0..n_inputs)
            .map(|v| {
                if ordinal >> (n_inputs - 1 - v) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        Self { bits, ordinal }
    }
}

/// The counting schedule: all `2^n_inputs` states in ascending ordinal order.
pub fn state_schedule(manifest: &RunManifest) -> Vec<InputState> {
    (0..manifest.n_states() as u32)
        .map(|o| InputState::new(manifest.n_inputs, o))
        .collect()
}

/// Manifest sidecar path for a recording CSV (`run.csv` -> `run.manifest.json`).
pub fn manifest_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("manifest.json")
}

/// A parsed recording plus non-fatal observations from the reader.
#[derive(Debug)]
pub struct LoadedRecording {
    pub recording: Recording,
    pub warnings: Vec<String>,
}

pub fn read_recording(path: &Path) -> Result<LoadedRecording, RecordingError> {
    let mpath = manifest_path(path);
    if !mpath.exists() {
        return Err(RecordingError::MissingManifest(mpath));
    }
    let mtext = fs::read_to_string(&mpath).map_err(|source| RecordingError::Io {
        path: mpath.clone(),
        source,
    })?;
    let meta: RunManifest = serde_json::from_str(&mtext)?;
    meta.validate()?;

    let text = fs::read_to_string(path).map_err(|source| RecordingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| RecordingError::MalformedHeader("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 2 || cols[0] != "t" {
        return Err(RecordingError::MalformedHeader(format!(
            "expected `t,<channels...>[,sync]`, got {header:?}"
        )));
    }
    let has_sync_col = *cols.last().unwrap() == "sync";
    if meta.sync == SyncMode::Channel && !has_sync_col {
        return Err(RecordingError::MissingSyncColumn);
    }
    let channel_names: Vec<String> = cols[1..cols.len() - has_sync_col as usize]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if channel_names.is_empty() {
        return Err(RecordingError::MalformedHeader(
            "no data channels in header".into(),
        ));
    }

    let width = cols.len();
    let mut times: Vec<f64> = Vec::new();
    let mut channels: Vec<Trace> = channel_names
        .iter()
        .map(|name| Trace {
            name: name.clone(),
            samples: Vec::new(),
        })
        .collect();
    let mut sync: Vec<f64> = Vec::new();

    for (row, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(RecordingError::RaggedRow {
                row,
                want: width,
                got: fields.len(),
            });
        }
        let parse = |col: usize| -> Result<f64, RecordingError> {
            fields[col].parse().map_err(|_| RecordingError::BadField {
                row,
                col,
                value: fields[col].to_string(),
            })
        };
        let t = parse(0)?;
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(RecordingError::NonMonotoneTime { row });
            }
        }
        times.push(t);
        for (c, tr) in channels.iter_mut().enumerate() {
            tr.samples.push(parse(c + 1)?);
        }
        if has_sync_col {
            sync.push(parse(width - 1)?);
        }
    }

    let mut warnings = Vec::new();
    if times.len() >= 2 {
        let span = times[times.len() - 1] - times[0];
        let inferred = (times.len() - 1) as f64 / span;
        let rel = ((inferred - meta.sample_rate_hz) / meta.sample_rate_hz).abs();
        if rel > 1e-9 {
            warnings.push(format!(
                "inferred sample rate {inferred} Hz disagrees with manifest {} Hz",
                meta.sample_rate_hz
            ));
        }
    }

    let recording = Recording::new(channels, has_sync_col.then_some(sync), meta)?;
    Ok(LoadedRecording {
        recording,
        warnings,
    })
}

pub fn write_recording(rec: &Recording, path: &Path) -> Result<(), RecordingError> {
    rec.validate()?;
    let io_err = |source| RecordingError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    let names: Vec<&str> = rec.channels.iter().map(|t| t.name.as_str()).collect();
    let header = if rec.sync.is_some() {
        format!("t,{},sync", names.join(","))
    } else {
        format!("t,{}", names.join(","))
    };
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    for i in 0..rec.len() {
        let t = i as f64 / rec.sample_rate_hz;
        let mut row = format!("{t}");
        for tr in &rec.channels {
            row.push(',');
            row.push_str(&format!("{}", tr.samples[i]));
        }
        if let Some(sync) = &rec.sync {
            row.push(',');
            row.push_str(&format!("{}", sync[i]));
        }
        out.extend_from_slice(row.as_bytes());
        out.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(io_err)?;
    f.write_all(&out).map_err(io_err)?;

    let mpath = manifest_path(path);
    let mtext = serde_json::to_string_pretty(&rec.meta)?;
    fs::write(&mpath, mtext).map_err(|source| RecordingError::Io {
        path: mpath,
        source,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn manifest(n_inputs: usize) -> RunManifest {
        RunManifest {
            n_inputs,
            state_duration_s: 15.0,
            sample_rate_hz: 1.0,
            repeat_index: 0,
            thresholds_mv: vec![100.0, 150.0, 200.0],
            output_channel: "ch0".into(),
            sync: SyncMode::None,
            rng: None,
        }
    }

    fn small_recording() -> Recording {
        let len = 60; // 4 states x 15 s x 1 Hz
        let meta = manifest(2);
        Recording::new(
            vec![
                Trace {
                    name: "ch0".into(),
                    samples: vec![0.0125; len],
                },
                Trace {
                    name: "ch1".into(),
                    samples: (0..len).map(|i| i as f64 * 1e-3).collect(),
                },
            ],
            None,
            meta,
        )
        .unwrap()
    }

    #[test]
    fn schedule_counts_up() {
        let states = state_schedule(&manifest(2));
        let bits: Vec<&str> = states.iter().map(|s| s.bits.as_str()).collect();
        assert_eq!(bits, vec!["00", "01", "10", "11"]);
    }

    #[test]
    fn schedule_four_inputs() {
        let states = state_schedule(&manifest(4));
        assert_eq!(states.len(), 16);
        assert_eq!(states[0].bits, "0000");
        assert_eq!(states[15].bits, "1111");
        assert!(states.windows(2).all(|w| w[0].ordinal < w[1].ordinal));
    }

    #[test]
    fn schedule_one_input() {
        let states = state_schedule(&manifest(1));
        let bits: Vec<&str> = states.iter().map(|s| s.bits.as_str()).collect();
        assert_eq!(bits, vec!["0", "1"]);
    }

    #[test]
    fn round_trip_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let rec = small_recording();
        write_recording(&rec, &path).unwrap();
        let loaded = read_recording(&path).unwrap();
        assert_eq!(loaded.recording, rec);
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn ragged_row_names_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let rec = small_recording();
        write_recording(&rec, &path).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        // truncate the third data row
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        lines[3] = lines[3].rsplit_once(',').unwrap().0.to_string();
        text = lines.join("\n");
        fs::write(&path, text).unwrap();
        match read_recording(&path) {
            Err(RecordingError::RaggedRow { row: 2, .. }) => {}
            other => panic!("expected RaggedRow at 2, got {other:?}"),
        }
    }

    #[test]
    fn non_monotone_time_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let rec = small_recording();
        write_recording(&rec, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        lines[2] = lines[2].replacen("1,", "5,", 1);
        fs::write(&path, lines.join("\n")).unwrap();
        assert!(matches!(
            read_recording(&path),
            Err(RecordingError::NonMonotoneTime { .. })
        ));
    }

    #[test]
    fn missing_sync_column_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let mut rec = small_recording();
        rec.meta.sync = SyncMode::Channel;
        rec.sync = Some(vec![0.0; rec.len()]);
        write_recording(&rec, &path).unwrap();
        // drop the sync column from the header only; rows then look ragged,
        // so strip the last field everywhere
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<String> = text
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect();
        fs::write(&path, lines.join("\n")).unwrap();
        assert!(matches!(
            read_recording(&path),
            Err(RecordingError::MissingSyncColumn)
        ));
    }

    #[test]
    fn zero_length_traces_rejected() {
        let meta = manifest(2);
        let res = Recording::new(
            vec![Trace {
                name: "ch0".into(),
                samples: vec![],
            }],
            None,
            meta,
        );
        assert!(matches!(res, Err(RecordingError::Invalid(_))));
    }

    #[test]
    fn rate_mismatch_warns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let rec = small_recording();
        write_recording(&rec, &path).unwrap();
        let mpath = manifest_path(&path);
        let mut meta: RunManifest =
            serde_json::from_str(&fs::read_to_string(&mpath).unwrap()).unwrap();
        meta.sample_rate_hz = 1.5;
        meta.state_duration_s = 10.0; // keep the length invariant satisfiable
        fs::write(&mpath, serde_json::to_string(&meta).unwrap()).unwrap();
        let loaded = read_recording(&path).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
    }
}
