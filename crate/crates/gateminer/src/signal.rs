//! Segmentation into per-input-state windows and threshold-band peak
//! detection, swept over a list of thresholds.
//!
//! The threshold band is symmetric about the baseline (default 0 V): a
//! sample escapes the band when |s - baseline| strictly exceeds the
//! threshold; samples exactly at the threshold are inside. A peak is an
//! escaping sample that is a local extremum of |s - baseline|; plateaus
//! count once, at their first sample. Peak polarity is recorded but never
//! used for logic decisions.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::recording::{state_schedule, InputState, Recording, SyncMode};

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("unknown channel {0:?}")]
    UnknownChannel(String),
    #[error("sync edge count {found} != expected {expected} states")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("trace too short: {len} samples < {needed} needed")]
    TraceTooShort { needed: usize, len: usize },
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(f64),
    #[error("thresholds must be strictly ascending and positive")]
    BadSweep,
}

/// One input state's slice of the recording.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateWindow {
    pub state: InputState,
    pub range: Range<usize>,
}

/// Sample escaping the threshold band, amplitude signed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakEvent {
    pub channel: String,
    pub sample_index: usize,
    pub amplitude_v: f64,
}

/// Ascending list of positive thresholds, in millivolts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSweep {
    thresholds_mv: Vec<f64>,
}

impl ThresholdSweep {
    pub fn new(thresholds_mv: Vec<f64>) -> Result<Self, SignalError> {
        if thresholds_mv.is_empty()
            || thresholds_mv.iter().any(|&t| !(t > 0.0))
            || thresholds_mv.windows(2).any(|w| !(w[0] < w[1]))
        {
            return Err(SignalError::BadSweep);
        }
        Ok(Self { thresholds_mv })
    }

    pub fn thresholds_mv(&self) -> &[f64] {
        &self.thresholds_mv
    }
}

impl Default for ThresholdSweep {
    /// Ten thresholds, 100 mV to 550 mV in 50 mV steps.
    fn default() -> Self {
        Self {
            thresholds_mv: (0..10).map(|i| 100.0 + 50.0 * i as f64).collect(),
        }
    }
}

/// Whether a peak must be a local extremum of the deviation from baseline,
/// or any sample outside the band counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakPolicy {
    #[default]
    Extremum,
    AnyExcursion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakConfig {
    pub policy: PeakPolicy,
    /// Center of the threshold band, volts.
    pub baseline_v: f64,
    /// Sync rising-edge threshold, volts; None = midpoint of the sync
    /// trace's global min/max.
    pub sync_threshold_v: Option<f64>,
}

impl Default for PeakConfig {
    fn default() -> Self {
        Self {
            policy: PeakPolicy::Extremum,
            baseline_v: 0.0,
            sync_threshold_v: None,
        }
    }
}

/// Split a recording into per-input-state windows, tagged with the counting
/// schedule. Sync mode uses rising edges of the sync trace; fixed mode cuts
/// `state_duration_s * sample_rate_hz` sample windows.
pub fn segment(rec: &Recording, cfg: &PeakConfig) -> Result<Vec<StateWindow>, SignalError> {
    let schedule = state_schedule(&rec.meta);
    let n_states = schedule.len();
    match (&rec.sync, rec.meta.sync) {
        (Some(sync), SyncMode::Channel) => {
            let thr = cfg.sync_threshold_v.unwrap_or_else(|| {
                let min = sync.iter().copied().fold(f64::INFINITY, f64::min);
                let max = sync.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (min + max) / 2.0
            });
            let mut edges = Vec::new();
            for i in 0..sync.len() {
                let rising = if i == 0 {
                    sync[0] >= thr
                } else {
                    sync[i] >= thr && sync[i - 1] < thr
                };
                if rising {
                    edges.push(i);
                }
            }
            if edges.len() != n_states {
                return Err(SignalError::EdgeCountMismatch {
                    expected: n_states,
                    found: edges.len(),
                });
            }
            let mut windows = Vec::with_capacity(n_states);
            for (k, state) in schedule.into_iter().enumerate() {
                let start = edges[k];
                let end = if k + 1 < n_states {
                    edges[k + 1]
                } else {
                    rec.len()
                };
                windows.push(StateWindow {
                    state,
                    range: start..end,
                });
            }
            Ok(windows)
        }
        _ => {
            let wlen = rec.meta.window_samples().max(1);
            let needed = wlen * n_states;
            if rec.len() < needed {
                return Err(SignalError::TraceTooShort {
                    needed,
                    len: rec.len(),
                });
            }
            Ok(schedule
                .into_iter()
                .enumerate()
                .map(|(k, state)| StateWindow {
                    state,
                    range: k * wlen..(k + 1) * wlen,
                })
                .collect())
        }
    }
}

/// Every sample in the window escaping the band around the baseline and
/// forming a local extremum of the deviation (under the default policy).
/// Indices are absolute into the recording.
pub fn detect_peaks(
    rec: &Recording,
    window: &StateWindow,
    channel: &str,
    threshold_mv: f64,
    cfg: &PeakConfig,
) -> Result<Vec<PeakEvent>, SignalError> {
    if !(threshold_mv > 0.0) {
        return Err(SignalError::NonPositiveThreshold(threshold_mv));
    }
    let trace = rec
        .channel(channel)
        .ok_or_else(|| SignalError::UnknownChannel(channel.to_string()))?;
    let thr_v = threshold_mv / 1000.0;
    let slice = &trace.samples[window.range.clone()];
    let dev = |i: usize| (slice[i] - cfg.baseline_v).abs();

    let mut peaks = Vec::new();
    for i in 0..slice.len() {
        if !(dev(i) > thr_v) {
            continue;
        }
        let is_peak = match cfg.policy {
            PeakPolicy::AnyExcursion => true,
            PeakPolicy::Extremum => {
                // strict rise from the previous sample (or window edge) so a
                // plateau registers once, non-strict toward the next
                let rises = i == 0 || dev(i) > dev(i - 1);
                let falls = i + 1 == slice.len() || dev(i) >= dev(i + 1);
                rises && falls
            }
        };
        if is_peak {
            peaks.push(PeakEvent {
                channel: channel.to_string(),
                sample_index: window.range.start + i,
                amplitude_v: slice[i],
            });
        }
    }
    Ok(peaks)
}

/// Per-threshold, per-channel bit-strings: bit `i` = 1 iff the state with
/// ordinal `i` contains at least one peak. Serializable per the sweep JSON
/// interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSweep {
    pub threshold_mv: f64,
    pub channel: String,
    pub bits: String,
    pub peaks: Vec<SweepPeak>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPeak {
    pub state: String,
    pub index: usize,
    pub amplitude_v: f64,
}

/// Result of [`sweep_bits`]: entries ordered by ascending threshold, then by
/// channel order in the recording.
pub fn sweep_bits(
    rec: &Recording,
    sweep: &ThresholdSweep,
    cfg: &PeakConfig,
) -> Result<Vec<ChannelSweep>, SignalError> {
    let windows = segment(rec, cfg)?;
    let mut out = Vec::new();
    for &threshold_mv in sweep.thresholds_mv() {
        for trace in &rec.channels {
            let mut bits = String::with_capacity(windows.len());
            let mut peaks = Vec::new();
            for w in &windows {
                let events = detect_peaks(rec, w, &trace.name, threshold_mv, cfg)?;
                bits.push(if events.is_empty() { '0' } else { '1' });
                for e in events {
                    peaks.push(SweepPeak {
                        state: w.state.bits.clone(),
                        index: e.sample_index,
                        amplitude_v: e.amplitude_v,
                    });
                }
            }
            out.push(ChannelSweep {
                threshold_mv,
                channel: trace.name.clone(),
                bits,
                peaks,
            });
        }
    }
    Ok(out)
}

/// Convenience view: threshold -> channel -> bits.
pub fn bits_by_threshold(sweeps: &[ChannelSweep]) -> Vec<(f64, BTreeMap<String, String>)> {
    let mut out: Vec<(f64, BTreeMap<String, String>)> = Vec::new();
    for s in sweeps {
        match out.last_mut() {
            Some((t, map)) if *t == s.threshold_mv => {
                map.insert(s.channel.clone(), s.bits.clone());
            }
            _ => {
                let mut map = BTreeMap::new();
                map.insert(s.channel.clone(), s.bits.clone());
                out.push((s.threshold_mv, map));
            }
        }
    }
    out
}
