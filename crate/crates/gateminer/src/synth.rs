//! Seeded synthetic recordings that embed known Boolean functions as spike
//! patterns, for oracle-based end-to-end testing.
//!
//! For each state window and channel whose target output is 1 (after
//! optional Bernoulli corruption), one spike lands at a seeded-uniform
//! sample index with amplitude drawn uniformly from
//! [mean - spread, mean + spread] mV and a random sign; Gaussian baseline
//! noise is superimposed everywhere. Sync pulses mark every window
//! boundary. Generation is fully deterministic given the seed; the RNG is
//! ChaCha8 and its identity is recorded in the manifest.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::TruthTable;
use crate::recording::{Recording, RunManifest, SyncMode, Trace};
use crate::signal::ThresholdSweep;

pub const SYNC_PULSE_V: f64 = 5.0;
pub const RNG_IDENTITY: &str = "chacha8/seed-u64";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("target bits for channel {channel:?} have length {got}, expected {want}")]
    TargetLength {
        channel: String,
        got: usize,
        want: usize,
    },
    #[error("amplitude mean {mean} - 3*spread {spread} must exceed recoverable_up_to_mv {limit}")]
    Unrecoverable { mean: f64, spread: f64, limit: f64 },
    #[error("fixture spec is empty")]
    EmptySpec,
    #[error(transparent)]
    Logic(#[from] crate::logic::LogicError),
}

fn default_state_duration() -> f64 {
    15.0
}
fn default_sample_rate() -> f64 {
    1.0
}
fn default_amplitude() -> AmplitudeSpec {
    AmplitudeSpec {
        mean_mv: 450.0,
        spread_mv: 50.0,
    }
}
fn default_noise() -> f64 {
    20.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSpec {
    pub mean_mv: f64,
    pub spread_mv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_inputs: usize,
    #[serde(default = "default_state_duration")]
    pub state_duration_s: f64,
    #[serde(default = "default_sample_rate")]
    pub sample_rate_hz: f64,
    /// Channel name -> target output bits (index = input-state ordinal).
    pub targets: BTreeMap<String, String>,
    #[serde(default = "default_amplitude")]
    pub spike_amplitude_mv: AmplitudeSpec,
    #[serde(default = "default_noise")]
    pub noise_sd_mv: f64,
    #[serde(default)]
    pub flip_probability: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub repeat_index: u64,
    /// Thresholds to record in the manifest; defaults to the standard sweep.
    #[serde(default)]
    pub thresholds_mv: Option<Vec<f64>>,
    /// Output channel for the manifest; defaults to the first target.
    #[serde(default)]
    pub output_channel: Option<String>,
    /// Highest analysis threshold the generator must guarantee clean
    /// recovery for; validated against amplitude mean - 3*spread.
    #[serde(default)]
    pub recoverable_up_to_mv: Option<f64>,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_inputs == 0 || self.n_inputs > crate::logic::MAX_INPUTS {
            return Err(SynthError::InvalidConfig(format!(
                "n_inputs {} out of range",
                self.n_inputs
            )));
        }
        if !(self.state_duration_s > 0.0) || !(self.sample_rate_hz > 0.0) {
            return Err(SynthError::InvalidConfig(
                "state_duration_s and sample_rate_hz must be positive".into(),
            ));
        }
        if self.targets.is_empty() {
            return Err(SynthError::InvalidConfig("no target channels".into()));
        }
        let want = 1usize << self.n_inputs;
        for (channel, bits) in &self.targets {
            if bits.len() != want {
                return Err(SynthError::TargetLength {
                    channel: channel.clone(),
                    got: bits.len(),
                    want,
                });
            }
            crate::logic::parse_bits(bits)?;
        }
        if !(0.0..=1.0).contains(&self.flip_probability) {
            return Err(SynthError::InvalidConfig(format!(
                "flip_probability {} not in [0,1]",
                self.flip_probability
            )));
        }
        if !(self.spike_amplitude_mv.mean_mv > 0.0) || self.spike_amplitude_mv.spread_mv < 0.0 {
            return Err(SynthError::InvalidConfig("bad spike amplitude spec".into()));
        }
        if self.noise_sd_mv < 0.0 {
            return Err(SynthError::InvalidConfig("noise_sd_mv must be >= 0".into()));
        }
        if let Some(limit) = self.recoverable_up_to_mv {
            let floor = self.spike_amplitude_mv.mean_mv - 3.0 * self.spike_amplitude_mv.spread_mv;
            if !(floor > limit) {
                return Err(SynthError::Unrecoverable {
                    mean: self.spike_amplitude_mv.mean_mv,
                    spread: self.spike_amplitude_mv.spread_mv,
                    limit,
                });
            }
        }
        Ok(())
    }

    fn manifest(&self) -> RunManifest {
        RunManifest {
            n_inputs: self.n_inputs,
            state_duration_s: self.state_duration_s,
            sample_rate_hz: self.sample_rate_hz,
            repeat_index: self.repeat_index,
            thresholds_mv: self
                .thresholds_mv
                .clone()
                .unwrap_or_else(|| ThresholdSweep::default().thresholds_mv().to_vec()),
            output_channel: self
                .output_channel
                .clone()
                .unwrap_or_else(|| self.targets.keys().next().unwrap().clone()),
            sync: SyncMode::Channel,
            rng: Some(format!("{RNG_IDENTITY}:{}", self.seed)),
        }
    }
}

/// Generate one recording. Deterministic given the config (and its seed).
pub fn generate(cfg: &SynthConfig) -> Result<Recording, SynthError> {
    cfg.validate()?;
    let n_states = 1usize << cfg.n_inputs;
    let window = (cfg.state_duration_s * cfg.sample_rate_hz).round() as usize;
    let window = window.max(1);
    let len = n_states * window;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut channels: Vec<Trace> = Vec::with_capacity(cfg.targets.len());
    for (name, bits) in &cfg.targets {
        let outputs = crate::logic::parse_bits(bits).expect("validated");
        let mut samples = vec![0.0f64; len];
        for (state, &active) in outputs.iter().enumerate() {
            let flipped = cfg.flip_probability > 0.0 && rng.gen::<f64>() < cfg.flip_probability;
            if active != flipped {
                let idx = state * window + rng.gen_range(0..window);
                let lo = cfg.spike_amplitude_mv.mean_mv - cfg.spike_amplitude_mv.spread_mv;
                let hi = cfg.spike_amplitude_mv.mean_mv + cfg.spike_amplitude_mv.spread_mv;
                let amp_mv = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                samples[idx] += sign * amp_mv / 1000.0;
            }
        }
        if cfg.noise_sd_mv > 0.0 {
            let noise = Normal::new(0.0, cfg.noise_sd_mv / 1000.0)
                .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
            for s in &mut samples {
                *s += noise.sample(&mut rng);
            }
        }
        channels.push(Trace {
            name: name.clone(),
            samples,
        });
    }

    let mut sync = vec![0.0f64; len];
    for state in 0..n_states {
        sync[state * window] = SYNC_PULSE_V;
    }

    Recording::new(channels, Some(sync), cfg.manifest())
        .map_err(|e| SynthError::InvalidConfig(e.to_string()))
}

/// Seed for the `index`-th recording of a fixture set (SplitMix64-style mix
/// so fixtures can be generated in parallel).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One clean (noiseless, flip-free) recording per (table, occurrence), so
/// full-pipeline extraction at any in-band threshold reproduces the spec
/// counts exactly. Channel name is the config's output channel or "ch0".
pub fn generate_census_fixture(
    spec: &[(TruthTable, u64)],
    cfg: &SynthConfig,
) -> Result<Vec<Recording>, SynthError> {
    if spec.is_empty() {
        return Err(SynthError::EmptySpec);
    }
    let channel = cfg.output_channel.clone().unwrap_or_else(|| "ch0".into());
    let mut out = Vec::new();
    let mut index = 0u64;
    for (table, count) in spec {
        if *count == 0 {
            return Err(SynthError::InvalidConfig(
                "fixture count must be >= 1".into(),
            ));
        }
        for _ in 0..*count {
            let mut one = cfg.clone();
            one.targets = BTreeMap::from([(channel.clone(), table.bits_string())]);
            one.noise_sd_mv = 0.0;
            one.flip_probability = 0.0;
            one.seed = derive_seed(cfg.seed, index);
            one.repeat_index = index;
            one.output_channel = Some(channel.clone());
            out.push(generate(&one)?);
            index += 1;
        }
    }
    Ok(out)
}
