//! End-to-end extraction: recording -> per-threshold truth tables ->
//! minimized SOPs -> extraction records and state graphs.
//!
//! Batch drivers are data-parallel over recordings under the `parallel`
//! feature (rayon), with an always-available sequential path. Both produce
//! identical, input-order results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::census::ExtractionRecord;
use crate::circuit::{build_state_graph, CircuitError, StateGraph};
use crate::logic::{minimize, LogicError, SopStyle, TruthTable};
use crate::recording::{Recording, RecordingError};
use crate::signal::{bits_by_threshold, sweep_bits, PeakConfig, SignalError, ThresholdSweep};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Recording(#[from] RecordingError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("output channel {0:?} not present in recording")]
    MissingOutputChannel(String),
}

/// Everything mined from one recording: one extraction record per manifest
/// threshold (for the designated output channel) and one state graph per
/// threshold (over all channels).
#[derive(Debug, Clone)]
pub struct Extraction {
    pub records: Vec<ExtractionRecord>,
    pub graphs: Vec<StateGraph>,
}

pub fn extract_recording(rec: &Recording, cfg: &PeakConfig) -> Result<Extraction, PipelineError> {
    rec.validate()?;
    let output_channel = &rec.meta.output_channel;
    if rec.channel(output_channel).is_none() {
        return Err(PipelineError::MissingOutputChannel(output_channel.clone()));
    }
    let sweep = ThresholdSweep::new(rec.meta.thresholds_mv.clone())?;
    let sweeps = sweep_bits(rec, &sweep, cfg)?;
    let by_threshold = bits_by_threshold(&sweeps);
    let schedule = crate::recording::state_schedule(&rec.meta);

    let mut records = Vec::with_capacity(by_threshold.len());
    let mut graphs = Vec::with_capacity(by_threshold.len());
    for (threshold_mv, channels) in by_threshold {
        let bits = &channels[output_channel];
        let table = TruthTable::from_bits(rec.meta.n_inputs, bits)?;
        let sop = minimize(&table);
        records.push(ExtractionRecord {
            repeat_index: rec.meta.repeat_index,
            threshold_mv,
            channel: output_channel.clone(),
            n_inputs: rec.meta.n_inputs,
            id_hex: table.function_id().hex(),
            sop: sop.format(SopStyle::Plain),
            circuit_size_terms: sop.term_count(),
        });

        // node = concatenated per-channel output bits at each input state
        let per_state: Vec<_> = schedule
            .iter()
            .enumerate()
            .map(|(i, state)| {
                let outputs: String = rec
                    .channels
                    .iter()
                    .map(|tr| channels[&tr.name].as_bytes()[i] as char)
                    .collect();
                (state.clone(), outputs)
            })
            .collect();
        graphs.push(build_state_graph(&per_state)?);
    }
    Ok(Extraction { records, graphs })
}

/// Sequential batch driver; results in input order.
pub fn extract_batch_seq(
    recordings: &[Recording],
    cfg: &PeakConfig,
) -> Result<Vec<Extraction>, PipelineError> {
    recordings
        .iter()
        .map(|rec| extract_recording(rec, cfg))
        .collect()
}

/// Data-parallel batch driver (rayon); identical output to the sequential
/// path. Falls back to sequential without the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn extract_batch(
    recordings: &[Recording],
    cfg: &PeakConfig,
) -> Result<Vec<Extraction>, PipelineError> {
    recordings
        .par_iter()
        .map(|rec| extract_recording(rec, cfg))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn extract_batch(
    recordings: &[Recording],
    cfg: &PeakConfig,
) -> Result<Vec<Extraction>, PipelineError> {
    extract_batch_seq(recordings, cfg)
}
