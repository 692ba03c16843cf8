//! Gate-discovery statistics across experimental repeats and thresholds.
//!
//! Census keys are function IDs, never formatted SOP strings, so display
//! changes can never split counts. Partial censuses merge associatively and
//! commutatively; the final counts are independent of accumulation order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::logic::{minimize, FunctionId, SopStyle, TruthTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("mixed input widths: census is for {expected} inputs, record has {got}")]
    MixedInputs { expected: usize, got: usize },
    #[error("record id {id_hex} does not match its SOP ({sop_id_hex})")]
    InconsistentRecord { id_hex: String, sop_id_hex: String },
    #[error("bad function id {0:?}")]
    BadId(String),
}

/// One extracted function: the unit the census counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionRecord {
    pub repeat_index: u64,
    pub threshold_mv: f64,
    pub channel: String,
    pub n_inputs: usize,
    pub id_hex: String,
    pub sop: String,
    pub circuit_size_terms: usize,
}

impl ExtractionRecord {
    pub fn function_id(&self) -> Result<FunctionId, CensusError> {
        FunctionId::from_hex(&self.id_hex).ok_or_else(|| CensusError::BadId(self.id_hex.clone()))
    }
}

/// Aggregated counts of discovered functions, with per-threshold sub-counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateCensus {
    n_inputs: usize,
    counts: BTreeMap<BigUint, u64>,
    total_records: u64,
    per_threshold: BTreeMap<String, BTreeMap<BigUint, u64>>,
}

/// Stable map key for a threshold value.
fn threshold_key(mv: f64) -> String {
    format!("{mv}")
}

impl GateCensus {
    pub fn new(n_inputs: usize) -> Self {
        Self {
            n_inputs,
            counts: BTreeMap::new(),
            total_records: 0,
            per_threshold: BTreeMap::new(),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn total_records(&self) -> u64 {
        self.total_records
    }

    pub fn counts(&self) -> &BTreeMap<BigUint, u64> {
        &self.counts
    }

    pub fn distinct_functions(&self) -> usize {
        self.counts.len()
    }

    pub fn add(&mut self, record: &ExtractionRecord) -> Result<(), CensusError> {
        if record.n_inputs != self.n_inputs {
            return Err(CensusError::MixedInputs {
                expected: self.n_inputs,
                got: record.n_inputs,
            });
        }
        let id = record.function_id()?;
        *self.counts.entry(id.value().clone()).or_insert(0) += 1;
        *self
            .per_threshold
            .entry(threshold_key(record.threshold_mv))
            .or_default()
            .entry(id.value().clone())
            .or_insert(0) += 1;
        self.total_records += 1;
        Ok(())
    }

    /// Associative, commutative partial-census merge.
    pub fn merge(&mut self, other: GateCensus) -> Result<(), CensusError> {
        if other.n_inputs != self.n_inputs {
            return Err(CensusError::MixedInputs {
                expected: self.n_inputs,
                got: other.n_inputs,
            });
        }
        for (id, n) in other.counts {
            *self.counts.entry(id).or_insert(0) += n;
        }
        for (thr, sub) in other.per_threshold {
            let mine = self.per_threshold.entry(thr).or_default();
            for (id, n) in sub {
                *mine.entry(id).or_insert(0) += n;
            }
        }
        self.total_records += other.total_records;
        Ok(())
    }

    /// Functions discovered more than once.
    pub fn non_unique(&self) -> Vec<(&BigUint, u64)> {
        self.counts
            .iter()
            .filter(|(_, &n)| n > 1)
            .map(|(id, &n)| (id, n))
            .collect()
    }

    /// Descending by count, ties broken by ascending canonical SOP string;
    /// each entry carries the minimized, formatted SOP.
    pub fn top_k(&self, k: usize) -> Vec<TopEntry> {
        let mut entries: Vec<TopEntry> = self
            .counts
            .iter()
            .map(|(id, &count)| {
                let tt = TruthTable::from_id(self.n_inputs, id).expect("id within range");
                let sop = minimize(&tt);
                TopEntry {
                    sop: sop.format(SopStyle::Plain),
                    id_hex: FunctionId::from_value(id.clone()).hex(),
                    count,
                }
            })
            .collect();
        entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.sop.cmp(&b.sop)));
        entries.truncate(k);
        entries
    }

    /// `function_id,count` ascending by id; decimal codification for narrow
    /// functions, hex past 5 inputs.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("function_id,count\n");
        for (id, count) in &self.counts {
            let rendered = self.render_id(id);
            let _ = writeln!(out, "{rendered},{count}");
        }
        out
    }

    fn render_id(&self, id: &BigUint) -> String {
        if self.n_inputs > 5 {
            id.to_str_radix(16)
        } else {
            id.to_str_radix(10)
        }
    }

    /// Report JSON including the codification convention string.
    pub fn report_json(&self, k: usize) -> serde_json::Value {
        let per_threshold: BTreeMap<&String, BTreeMap<String, u64>> = self
            .per_threshold
            .iter()
            .map(|(thr, sub)| {
                (
                    thr,
                    sub.iter().map(|(id, &n)| (self.render_id(id), n)).collect(),
                )
            })
            .collect();
        json!({
            "n_inputs": self.n_inputs,
            "total": self.total_records,
            "codification": "ordinal 0 is the least-significant bit; leftmost input bit is A",
            "top": self.top_k(k),
            "per_threshold": per_threshold,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopEntry {
    pub sop: String,
    pub id_hex: String,
    pub count: u64,
}

/// Build a census from a homogeneous record stream.
pub fn accumulate<'a>(
    n_inputs: usize,
    records: impl IntoIterator<Item = &'a ExtractionRecord>,
) -> Result<GateCensus, CensusError> {
    let mut census = GateCensus::new(n_inputs);
    for r in records {
        census.add(r)?;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, id_hex: &str, threshold_mv: f64) -> ExtractionRecord {
        ExtractionRecord {
            repeat_index: 0,
            threshold_mv,
            channel: "ch0".into(),
            n_inputs: n,
            id_hex: id_hex.into(),
            sop: String::new(),
            circuit_size_terms: 0,
        }
    }

    #[test]
    fn counts_sum_to_total() {
        let records: Vec<_> = (0..73)
            .map(|_| record(2, "7", 100.0))
            .chain((0..45).map(|_| record(2, "e", 150.0)))
            .collect();
        let census = accumulate(2, &records).unwrap();
        assert_eq!(census.total_records(), 118);
        assert_eq!(census.counts()[&BigUint::from(7u32)], 73);
        assert_eq!(census.counts()[&BigUint::from(14u32)], 45);
    }

    #[test]
    fn empty_stream_is_empty_census() {
        let census = accumulate(2, []).unwrap();
        assert_eq!(census.total_records(), 0);
        assert_eq!(census.histogram_csv(), "function_id,count\n");
    }

    #[test]
    fn mixed_inputs_rejected() {
        let mut census = GateCensus::new(2);
        assert!(matches!(
            census.add(&record(4, "7", 100.0)),
            Err(CensusError::MixedInputs {
                expected: 2,
                got: 4
            })
        ));
    }

    #[test]
    fn merge_is_order_independent() {
        let a: Vec<_> = (0..5).map(|_| record(2, "7", 100.0)).collect();
        let b: Vec<_> = (0..3).map(|_| record(2, "6", 200.0)).collect();
        let mut ab = accumulate(2, &a).unwrap();
        ab.merge(accumulate(2, &b).unwrap()).unwrap();
        let mut ba = accumulate(2, &b).unwrap();
        ba.merge(accumulate(2, &a).unwrap()).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.total_records(), 8);
    }

    #[test]
    fn top_k_orders_by_count_then_sop() {
        // two-way tie: XNOR (id 9) and A·B' (id 4), both count 3
        let records: Vec<_> = (0..3)
            .map(|_| record(2, "9", 100.0))
            .chain((0..3).map(|_| record(2, "4", 100.0)))
            .chain((0..5).map(|_| record(2, "7", 100.0)))
            .collect();
        let census = accumulate(2, &records).unwrap();
        let top = census.top_k(10);
        assert_eq!(top[0].sop, "A' + B'");
        assert_eq!(top[0].count, 5);
        // "(A·B) + (A'·B')" sorts before "A·B'"
        assert_eq!(top[1].sop, "(A·B) + (A'·B')");
        assert_eq!(top[2].sop, "A·B'");
    }

    #[test]
    fn histogram_ascending_with_nand_row() {
        let records: Vec<_> = (0..73)
            .map(|_| record(2, "7", 100.0))
            .chain((0..45).map(|_| record(2, "e", 150.0)))
            .collect();
        let census = accumulate(2, &records).unwrap();
        let csv = census.histogram_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "function_id,count");
        assert_eq!(lines[1], "7,73");
        assert_eq!(lines[2], "14,45");
    }

    #[test]
    fn wide_ids_render_hex() {
        let census = accumulate(8, &[record(8, "ff00ff00ff00ff00", 100.0)]).unwrap();
        assert!(census.histogram_csv().contains("ff00ff00ff00ff00,1"));
    }

    #[test]
    fn non_unique_reporting() {
        let mut records: Vec<_> = (0u32..16)
            .map(|i| record(2, &format!("{i:x}"), 100.0))
            .collect();
        records.push(record(2, "5", 100.0));
        let census = accumulate(2, &records).unwrap();
        let dup = census.non_unique();
        assert_eq!(dup.len(), 1);
        assert_eq!(*dup[0].0, BigUint::from(5u32));
        assert_eq!(dup[0].1, 2);
    }
}
