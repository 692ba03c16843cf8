//! Mine Boolean logic gates from multichannel voltage recordings of an
//! electrically stimulated colloid.
//!
//! The pipeline: segment a recording into per-input-state windows
//! ([`signal`]), detect peaks against a swept threshold band, assemble
//! truth tables and minimize them to canonical sum-of-products circuits
//! ([`logic`]), emit netlists and state graphs ([`circuit`]), and aggregate
//! gate-discovery statistics across repeats ([`census`]). A seeded
//! synthetic generator ([`synth`]) embeds known functions into noisy
//! recordings so every stage is oracle-testable.

// `!(x > 0.0)`-style guards are deliberate: NaN must fail validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod census;
pub mod charprops;
pub mod circuit;
pub mod logic;
pub mod pipeline;
pub mod recording;
pub mod signal;
pub mod synth;
