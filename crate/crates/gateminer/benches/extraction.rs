//! Parallel vs sequential batch extraction, and minimizer throughput.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gateminer::logic::{minimize, TruthTable};
use gateminer::pipeline::{extract_batch, extract_batch_seq};
use gateminer::recording::Recording;
use gateminer::signal::PeakConfig;
use gateminer::synth::{derive_seed, generate, AmplitudeSpec, SynthConfig};

fn synth_batch(n_inputs: usize, count: u64) -> Vec<Recording> {
    (0..count)
        .map(|i| {
            let seed = derive_seed(0xBEEF, i);
            let rows = 1usize << n_inputs;
            let bits: String = (0..rows)
                .map(|r| {
                    if (seed >> (r % 64)) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            let cfg = SynthConfig {
                n_inputs,
                state_duration_s: 15.0,
                sample_rate_hz: 1.0,
                targets: BTreeMap::from([("ch0".to_string(), bits)]),
                spike_amplitude_mv: AmplitudeSpec {
                    mean_mv: 450.0,
                    spread_mv: 50.0,
                },
                noise_sd_mv: 20.0,
                flip_probability: 0.0,
                seed,
                repeat_index: i,
                thresholds_mv: None,
                output_channel: None,
                recoverable_up_to_mv: None,
            };
            generate(&cfg).unwrap()
        })
        .collect()
}

fn bench_extraction(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract_batch");
    for &(n_inputs, count) in &[(2usize, 32u64), (4, 16)] {
        let recordings = synth_batch(n_inputs, count);
        let cfg = PeakConfig::default();
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("{n_inputs}in_x{count}")),
            &recordings,
            |b, recs| b.iter(|| extract_batch_seq(recs, &cfg).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("{n_inputs}in_x{count}")),
            &recordings,
            |b, recs| b.iter(|| extract_batch(recs, &cfg).unwrap()),
        );
    }
    group.finish();
}

fn bench_minimize(c: &mut Criterion) {
    let tables: Vec<TruthTable> = (0..64u64)
        .map(|i| {
            let seed = derive_seed(0xF00D, i);
            let bits: String = (0..16)
                .map(|r| if (seed >> r) & 1 == 1 { '1' } else { '0' })
                .collect();
            TruthTable::from_bits(4, &bits).unwrap()
        })
        .collect();
    c.bench_function("minimize_4in_x64", |b| {
        b.iter(|| {
            for t in &tables {
                criterion::black_box(minimize(t));
            }
        })
    });
}

criterion_group!(benches, bench_extraction, bench_minimize);
criterion_main!(benches);
