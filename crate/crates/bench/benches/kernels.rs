use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use halfstat::compress::{lz_complexity, to_bitstring};
use halfstat::stats::{wilcoxon, PairedSample};
use halfstat::tokenize::{tokenize, TokenizerConfig};
use halfstat_bench::{synthetic_text, synthetic_words};

fn lz(c: &mut Criterion) {
    let mut group = c.benchmark_group("lz_complexity");
    for words in [1_000, 10_000] {
        let bits = to_bitstring(&synthetic_text(words, 7));
        group.throughput(Throughput::Bytes(bits.source_bytes as u64));
        group.bench_with_input(BenchmarkId::from_parameter(words), &bits, |b, bits| {
            b.iter(|| lz_complexity(black_box(&bits.bits)).unwrap())
        });
    }
    group.finish();
}

fn tokenizer(c: &mut Criterion) {
    let text = synthetic_text(20_000, 11);
    let cfg = TokenizerConfig::default();
    let mut group = c.benchmark_group("tokenize");
    group.throughput(Throughput::Bytes(text.len() as u64));
    group.bench_function("20k_words", |b| b.iter(|| tokenize(black_box(&text), &cfg)));
    group.finish();
}

fn signed_rank(c: &mut Criterion) {
    let a = synthetic_words(1_000, 1);
    let values: Vec<(String, f64, f64)> = a
        .iter()
        .enumerate()
        .map(|(i, w)| (i.to_string(), w.len() as f64, (i % 17) as f64))
        .collect();
    let sample = PairedSample::new("bench", values).unwrap();
    c.bench_function("wilcoxon_1000", |b| {
        b.iter(|| wilcoxon(black_box(&sample)).unwrap())
    });
}

criterion_group!(benches, lz, tokenizer, signed_rank);
criterion_main!(benches);
