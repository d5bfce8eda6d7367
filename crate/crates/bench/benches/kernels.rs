use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use freeconv::characterize::{freeness_dichotomy, preset_sample_mean_variance};
use freeconv::convolution::{boxtimes_moments, boxtimes_word_oracle, solve_subordination, DEFAULT_MAX_ITER};
use freeconv::matrix_lab::{estimate_word_traces, nc_lp_norm, sample_family, EnsembleKind, MatrixEnsembleSpec};
use freeconv::transforms::{boolean_from_moments, free_from_moments};
use freeconv::{Complex64, Measure, Word};
use freeconv_bench::{semicircle_moments, three_atom_moments, three_atoms};

fn transforms(c: &mut Criterion) {
    let m = three_atom_moments(12);
    c.bench_function("boolean_cumulants_order_12", |b| b.iter(|| boolean_from_moments(black_box(&m))));
    c.bench_function("free_cumulants_order_12", |b| b.iter(|| free_from_moments(black_box(&m))));
}

fn convolution(c: &mut Criterion) {
    let m = three_atom_moments(7);
    c.bench_function("boxtimes_series_order_7", |b| b.iter(|| boxtimes_moments(black_box(&m), &m, 7).unwrap()));
    c.bench_function("boxtimes_word_oracle_order_7", |b| {
        b.iter(|| boxtimes_word_oracle(black_box(&m), &m, 7).unwrap())
    });
    let mu = three_atoms();
    let bern = Measure::bernoulli_half();
    c.bench_function("subordination_negative_axis", |b| {
        b.iter(|| {
            solve_subordination(&mu, &bern, black_box(Complex64::new(-0.3, 0.0)), 1e-12, DEFAULT_MAX_ITER).unwrap()
        })
    });
}

fn characterize(c: &mut Criterion) {
    let spec = preset_sample_mean_variance(2).unwrap();
    let m = semicircle_moments(6);
    c.bench_function("dichotomy_n2_degree_6", |b| b.iter(|| freeness_dichotomy(&spec, black_box(&m), 6).unwrap()));
}

fn matrix_lab(c: &mut Criterion) {
    let spec = MatrixEnsembleSpec::uniform(128, 2, EnsembleKind::Goe, 1).unwrap();
    let words: Vec<Word> = ["T1 T2 T1 T2", "T1^4", "T1^2 T2^2"].iter().map(|s| s.parse().unwrap()).collect();
    let mut group = c.benchmark_group("matrix_lab");
    group.sample_size(10);
    group.bench_function("word_traces_n128_10_trials", |b| {
        b.iter(|| estimate_word_traces(&spec, black_box(&words), 10).unwrap())
    });
    let x = sample_family(&spec, 0).unwrap().remove(0);
    group.bench_function("lp_norm_n128", |b| b.iter(|| nc_lp_norm(black_box(&x), 3.0).unwrap()));
    group.finish();
}

criterion_group!(benches, transforms, convolution, characterize, matrix_lab);
criterion_main!(benches);
