use collapsekit_core::generate::{random_mechanism, random_population, GeneratorConfig};
use collapsekit_core::{
    apply_assignment, check_causal_collapsibility, marginal_effect, weight_feasibility,
    stratum_effects, EffectMeasureKind,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn config(strata: usize) -> GeneratorConfig {
    GeneratorConfig {
        stratum_count: strata,
        denominator_bound: 1000,
        confounded: true,
        seed: 42,
    }
}

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine");
    for strata in [2, 8, 32] {
        let cfg = config(strata);
        let p = random_population(&cfg).unwrap();
        let m = random_mechanism(&cfg, &p).unwrap();
        group.bench_with_input(BenchmarkId::new("marginal_or", strata), &p, |b, p| {
            b.iter(|| marginal_effect(EffectMeasureKind::Or, black_box(p)))
        });
        group.bench_with_input(BenchmarkId::new("collapse_rr_minus", strata), &p, |b, p| {
            b.iter(|| check_causal_collapsibility(EffectMeasureKind::RrMinus, black_box(p), None))
        });
        group.bench_with_input(BenchmarkId::new("feasibility_or", strata), &p, |b, p| {
            let values = stratum_effects(EffectMeasureKind::Or, p);
            let marginal = marginal_effect(EffectMeasureKind::Or, p).unwrap();
            b.iter(|| weight_feasibility(black_box(&values), black_box(&marginal)))
        });
        group.bench_with_input(BenchmarkId::new("apply_assignment", strata), &(p, m), |b, (p, m)| {
            b.iter(|| apply_assignment(black_box(p), black_box(m)))
        });
    }
    group.finish();
}

criterion_group!(benches, engine);
criterion_main!(benches);
