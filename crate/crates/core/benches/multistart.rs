use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use witset_core::invariants::{basic_invariants, random_invariant_form};
use witset_core::parallel::Schedule;
use witset_core::rootsys::{build_root_system, Family};
use witset_core::witness::{min_on_sphere, sphere_vs_witness_property, MultistartParams};

fn schedules() -> [(&'static str, Schedule); 2] {
    [("sequential", Schedule::Sequential), ("parallel", Schedule::Parallel)]
}

fn sphere_min(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_on_sphere");
    group.sample_size(10);
    for (family, n, degree) in [(Family::B, 3, 8), (Family::Sym, 4, 6)] {
        let basis = basic_invariants(&build_root_system(family, n).unwrap()).unwrap();
        let form = random_invariant_form(&basis, degree, 11).unwrap().to_f64();
        let label = format!("{}-deg{degree}", basis.root_system().label());
        for (name, schedule) in schedules() {
            let params = MultistartParams::with_seed(1).with_schedule(schedule);
            group.bench_with_input(BenchmarkId::new(name, &label), &form, |b, f| {
                b.iter(|| black_box(min_on_sphere(f, &params).unwrap().value))
            });
        }
    }
    group.finish();
}

fn property_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("sphere_vs_witness");
    group.sample_size(10);
    let basis = basic_invariants(&build_root_system(Family::B, 3).unwrap()).unwrap();
    for (name, schedule) in schedules() {
        let params = MultistartParams::with_seed(2).with_schedule(schedule);
        group.bench_function(BenchmarkId::new(name, "B3-deg6-x4"), |b| {
            b.iter(|| black_box(sphere_vs_witness_property(&basis, 6, 4, &params).unwrap().max_rel_dev))
        });
    }
    group.finish();
}

criterion_group!(benches, sphere_min, property_suite);
criterion_main!(benches);
