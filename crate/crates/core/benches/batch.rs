//! Sequential against data-parallel execution on the batch workloads.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spacetime_currents::chain::Grid;
use spacetime_currents::deform;
use spacetime_currents::exec::Exec;
use spacetime_currents::flatnorm;
use spacetime_currents::random::{self, instance_rng};

fn equality_batch(c: &mut Criterion) {
    let g = Grid::unit(&[5, 5]).unwrap();
    let pairs: Vec<_> = (0..16)
        .map(|i| {
            let mut rng = instance_rng(1, 0, i);
            (random::bounding_cycle(&mut rng, &g, 1, 6, 1), random::bounding_cycle(&mut rng, &g, 1, 6, 1))
        })
        .collect();
    let mut group = c.benchmark_group("verify_equality_x16");
    group.sample_size(10);
    for exec in Exec::all() {
        group.bench_with_input(BenchmarkId::from_parameter(exec.name()), &exec, |b, &exec| {
            b.iter(|| exec.map(pairs.clone(), |(t0, t1)| black_box(flatnorm::verify_equality(&t0, &t1).unwrap().value().clone())))
        });
    }
    group.finish();
}

fn deformation_batch(c: &mut Criterion) {
    let g = Grid::unit(&[8, 8]).unwrap();
    let cycles: Vec<_> = (0..16).map(|i| random::rectangle_cycle(&mut instance_rng(2, 0, i), &g, 4, 3)).collect();
    let mut group = c.benchmark_group("deform_to_coarse_x16");
    group.sample_size(10);
    for exec in Exec::all() {
        group.bench_with_input(BenchmarkId::from_parameter(exec.name()), &exec, |b, &exec| {
            b.iter(|| exec.map(cycles.clone(), |t| black_box(deform::deform_to_coarse(&t, 2).unwrap().w.mass())))
        });
    }
    group.finish();
}

fn boundary_batch(c: &mut Criterion) {
    let g = Grid::unit(&[6, 6, 6]).unwrap();
    let chains: Vec<_> = (0..256).map(|i| random::chain(&mut instance_rng(3, 0, i), &g, 2, 40, 3)).collect();
    let mut group = c.benchmark_group("boundary_boundary_x256");
    for exec in Exec::all() {
        group.bench_with_input(BenchmarkId::from_parameter(exec.name()), &exec, |b, &exec| {
            b.iter(|| exec.map(chains.clone(), |t| black_box(t.boundary().boundary().is_zero())))
        });
    }
    group.finish();
}

criterion_group!(benches, equality_batch, deformation_batch, boundary_batch);
criterion_main!(benches);
