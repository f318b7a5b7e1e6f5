use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use incrrelay_bench::random_cloud;
use incrrelay_core::characteristics::{
    convex_hull, exact_sampled, hull_characteristic, parallelogram,
};
use incrrelay_core::fixtures::four_bus;
use incrrelay_core::simulator::simulate;
use incrrelay_core::{FaultSpec, FaultType, Grid, Settings};

fn characteristics(c: &mut Criterion) {
    let net = four_bus();
    let s = Settings::default();
    for eta in [FaultType::Ag, FaultType::Ab] {
        let f = FaultSpec::new(eta, 0.5, 1.0, net.relay().r_fault_max);
        let w = simulate(&net, &f, &s).unwrap().window;
        let p22 = Grid::paper22();
        let dense = Grid::dense(30, 30);
        c.bench_function(&format!("hull_paper22_{eta}"), |b| {
            b.iter(|| hull_characteristic(&net, eta, black_box(&w), &p22, &s).unwrap())
        });
        c.bench_function(&format!("parallelogram_{eta}"), |b| {
            b.iter(|| parallelogram(&net, eta, black_box(&w), (0.5, 1.0), &s).unwrap())
        });
        c.bench_function(&format!("exact_dense30_{eta}"), |b| {
            b.iter(|| exact_sampled(&net, eta, black_box(&w), &dense, &s).unwrap())
        });
    }
}

fn gift_wrapping(c: &mut Criterion) {
    for n in [22, 1000, 10_000] {
        let pts = random_cloud(n, 11);
        c.bench_function(&format!("convex_hull_{n}"), |b| {
            b.iter(|| convex_hull(black_box(&pts)))
        });
    }
}

criterion_group!(benches, characteristics, gift_wrapping);
criterion_main!(benches);
