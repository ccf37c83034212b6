use aanet_core::flightdata::{australian_ground_stations, generate_synthetic_dataset, Region, ZeroOccupancy};
use aanet_core::oracle::{exact_pareto_front, EnumerationLimits};
use aanet_core::pathobjectives::Network;
use aanet_core::scenario;
use aanet_core::simharness::{run_hourly_experiment, SweepConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn job_counts() -> [(&'static str, usize); 2] {
    [("sequential", 1), ("parallel", 0)]
}

fn sweep(c: &mut Criterion) {
    let records = generate_synthetic_dataset(1, 300, 86_400.0, &Region::australia()).unwrap();
    let stations = australian_ground_stations();
    let mut group = c.benchmark_group("sweep_300_flights");
    group.sample_size(10);
    for (name, jobs) in job_counts() {
        let config = SweepConfig {
            jobs,
            ..SweepConfig::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| run_hourly_experiment(&records, &stations, config, &ZeroOccupancy).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let net = Network::with_defaults(scenario::random_snapshot(3, 14, 2, 300.0)).unwrap();
    let src = net.node(scenario::RANDOM_SOURCE).unwrap();
    let mut group = c.benchmark_group("exact_front_14_aircraft_4_hops");
    group.sample_size(10);
    for (name, jobs) in job_counts() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &jobs, |b, &jobs| {
            b.iter(|| exact_pareto_front(&net, src, 4, EnumerationLimits::default(), jobs).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, oracle);
criterion_main!(benches);
