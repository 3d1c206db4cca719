use criterion::{criterion_group, criterion_main};

criterion_group!(
    benches,
    equijac_bench::registry,
    equijac_bench::tensor,
    equijac_bench::poles,
    equijac_bench::verification,
    equijac_bench::rank
);
criterion_main!(benches);
