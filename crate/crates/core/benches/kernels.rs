use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zncomplete::verify::{audit_lemma_eh, audit_olson_identities, check_conjecture, verify_theorem, CampaignConfig, Exec};
use zncomplete::zn::units;
use zncomplete::{k_fold_sums, subset_sums, Modulus, ResidueSet};

fn random_units(n: u64, count: usize, seed: u64) -> ResidueSet {
    let m = Modulus::new(n).unwrap();
    let u = units(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<u32> = sample(&mut rng, u.len(), count).into_iter().map(|i| u.elements()[i]).collect();
    xs.sort_unstable();
    ResidueSet::new(m, xs).unwrap()
}

fn execs() -> Vec<(&'static str, Exec)> {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    vec![("sequential", Exec::sequential()), ("parallel", Exec::with_jobs(cores.max(2)))]
}

fn sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("sums");
    for &(n, size) in &[(10_007u64, 60usize), (1_000_003, 2_000)] {
        let a = random_units(n, size, 1);
        g.bench_with_input(BenchmarkId::new("subset_sums", n), &a, |b, a| b.iter(|| subset_sums(black_box(a))));
    }
    let a = random_units(100_003, 500, 2);
    g.bench_function("k_fold_sums/100003/k=320", |b| b.iter(|| k_fold_sums(black_box(&a), 320).unwrap()));
    g.finish();
}

fn campaigns(c: &mut Criterion) {
    let mut g = c.benchmark_group("campaigns");
    g.sample_size(10);
    for (name, exec) in execs() {
        let ex = CampaignConfig::exhaustive().with_exec(exec);
        let sampled = CampaignConfig::sampled(4096, 7).with_exec(exec);
        g.bench_function(BenchmarkId::new("verify_theorem_n31", name), |b| b.iter(|| verify_theorem(31, &ex).unwrap()));
        g.bench_function(BenchmarkId::new("conjecture_n23", name), |b| b.iter(|| check_conjecture(23, &ex).unwrap()));
        g.bench_function(BenchmarkId::new("lemma_eh_n13", name), |b| b.iter(|| audit_lemma_eh(13, &ex).unwrap()));
        g.bench_function(BenchmarkId::new("olson_sampled_n128", name), |b| {
            b.iter(|| audit_olson_identities(128, &sampled).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sums, campaigns);
criterion_main!(benches);
