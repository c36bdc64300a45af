use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ncbundle_bench::{element_pair, t3_projectable, theta_t3};
use ncbundle_core::build_flat_triple;
use ncbundle_core::connection::{check_sector_equivalence, twisted_dirac, ConnectionFamily};
use ncbundle_core::gns::spectrum;
use ncbundle_core::kr_case;

fn algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("multiply");
    for terms in [8, 64] {
        let (a, b) = element_pair(3, 4, terms, 7);
        g.bench_with_input(BenchmarkId::from_parameter(terms), &terms, |bench, _| {
            bench.iter(|| black_box(&a) * black_box(&b))
        });
    }
    g.finish();
}

fn triple(c: &mut Criterion) {
    let th = theta_t3();
    let mut g = c.benchmark_group("build_flat_triple_t3");
    for cutoff in [3, 5] {
        g.bench_with_input(
            BenchmarkId::from_parameter(cutoff),
            &cutoff,
            |bench, &cutoff| bench.iter(|| build_flat_triple(&th, 2, 1, cutoff).unwrap()),
        );
    }
    g.finish();
}

fn twist_and_spectrum(c: &mut Criterion) {
    let p = t3_projectable(5);
    let family = ConnectionFamily::constant(&theta_t3(), 2, 1, &[1.0, -2.0]).unwrap();
    c.bench_function("twisted_dirac_t3_cutoff5", |b| {
        b.iter(|| twisted_dirac(&p, &family).unwrap())
    });
    let tw = twisted_dirac(&p, &family).unwrap();
    c.bench_function("spectrum_script_d_omega_t3_cutoff5", |b| {
        b.iter(|| spectrum(&tw.script_d_omega).unwrap())
    });
    let degrees: Vec<Vec<i32>> = (-1..=1)
        .flat_map(|a| (-1..=1).map(move |b| vec![a, b]))
        .collect();
    c.bench_function("sector_equivalence_t3_cutoff5", |b| {
        b.iter(|| check_sector_equivalence(&tw, &p, &degrees, 3, 1e-12).unwrap())
    });
}

fn base_kr(c: &mut Criterion) {
    let mut g = c.benchmark_group("kr_case");
    g.sample_size(10);
    for (j, n, cutoff) in [(1, 2, 3), (2, 3, 2)] {
        g.bench_function(format!("j{j}_n{n}_cutoff{cutoff}"), |b| {
            b.iter(|| kr_case(j, n, cutoff, 1, 1e-12).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, algebra, triple, twist_and_spectrum, base_kr);
criterion_main!(benches);
