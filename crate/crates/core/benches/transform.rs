use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use vilenkin::kernels::convolve_with;
use vilenkin::transform::{forward_with, inverse_with};
use vilenkin::{Execution, LevelFunction, VilenkinBase};

fn strategies() -> Vec<(&'static str, Execution)> {
    #[allow(unused_mut)]
    let mut s = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    s.push(("parallel", Execution::Parallel));
    s
}

fn sample(base: &VilenkinBase, level: usize) -> LevelFunction {
    LevelFunction::from_fn(base, level, |r| {
        Complex64::new((r as f64 * 0.37).sin(), (r as f64 * 0.11).cos())
    })
    .unwrap()
}

fn transforms(c: &mut Criterion) {
    let cases = [
        ("dyadic-14", VilenkinBase::dyadic(14).unwrap()),
        ("dyadic-18", VilenkinBase::dyadic(18).unwrap()),
        ("2,3-10", VilenkinBase::new(&[2, 3], 10).unwrap()),
        ("5,7-6", VilenkinBase::new(&[5, 7], 6).unwrap()),
    ];
    let mut group = c.benchmark_group("forward+inverse");
    group.sample_size(20);
    for (name, base) in &cases {
        let f = sample(base, base.depth());
        for (label, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(label, name), &f, |b, f| {
                b.iter(|| inverse_with(&forward_with(black_box(f), exec), exec))
            });
        }
    }
    group.finish();
}

fn convolution(c: &mut Criterion) {
    let base = VilenkinBase::new(&[2, 3], 7).unwrap();
    let f = sample(&base, 7);
    let g = f.map(|v| v.conj());
    let mut group = c.benchmark_group("convolve");
    group.sample_size(10);
    for (label, exec) in strategies() {
        group.bench_function(label, |b| b.iter(|| convolve_with(black_box(&f), &g, exec)));
    }
    group.finish();
}

criterion_group!(benches, transforms, convolution);
criterion_main!(benches);
