mod common;

use common::*;
use num_complex::Complex64;
use vilenkin::transform::{character, character_function, forward, forward_with, inverse, inverse_with};
use vilenkin::{Execution, VilenkinBase};

fn bases() -> Vec<VilenkinBase> {
    vec![
        VilenkinBase::dyadic(10).unwrap(),
        VilenkinBase::new(&[2, 3], 8).unwrap(),
        VilenkinBase::new(&[3, 5, 2], 5).unwrap(),
    ]
}

#[test]
fn fast_transform_matches_naive_sum() {
    let mut r = rng(11);
    for b in bases() {
        assert!(b.size() <= 1296);
        let f = random_function(&b, b.depth(), &mut r);
        let naive = naive_forward(b.moduli(), b.depth(), f.values());
        let scale = naive.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for exec in [Execution::Sequential, Execution::default()] {
            let fast = forward_with(&f, exec);
            assert!(max_diff(fast.coeffs(), &naive) <= 1e-10 * scale, "{:?}", b.moduli());
        }
    }
}

#[test]
fn parseval_on_random_functions() {
    let mut r = rng(12);
    let bs = bases();
    for i in 0..100 {
        let b = &bs[i % bs.len()];
        let f = random_function(b, b.depth(), &mut r);
        let energy = f.lp_integral(2.0).unwrap();
        let s = forward(&f).energy();
        assert!((energy - s).abs() <= 1e-10 * energy);
    }
}

#[test]
fn round_trip() {
    let mut r = rng(13);
    for b in bases() {
        for level in [1, b.depth() / 2, b.depth()] {
            let f = random_function(&b, level, &mut r);
            for exec in [Execution::Sequential, Execution::default()] {
                let back = inverse_with(&forward_with(&f, exec), exec);
                assert!(back.max_abs_diff(&f).unwrap() < 1e-9);
            }
        }
    }
}

#[test]
fn characters_are_orthonormal() {
    let b = VilenkinBase::new(&[2, 3, 4], 3).unwrap();
    let n = b.size();
    let table: Vec<_> = (0..n).map(|k| character_function(&b, k, 3).unwrap()).collect();
    for i in 0..n {
        for j in 0..n {
            let ip = table[i].mul(&table[j].map(|c| c.conj())).unwrap().integrate();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((ip - Complex64::new(expect, 0.0)).norm() < 1e-12, "{i} {j}");
        }
    }
}

#[test]
fn characters_match_the_product_formula() {
    let b = VilenkinBase::new(&[3, 2, 5], 3).unwrap();
    for n in 0..b.size() {
        for r in 0..b.size() {
            let x = b.point_of(r, 3).unwrap();
            let lib = character(&b, n, &x).unwrap();
            let oracle = psi(b.moduli(), n, &digits(b.moduli(), r, 3));
            assert!((lib - oracle).norm() < 1e-12);
        }
    }
}

#[test]
fn character_group_law() {
    let b = VilenkinBase::new(&[2, 3], 4).unwrap();
    for n in [1, 5, 17, 35] {
        for (a, c) in [(3, 7), (11, 30), (35, 35)] {
            let x = b.point_of(a, 4).unwrap();
            let y = b.point_of(c, 4).unwrap();
            let s = b.add(&x, &y).unwrap();
            let lhs = character(&b, n, &s).unwrap();
            let rhs = character(&b, n, &x).unwrap() * character(&b, n, &y).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
            let d = b.sub(&x, &y).unwrap();
            let rhs = character(&b, n, &x).unwrap() * character(&b, n, &y).unwrap().conj();
            assert!((character(&b, n, &d).unwrap() - rhs).norm() < 1e-12);
        }
    }
}

#[test]
fn inverse_of_indicator_spectrum_is_dirichlet() {
    let b = VilenkinBase::new(&[2, 3], 5).unwrap();
    for n in [0, 1, 5, 7, 24, 72] {
        let s = vilenkin::Spectrum::indicator(&b, 5, 0..n).unwrap();
        let d = inverse(&s);
        assert!(max_diff(d.values(), &naive_dirichlet(b.moduli(), n, 5)) < 1e-10);
    }
}
