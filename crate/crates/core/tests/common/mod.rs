//! Brute-force oracles built straight from the definitions, sharing no code
//! with the library beyond the base's moduli list.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vilenkin::{LevelFunction, VilenkinBase};

/// Digits `x_0..x_{level-1}` of a rank, `x_0` most significant.
pub fn digits(moduli: &[usize], rank: usize, level: usize) -> Vec<usize> {
    let mut out = vec![0; level];
    let mut r = rank;
    for k in (0..level).rev() {
        out[k] = r % moduli[k];
        r /= moduli[k];
    }
    out
}

/// `ψ_n(x) = Π_k exp(2πi x_k n_k / m_k)` with `n = Σ n_k M_k`.
pub fn psi(moduli: &[usize], n: usize, x: &[usize]) -> Complex64 {
    let mut rest = n;
    let mut phase = 0.0;
    for (k, &m) in moduli.iter().enumerate() {
        let nk = rest % m;
        rest /= m;
        if k < x.len() {
            phase += (x[k] * nk) as f64 / m as f64;
        }
    }
    assert_eq!(rest, 0, "index beyond the base");
    Complex64::from_polar(1.0, 2.0 * PI * phase)
}

/// `f̂(n) = (1/M) Σ_x f(x) conj ψ_n(x)`, O(M²).
pub fn naive_forward(moduli: &[usize], level: usize, values: &[Complex64]) -> Vec<Complex64> {
    let m = values.len();
    (0..m)
        .map(|n| {
            values
                .iter()
                .enumerate()
                .map(|(r, v)| v * psi(&moduli[..level], n, &digits(moduli, r, level)).conj())
                .sum::<Complex64>()
                / m as f64
        })
        .collect()
}

/// `D_n(x) = Σ_{k<n} ψ_k(x)` at every rank of `level`.
pub fn naive_dirichlet(moduli: &[usize], n: usize, level: usize) -> Vec<Complex64> {
    let size: usize = moduli[..level].iter().product();
    (0..size)
        .map(|r| {
            let x = digits(moduli, r, level);
            (0..n).map(|k| psi(moduli, k, &x)).sum()
        })
        .collect()
}

pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

pub fn random_function(base: &VilenkinBase, level: usize, rng: &mut ChaCha8Rng) -> LevelFunction {
    let values = (0..base.order(level))
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    LevelFunction::new(base, level, values).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
