mod common;

use common::*;
use num_complex::Complex64;
use vilenkin::kernels::{
    abel_kernel_residuals, abel_residuals, all_partial_sums, convolve, dirichlet, fejer_kernel, fejer_mean,
    gat_closed_form, partial_sum, riesz_kernel, riesz_kernel_abel, riesz_mean,
};
use vilenkin::transform::forward;
use vilenkin::{FejerConvention, VilenkinBase};

#[test]
fn dirichlet_at_orders_is_a_scaled_indicator() {
    let cases = [
        VilenkinBase::dyadic(12).unwrap(),
        VilenkinBase::new(&[2, 3], 7).unwrap(),
        VilenkinBase::new(&[3], 6).unwrap(),
    ];
    for b in &cases {
        let top = b.depth();
        for n in 0..=top {
            let d = dirichlet(b, b.order(n), top).unwrap();
            for (r, v) in d.values().iter().enumerate() {
                let in_cylinder = digits(b.moduli(), r, top)[..n].iter().all(|&x| x == 0);
                let expect = if in_cylinder { b.order(n) as f64 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn dirichlet_matches_character_sums() {
    let b = VilenkinBase::new(&[3, 2, 4], 3).unwrap();
    for n in 0..=b.size() {
        let d = dirichlet(&b, n, 3).unwrap();
        assert!(max_diff(d.values(), &naive_dirichlet(b.moduli(), n, 3)) < 1e-10, "n={n}");
    }
}

#[test]
fn fejer_closed_form_against_brute_force() {
    let b = VilenkinBase::dyadic(10).unwrap();
    let size = b.size();
    let points: Vec<Vec<usize>> = (0..size).map(|r| digits(b.moduli(), r, 10)).collect();
    let mut d = vec![Complex64::new(0.0, 0.0); size];
    let mut cesaro = vec![Complex64::new(0.0, 0.0); size];
    for k in 1..=size {
        for (i, x) in points.iter().enumerate() {
            d[i] += psi(b.moduli(), k - 1, x);
            cesaro[i] += d[i];
        }
        if k.is_power_of_two() {
            let a = k.trailing_zeros() as usize;
            let lib = fejer_kernel(&b, k, 10, FejerConvention::Shifted).unwrap();
            for (i, x) in points.iter().enumerate() {
                let brute = cesaro[i] / k as f64;
                let closed = gat_closed_form(&b, a, &b.point(x).unwrap()).unwrap();
                assert!((brute - Complex64::new(closed, 0.0)).norm() < 1e-10, "A={a} rank={i}");
                assert!((lib.values()[i] - brute).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn fejer_kernel_integrals() {
    let b = VilenkinBase::new(&[2, 3], 5).unwrap();
    for n in 1..=b.size() {
        let s = fejer_kernel(&b, n, 5, FejerConvention::Shifted).unwrap().integrate();
        let p = fejer_kernel(&b, n, 5, FejerConvention::Paper).unwrap().integrate();
        assert!((s.re - 1.0).abs() < 1e-12 && s.im.abs() < 1e-12);
        assert!((p.re - (n - 1) as f64 / n as f64).abs() < 1e-12);
    }
}

fn naive_means(b: &VilenkinBase, level: usize, f: &[Complex64], n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let coeffs = naive_forward(b.moduli(), level, f);
    let size = f.len();
    let partial = |k: usize| -> Vec<Complex64> {
        (0..size)
            .map(|r| {
                let x = digits(b.moduli(), r, level);
                (0..k).map(|j| coeffs[j] * psi(b.moduli(), j, &x)).sum()
            })
            .collect()
    };
    let mut sigma = vec![Complex64::new(0.0, 0.0); size];
    let mut riesz = vec![Complex64::new(0.0, 0.0); size];
    for k in 1..=n {
        let s = partial(k);
        for i in 0..size {
            sigma[i] += s[i] / n as f64;
            riesz[i] += s[i] / (k as f64 * harmonic(n));
        }
    }
    (sigma, riesz)
}

#[test]
fn means_match_their_definitions() {
    let b = VilenkinBase::new(&[2, 3], 4).unwrap();
    let f = random_function(&b, 4, &mut rng(21));
    for n in [1, 2, 5, 13, 36] {
        let (sigma, riesz) = naive_means(&b, 4, f.values(), n);
        let lib_sigma = fejer_mean(&f, n, FejerConvention::Shifted).unwrap();
        let lib_riesz = riesz_mean(&f, n).unwrap();
        assert!(max_diff(lib_sigma.values(), &sigma) < 1e-10);
        assert!(max_diff(lib_riesz.values(), &riesz) < 1e-10);
    }
}

#[test]
fn riesz_mean_is_convolution_with_its_kernel() {
    let b = VilenkinBase::new(&[3, 2], 4).unwrap();
    let f = random_function(&b, 4, &mut rng(22));
    for n in [1, 4, 9, 36] {
        let via_kernel = convolve(&f, &riesz_kernel(&b, n, 4).unwrap()).unwrap();
        assert!(via_kernel.max_abs_diff(&riesz_mean(&f, n).unwrap()).unwrap() < 1e-10);
        let abel = riesz_kernel_abel(&b, n, 4).unwrap();
        assert!(abel.max_abs_diff(&riesz_kernel(&b, n, 4).unwrap()).unwrap() < 1e-10);
    }
}

#[test]
fn partial_sums_at_orders_are_conditional_expectations() {
    let b = VilenkinBase::new(&[2, 5], 4).unwrap();
    let f = random_function(&b, 4, &mut rng(23));
    let all = all_partial_sums(&f);
    for n in 0..=4 {
        let e = f.conditional_expectation(n).unwrap().refine(4).unwrap();
        assert!(partial_sum(&f, b.order(n)).unwrap().max_abs_diff(&e).unwrap() < 1e-12);
        assert!(all[b.order(n)].max_abs_diff(&e).unwrap() < 1e-12);
    }
}

#[test]
fn abel_rearrangement_is_exact_only_for_the_shifted_kernel() {
    for b in [VilenkinBase::dyadic(8).unwrap(), VilenkinBase::new(&[3, 2], 6).unwrap()] {
        let top = b.depth();
        let f = random_function(&b, top, &mut rng(24));
        let worst = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
        assert!(worst(abel_residuals(&f, b.size(), FejerConvention::Shifted).unwrap()) < 1e-9);
        assert!(worst(abel_kernel_residuals(&b, top, b.size(), FejerConvention::Shifted).unwrap()) < 1e-9);
        // the unshifted kernel leaves the boundary term of the summation by parts
        assert!(worst(abel_kernel_residuals(&b, top, b.size(), FejerConvention::Paper).unwrap()) > 1e-3);
    }
}

#[test]
fn spectrum_of_a_mean_is_the_multiplier() {
    let b = VilenkinBase::new(&[2, 3], 4).unwrap();
    let f = random_function(&b, 4, &mut rng(25));
    let fh = forward(&f);
    let n = 17;
    let r = forward(&riesz_mean(&f, n).unwrap());
    for j in 0..b.size() {
        let w = if j < n { (harmonic(n) - harmonic(j)) / harmonic(n) } else { 0.0 };
        assert!((r.coeff(j) - fh.coeff(j) * w).norm() < 1e-12);
    }
}
