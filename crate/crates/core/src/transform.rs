//! Vilenkin characters and the fast mixed-radix Vilenkin-Fourier transform.
//!
//! A level-`N` function stored by rank is an `m_0 × m_1 × … × m_{N-1}`
//! row-major array, and `ψ_n(x) = Π_k exp(2πi n_k x_k / m_k)` separates over
//! those axes. The transform is therefore one batch of size-`m_k` DFTs per
//! axis (direct summation, `m_k` is bounded), followed by a mixed-radix digit
//! reversal that maps the axis-ordered output to the natural index
//! `n = Σ n_k M_k`. Total work is `M_N · Σ_k m_k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::{GroupPoint, VilenkinBase};
use crate::par::Execution;

/// Vilenkin-Fourier coefficients `f̂(0..M_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    base: VilenkinBase,
    level: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(base: &VilenkinBase, level: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        base.check_level(level)?;
        if coeffs.len() != base.order(level) {
            return Err(Error::LengthMismatch {
                expected: base.order(level),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            base: base.clone(),
            level,
            coeffs,
        })
    }

    /// Coefficient table equal to 1 on `indices` and 0 elsewhere.
    pub fn indicator(
        base: &VilenkinBase,
        level: usize,
        indices: std::ops::Range<usize>,
    ) -> Result<Self> {
        base.check_level(level)?;
        let size = base.order(level);
        if indices.end > size {
            return Err(Error::IndexOutOfRange {
                index: indices.end,
                limit: size,
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); size];
        for c in &mut coeffs[indices] {
            *c = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            base: base.clone(),
            level,
            coeffs,
        })
    }

    pub fn base(&self) -> &VilenkinBase {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    /// `Σ |f̂(k)|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// One past the highest nonzero coefficient (0 for the zero spectrum).
    pub fn support_end(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .map_or(0, |i| i + 1)
    }

    /// Coefficientwise multiplier `f̂(j) ↦ w(j) f̂(j)`.
    pub fn multiply(&self, w: impl Fn(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * w(j))
            .collect();
        Self {
            base: self.base.clone(),
            level: self.level,
            coeffs,
        }
    }

    /// Same coefficients viewed at a finer level (zero padded).
    pub fn refine(&self, level: usize) -> Result<Self> {
        self.base.check_level(level)?;
        if level < self.level {
            return Err(Error::LevelOutOfRange {
                level: self.level,
                max: level,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(self.base.order(level), Complex64::new(0.0, 0.0));
        Ok(Self {
            base: self.base.clone(),
            level,
            coeffs,
        })
    }

    /// CSV rows `index,real,imag` with a header.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,real,imag")?;
        for (i, v) in self.coeffs.iter().enumerate() {
            writeln!(out, "{},{},{}", i, v.re, v.im)?;
        }
        Ok(())
    }
}

/// `r_k(x) = exp(2πi x_k / m_k)`.
pub fn rademacher(base: &VilenkinBase, k: usize, x: &GroupPoint) -> Result<Complex64> {
    if k >= base.depth() {
        return Err(Error::LevelOutOfRange {
            level: k,
            max: base.depth().saturating_sub(1),
        });
    }
    Ok(base.roots(k)[x.coord(k)])
}

/// `ψ_n(x) = Π_k r_k(x)^{n_k}`.
pub fn character(base: &VilenkinBase, n: usize, x: &GroupPoint) -> Result<Complex64> {
    let digits = base.nat_expand(n)?.digits;
    Ok(digits
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(k, &d)| base.roots(k)[(d * x.coord(k)) % base.modulus(k)])
        .product())
}

/// `ψ_n` sampled on every level-`level` cylinder, by rank. Requires `n < M_level`.
pub fn character_table(base: &VilenkinBase, n: usize, level: usize) -> Result<Vec<Complex64>> {
    base.check_level(level)?;
    if n >= base.order(level) {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: base.order(level),
        });
    }
    let mut table = Vec::with_capacity(base.order(level));
    table.push(Complex64::new(1.0, 0.0));
    let mut rest = n;
    for k in 0..level {
        let m = base.modulus(k);
        let digit = rest % m;
        rest /= m;
        let roots = base.roots(k);
        let prev = std::mem::take(&mut table);
        table.reserve(prev.len() * m);
        for &v in &prev {
            for x in 0..m {
                table.push(if digit == 0 { v } else { v * roots[(digit * x) % m] });
            }
        }
    }
    Ok(table)
}

/// `ψ_n` as a [`LevelFunction`] at `level`.
pub fn character_function(base: &VilenkinBase, n: usize, level: usize) -> Result<LevelFunction> {
    LevelFunction::new(base, level, character_table(base, n, level)?)
}

/// Position in the axis-ordered array of the spectral index `n`.
fn digit_reversal(base: &VilenkinBase, level: usize) -> Vec<usize> {
    let size = base.order(level);
    let strides: Vec<usize> = (0..level).map(|k| base.stride(k, level)).collect();
    let mut digits = vec![0usize; level];
    let mut pos = 0usize;
    let mut out = Vec::with_capacity(size);
    for _ in 0..size {
        out.push(pos);
        // increment n in mixed radix, least significant digit first
        for k in 0..level {
            digits[k] += 1;
            pos += strides[k];
            if digits[k] < base.modulus(k) {
                break;
            }
            pos -= strides[k] * digits[k];
            digits[k] = 0;
        }
    }
    out
}

/// One DFT stage along axis `k`, applied in place to every block.
fn stage(base: &VilenkinBase, level: usize, k: usize, data: &mut [Complex64], inverse: bool, exec: Execution) {
    let m = base.modulus(k);
    let stride = base.stride(k, level);
    let roots = base.roots(k);
    exec.for_each_chunk(data, m * stride, |_, block| {
        if m == 2 {
            let (a, b) = block.split_at_mut(stride);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
            return;
        }
        let input = block.to_vec();
        for j in 0..m {
            let out = &mut block[j * stride..(j + 1) * stride];
            out.copy_from_slice(&input[..stride]);
            for x in 1..m {
                let w = roots[(j * x) % m];
                let w = if inverse { w } else { w.conj() };
                let row = &input[x * stride..(x + 1) * stride];
                for (o, &v) in out.iter_mut().zip(row) {
                    *o += w * v;
                }
            }
        }
    });
}

/// `f̂(k) = ∫ f ψ̄_k dμ` for every `k < M_N`.
pub fn forward(f: &LevelFunction) -> Spectrum {
    forward_with(f, Execution::default())
}

pub fn forward_with(f: &LevelFunction, exec: Execution) -> Spectrum {
    let base = f.base();
    let level = f.level();
    let mut data = f.values().to_vec();
    for k in 0..level {
        stage(base, level, k, &mut data, false, exec);
    }
    let scale = 1.0 / base.order(level) as f64;
    let coeffs = digit_reversal(base, level)
        .into_iter()
        .map(|p| data[p] * scale)
        .collect();
    Spectrum {
        base: base.clone(),
        level,
        coeffs,
    }
}

/// `f = Σ_k f̂(k) ψ_k`.
pub fn inverse(s: &Spectrum) -> LevelFunction {
    inverse_with(s, Execution::default())
}

pub fn inverse_with(s: &Spectrum, exec: Execution) -> LevelFunction {
    let base = &s.base;
    let level = s.level;
    let mut data = vec![Complex64::new(0.0, 0.0); base.order(level)];
    for (n, p) in digit_reversal(base, level).into_iter().enumerate() {
        data[p] = s.coeffs[n];
    }
    for k in 0..level {
        stage(base, level, k, &mut data, true, exec);
    }
    LevelFunction::from_parts(base.clone(), level, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_values() {
        let d = VilenkinBase::dyadic(2).unwrap();
        let x = d.point(&[1]).unwrap();
        assert_eq!(rademacher(&d, 0, &x).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(rademacher(&d, 1, &x).unwrap(), Complex64::new(1.0, 0.0));
        assert!(rademacher(&d, 2, &x).is_err());
        let t = VilenkinBase::new(&[3], 2).unwrap();
        let x = t.point(&[1]).unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((rademacher(&t, 0, &x).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn characters() {
        let d = VilenkinBase::dyadic(3).unwrap();
        for r in 0..8 {
            let x = d.point_of(r, 3).unwrap();
            assert_eq!(character(&d, 0, &x).unwrap(), Complex64::new(1.0, 0.0));
            let expect = if x.coord(0) == 1 { -1.0 } else { 1.0 };
            assert_eq!(character(&d, 1, &x).unwrap().re, expect);
        }
        for n in 0..8 {
            assert_eq!(character(&d, n, &d.zero()).unwrap(), Complex64::new(1.0, 0.0));
        }
        assert!(character(&d, 8, &d.zero()).is_err());
    }

    #[test]
    fn table_matches_pointwise_characters() {
        let b = VilenkinBase::new(&[3, 2, 4], 3).unwrap();
        for n in 0..b.size() {
            let t = character_table(&b, n, 3).unwrap();
            for (r, v) in t.iter().enumerate() {
                let x = b.point_of(r, 3).unwrap();
                assert!((v - character(&b, n, &x).unwrap()).norm() < 1e-14);
            }
        }
        assert!(character_table(&b, 6, 2).is_err());
    }

    #[test]
    fn transform_of_characters_and_constants() {
        let b = VilenkinBase::new(&[2, 3], 4).unwrap();
        for j in [0, 1, 5, 17, 35] {
            let s = forward(&character_function(&b, j, 4).unwrap());
            for (k, c) in s.coeffs().iter().enumerate() {
                let expect = if k == j { 1.0 } else { 0.0 };
                assert!((c - Complex64::new(expect, 0.0)).norm() < 1e-12, "j={j} k={k}");
            }
        }
        let one = LevelFunction::constant(&b, 3, Complex64::new(1.0, 0.0)).unwrap();
        let s = forward(&one);
        assert!((s.coeff(0) - 1.0).norm() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn sequential_and_default_execution_agree() {
        let b = VilenkinBase::new(&[2, 3, 5], 6).unwrap();
        let f = LevelFunction::from_fn(&b, 6, |r| Complex64::new((r % 7) as f64, (r % 3) as f64)).unwrap();
        let a = forward_with(&f, Execution::Sequential);
        let c = forward_with(&f, Execution::default());
        assert_eq!(a, c);
        assert_eq!(inverse_with(&a, Execution::Sequential), inverse_with(&a, Execution::default()));
    }
}
