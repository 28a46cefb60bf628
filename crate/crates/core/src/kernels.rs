//! Dirichlet, Fejér and Riesz logarithmic kernels and means.
//!
//! Every mean used here is a spectral multiplier, so a single `S_n f`,
//! `σ_n f` or `R_n f` costs one fast transform pair. The definitional route
//! (summing partial sums one index at a time) is provided by
//! [`MeanStream`], which the maximal operators and the identity checks use
//! when every index up to some `n_max` is needed anyway.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::{GroupPoint, VilenkinBase};
use crate::par::Execution;
use crate::transform::{character_table, forward, inverse, Spectrum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which index range a Fejér average runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FejerConvention {
    /// `K_n = (1/n) Σ_{k=0}^{n-1} D_k`, `σ_n f = (1/n) Σ_{k=0}^{n-1} S_k f`.
    Paper,
    /// `K_n = (1/n) Σ_{k=1}^{n} D_k`, `σ_n f = (1/n) Σ_{k=1}^{n} S_k f`.
    /// Gát's closed form for `K_{2^A}` and the Abel identities for the Riesz
    /// means hold exactly in this form.
    #[default]
    Shifted,
}

impl std::str::FromStr for FejerConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "shifted" => Ok(Self::Shifted),
            other => Err(Error::InvalidBase(format!("unknown Fejér convention `{other}`"))),
        }
    }
}

/// Harmonic numbers `l_0 = 0, l_n = Σ_{k=1}^n 1/k`.
#[derive(Debug, Clone)]
pub struct HarmonicSums {
    table: Vec<f64>,
}

impl HarmonicSums {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for k in 1..=n_max {
            acc += 1.0 / k as f64;
            table.push(acc);
        }
        Self { table }
    }

    /// `l_n`; panics beyond the tabulated range.
    pub fn get(&self, n: usize) -> f64 {
        self.table[n]
    }

    pub fn len(&self) -> usize {
        self.table.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `l_n` computed directly.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn check_index(base: &VilenkinBase, n: usize, level: usize) -> Result<()> {
    base.check_level(level)?;
    if n > base.order(level) {
        return Err(Error::IndexOutOfRange {
            index: n,
            limit: base.order(level),
        });
    }
    Ok(())
}

fn check_mean_index(base: &VilenkinBase, n: usize, level: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    check_index(base, n, level)
}

/// Spectral multiplier of `S_n`.
fn partial_weight(n: usize) -> impl Fn(usize) -> f64 {
    move |j| if j < n { 1.0 } else { 0.0 }
}

/// Spectral multiplier of `σ_n`.
fn fejer_weight(n: usize, convention: FejerConvention) -> impl Fn(usize) -> f64 {
    let top = match convention {
        FejerConvention::Paper => n - 1,
        FejerConvention::Shifted => n,
    };
    move |j| {
        if j < top {
            (top - j) as f64 / n as f64
        } else {
            0.0
        }
    }
}

/// Spectral multiplier of `R_n`: `(l_n - l_j) / l_n` for `j < n`.
fn riesz_weight(n: usize) -> impl Fn(usize) -> f64 {
    let sums = HarmonicSums::new(n);
    let ln = sums.get(n);
    move |j| if j < n { (ln - sums.get(j)) / ln } else { 0.0 }
}

fn ones(base: &VilenkinBase, level: usize) -> Result<Spectrum> {
    Spectrum::indicator(base, level, 0..base.order(level))
}

/// `D_n = Σ_{k<n} ψ_k` at `level` (`D_0 = 0`). Requires `n <= M_level`.
pub fn dirichlet(base: &VilenkinBase, n: usize, level: usize) -> Result<LevelFunction> {
    check_index(base, n, level)?;
    Ok(inverse(&Spectrum::indicator(base, level, 0..n)?))
}

/// The Fejér kernel `K_n` under the chosen convention.
pub fn fejer_kernel(
    base: &VilenkinBase,
    n: usize,
    level: usize,
    convention: FejerConvention,
) -> Result<LevelFunction> {
    check_mean_index(base, n, level)?;
    Ok(inverse(&ones(base, level)?.multiply(fejer_weight(n, convention))))
}

/// The Riesz logarithmic kernel `L_n = (1/l_n) Σ_{k=1}^n D_k / k`.
pub fn riesz_kernel(base: &VilenkinBase, n: usize, level: usize) -> Result<LevelFunction> {
    check_mean_index(base, n, level)?;
    Ok(inverse(&ones(base, level)?.multiply(riesz_weight(n))))
}

/// `L_n` assembled from shifted Fejér kernels:
/// `(1/l_n) [Σ_{j=1}^{n-1} K_j / (j+1) + K_n]`.
pub fn riesz_kernel_abel(base: &VilenkinBase, n: usize, level: usize) -> Result<LevelFunction> {
    check_mean_index(base, n, level)?;
    riesz_mean_abel_spectrum(&ones(base, level)?, n, FejerConvention::Shifted)
}

/// `S_n f = Σ_{k<n} f̂(k) ψ_k`; `S_0 f = 0`.
pub fn partial_sum(f: &LevelFunction, n: usize) -> Result<LevelFunction> {
    check_index(f.base(), n, f.level())?;
    Ok(inverse(&forward(f).multiply(partial_weight(n))))
}

/// Every `S_0 f, ..., S_{M_N} f`, built by cumulative sums in the sample domain.
/// Memory is `O(M_N²)`; use [`MeanStream`] to visit them one at a time.
pub fn all_partial_sums(f: &LevelFunction) -> Vec<LevelFunction> {
    let mut stream = MeanStream::new(&forward(f));
    let mut out = vec![stream.partial_sum()];
    while stream.advance() {
        out.push(stream.partial_sum());
    }
    out
}

/// `σ_n f` under the chosen convention.
pub fn fejer_mean(f: &LevelFunction, n: usize, convention: FejerConvention) -> Result<LevelFunction> {
    check_mean_index(f.base(), n, f.level())?;
    Ok(inverse(&forward(f).multiply(fejer_weight(n, convention))))
}

/// `R_n f = (1/l_n) Σ_{k=1}^n S_k f / k`.
pub fn riesz_mean(f: &LevelFunction, n: usize) -> Result<LevelFunction> {
    check_mean_index(f.base(), n, f.level())?;
    Ok(inverse(&forward(f).multiply(riesz_weight(n))))
}

/// Right-hand side of the Abel rearrangement of `R_n f`:
/// `(1/l_n) [Σ_{j=1}^{n-1} σ_j f / (j+1) + σ_n f]`, with `σ_j` computed from
/// partial sums under `convention`.
pub fn riesz_mean_abel(f: &LevelFunction, n: usize, convention: FejerConvention) -> Result<LevelFunction> {
    check_mean_index(f.base(), n, f.level())?;
    riesz_mean_abel_spectrum(&forward(f), n, convention)
}

fn riesz_mean_abel_spectrum(
    s: &Spectrum,
    n: usize,
    convention: FejerConvention,
) -> Result<LevelFunction> {
    let mut stream = MeanStream::new(s);
    let mut acc = vec![ZERO; s.base().order(s.level())];
    let mut ln = 0.0;
    for j in 1..=n {
        stream.advance();
        ln += 1.0 / j as f64;
        let w = if j < n { 1.0 / (j + 1) as f64 } else { 1.0 };
        for (i, a) in acc.iter_mut().enumerate() {
            *a += stream.fejer_at(i, convention) * w;
        }
    }
    let values = acc.into_iter().map(|v| v / ln).collect();
    LevelFunction::new(s.base(), s.level(), values)
}

/// Group convolution `(f * g)(x) = ∫ f(t) g(x - t) dμ(t)`.
pub fn convolve(f: &LevelFunction, g: &LevelFunction) -> Result<LevelFunction> {
    convolve_with(f, g, Execution::default())
}

pub fn convolve_with(f: &LevelFunction, g: &LevelFunction, exec: Execution) -> Result<LevelFunction> {
    if f.base() != g.base() {
        return Err(Error::BaseMismatch);
    }
    let level = f.level().max(g.level());
    let (f, g) = (f.refine(level)?, g.refine(level)?);
    let base = f.base().clone();
    let size = base.order(level);
    let mut out = vec![ZERO; size];
    exec.for_each_indexed(&mut out, |x, slot| {
        let mut acc = ZERO;
        for (t, &ft) in f.values().iter().enumerate() {
            if ft != ZERO {
                acc += ft * g.values()[base.rank_sub(x, t, level)];
            }
        }
        *slot = acc / size as f64;
    });
    LevelFunction::new(&base, level, out)
}

/// Value of `K_{2^A}` (shifted convention, dyadic base) at `x` from Gát's
/// closed form: `(2^A+1)/2` on `I_A`, `2^{t-1}` on `I_A(e_t)` where `t` is the
/// first nonzero digit of `x`, and 0 elsewhere.
pub fn gat_closed_form(base: &VilenkinBase, a: usize, x: &GroupPoint) -> Result<f64> {
    if !base.is_dyadic() {
        return Err(Error::NonDyadic);
    }
    base.check_level(a)?;
    match x.first_nonzero() {
        Some(t) if t < a => {
            let rest_zero = x.coords()[t + 1..a].iter().all(|&c| c == 0);
            Ok(if rest_zero { 2f64.powi(t as i32 - 1) } else { 0.0 })
        }
        _ => Ok((2f64.powi(a as i32) + 1.0) / 2.0),
    }
}

/// Per-point running state of a [`MeanStream`].
#[derive(Debug, Clone, Copy)]
struct PointSums {
    /// `S_n f(x)`
    partial: Complex64,
    /// `Σ_{k=1}^n S_k f(x)`
    cesaro: Complex64,
    /// `Σ_{k=1}^n S_k f(x) / k`
    riesz: Complex64,
}

/// Walks `n = 0, 1, 2, ...` keeping `S_n f`, the Cesàro sum and the
/// logarithmic sum of partial sums at every point, straight from the
/// definitions. One step costs `O(M_N)`; zero coefficients cost nothing.
#[derive(Debug, Clone)]
pub struct MeanStream {
    spectrum: Spectrum,
    n: usize,
    harmonic: f64,
    state: Vec<PointSums>,
    exec: Execution,
}

impl MeanStream {
    pub fn new(spectrum: &Spectrum) -> Self {
        Self::with_execution(spectrum, Execution::default())
    }

    pub fn with_execution(spectrum: &Spectrum, exec: Execution) -> Self {
        let size = spectrum.base().order(spectrum.level());
        Self {
            spectrum: spectrum.clone(),
            n: 0,
            harmonic: 0.0,
            state: vec![
                PointSums {
                    partial: ZERO,
                    cesaro: ZERO,
                    riesz: ZERO,
                };
                size
            ],
            exec,
        }
    }

    /// Stream over the Dirichlet kernels `D_n` at `level`.
    pub fn kernels(base: &VilenkinBase, level: usize) -> Result<Self> {
        Ok(Self::new(&ones(base, level)?))
    }

    pub fn from_function(f: &LevelFunction) -> Self {
        Self::new(&forward(f))
    }

    /// Current index `n`.
    pub fn index(&self) -> usize {
        self.n
    }

    /// `l_n` for the current index.
    pub fn harmonic(&self) -> f64 {
        self.harmonic
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    pub fn limit(&self) -> usize {
        self.state.len()
    }

    /// Moves to `n + 1`. Returns `false` once `n = M_N`.
    pub fn advance(&mut self) -> bool {
        if self.n >= self.limit() {
            return false;
        }
        let coeff = self.spectrum.coeff(self.n);
        let next = self.n + 1;
        let inv = 1.0 / next as f64;
        if coeff == ZERO {
            self.exec.for_each_indexed(&mut self.state, |_, s| {
                s.cesaro += s.partial;
                s.riesz += s.partial * inv;
            });
        } else {
            let psi = character_table(self.spectrum.base(), self.n, self.spectrum.level())
                .expect("index below M_N");
            self.exec.for_each_indexed(&mut self.state, |i, s| {
                s.partial += coeff * psi[i];
                s.cesaro += s.partial;
                s.riesz += s.partial * inv;
            });
        }
        self.n = next;
        self.harmonic += inv;
        true
    }

    /// `(S_n f, Σ_{k<=n} S_k f, Σ_{k<=n} S_k f / k)` at rank `i`.
    pub(crate) fn sums_at(&self, i: usize) -> (Complex64, Complex64, Complex64) {
        let s = &self.state[i];
        (s.partial, s.cesaro, s.riesz)
    }

    /// `S_n f` at rank `i`.
    pub fn partial_at(&self, i: usize) -> Complex64 {
        self.state[i].partial
    }

    /// `σ_n f` at rank `i`; requires `n >= 1`.
    pub fn fejer_at(&self, i: usize, convention: FejerConvention) -> Complex64 {
        let s = &self.state[i];
        let sum = match convention {
            FejerConvention::Shifted => s.cesaro,
            FejerConvention::Paper => s.cesaro - s.partial,
        };
        sum / self.n as f64
    }

    /// `R_n f` at rank `i`; requires `n >= 1`.
    pub fn riesz_at(&self, i: usize) -> Complex64 {
        self.state[i].riesz / self.harmonic
    }

    fn collect(&self, op: impl Fn(usize) -> Complex64) -> LevelFunction {
        let values = (0..self.len()).map(op).collect();
        LevelFunction::from_parts(self.spectrum.base().clone(), self.spectrum.level(), values)
    }

    pub fn partial_sum(&self) -> LevelFunction {
        self.collect(|i| self.partial_at(i))
    }

    pub fn fejer(&self, convention: FejerConvention) -> LevelFunction {
        self.collect(|i| self.fejer_at(i, convention))
    }

    pub fn riesz(&self) -> LevelFunction {
        self.collect(|i| self.riesz_at(i))
    }
}

/// Largest pointwise gap between `R_n f` summed from its definition and the
/// Abel rearrangement through `σ_j f`, for every `n` in `1..=n_max`.
pub fn abel_residuals(
    f: &LevelFunction,
    n_max: usize,
    convention: FejerConvention,
) -> Result<Vec<f64>> {
    check_mean_index(f.base(), n_max, f.level())?;
    abel_residuals_spectrum(&forward(f), n_max, convention)
}

/// As [`abel_residuals`] for the kernels: `L_n` against the Fejér-kernel form.
pub fn abel_kernel_residuals(
    base: &VilenkinBase,
    level: usize,
    n_max: usize,
    convention: FejerConvention,
) -> Result<Vec<f64>> {
    check_mean_index(base, n_max, level)?;
    abel_residuals_spectrum(&ones(base, level)?, n_max, convention)
}

fn abel_residuals_spectrum(
    s: &Spectrum,
    n_max: usize,
    convention: FejerConvention,
) -> Result<Vec<f64>> {
    let mut stream = MeanStream::new(s);
    let mut tail = vec![ZERO; stream.len()];
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        stream.advance();
        let ln = stream.harmonic();
        let mut worst: f64 = 0.0;
        for (i, t) in tail.iter_mut().enumerate() {
            let sigma = stream.fejer_at(i, convention);
            let rhs = (*t + sigma) / ln;
            worst = worst.max((stream.riesz_at(i) - rhs).norm());
            *t += sigma / (n + 1) as f64;
        }
        out.push(worst);
    }
    Ok(out)
}

/// `∫ |K_n| dμ` for `n = 1..=n_max` at `level`.
pub fn fejer_l1_norms(
    base: &VilenkinBase,
    level: usize,
    n_max: usize,
    convention: FejerConvention,
) -> Result<Vec<f64>> {
    check_mean_index(base, n_max, level)?;
    let mut stream = MeanStream::kernels(base, level)?;
    let size = stream.len() as f64;
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        stream.advance();
        let s: f64 = (0..stream.len())
            .map(|i| stream.fejer_at(i, convention).norm())
            .sum();
        out.push(s / size);
    }
    Ok(out)
}
