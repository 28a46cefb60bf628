//! Step functions on `G_m` resolved at a fixed level.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Cylinder, VilenkinBase};

/// A complex function constant on every level-`N` cylinder, stored as one
/// value per cylinder rank.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFunction {
    base: VilenkinBase,
    level: usize,
    values: Vec<Complex64>,
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

impl LevelFunction {
    pub fn new(base: &VilenkinBase, level: usize, values: Vec<Complex64>) -> Result<Self> {
        base.check_level(level)?;
        let expected = base.order(level);
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self {
            base: base.clone(),
            level,
            values,
        })
    }

    pub fn from_real(base: &VilenkinBase, level: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            base,
            level,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn from_fn(
        base: &VilenkinBase,
        level: usize,
        f: impl Fn(usize) -> Complex64,
    ) -> Result<Self> {
        base.check_level(level)?;
        let values = (0..base.order(level)).map(f).collect();
        Ok(Self {
            base: base.clone(),
            level,
            values,
        })
    }

    pub fn zeros(base: &VilenkinBase, level: usize) -> Result<Self> {
        Self::constant(base, level, Complex64::new(0.0, 0.0))
    }

    pub fn constant(base: &VilenkinBase, level: usize, c: Complex64) -> Result<Self> {
        base.check_level(level)?;
        Ok(Self {
            base: base.clone(),
            level,
            values: vec![c; base.order(level)],
        })
    }

    /// `scale · 1_I` at `level >= I.level`.
    pub fn indicator(base: &VilenkinBase, cylinder: &Cylinder, level: usize, scale: f64) -> Result<Self> {
        base.check_level(level)?;
        if level < cylinder.level {
            return Err(Error::LevelOutOfRange {
                level: cylinder.level,
                max: level,
            });
        }
        let mut f = Self::zeros(base, level)?;
        for v in &mut f.values[cylinder.rank_range(base, level)] {
            *v = Complex64::new(scale, 0.0);
        }
        Ok(f)
    }

    pub(crate) fn from_parts(base: VilenkinBase, level: usize, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), base.order(level));
        Self {
            base,
            level,
            values,
        }
    }

    pub fn base(&self) -> &VilenkinBase {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on the cylinder containing the point with full-depth rank `rank`.
    pub fn value_at_point(&self, point: &crate::group::GroupPoint) -> Complex64 {
        let r = self.base.rank_of(point, self.level).expect("point of this base");
        self.values[r]
    }

    /// Same function resolved at a finer level. Each value is repeated
    /// `M_level / M_self.level` times.
    pub fn refine(&self, level: usize) -> Result<Self> {
        self.base.check_level(level)?;
        if level < self.level {
            return Err(Error::LevelOutOfRange {
                level: self.level,
                max: level,
            });
        }
        if level == self.level {
            return Ok(self.clone());
        }
        let width = self.base.order(level) / self.base.order(self.level);
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat(v).take(width))
            .collect();
        Ok(Self::from_parts(self.base.clone(), level, values))
    }

    /// Coarsest level at which the function is still exactly representable.
    pub fn measurable_level(&self) -> usize {
        (0..=self.level)
            .find(|&n| {
                let width = self.base.order(self.level) / self.base.order(n);
                self.values
                    .chunks(width)
                    .all(|c| c.iter().all(|&v| v == c[0]))
            })
            .unwrap_or(self.level)
    }

    /// Restriction to a coarser level; only valid when the function is
    /// measurable there.
    pub fn coarsen_exact(&self, level: usize) -> Option<Self> {
        if level > self.level {
            return None;
        }
        let width = self.base.order(self.level) / self.base.order(level);
        let mut values = Vec::with_capacity(self.base.order(level));
        for c in self.values.chunks(width) {
            if c.iter().any(|&v| v != c[0]) {
                return None;
            }
            values.push(c[0]);
        }
        Some(Self::from_parts(self.base.clone(), level, values))
    }

    /// Haar integral `(1/M_N) Σ values`.
    pub fn integrate(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// Integral over a cylinder of level `<= self.level`.
    pub fn integrate_over(&self, cylinder: &Cylinder) -> Complex64 {
        let s: Complex64 = self.values[cylinder.rank_range(&self.base, self.level)]
            .iter()
            .sum();
        s / self.values.len() as f64
    }

    /// `‖f‖_p = (∫ |f|^p dμ)^{1/p}`.
    pub fn lp_quasinorm(&self, p: f64) -> Result<f64> {
        Ok(self.lp_integral(p)?.powf(1.0 / p))
    }

    /// `∫ |f|^p dμ`.
    pub fn lp_integral(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let s: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
        Ok(s / self.values.len() as f64)
    }

    /// `∫_{G \ I} |f|^p dμ`.
    pub fn lp_integral_outside(&self, cylinder: &Cylinder, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let inside = cylinder.rank_range(&self.base, self.level);
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| !inside.contains(i))
            .map(|(_, v)| v.norm().powf(p))
            .sum();
        // an empty f64 sum is -0.0
        Ok(s / self.values.len() as f64 + 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `sup_λ λ^p μ(|f| > λ)`, taken as `max_v v^p μ(|f| >= v)` over the
    /// finitely many values `v` of `|f|`.
    pub fn weak_lp(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self
            .weak_profile()
            .into_iter()
            .map(|(v, mu)| v.powf(p) * mu)
            .fold(0.0, f64::max))
    }

    /// `sup_λ λ μ(|f| > λ)^{1/p}`: the root form `weak_lp(f, p)^{1/p}`.
    pub fn weak_lp_root(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self
            .weak_profile()
            .into_iter()
            .map(|(v, mu)| v * mu.powf(1.0 / p))
            .fold(0.0, f64::max))
    }

    /// `μ(|f| >= threshold)`.
    pub fn level_set_measure(&self, threshold: f64) -> f64 {
        let c = self.values.iter().filter(|v| v.norm() >= threshold).count();
        c as f64 / self.values.len() as f64
    }

    /// Distinct positive values `v` of `|f|` with `μ(|f| >= v)`.
    fn weak_profile(&self) -> Vec<(f64, f64)> {
        let mut mods: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        mods.sort_by(|a, b| b.total_cmp(a));
        let total = mods.len() as f64;
        let mut out = Vec::new();
        let mut i = 0;
        while i < mods.len() {
            let v = mods[i];
            let mut j = i;
            while j < mods.len() && mods[j] == v {
                j += 1;
            }
            if v > 0.0 {
                out.push((v, j as f64 / total));
            }
            i = j;
        }
        out
    }

    /// Block averages over the level-`n` cylinders.
    pub fn conditional_expectation(&self, n: usize) -> Result<Self> {
        if n > self.level {
            return Err(Error::LevelOutOfRange {
                level: n,
                max: self.level,
            });
        }
        let width = self.base.order(self.level) / self.base.order(n);
        let values = self
            .values
            .chunks(width)
            .map(|c| c.iter().sum::<Complex64>() / width as f64)
            .collect();
        Ok(Self::from_parts(self.base.clone(), n, values))
    }

    /// Brings two operands to a common level.
    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let level = self.level.max(other.level);
        Ok((self.refine(level)?, other.refine(level)?))
    }

    pub fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| op(x, y))
            .collect();
        Ok(Self::from_parts(a.base, a.level, values))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn map(&self, op: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_parts(
            self.base.clone(),
            self.level,
            self.values.iter().map(|&v| op(v)).collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    /// `|f|` as a real-valued function.
    pub fn abs(&self) -> Self {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    /// Pointwise `sup_i |f_i|` of a family.
    pub fn sup_modulus<'a>(family: impl IntoIterator<Item = &'a Self>) -> Result<Option<Self>> {
        let mut acc: Option<Self> = None;
        for f in family {
            let g = f.abs();
            acc = Some(match acc {
                None => g,
                Some(a) => a.zip_with(&g, |x, y| Complex64::new(x.re.max(y.re), 0.0))?,
            });
        }
        Ok(acc)
    }

    /// Pointwise supremum of real parts; used for families already reduced to moduli.
    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| Complex64::new(a.re.max(b.re), 0.0))
    }

    /// `max_x |f(x) - g(x)|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let (a, b) = self.aligned(other)?;
        Ok(a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    /// CSV rows `rank,real,imag` with a header; shortest round-trip formatting.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "rank,real,imag")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{},{}", i, v.re, v.im)?;
        }
        Ok(())
    }
}
