//! The extremal martingales `f_k = D_{M_{2k+1}} - D_{M_{2k}}` and the exact
//! quantities behind their blow-up under weighted Riesz maximal operators.
//!
//! The index sequence is fixed to `n_k = k`; growth is driven by the weight.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::VilenkinBase;
use crate::hardy::Martingale;
use crate::kernels::{dirichlet, harmonic, partial_sum, riesz_mean, MeanStream};
use crate::maximal::{classify_trend, Trend, WeightSpec};
use crate::transform::{character_table, forward};

/// Relative slack when testing `Tf >= λ` at a threshold that `Tf` attains exactly.
pub const THRESHOLD_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CounterexampleInstance {
    pub k: usize,
    /// `M_{2k}`.
    pub low: usize,
    /// `M_{2k+1}`.
    pub high: usize,
    /// `f_k` at level `2k+1`.
    pub f: LevelFunction,
    /// `q^s = M_{2k} + M_{2s}` for `s = 0..k`.
    pub q_table: Vec<usize>,
}

/// Builds `f_k`; needs `2k+1 <= K`.
pub fn build_instance(base: &VilenkinBase, k: usize) -> Result<CounterexampleInstance> {
    let level = 2 * k + 1;
    base.check_level(level)?;
    let low = base.order(2 * k);
    let high = base.order(level);
    // D_{M_n} = M_n 1_{I_n}; exact zeros matter once |f|^p with p < 1 is integrated
    let low_width = high / low;
    let f = LevelFunction::from_fn(base, level, |r| {
        let mut v = 0.0;
        if r == 0 {
            v += high as f64;
        }
        if r < low_width {
            v -= low as f64;
        }
        Complex64::new(v, 0.0)
    })?;
    let q_table = (0..k).map(|s| low + base.order(2 * s)).collect();
    Ok(CounterexampleInstance {
        k,
        low,
        high,
        f,
        q_table,
    })
}

impl CounterexampleInstance {
    pub fn base(&self) -> &VilenkinBase {
        self.f.base()
    }

    /// `max_i |f̂(i) - 1_{[M_{2k}, M_{2k+1})}(i)|`.
    pub fn spectrum_defect(&self) -> f64 {
        forward(&self.f)
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let expect = if (self.low..self.high).contains(&i) { 1.0 } else { 0.0 };
                (c - Complex64::new(expect, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `S_i f_k` from its three-case closed form against the transform route.
#[derive(Debug, Clone)]
pub struct PartialSumCheck {
    pub i: usize,
    pub closed_form: LevelFunction,
    pub transform: LevelFunction,
    pub residual: f64,
}

pub fn partial_sum_closed_form(inst: &CounterexampleInstance, i: usize) -> Result<PartialSumCheck> {
    let base = inst.base();
    if i > base.size() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: base.size(),
        });
    }
    let fine = (0..=base.depth())
        .find(|&l| base.order(l) >= i)
        .unwrap_or(base.depth())
        .max(inst.f.level());
    let level = inst.f.level();
    let closed = if i <= inst.low {
        LevelFunction::zeros(base, level)?
    } else if i < inst.high {
        dirichlet(base, i, level)?.sub(&dirichlet(base, inst.low, level)?)?
    } else {
        inst.f.clone()
    };
    let transform = partial_sum(&inst.f.refine(fine)?, i)?;
    let residual = closed.max_abs_diff(&transform)?;
    Ok(PartialSumCheck {
        i,
        closed_form: closed,
        transform,
        residual,
    })
}

/// `max |D_{j+M} - D_M - ψ_M D_j|` with `M = M_{2k}`, for `1 <= j <= M - 1`.
pub fn shift_identity_check(inst: &CounterexampleInstance, j: usize) -> Result<f64> {
    if j == 0 || j >= inst.low {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: inst.low,
        });
    }
    let base = inst.base();
    let level = inst.f.level();
    let lhs = dirichlet(base, j + inst.low, level)?.sub(&dirichlet(base, inst.low, level)?)?;
    let psi = LevelFunction::new(base, level, character_table(base, inst.low, level)?)?;
    let rhs = psi.mul(&dirichlet(base, j, level)?)?;
    lhs.max_abs_diff(&rhs)
}

/// `|R_q f_k| / φ(q)` at `q = q^s` and its Dirichlet-sum representations.
#[derive(Debug, Clone)]
pub struct RieszAtQ {
    pub s: usize,
    pub q: usize,
    /// `|R_q f| / φ(q)`, computed from the spectral definition of `R_q`.
    pub value: LevelFunction,
    /// `max |R_q f - (1/l_q) ψ_M Σ_{j=1}^{M_{2s}} D_j / (j + M)|` over all points.
    pub shifted_sum_residual: f64,
    /// `max | |R_q f|/φ(q) - (1/(φ(q) l_q)) Σ_{j=1}^{M_{2s}} |D_j| / (j + M) |` over `I_{2s}`.
    pub modulus_sum_residual: f64,
    /// Whether `|R_q f|/φ(q) <= (1/(φ(q) l_q)) Σ |D_j| / (j + M)` at every point.
    pub modulus_sum_dominates: bool,
    /// `M_{2s}^2 / (φ(q) l_q M_{2k})`.
    pub lower_bound: f64,
    /// `min value / lower_bound` over `I_{2s} \ I_{2s+1}`.
    pub shell_min_ratio: f64,
}

pub fn riesz_at_q(inst: &CounterexampleInstance, s: usize, w: &WeightSpec) -> Result<RieszAtQ> {
    if s >= inst.q_table.len() {
        return Err(Error::IndexOutOfRange {
            index: s,
            limit: inst.q_table.len(),
        });
    }
    let base = inst.base();
    let level = inst.f.level();
    let q = inst.q_table[s];
    let phi = w.eval(q)?;
    let lq = harmonic(q);
    let m = inst.low as f64;
    let block = base.order(2 * s);

    let r = riesz_mean(&inst.f, q)?;

    let mut stream = MeanStream::kernels(base, level)?;
    let mut signed = vec![Complex64::new(0.0, 0.0); inst.f.len()];
    let mut moduli = vec![0.0f64; inst.f.len()];
    for j in 1..=block {
        stream.advance();
        let wj = 1.0 / (j as f64 + m);
        for (i, (a, b)) in signed.iter_mut().zip(moduli.iter_mut()).enumerate() {
            let d = stream.partial_at(i);
            *a += d * wj;
            *b += d.norm() * wj;
        }
    }
    let psi = character_table(base, inst.low, level)?;

    let inner = base.order(level) / base.order(2 * s);
    let shell = base.order(level) / base.order(2 * s + 1);
    let lower_bound = (block as f64).powi(2) / (phi * lq * m);

    let mut shifted_sum_residual: f64 = 0.0;
    let mut modulus_sum_residual: f64 = 0.0;
    let mut modulus_sum_dominates = true;
    let mut shell_min_ratio = f64::INFINITY;
    for i in 0..inst.f.len() {
        let rq = r.values()[i];
        shifted_sum_residual = shifted_sum_residual.max((rq - psi[i] * signed[i] / lq).norm());
        let value = rq.norm() / phi;
        let bound = moduli[i] / (phi * lq);
        if i < inner {
            modulus_sum_residual = modulus_sum_residual.max((value - bound).abs());
        }
        if value > bound * (1.0 + 1e-12) + 1e-15 {
            modulus_sum_dominates = false;
        }
        // I_{2s} \ I_{2s+1}: inside the first 2s-block, outside the first (2s+1)-block
        if i < inner && i >= shell {
            shell_min_ratio = shell_min_ratio.min(value / lower_bound);
        }
    }
    let value = r.map(|v| Complex64::new(v.norm() / phi, 0.0));
    Ok(RieszAtQ {
        s,
        q,
        value,
        shifted_sum_residual,
        modulus_sum_residual,
        modulus_sum_dominates,
        lower_bound,
        shell_min_ratio,
    })
}

/// `T f_k = max_s |R_{q^s} f_k| / φ(q^s)` at level `2k+1`.
pub fn q_table_operator(inst: &CounterexampleInstance, w: &WeightSpec) -> Result<LevelFunction> {
    let mut acc = vec![0.0f64; inst.f.len()];
    for &q in &inst.q_table {
        let phi = w.eval(q)?;
        let r = riesz_mean(&inst.f, q)?;
        for (a, v) in acc.iter_mut().zip(r.values()) {
            *a = a.max(v.norm() / phi);
        }
    }
    LevelFunction::from_real(inst.base(), inst.f.level(), &acc)
}

/// Which ratio a blow-up table reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioForm {
    /// `(∫ (Tf)^p)^{1/p} / ‖f‖_{H_p}`, used for `p >= 1/2`.
    Strong,
    /// `λ μ(Tf >= λ)^{1/p} / ‖f‖_{H_p}` with `λ = 1/(φ(M+1) l_{M+1} (M+1))`, `M = M_{2k}`, used for `p < 1/2`.
    Weak,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupRow {
    pub k: usize,
    pub n_k: usize,
    pub q_values: Vec<usize>,
    pub hardy_norm: f64,
    /// `∫ (Tf)^p` (strong) or `λ μ(Tf >= λ)^{1/p}` (weak).
    pub numerator: f64,
    pub ratio: f64,
    /// `k / φ(M_{2k+1})` (strong) or `(M+1)^{1/p-2} / (φ(M+1) log(M+1))` (weak).
    pub analytic_lower_bound: f64,
    /// `‖f_k‖_{H_p} / M_{2k}^{1-1/p}`.
    pub hardy_scaling_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupTable {
    pub weight: String,
    pub p: f64,
    pub form: RatioForm,
    pub rows: Vec<BlowupRow>,
    pub trend: Trend,
    /// Whether the ratio column strictly increases.
    pub strictly_increasing: bool,
}

pub fn blowup_table(
    base: &VilenkinBase,
    w: &WeightSpec,
    p: f64,
    k_range: std::ops::RangeInclusive<usize>,
) -> Result<BlowupTable> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    let form = if p >= 0.5 { RatioForm::Strong } else { RatioForm::Weak };
    let mut rows = Vec::new();
    for k in k_range {
        if k == 0 {
            return Err(Error::ZeroIndex);
        }
        let inst = build_instance(base, k)?;
        w.validate(inst.high)?;
        let hardy = Martingale::from_function(&inst.f).hardy_quasinorm(p)?;
        let t = q_table_operator(&inst, w)?;
        let m = inst.low as f64;
        let (numerator, ratio, analytic) = match form {
            RatioForm::Strong => {
                let num = t.lp_integral(p)?;
                (
                    num,
                    num.powf(1.0 / p) / hardy,
                    k as f64 / w.eval(inst.high)?,
                )
            }
            RatioForm::Weak => {
                let phi = w.eval(inst.low + 1)?;
                let lambda = 1.0 / (phi * harmonic(inst.low + 1) * (m + 1.0));
                let mu = t.level_set_measure(lambda * (1.0 - THRESHOLD_SLACK));
                let num = lambda * mu.powf(1.0 / p);
                let x = m + 1.0;
                (num, num / hardy, x.powf(1.0 / p - 2.0) / (phi * x.ln()))
            }
        };
        rows.push(BlowupRow {
            k,
            n_k: k,
            q_values: inst.q_table.clone(),
            hardy_norm: hardy,
            numerator,
            ratio,
            analytic_lower_bound: analytic,
            hardy_scaling_ratio: hardy / m.powf(1.0 - 1.0 / p),
        });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let points: Vec<(usize, f64)> = rows
        .iter()
        .map(|r| (base.order(2 * r.k + 1), r.ratio))
        .collect();
    Ok(BlowupTable {
        weight: w.to_string(),
        p,
        form,
        strictly_increasing: ratios.windows(2).all(|r| r[1] > r[0]),
        trend: classify_trend(&points),
        rows,
    })
}
