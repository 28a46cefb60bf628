//! Truncated maximal operators of Fejér and Riesz logarithmic means,
//! weighted variants, `H_p → L_p` ratio reports and weight-condition trends.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::hardy::{Martingale, PAtom};
use crate::kernels::{FejerConvention, HarmonicSums, MeanStream};
use crate::par::Execution;
use crate::transform::forward;

/// A weight `φ(n)`; logarithms are natural.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightSpec {
    /// `φ ≡ 1`.
    Unit,
    /// `φ(n) = log(n+1)`.
    Log,
    /// `φ(n) = (n+1)^{1/p-2} / log(n+1)`, i.e. the operator
    /// `sup log(n+1) |R_n f| / (n+1)^{1/p-2}`.
    PowerLog { p: f64 },
    /// `φ(n) = (n+1)^{1/p-2} log^{2[1/2+p]}(n+1)` with `[·]` the floor.
    Cond1 { p: f64 },
    /// `φ(n) = table[n-1]`.
    Table { values: Vec<f64> },
}

impl WeightSpec {
    pub fn eval(&self, n: usize) -> Result<f64> {
        let x = (n + 1) as f64;
        Ok(match self {
            Self::Unit => 1.0,
            Self::Log => x.ln(),
            Self::PowerLog { p } => x.powf(1.0 / p - 2.0) / x.ln(),
            Self::Cond1 { p } => {
                let e = 2.0 * (0.5 + p).floor();
                x.powf(1.0 / p - 2.0) * x.ln().powf(e)
            }
            Self::Table { values } => *n
                .checked_sub(1)
                .and_then(|i| values.get(i))
                .ok_or(Error::IndexOutOfRange {
                    index: n,
                    limit: values.len() + 1,
                })?,
        })
    }

    /// Checks `φ > 0` on `1..=n_max`. Generic weights (`unit`, `table`)
    /// must also satisfy `φ >= 1` and be nondecreasing; the closed-form
    /// presets are evaluated exactly as defined.
    pub fn validate(&self, n_max: usize) -> Result<()> {
        if let Self::PowerLog { p } | Self::Cond1 { p } = self {
            if !(*p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidExponent(*p));
            }
        }
        let generic = matches!(self, Self::Unit | Self::Table { .. });
        let mut prev = f64::NEG_INFINITY;
        for n in 1..=n_max {
            let v = self.eval(n)?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidWeight(format!("φ({n}) = {v} is not positive")));
            }
            if generic {
                if v < 1.0 {
                    return Err(Error::InvalidWeight(format!("φ({n}) = {v} < 1")));
                }
                if v < prev {
                    return Err(Error::InvalidWeight(format!("φ decreases at n = {n}")));
                }
            }
            prev = v;
        }
        Ok(())
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unit => write!(f, "unit"),
            Self::Log => write!(f, "log"),
            Self::PowerLog { p } => write!(f, "power-log:{p}"),
            Self::Cond1 { p } => write!(f, "cond1:{p}"),
            Self::Table { values } => {
                write!(f, "table:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    /// `unit`, `log`, `power-log:<p>`, `cond1:<p>` or `table:<v1>,<v2>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWeight(format!("cannot parse weight `{s}`"));
        let parse_p = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        match s.split_once(':') {
            None => match s.trim() {
                "unit" => Ok(Self::Unit),
                "log" => Ok(Self::Log),
                _ => Err(bad()),
            },
            Some(("power-log", v)) => Ok(Self::PowerLog { p: parse_p(v)? }),
            Some(("cond1", v)) => Ok(Self::Cond1 { p: parse_p(v)? }),
            Some(("table", v)) => {
                let values = v
                    .split(',')
                    .map(parse_p)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Table { values })
            }
            Some(_) => Err(bad()),
        }
    }
}

/// Which family of means the supremum runs over.
#[derive(Debug, Clone, PartialEq)]
pub enum MaximalOp {
    /// `σ* f = sup_n |σ_n f|`.
    Sigma(FejerConvention),
    /// `sup_n |R_n f| / φ(n)`; `Unit` gives `R*`, `Log` gives `R̃*`,
    /// `PowerLog(p)` gives `R̃_p*`.
    Riesz(WeightSpec),
}

impl MaximalOp {
    pub fn label(&self) -> String {
        match self {
            Self::Sigma(c) => format!("sigma[{c:?}]").to_lowercase(),
            Self::Riesz(WeightSpec::Unit) => "riesz".into(),
            Self::Riesz(w) => format!("riesz/{w}"),
        }
    }

    pub fn apply(&self, f: &LevelFunction, n_max: usize) -> Result<MaximalReport> {
        self.apply_with(f, n_max, Execution::default())
    }

    pub fn apply_with(&self, f: &LevelFunction, n_max: usize, exec: Execution) -> Result<MaximalReport> {
        match self {
            Self::Sigma(c) => sweep(f, n_max, Mean::Fejer(*c), None, self.label(), exec),
            Self::Riesz(w) => {
                w.validate(n_max)?;
                let table = (1..=n_max).map(|n| w.eval(n)).collect::<Result<Vec<_>>>()?;
                sweep(f, n_max, Mean::Riesz, Some(table), self.label(), exec)
            }
        }
    }
}

/// Pointwise supremum of a family of means.
#[derive(Debug, Clone)]
pub struct MaximalReport {
    pub op: String,
    pub n_max: usize,
    pub result: LevelFunction,
    /// Per rank (at the level of `result`), the first `n` attaining the sup.
    pub argmax: Vec<usize>,
}

impl MaximalReport {
    /// `(n, number of ranks whose sup is attained at n)`, ascending in `n`.
    pub fn argmax_histogram(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &n in &self.argmax {
            *counts.entry(n).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

pub fn sigma_star(f: &LevelFunction, n_max: usize, convention: FejerConvention) -> Result<MaximalReport> {
    MaximalOp::Sigma(convention).apply(f, n_max)
}

pub fn riesz_star(f: &LevelFunction, n_max: usize) -> Result<MaximalReport> {
    MaximalOp::Riesz(WeightSpec::Unit).apply(f, n_max)
}

pub fn weighted_riesz_star(f: &LevelFunction, w: &WeightSpec, n_max: usize) -> Result<MaximalReport> {
    MaximalOp::Riesz(w.clone()).apply(f, n_max)
}

#[derive(Debug, Clone, Copy)]
enum Mean {
    Fejer(FejerConvention),
    Riesz,
}

/// Core sweep. `f` is first restricted to the coarsest level `L` at which it
/// is measurable; for `n <= M_L` the means come from a [`MeanStream`], and
/// for `n > M_L` from `S_n f = f`, which gives
/// `Σ_{k<=n} S_k f = T_{M_L} + (n - M_L) f` and
/// `Σ_{k<=n} S_k f / k = U_{M_L} + (l_n - l_{M_L}) f` exactly.
fn sweep(
    f: &LevelFunction,
    n_max: usize,
    mean: Mean,
    weights: Option<Vec<f64>>,
    op: String,
    exec: Execution,
) -> Result<MaximalReport> {
    let base = f.base();
    if n_max == 0 {
        return Err(Error::ZeroIndex);
    }
    if n_max > f.len() {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            limit: f.len(),
        });
    }
    let coarse_level = f.measurable_level();
    let g = f.coarsen_exact(coarse_level).expect("measurable at its own level");
    let weight = |n: usize| weights.as_ref().map_or(1.0, |w| w[n - 1]);

    let mut stream = MeanStream::with_execution(&forward(&g), exec);
    let mut best = vec![(0.0f64, 0usize); g.len()];
    let head = n_max.min(g.len());
    while stream.index() < head {
        stream.advance();
        let n = stream.index();
        let w = weight(n);
        exec.for_each_indexed(&mut best, |i, b| {
            let v = match mean {
                Mean::Fejer(c) => stream.fejer_at(i, c),
                Mean::Riesz => stream.riesz_at(i),
            }
            .norm()
                / w;
            if v > b.0 || b.1 == 0 {
                *b = (v, n);
            }
        });
    }

    if n_max > head {
        let start = head;
        let harmonic = HarmonicSums::new(n_max);
        let l_start = harmonic.get(start);
        let weights: Vec<f64> = (start + 1..=n_max).map(weight).collect();
        exec.for_each_indexed(&mut best, |i, b| {
            let gi = g.values()[i];
            let (_, cesaro, riesz) = stream.sums_at(i);
            for (off, &w) in weights.iter().enumerate() {
                let n = start + 1 + off;
                let v: Complex64 = match mean {
                    Mean::Fejer(FejerConvention::Shifted) => {
                        (cesaro + gi * (n - start) as f64) / n as f64
                    }
                    Mean::Fejer(FejerConvention::Paper) => {
                        (cesaro + gi * (n - start - 1) as f64) / n as f64
                    }
                    Mean::Riesz => (riesz + gi * (harmonic.get(n) - l_start)) / harmonic.get(n),
                };
                let v = v.norm() / w;
                if v > b.0 {
                    *b = (v, n);
                }
            }
        });
    }

    let width = f.len() / g.len();
    let mut values = Vec::with_capacity(f.len());
    let mut argmax = Vec::with_capacity(f.len());
    for &(v, n) in &best {
        for _ in 0..width {
            values.push(Complex64::new(v, 0.0));
            argmax.push(n);
        }
    }
    Ok(MaximalReport {
        op,
        n_max,
        result: LevelFunction::new(base, f.level(), values)?,
        argmax,
    })
}

/// `∫_{G \ I} (Ta)^p dμ` for an atom `a` supported on `I`, with `p` the
/// atom's exponent and the sup running over `n <= n_max`.
pub fn off_support_integral(atom: &PAtom, op: &MaximalOp, n_max: usize) -> Result<f64> {
    let a = &atom.values;
    let base = a.base();
    let level = (a.level()..=base.depth())
        .find(|&l| base.order(l) >= n_max)
        .ok_or(Error::IndexOutOfRange {
            index: n_max,
            limit: base.size(),
        })?;
    let t = op.apply(&a.refine(level)?, n_max)?.result;
    t.lp_integral_outside(&atom.support, atom.p)
}

/// `max_{1<=n<=n_max} (1/l_n) (Σ_{j=1}^{n-1} 1/(j+1) + 1)`: the constant `c`
/// in `|R_n f| <= c max_{j<=n} |σ_j f|` obtained from the Abel rearrangement.
pub fn abel_constant(n_max: usize) -> f64 {
    let mut best: f64 = 0.0;
    let mut ln = 0.0;
    let mut tail = 0.0;
    for n in 1..=n_max {
        ln += 1.0 / n as f64;
        best = best.max((tail + 1.0) / ln);
        tail += 1.0 / (n + 1) as f64;
    }
    best
}

/// Strong and weak `H_p → L_p` ratios of an operator on one input.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub op: String,
    pub p: f64,
    pub n_max: usize,
    pub hardy_norm: f64,
    /// `‖Tf‖_p / ‖f‖_{H_p}`.
    pub strong: f64,
    /// `sup_λ λ^p μ(|Tf| > λ) / ‖f‖_{H_p}^p`.
    pub weak: f64,
    pub formula: &'static str,
}

pub const RATIO_FORMULA: &str =
    "strong = ||Tf||_p / ||f||_Hp; weak = sup_l l^p mu(|Tf| > l) / ||f||_Hp^p";

pub fn hp_to_lp_ratio(f: &LevelFunction, op: &MaximalOp, p: f64, n_max: usize) -> Result<RatioReport> {
    hp_to_lp_ratio_martingale(&Martingale::from_function(f), op, p, n_max)
}

/// As [`hp_to_lp_ratio`]; the operator acts on the top component.
pub fn hp_to_lp_ratio_martingale(
    m: &Martingale,
    op: &MaximalOp,
    p: f64,
    n_max: usize,
) -> Result<RatioReport> {
    let hardy = m.hardy_quasinorm(p)?;
    if hardy == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let top = m.component(m.top_level());
    let t = op.apply(top, n_max)?.result;
    Ok(RatioReport {
        op: op.label(),
        p,
        n_max,
        hardy_norm: hardy,
        strong: t.lp_quasinorm(p)? / hardy,
        weak: t.weak_lp(p)? / hardy.powf(p),
        formula: RATIO_FORMULA,
    })
}

/// The three divergence conditions on a weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightCondition {
    /// `log(n+1) / φ(n)`.
    LogOverWeight,
    /// `(n+1)^{1/p-2} / (log(n+1) φ(n))`.
    PowerOverLogWeight { p: f64 },
    /// `(n+1)^{1/p-2} log^{2[1/2+p]}(n+1) / φ(n)`.
    Cond1 { p: f64 },
}

impl WeightCondition {
    pub fn ratio(&self, w: &WeightSpec, n: usize) -> Result<f64> {
        let x = (n + 1) as f64;
        let phi = w.eval(n)?;
        Ok(match self {
            Self::LogOverWeight => x.ln() / phi,
            Self::PowerOverLogWeight { p } => x.powf(1.0 / p - 2.0) / (x.ln() * phi),
            Self::Cond1 { p } => {
                x.powf(1.0 / p - 2.0) * x.ln().powf(2.0 * (0.5 + p).floor()) / phi
            }
        })
    }
}

/// Finite-range trend of a sequence. Never a statement about limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// Strictly increasing, with growth per unit of `log n` that does not slow down.
    DivergingTrend,
    /// Bounded-looking: constant, saturating or oscillating.
    Flat,
    /// Non-increasing with a net decrease.
    Decreasing,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::DivergingTrend => "diverging-trend",
            Self::Flat => "flat",
            Self::Decreasing => "decreasing",
        })
    }
}

/// Relative tolerance below which consecutive values count as equal.
const TREND_TOL: f64 = 1e-9;

/// Share of the steepest earlier slope the final slope must keep.
const TREND_SLOPE_KEEP: f64 = 0.9;

/// Classifies `(n, value)` points ordered by `n`. Growth is measured per unit
/// of `log(n+1)`, so `log(n+1)` itself has constant slope.
///
/// `DivergingTrend` when every step increases and the final slope is at least
/// `TREND_SLOPE_KEEP` times every earlier slope; `Decreasing` when no step
/// increases and the sequence drops overall; `Flat` otherwise.
pub fn classify_trend(points: &[(usize, f64)]) -> Trend {
    if points.len() < 2 {
        return Trend::Flat;
    }
    let scale = points.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = TREND_TOL * scale;
    let incs: Vec<f64> = points.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let first = points[0].1;
    let last = points[points.len() - 1].1;
    if incs.iter().all(|&d| d > tol) {
        let slopes: Vec<f64> = points
            .windows(2)
            .map(|w| {
                let dx = ((w[1].0 + 1) as f64).ln() - ((w[0].0 + 1) as f64).ln();
                (w[1].1 - w[0].1) / dx.max(f64::MIN_POSITIVE)
            })
            .collect();
        let (tail, head) = slopes.split_last().unwrap();
        if head.iter().all(|&s| *tail >= TREND_SLOPE_KEEP * s) {
            return Trend::DivergingTrend;
        }
        return Trend::Flat;
    }
    if incs.iter().all(|&d| d <= tol) && last < first - tol {
        return Trend::Decreasing;
    }
    Trend::Flat
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendTable {
    pub weight: String,
    pub condition: WeightCondition,
    pub rows: Vec<(usize, f64)>,
    pub trend: Trend,
    pub note: &'static str,
}

pub fn weight_trend(w: &WeightSpec, condition: WeightCondition, grid: &[usize]) -> Result<TrendTable> {
    let rows = grid
        .iter()
        .map(|&n| Ok((n, condition.ratio(w, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrendTable {
        weight: w.to_string(),
        condition,
        trend: classify_trend(&rows),
        rows,
        note: "finite-range diagnostic over the given grid; not a limit statement",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::VilenkinBase;
    use crate::kernels::{fejer_mean, riesz_mean};

    #[test]
    fn weight_parsing_and_values() {
        for s in ["unit", "log", "power-log:0.3", "cond1:0.5", "table:1,1.5,2"] {
            assert_eq!(s.parse::<WeightSpec>().unwrap().to_string(), s);
        }
        assert!("bogus".parse::<WeightSpec>().is_err());
        assert!("power-log:x".parse::<WeightSpec>().is_err());
        assert_eq!(WeightSpec::Log.eval(1).unwrap(), 2f64.ln());
        let c = WeightSpec::Cond1 { p: 0.5 };
        assert!((c.eval(3).unwrap() - 4f64.ln().powi(2)).abs() < 1e-14);
        let t: WeightSpec = "table:1,0.5".parse().unwrap();
        assert!(matches!(t.validate(2), Err(Error::InvalidWeight(_))));
        let t: WeightSpec = "table:2,1.5".parse().unwrap();
        assert!(t.validate(2).is_err());
        assert!("table:1,2".parse::<WeightSpec>().unwrap().validate(3).is_err());
    }

    #[test]
    fn trends() {
        let grid: Vec<usize> = (1..=10).map(|k| (1 << k) - 1).collect();
        let t = weight_trend(&WeightSpec::Unit, WeightCondition::LogOverWeight, &grid).unwrap();
        assert_eq!(t.trend, Trend::DivergingTrend);
        let t = weight_trend(&WeightSpec::Log, WeightCondition::LogOverWeight, &grid).unwrap();
        assert_eq!(t.trend, Trend::Flat);
        assert!(t.rows.iter().all(|r| (r.1 - 1.0).abs() < 1e-15));
        let p = 0.3;
        let w = WeightSpec::Table {
            values: (1..=2048).map(|n| ((n + 1) as f64).powf(1.0 / p - 2.0)).collect(),
        };
        let t = weight_trend(&w, WeightCondition::PowerOverLogWeight { p }, &grid).unwrap();
        assert_eq!(t.trend, Trend::Decreasing);
        assert_eq!(classify_trend(&[(1, 1.0), (3, 2.0), (7, 2.1), (15, 2.12)]), Trend::Flat);
    }

    #[test]
    fn maximal_of_constant() {
        let b = VilenkinBase::new(&[2, 3], 4).unwrap();
        let f = LevelFunction::constant(&b, 4, Complex64::new(-1.5, 0.0)).unwrap();
        let r = riesz_star(&f, b.size()).unwrap();
        assert!(r.result.values().iter().all(|v| (v.re - 1.5).abs() < 1e-14));
        let r = weighted_riesz_star(&f, &WeightSpec::Log, 1).unwrap();
        assert!(r.result.values().iter().all(|v| (v.re - 1.5 / 2f64.ln()).abs() < 1e-14));
        assert!(riesz_star(&f, 0).is_err());
        assert!(riesz_star(&f, b.size() + 1).is_err());
    }

    #[test]
    fn tail_shortcut_matches_brute_force() {
        let b = VilenkinBase::new(&[2, 3], 5).unwrap();
        // measurable at level 2, evaluated at level 5
        let coarse = LevelFunction::from_real(&b, 2, &[3.0, -1.0, 0.5, 0.0, 2.0, -4.0]).unwrap();
        let f = coarse.refine(5).unwrap();
        let w = WeightSpec::Log;
        let n_max = b.size();
        let fast = weighted_riesz_star(&f, &w, n_max).unwrap();
        let fast_sigma = sigma_star(&f, n_max, FejerConvention::Paper).unwrap();
        let mut brute = vec![0.0f64; f.len()];
        let mut brute_sigma = vec![0.0f64; f.len()];
        for n in 1..=n_max {
            let r = riesz_mean(&f, n).unwrap();
            let s = fejer_mean(&f, n, FejerConvention::Paper).unwrap();
            let phi = w.eval(n).unwrap();
            for i in 0..f.len() {
                brute[i] = brute[i].max(r.values()[i].norm() / phi);
                brute_sigma[i] = brute_sigma[i].max(s.values()[i].norm());
            }
        }
        for i in 0..f.len() {
            assert!((fast.result.values()[i].re - brute[i]).abs() < 1e-12);
            assert!((fast_sigma.result.values()[i].re - brute_sigma[i]).abs() < 1e-12);
        }
        let hist = fast.argmax_histogram();
        assert_eq!(hist.iter().map(|h| h.1).sum::<usize>(), f.len());
    }

    #[test]
    fn abel_constant_small_cases() {
        assert_eq!(abel_constant(1), 1.0);
        // n = 2: (1/2 + 1) / (3/2) = 1
        assert!((abel_constant(2) - 1.0).abs() < 1e-15);
    }
}
