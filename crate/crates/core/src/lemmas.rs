//! Empirical constants for the Fejér-kernel integral bounds over the tiles of
//! `G_m \ I_N`.
//!
//! For `t ∈ I_N` the difference `x - t` runs over `I_N(x)`, so
//! `∫_{I_N} |K_n(x - t)| dμ(t) = ∫_{I_N(x)} |K_n| dμ` depends only on the
//! level-`N` coset of `x`. The sweep streams `K_n` once at full depth and
//! integrates it over every coset outside `I_N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{CosetClass, VilenkinBase};
use crate::kernels::{FejerConvention, MeanStream};

/// Running maxima of `LHS / RHS` for both integral bounds.
#[derive(Debug, Clone, Serialize)]
pub struct BoundStats {
    /// Max ratio over every `n` in the sweep (the empirical constant).
    pub max_ratio: f64,
    /// Max ratio over `n <= n_max / 2`.
    pub max_ratio_lower_half: f64,
    /// `max_ratio / max_ratio_lower_half - 1`.
    pub top_octave_growth: f64,
    /// Index `n` at which the overall max was attained.
    pub argmax_n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub class: CosetClass,
    pub rank: usize,
    pub single_integral_max_ratio: f64,
    pub summed_integral_max_ratio: f64,
}

/// Sweep result for one support level `N`.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma34Report {
    pub moduli: Vec<usize>,
    pub depth: usize,
    pub support_level: usize,
    pub n_max: usize,
    pub convention: FejerConvention,
    /// `∫_{I_N(x)} |K_n|` against `M_l M_k / (n M_N)` (pairs) or `M_k / M_N` (singles), `n >= M_N`.
    pub single_integral: BoundStats,
    /// `Σ_{j=M_N+1}^n ∫_{I_N(x)} |K_j| / (j+1)` against `M_k M_l / M_N²` (pairs) or
    /// `M_k l_n / M_N` (singles), `n > M_N`.
    pub summed_integral: BoundStats,
    pub classes: Vec<ClassRecord>,
}

struct Running {
    max: f64,
    max_half: f64,
    argmax: usize,
}

impl Running {
    fn new() -> Self {
        Self {
            max: 0.0,
            max_half: 0.0,
            argmax: 0,
        }
    }

    fn push(&mut self, n: usize, n_max: usize, ratio: f64) {
        if ratio > self.max {
            self.max = ratio;
            self.argmax = n;
        }
        if 2 * n <= n_max {
            self.max_half = self.max_half.max(ratio);
        }
    }

    fn finish(self) -> BoundStats {
        let growth = if self.max_half > 0.0 {
            self.max / self.max_half - 1.0
        } else {
            f64::INFINITY
        };
        BoundStats {
            max_ratio: self.max,
            max_ratio_lower_half: self.max_half,
            top_octave_growth: growth,
            argmax_n: self.argmax,
        }
    }
}

/// Runs the sweep for support level `support_level` over `n ∈ [M_N, n_max]`,
/// evaluating kernels at the full depth of `base`. Cosets inside `I_N` are
/// excluded.
pub fn lemma34_sweep(
    base: &VilenkinBase,
    support_level: usize,
    n_max: usize,
    convention: FejerConvention,
) -> Result<Lemma34Report> {
    let depth = base.depth();
    if support_level == 0 || support_level > depth {
        return Err(Error::LevelOutOfRange {
            level: support_level,
            max: depth,
        });
    }
    let mn = base.order(support_level);
    if n_max < mn || n_max > base.size() {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            limit: base.size(),
        });
    }
    let cosets: Vec<(usize, CosetClass)> = (1..mn)
        .filter_map(|r| base.coset_class(r, support_level).map(|c| (r, c)))
        .collect();
    let width = base.size() / mn;
    let measure = 1.0 / base.size() as f64;
    let order = |k: usize| base.order(k) as f64;
    let mn_f = mn as f64;

    let mut stream = MeanStream::kernels(base, depth)?;
    let mut summed = vec![0.0; cosets.len()];
    let mut class_single = vec![0.0f64; cosets.len()];
    let mut class_summed = vec![0.0f64; cosets.len()];
    let mut single = Running::new();
    let mut total = Running::new();

    while stream.advance() {
        let n = stream.index();
        if n < mn {
            continue;
        }
        if n > n_max {
            break;
        }
        let ln = stream.harmonic();
        for (c, &(rank, class)) in cosets.iter().enumerate() {
            let block = rank * width..(rank + 1) * width;
            let integral: f64 =
                block.map(|i| stream.fejer_at(i, convention).norm()).sum::<f64>() * measure;
            let (rhs_single, rhs_summed) = match class {
                CosetClass::Pair { k, l, .. } => (
                    order(l) * order(k) / (n as f64 * mn_f),
                    order(k) * order(l) / (mn_f * mn_f),
                ),
                CosetClass::Single { k, .. } => (order(k) / mn_f, order(k) * ln / mn_f),
            };
            let r = integral / rhs_single;
            single.push(n, n_max, r);
            class_single[c] = class_single[c].max(r);
            if n > mn {
                summed[c] += integral / (n + 1) as f64;
                let r = summed[c] / rhs_summed;
                total.push(n, n_max, r);
                class_summed[c] = class_summed[c].max(r);
            }
        }
    }

    let classes = cosets
        .iter()
        .enumerate()
        .map(|(c, &(rank, class))| ClassRecord {
            class,
            rank,
            single_integral_max_ratio: class_single[c],
            summed_integral_max_ratio: class_summed[c],
        })
        .collect();

    Ok(Lemma34Report {
        moduli: base.moduli().to_vec(),
        depth,
        support_level,
        n_max,
        convention,
        single_integral: single.finish(),
        summed_integral: total.finish(),
        classes,
    })
}
