//! Named property suites over one base, each reporting residuals and
//! empirical constants check by check.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counterexample::{build_instance, partial_sum_closed_form, riesz_at_q, shift_identity_check};
use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::VilenkinBase;
use crate::hardy::{assemble_martingale, random_atom, validate_atom, AtomShape};
use crate::kernels::{
    abel_kernel_residuals, abel_residuals, dirichlet, fejer_kernel, fejer_l1_norms, gat_closed_form,
    FejerConvention,
};
use crate::lemmas::lemma34_sweep;
use crate::maximal::{off_support_integral, MaximalOp, WeightSpec};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernels,
    Identities,
    Lemmas,
    Atoms,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Kernels, Suite::Identities, Suite::Lemmas, Suite::Atoms];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Kernels => "kernels",
            Self::Identities => "identities",
            Self::Lemmas => "lemmas",
            Self::Atoms => "atoms",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// One line of a suite report. Checks without a threshold only record a value.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub passed: bool,
}

impl Check {
    fn bounded(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold: Some(threshold),
            passed: value <= threshold,
        }
    }

    fn recorded(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold: None,
            passed: value.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub moduli: Vec<usize>,
    pub depth: usize,
    pub convention: FejerConvention,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest `A` in the `K_{2^A}` closed-form check.
    pub max_a: usize,
    /// Cap on swept indices `n`.
    pub n_max: usize,
    pub convention: FejerConvention,
    /// Required by the atoms suite.
    pub seed: Option<u64>,
    pub atom_count: usize,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_a: 10,
            n_max: 4096,
            convention: FejerConvention::Shifted,
            seed: None,
            atom_count: 200,
            exec: Execution::default(),
        }
    }
}

pub const EXACT_TOL: f64 = 1e-12;
pub const GAT_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const OCTAVE_GROWTH_TOL: f64 = 0.01;
/// Sweep length from which the top-octave growth budgets apply.
pub const BUDGET_SWEEP: usize = 4096;

pub fn run_suite(suite: Suite, base: &VilenkinBase, opts: &VerifyOptions) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Kernels => kernel_checks(base, opts)?,
        Suite::Identities => identity_checks(base, opts)?,
        Suite::Lemmas => lemma_checks(base, opts)?,
        Suite::Atoms => atom_checks(base, opts)?,
    };
    Ok(SuiteReport {
        suite,
        moduli: base.moduli().to_vec(),
        depth: base.depth(),
        convention: opts.convention,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// `max_n max_x |D_{M_n}(x) - M_n 1_{I_n}(x)|` over `n <= K`.
pub fn dirichlet_closed_form_residual(base: &VilenkinBase) -> Result<f64> {
    let top = base.depth();
    let mut worst: f64 = 0.0;
    for n in 0..=top {
        let d = dirichlet(base, base.order(n), top)?;
        let inside = base.size() / base.order(n);
        let mn = base.order(n) as f64;
        for (r, v) in d.values().iter().enumerate() {
            let expect = if r < inside { mn } else { 0.0 };
            worst = worst.max((v - Complex64::new(expect, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// `max_{A <= max_a} max_x |K_{2^A}(x) - closed form|` on a dyadic base, with
/// the kernel evaluated at full depth.
pub fn gat_residual(base: &VilenkinBase, max_a: usize) -> Result<f64> {
    let top = base.depth();
    let mut worst: f64 = 0.0;
    for a in 0..=max_a.min(top) {
        let k = fejer_kernel(base, 1 << a, top, FejerConvention::Shifted)?;
        for (r, v) in k.values().iter().enumerate() {
            let x = base.point_of(r, top)?;
            let closed = gat_closed_form(base, a, &x)?;
            worst = worst.max((v - Complex64::new(closed, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Running maxima of `∫|K_n|` at `n_max/4` and `n_max`.
pub fn fejer_norm_growth(
    base: &VilenkinBase,
    n_max: usize,
    convention: FejerConvention,
) -> Result<(f64, f64)> {
    let norms = fejer_l1_norms(base, base.depth(), n_max, convention)?;
    let quarter = (n_max / 4).max(1);
    let low = norms[..quarter].iter().cloned().fold(0.0, f64::max);
    let high = norms.iter().cloned().fold(0.0, f64::max);
    Ok((low, high))
}

fn kernel_checks(base: &VilenkinBase, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let top = base.depth();
    let mut checks = vec![Check::bounded(
        "dirichlet closed form D_{M_n} = M_n 1_{I_n}",
        dirichlet_closed_form_residual(base)?,
        EXACT_TOL,
    )];

    let n_int = base.size().min(256);
    let mut worst: f64 = 0.0;
    for n in 1..=n_int {
        let k = fejer_kernel(base, n, top, opts.convention)?;
        let expect = match opts.convention {
            FejerConvention::Shifted => 1.0,
            FejerConvention::Paper => (n - 1) as f64 / n as f64,
        };
        worst = worst.max((k.integrate() - Complex64::new(expect, 0.0)).norm());
    }
    checks.push(Check::bounded("fejer kernel integral", worst, EXACT_TOL));

    if base.is_dyadic() {
        checks.push(Check::bounded(
            "K_{2^A} closed form",
            gat_residual(base, opts.max_a)?,
            GAT_TOL,
        ));
    }

    let n_max = opts.n_max.min(base.size());
    let (low, high) = fejer_norm_growth(base, n_max, opts.convention)?;
    checks.push(Check::recorded(format!("sup_(n<={n_max}) ∫|K_n|"), high));
    let name = format!("∫|K_n| running-max growth from n={} to n={n_max}", (n_max / 4).max(1));
    // the budget is stated for n from 2^10 to 2^12; shorter sweeps only record the growth
    checks.push(if n_max >= BUDGET_SWEEP {
        Check::bounded(name, high / low - 1.0, OCTAVE_GROWTH_TOL)
    } else {
        Check::recorded(name, high / low - 1.0)
    });
    Ok(checks)
}

/// Deterministic complex test function with no special structure.
pub fn probe_function(base: &VilenkinBase, level: usize) -> Result<LevelFunction> {
    LevelFunction::from_fn(base, level, |r| {
        let t = r as f64;
        Complex64::new((0.37 * t).sin() + ((r * 7919) % 101) as f64 / 101.0, (0.11 * t * t).cos())
    })
}

fn identity_checks(base: &VilenkinBase, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let top = base.depth();
    let n_max = opts.n_max.min(base.size());
    let f = probe_function(base, top)?;
    let worst = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
    let mut checks = vec![
        Check::bounded(
            "R_n f through σ_j f (Abel rearrangement)",
            worst(abel_residuals(&f, n_max, opts.convention)?),
            IDENTITY_TOL,
        ),
        Check::bounded(
            "L_n through K_j (Abel rearrangement)",
            worst(abel_kernel_residuals(base, top, n_max, opts.convention)?),
            IDENTITY_TOL,
        ),
    ];

    for k in (1..).take_while(|k| 2 * k + 1 <= top) {
        let inst = build_instance(base, k)?;
        checks.push(Check::bounded(
            format!("k={k}: spectrum of f_k is the indicator of [M_2k, M_2k+1)"),
            inst.spectrum_defect(),
            EXACT_TOL,
        ));

        // exhaustive for small instances, strided otherwise
        let limit = base.size();
        let stride = if k <= 2 { 1 } else { (limit / 512).max(1) };
        let mut idx: Vec<usize> = (0..=limit).step_by(stride).collect();
        idx.extend([inst.low - 1, inst.low, inst.low + 1, inst.high - 1, inst.high, inst.high + 1]);
        idx.retain(|&i| i <= limit);
        idx.sort_unstable();
        idx.dedup();
        let residuals = opts.exec.map_range(idx.len(), |j| {
            partial_sum_closed_form(&inst, idx[j]).map(|c| c.residual)
        });
        let worst_ps = residuals.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
        checks.push(Check::bounded(format!("k={k}: S_i f_k closed form"), worst_ps, IDENTITY_TOL));

        let js = inst.low - 1;
        let residuals = opts.exec.map_range(js, |j| shift_identity_check(&inst, j + 1));
        let worst_shift = residuals.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
        checks.push(Check::bounded(
            format!("k={k}: D_(j+M) - D_M = ψ_M D_j, 1 <= j < M"),
            worst_shift,
            IDENTITY_TOL,
        ));

        for s in 0..k {
            let r = riesz_at_q(&inst, s, &WeightSpec::Unit)?;
            checks.push(Check::bounded(
                format!("k={k} s={s}: R_q f_k as shifted Dirichlet sum"),
                r.shifted_sum_residual,
                IDENTITY_TOL,
            ));
            checks.push(Check::bounded(
                format!("k={k} s={s}: |R_q f_k| as modulus sum on I_2s"),
                r.modulus_sum_residual,
                IDENTITY_TOL,
            ));
            checks.push(Check::bounded(
                format!("k={k} s={s}: modulus sum dominates |R_q f_k| everywhere"),
                if r.modulus_sum_dominates { 0.0 } else { 1.0 },
                0.0,
            ));
            checks.push(Check::recorded(
                format!("k={k} s={s}: min |R_q f_k| / lower bound on I_2s minus I_2s+1"),
                r.shell_min_ratio,
            ));
        }
    }
    Ok(checks)
}

fn lemma_checks(base: &VilenkinBase, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let top = base.depth();
    let n_max = opts.n_max.min(base.size());
    let mut checks = Vec::new();
    for n in (1..=5.min(top.saturating_sub(1))).filter(|&n| base.order(n) <= n_max) {
        let r = lemma34_sweep(base, n, n_max, opts.convention)?;
        for (label, stats) in [("single", &r.single_integral), ("summed", &r.summed_integral)] {
            checks.push(Check::recorded(format!("N={n} {label}: c_emp"), stats.max_ratio));
            let name = format!("N={n} {label}: top-octave growth");
            checks.push(if n_max >= BUDGET_SWEEP {
                Check::bounded(name, stats.top_octave_growth, OCTAVE_GROWTH_TOL)
            } else {
                Check::recorded(name, stats.top_octave_growth)
            });
        }
    }
    Ok(checks)
}

/// Default shape for random atoms over `base`.
pub fn default_atom_shape(base: &VilenkinBase) -> AtomShape {
    AtomShape {
        max_support_level: base.depth().saturating_sub(2),
        max_refinement: 2,
    }
}

fn atom_checks(base: &VilenkinBase, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let seed = opts.seed.ok_or(Error::MissingSeed("the atoms suite"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = default_atom_shape(base);
    let atoms = (0..opts.atom_count)
        .map(|_| random_atom(base, 0.5, shape, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let invalid = atoms.iter().filter(|a| !validate_atom(a).is_valid()).count();

    let op = MaximalOp::Riesz(WeightSpec::Log);
    let integrals = opts.exec.map_range(atoms.len(), |i| {
        off_support_integral(&atoms[i], &op, base.size())
    });
    let corpus_max = integrals.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);

    let coeffs: Vec<f64> = (0..atoms.len()).map(|i| 1.0 / (i + 1) as f64).collect();
    let (m, budget) = assemble_martingale(&atoms, &coeffs, base, base.depth())?;
    let hardy = m.hardy_quasinorm(0.5)?;

    Ok(vec![
        Check::bounded("invalid atoms", invalid as f64, 0.0),
        Check::recorded("max ∫ outside I of (sup |R_n a| / log(n+1))^(1/2)", corpus_max),
        Check::bounded("assembled martingale adaptedness defect", m.adaptedness_defect(), 1e-10),
        Check::recorded("‖Σ μ_k a_k‖_H(1/2) / (Σ |μ_k|^(1/2))^2", hardy / budget.powi(2)),
    ])
}
