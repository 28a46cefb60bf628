use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use vilenkin::counterexample::blowup_table;
use vilenkin::hardy::{random_atom, AtomDescriptor, AtomShape, PAtom};
use vilenkin::kernels::{dirichlet, fejer_kernel, riesz_kernel};
use vilenkin::maximal::{hp_to_lp_ratio, off_support_integral};
use vilenkin::transform::forward;
use vilenkin::verify::{default_atom_shape, run_suite, Suite, VerifyOptions};
use vilenkin::{LevelFunction, MaximalOp, VilenkinBase, WeightSpec};

use crate::config::{base_with_guard, Format, RunConfig};
use crate::output::{joined, json, num, Table};
use crate::CliResult;

/// Rendered output and whether the command's own checks passed.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub success: bool,
}

impl Outcome {
    fn ok(bytes: Vec<u8>) -> Self {
        Self { bytes, success: true }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: crate::config::ConfigEcho<'a>,
    #[serde(flatten)]
    body: T,
}

fn report<T: Serialize>(cfg: &RunConfig, command: &str, body: T) -> CliResult<Vec<u8>> {
    json(&Report {
        config: cfg.echo(command),
        body,
    })
}

pub struct VerifyArgs {
    pub suite: Suite,
    pub max_a: usize,
    pub n_max: usize,
    pub atoms: usize,
}

pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> CliResult<Outcome> {
    let base = cfg.base()?;
    let opts = VerifyOptions {
        max_a: args.max_a,
        n_max: args.n_max,
        convention: cfg.convention,
        seed: cfg.seed,
        atom_count: args.atoms,
        ..VerifyOptions::default()
    };
    if args.suite == Suite::Atoms {
        cfg.require_seed("verify atoms")?;
    }
    let r = run_suite(args.suite, &base, &opts)?;
    let bytes = match cfg.format {
        Format::Json => report(cfg, "verify", &r)?,
        Format::Csv => {
            let mut t = Table::new(&["suite", "check", "value", "threshold", "passed"])?;
            for c in &r.checks {
                let threshold = c.threshold.map(num).unwrap_or_default();
                t.row([
                    r.suite.to_string(),
                    c.name.clone(),
                    num(c.value),
                    threshold,
                    c.passed.to_string(),
                ])?;
            }
            t.into_bytes()?
        }
    };
    Ok(Outcome {
        bytes,
        success: r.passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Dirichlet,
    Fejer,
    Riesz,
}

fn kernel(cfg: &RunConfig, base: &VilenkinBase, which: KernelKind, n: usize, level: usize) -> CliResult<LevelFunction> {
    Ok(match which {
        KernelKind::Dirichlet => dirichlet(base, n, level)?,
        KernelKind::Fejer => fejer_kernel(base, n, level, cfg.convention)?,
        KernelKind::Riesz => riesz_kernel(base, n, level)?,
    })
}

#[derive(Serialize)]
struct Dump {
    which: KernelKind,
    n: usize,
    level: usize,
    values: Vec<[f64; 2]>,
}

pub fn kernel_dump(cfg: &RunConfig, which: KernelKind, n: usize, level: Option<usize>) -> CliResult<Outcome> {
    let base = cfg.base()?;
    let level = level.unwrap_or(base.depth());
    let k = kernel(cfg, &base, which, n, level)?;
    let values: Vec<[f64; 2]> = k.values().iter().map(|v| [v.re, v.im]).collect();
    dump(cfg, "kernel dump", "rank", Dump { which, n, level, values })
}

pub fn spectrum_dump(cfg: &RunConfig, which: KernelKind, n: usize, level: Option<usize>) -> CliResult<Outcome> {
    let base = cfg.base()?;
    let level = level.unwrap_or(base.depth());
    let s = forward(&kernel(cfg, &base, which, n, level)?);
    let values: Vec<[f64; 2]> = s.coeffs().iter().map(|v| [v.re, v.im]).collect();
    dump(cfg, "spectrum dump", "index", Dump { which, n, level, values })
}

fn dump(cfg: &RunConfig, command: &str, key: &str, d: Dump) -> CliResult<Outcome> {
    let bytes = match cfg.format {
        Format::Json => report(cfg, command, d)?,
        Format::Csv => {
            let mut t = Table::new(&[key, "real", "imag"])?;
            for (i, [re, im]) in d.values.iter().enumerate() {
                t.row([i.to_string(), num(*re), num(*im)])?;
            }
            t.into_bytes()?
        }
    };
    Ok(Outcome::ok(bytes))
}

/// Corpus file layout shared by `atoms corpus` and `maximal table`.
#[derive(Debug, Serialize, Deserialize)]
pub struct Corpus {
    pub p: f64,
    pub count: usize,
    pub atoms: Vec<AtomDescriptor>,
}

pub struct CorpusArgs {
    pub count: usize,
    pub p: f64,
    pub max_support_level: Option<usize>,
    pub max_refinement: usize,
}

/// The corpus is JSON whatever `--format` says: it is an input artifact.
pub fn atoms_corpus(cfg: &RunConfig, args: &CorpusArgs) -> CliResult<Outcome> {
    let seed = cfg.require_seed("atoms corpus")?;
    let base = cfg.base()?;
    let shape = AtomShape {
        max_support_level: args.max_support_level.unwrap_or(default_atom_shape(&base).max_support_level),
        max_refinement: args.max_refinement,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = (0..args.count)
        .map(|_| random_atom(&base, args.p, shape, &mut rng).map(|a| a.descriptor()))
        .collect::<vilenkin::Result<Vec<_>>>()?;
    let corpus = Corpus {
        p: args.p,
        count: atoms.len(),
        atoms,
    };
    Ok(Outcome::ok(report(cfg, "atoms corpus", corpus)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OpKind {
    Sigma,
    Riesz,
}

pub struct MaximalArgs<'a> {
    pub op: OpKind,
    pub weight: WeightSpec,
    pub p: f64,
    pub n_max: Option<usize>,
    pub input: &'a Path,
}

#[derive(Serialize)]
struct MaximalRow {
    index: usize,
    moduli: Vec<usize>,
    depth: usize,
    support_level: usize,
    support_rank: usize,
    n_max: usize,
    hardy_norm: f64,
    strong: f64,
    weak: f64,
    off_support_integral: f64,
}

#[derive(Serialize)]
struct MaximalTable {
    op: String,
    p: f64,
    formula: &'static str,
    rows: Vec<MaximalRow>,
}

fn read_corpus(path: &Path) -> CliResult<Vec<AtomDescriptor>> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read corpus {}: {e}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let atoms = match value {
        serde_json::Value::Array(_) => serde_json::from_value(value)?,
        other => serde_json::from_value::<Corpus>(other)?.atoms,
    };
    Ok(atoms)
}

pub fn maximal_table(cfg: &RunConfig, args: &MaximalArgs) -> CliResult<Outcome> {
    let op = match args.op {
        OpKind::Sigma => MaximalOp::Sigma(cfg.convention),
        OpKind::Riesz => MaximalOp::Riesz(args.weight.clone()),
    };
    let mut rows = Vec::new();
    for (index, d) in read_corpus(args.input)?.iter().enumerate() {
        let base = base_with_guard(&d.moduli, d.depth)?;
        let atom = PAtom::from_descriptor_in(d, &base)?;
        let n_max = args.n_max.unwrap_or(base.size());
        let f = atom.values.refine(base.depth())?;
        let r = hp_to_lp_ratio(&f, &op, args.p, n_max)?;
        rows.push(MaximalRow {
            index,
            moduli: d.moduli.clone(),
            depth: d.depth,
            support_level: d.support_level,
            support_rank: d.support_rank,
            n_max,
            hardy_norm: r.hardy_norm,
            strong: r.strong,
            weak: r.weak,
            off_support_integral: off_support_integral(&atom, &op, n_max)?,
        });
    }
    let bytes = match cfg.format {
        Format::Json => report(
            cfg,
            "maximal table",
            MaximalTable {
                op: op.label(),
                p: args.p,
                formula: vilenkin::maximal::RATIO_FORMULA,
                rows,
            },
        )?,
        Format::Csv => {
            let mut t = Table::new(&[
                "index",
                "moduli",
                "depth",
                "support_level",
                "support_rank",
                "n_max",
                "hardy_norm",
                "strong_ratio",
                "weak_ratio",
                "off_support_integral",
            ])?;
            for r in &rows {
                t.row([
                    r.index.to_string(),
                    joined(&r.moduli),
                    r.depth.to_string(),
                    r.support_level.to_string(),
                    r.support_rank.to_string(),
                    r.n_max.to_string(),
                    num(r.hardy_norm),
                    num(r.strong),
                    num(r.weak),
                    num(r.off_support_integral),
                ])?;
            }
            t.into_bytes()?
        }
    };
    Ok(Outcome::ok(bytes))
}

pub fn counterexample_sweep(cfg: &RunConfig, phi: &WeightSpec, p: f64, k_min: usize, k_max: usize) -> CliResult<Outcome> {
    let base = cfg.base()?;
    let table = blowup_table(&base, phi, p, k_min..=k_max)?;
    let bytes = match cfg.format {
        Format::Json => report(cfg, "counterexample sweep", &table)?,
        Format::Csv => {
            let mut t = Table::new(&[
                "k",
                "q_values",
                "hardy_norm",
                "numerator",
                "ratio",
                "analytic_lower_bound",
                "hardy_scaling_ratio",
                "form",
                "trend",
            ])?;
            let form = serde_json::to_value(table.form)?.as_str().unwrap_or_default().to_string();
            for r in &table.rows {
                t.row([
                    r.k.to_string(),
                    joined(&r.q_values),
                    num(r.hardy_norm),
                    num(r.numerator),
                    num(r.ratio),
                    num(r.analytic_lower_bound),
                    num(r.hardy_scaling_ratio),
                    form.clone(),
                    table.trend.to_string(),
                ])?;
            }
            t.into_bytes()?
        }
    };
    Ok(Outcome::ok(bytes))
}
