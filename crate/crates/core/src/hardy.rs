//! Martingales on the cylinder filtration, maximal functions, `H_p`
//! quasi-norms and `p`-atoms.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::{Cylinder, VilenkinBase};

/// Absolute tolerance of the adaptedness check.
pub const ADAPTEDNESS_TOL: f64 = 1e-10;

/// A finite martingale `f^(0), ..., f^(N)` with `f^(n)` measurable at level `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Martingale {
    components: Vec<LevelFunction>,
}

impl Martingale {
    /// Validates levels and `E_n f^(n+1) = f^(n)`.
    pub fn new(components: Vec<LevelFunction>) -> Result<Self> {
        let first = components
            .first()
            .ok_or(Error::LengthMismatch { expected: 1, actual: 0 })?;
        let base = first.base().clone();
        for (n, c) in components.iter().enumerate() {
            if c.base() != &base {
                return Err(Error::BaseMismatch);
            }
            if c.level() != n {
                return Err(Error::LevelOutOfRange {
                    level: c.level(),
                    max: n,
                });
            }
        }
        let m = Self { components };
        if m.adaptedness_defect() > ADAPTEDNESS_TOL {
            return Err(Error::InvalidBase(
                "components are not conditional expectations of each other".into(),
            ));
        }
        Ok(m)
    }

    /// `(E_n f)_{n = 0..=N}` where `N` is the level of `f`.
    pub fn from_function(f: &LevelFunction) -> Self {
        let components = (0..=f.level())
            .map(|n| f.conditional_expectation(n).expect("n <= level"))
            .collect();
        Self { components }
    }

    pub fn base(&self) -> &VilenkinBase {
        self.components[0].base()
    }

    /// Top level `N`.
    pub fn top_level(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[LevelFunction] {
        &self.components
    }

    pub fn component(&self, n: usize) -> &LevelFunction {
        &self.components[n]
    }

    /// `max_n max_x |E_n f^(n+1) - f^(n)|`.
    pub fn adaptedness_defect(&self) -> f64 {
        self.components
            .windows(2)
            .map(|w| {
                w[1].conditional_expectation(w[0].level())
                    .and_then(|e| e.max_abs_diff(&w[0]))
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }

    /// `f* = sup_n |f^(n)|` at the top level.
    pub fn maximal_function(&self) -> LevelFunction {
        let top = self.top_level();
        let mut acc = vec![0.0f64; self.base().order(top)];
        for c in &self.components {
            let width = self.base().order(top) / self.base().order(c.level());
            for (r, v) in c.values().iter().enumerate() {
                let m = v.norm();
                for a in &mut acc[r * width..(r + 1) * width] {
                    *a = a.max(m);
                }
            }
        }
        LevelFunction::from_real(self.base(), top, &acc).expect("sized by construction")
    }

    /// `‖f‖_{H_p} = ‖f*‖_p`.
    pub fn hardy_quasinorm(&self, p: f64) -> Result<f64> {
        self.maximal_function().lp_quasinorm(p)
    }

    /// `f̂(i)` from the top component; exact for `i < M_N`.
    pub fn fourier_coefficient(&self, i: usize) -> Result<Complex64> {
        let top = &self.components[self.top_level()];
        if i >= top.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: top.len(),
            });
        }
        Ok(crate::transform::forward(top).coeff(i))
    }
}

/// Maximal function through the averaging form
/// `sup_n |I_n(x)|^{-1} |∫_{I_n(x)} f dμ|`, straight from cylinder integrals.
pub fn averaging_maximal_function(f: &LevelFunction) -> LevelFunction {
    let base = f.base();
    let top = f.level();
    let values = (0..f.len())
        .map(|r| {
            let x = base.point_of(r, top).expect("rank in range");
            let sup = (0..=top)
                .map(|n| {
                    let cyl = base.cylinder(&x, n).expect("level in range");
                    (f.integrate_over(&cyl) * cyl.inverse_measure() as f64).norm()
                })
                .fold(0.0, f64::max);
            Complex64::new(sup, 0.0)
        })
        .collect();
    LevelFunction::new(base, top, values).expect("sized by construction")
}

/// A function supported on a cylinder together with the exponent it is
/// normalized for.
#[derive(Debug, Clone, PartialEq)]
pub struct PAtom {
    pub p: f64,
    pub support: Cylinder,
    pub values: LevelFunction,
}

/// Outcome of [`validate_atom`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomCheck {
    pub mean_zero: bool,
    pub sup_bound: bool,
    pub supported: bool,
    /// Names and residuals of the violated conditions.
    pub diagnostics: Vec<String>,
}

impl AtomCheck {
    pub fn is_valid(&self) -> bool {
        self.mean_zero && self.sup_bound && self.supported
    }
}

/// Relative tolerance of the atom conditions.
pub const ATOM_TOL: f64 = 1e-10;

/// Checks `∫_I a = 0`, `‖a‖_∞ <= μ(I)^{-1/p}` and `supp a ⊂ I`.
pub fn validate_atom(atom: &PAtom) -> AtomCheck {
    let a = &atom.values;
    let bound = (atom.support.inverse_measure() as f64).powf(1.0 / atom.p);
    let scale = bound.max(1.0);
    let mut diagnostics = Vec::new();

    let level = a.level().max(atom.support.level);
    let a = a.refine(level).expect("level within depth");
    let inside = atom.support.rank_range(a.base(), level);
    let outside_max = a
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| !inside.contains(i))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let supported = outside_max <= ATOM_TOL * scale;
    if !supported {
        diagnostics.push(format!("support: |a| = {outside_max} outside the cylinder"));
    }
    let mean = a.integrate_over(&atom.support).norm() * atom.support.inverse_measure() as f64;
    let mean_zero = mean <= ATOM_TOL * scale;
    if !mean_zero {
        diagnostics.push(format!("mean: average over support is {mean}"));
    }
    let sup = a.sup_norm();
    let sup_bound = sup <= bound * (1.0 + ATOM_TOL);
    if !sup_bound {
        diagnostics.push(format!("sup: ‖a‖_∞ = {sup} exceeds μ(I)^(-1/p) = {bound}"));
    }
    AtomCheck {
        mean_zero,
        sup_bound,
        supported,
        diagnostics,
    }
}

/// Serializable form of an atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomDescriptor {
    pub moduli: Vec<usize>,
    pub depth: usize,
    pub p: f64,
    pub support_level: usize,
    pub support_rank: usize,
    pub value_level: usize,
    /// Real values on the level-`value_level` cylinders inside the support, in rank order.
    pub values: Vec<f64>,
}

impl PAtom {
    pub fn descriptor(&self) -> AtomDescriptor {
        let base = self.values.base();
        let range = self.support.rank_range(base, self.values.level());
        AtomDescriptor {
            moduli: base.moduli().to_vec(),
            depth: base.depth(),
            p: self.p,
            support_level: self.support.level,
            support_rank: self.support.rank,
            value_level: self.values.level(),
            values: self.values.values()[range].iter().map(|v| v.re).collect(),
        }
    }

    pub fn from_descriptor(d: &AtomDescriptor) -> Result<Self> {
        let base = VilenkinBase::new(&d.moduli, d.depth)?;
        Self::from_descriptor_in(d, &base)
    }

    /// Rebuilds the atom inside `base`, which may be deeper than the original.
    pub fn from_descriptor_in(d: &AtomDescriptor, base: &VilenkinBase) -> Result<Self> {
        if base.moduli().len() < d.depth || base.moduli()[..d.depth] != d.moduli[..d.depth] {
            return Err(Error::BaseMismatch);
        }
        let support = base.cylinder_at(d.support_rank, d.support_level)?;
        let mut f = LevelFunction::zeros(base, d.value_level)?;
        let range = support.rank_range(base, d.value_level);
        if range.len() != d.values.len() {
            return Err(Error::LengthMismatch {
                expected: range.len(),
                actual: d.values.len(),
            });
        }
        let mut values = f.values().to_vec();
        for (slot, &v) in values[range].iter_mut().zip(&d.values) {
            *slot = Complex64::new(v, 0.0);
        }
        f = LevelFunction::new(base, d.value_level, values)?;
        Ok(Self {
            p: d.p,
            support,
            values: f,
        })
    }
}

/// Shape of randomly generated atoms.
#[derive(Debug, Clone, Copy)]
pub struct AtomShape {
    /// Largest support level (inclusive).
    pub max_support_level: usize,
    /// Levels of resolution below the support level (at least 1).
    pub max_refinement: usize,
}

/// Draws a saturated `p`-atom: support level and coset uniform, i.i.d.
/// `U[-1, 1]` values on the sub-cylinders, projected to mean zero and
/// rescaled to `‖a‖_∞ = μ(I)^{-1/p}` exactly.
pub fn random_atom<R: Rng + ?Sized>(
    base: &VilenkinBase,
    p: f64,
    shape: AtomShape,
    rng: &mut R,
) -> Result<PAtom> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    let depth = base.depth();
    if shape.max_refinement == 0 || shape.max_support_level + 1 > depth {
        return Err(Error::LevelOutOfRange {
            level: shape.max_support_level + 1,
            max: depth,
        });
    }
    let support_level = rng.gen_range(0..=shape.max_support_level);
    let max_ref = shape.max_refinement.min(depth - support_level);
    let value_level = support_level + rng.gen_range(1..=max_ref);
    let support_rank = rng.gen_range(0..base.order(support_level));
    let width = base.order(value_level) / base.order(support_level);
    let bound = (base.order(support_level) as f64).powf(1.0 / p);
    let values = loop {
        let raw: Vec<f64> = (0..width).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mean = raw.iter().sum::<f64>() / width as f64;
        let centered: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let peak = centered.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if peak > 1e-3 {
            break centered.into_iter().map(|v| v * bound / peak).collect::<Vec<_>>();
        }
    };
    let descriptor = AtomDescriptor {
        moduli: base.moduli().to_vec(),
        depth,
        p,
        support_level,
        support_rank,
        value_level,
        values,
    };
    PAtom::from_descriptor_in(&descriptor, base)
}

/// The `n`-th component `Σ_k μ_k E_n a_k` of an atomic series, together
/// with the budget `Σ_k |μ_k|^p` (`p` taken from the first atom).
pub fn assemble_from_atoms(
    atoms: &[PAtom],
    coeffs: &[f64],
    base: &VilenkinBase,
    n: usize,
) -> Result<(LevelFunction, f64)> {
    if atoms.len() != coeffs.len() {
        return Err(Error::LengthMismatch {
            expected: atoms.len(),
            actual: coeffs.len(),
        });
    }
    base.check_level(n)?;
    let mut acc = LevelFunction::zeros(base, n)?;
    let mut budget = 0.0;
    for (a, &mu) in atoms.iter().zip(coeffs) {
        if a.values.base() != base {
            return Err(Error::BaseMismatch);
        }
        let component = if a.values.level() >= n {
            a.values.conditional_expectation(n)?
        } else {
            a.values.refine(n)?
        };
        acc = acc.add(&component.scale_real(mu))?;
        budget += mu.abs().powf(a.p);
    }
    Ok((acc, budget))
}

/// The full martingale `(Σ_k μ_k E_n a_k)_{n = 0..=top}`.
pub fn assemble_martingale(
    atoms: &[PAtom],
    coeffs: &[f64],
    base: &VilenkinBase,
    top: usize,
) -> Result<(Martingale, f64)> {
    let mut components = Vec::with_capacity(top + 1);
    let mut budget = 0.0;
    for n in 0..=top {
        let (c, b) = assemble_from_atoms(atoms, coeffs, base, n)?;
        components.push(c);
        budget = b;
    }
    Ok((Martingale::new(components)?, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::character_function;
    use rand::SeedableRng;

    #[test]
    fn martingale_of_first_character() {
        let d = VilenkinBase::dyadic(3).unwrap();
        let psi1 = character_function(&d, 1, 3).unwrap();
        let m = Martingale::from_function(&psi1);
        assert_eq!(m.component(0).values()[0].norm(), 0.0);
        for n in 1..=3 {
            assert!(m.component(n).max_abs_diff(&psi1).unwrap() < 1e-15);
        }
        assert_eq!(m.maximal_function().values(), &[Complex64::new(1.0, 0.0); 8]);
        for p in [0.3, 0.5, 1.0, 2.0] {
            assert!((m.hardy_quasinorm(p).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(m.hardy_quasinorm(0.0).is_err());
    }

    #[test]
    fn constants_and_rejections() {
        let d = VilenkinBase::dyadic(2).unwrap();
        let c = LevelFunction::constant(&d, 2, Complex64::new(-2.0, 0.0)).unwrap();
        let m = Martingale::from_function(&c);
        assert!((m.hardy_quasinorm(0.5).unwrap() - 2.0).abs() < 1e-14);
        let bad = vec![
            LevelFunction::constant(&d, 0, Complex64::new(1.0, 0.0)).unwrap(),
            LevelFunction::from_real(&d, 1, &[0.0, 0.0]).unwrap(),
        ];
        assert!(Martingale::new(bad).is_err());
        let single = Martingale::new(vec![LevelFunction::from_real(&d, 0, &[-3.0]).unwrap()]).unwrap();
        assert_eq!(single.maximal_function().values()[0].re, 3.0);
    }

    #[test]
    fn atom_validation() {
        let d = VilenkinBase::dyadic(3).unwrap();
        let whole = d.cylinder(&d.zero(), 0).unwrap();
        let psi1 = character_function(&d, 1, 3).unwrap();
        let a = PAtom { p: 0.5, support: whole.clone(), values: psi1 };
        assert!(validate_atom(&a).is_valid());
        let one = PAtom {
            p: 0.5,
            support: whole,
            values: LevelFunction::constant(&d, 1, Complex64::new(1.0, 0.0)).unwrap(),
        };
        let check = validate_atom(&one);
        assert!(!check.mean_zero && check.sup_bound);
        assert!(check.diagnostics[0].starts_with("mean"));

        // two children of I_1 with amplitude M_1^{1/p}
        let p = 0.5;
        let amp = 2f64.powf(1.0 / p);
        let support = d.cylinder(&d.zero(), 1).unwrap();
        let values = LevelFunction::from_real(&d, 2, &[amp, -amp, 0.0, 0.0]).unwrap();
        assert!(validate_atom(&PAtom { p, support: support.clone(), values }).is_valid());
        let values = LevelFunction::from_real(&d, 2, &[1.01 * amp, -1.01 * amp, 0.0, 0.0]).unwrap();
        assert!(!validate_atom(&PAtom { p, support, values }).sup_bound);
    }

    #[test]
    fn random_atoms_are_saturated() {
        let b = VilenkinBase::new(&[2, 3], 6).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let shape = AtomShape { max_support_level: 3, max_refinement: 2 };
        for _ in 0..50 {
            let a = random_atom(&b, 0.5, shape, &mut rng).unwrap();
            assert!(validate_atom(&a).is_valid());
            let bound = (a.support.inverse_measure() as f64).powi(2);
            assert!((a.values.sup_norm() - bound).abs() <= 1e-9 * bound);
            let back = PAtom::from_descriptor(&a.descriptor()).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn assembly() {
        let d = VilenkinBase::dyadic(3).unwrap();
        let (z, budget) = assemble_from_atoms(&[], &[], &d, 2).unwrap();
        assert_eq!((z.sup_norm(), budget), (0.0, 0.0));
        let support = d.cylinder(&d.zero(), 1).unwrap();
        let values = LevelFunction::from_real(&d, 2, &[4.0, -4.0, 0.0, 0.0]).unwrap();
        let a = PAtom { p: 0.5, support, values: values.clone() };
        let (top, budget) = assemble_from_atoms(&[a.clone()], &[1.0], &d, 3).unwrap();
        assert!(top.max_abs_diff(&values).unwrap() < 1e-15);
        assert_eq!(budget, 1.0);
        assert!(assemble_from_atoms(&[a], &[], &d, 3).is_err());
    }
}
