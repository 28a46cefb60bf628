//! Mixed-radix arithmetic on a bounded Vilenkin group truncated at depth `K`.
//!
//! A point is a digit vector `(x_0, ..., x_{K-1})` with `x_k < m_k`. Cylinders
//! `I_n(x)` are addressed by their *rank*: the mixed-radix number formed by the
//! first `n` digits with `x_0` as the most significant digit. With that
//! convention a level-`n` cylinder is a contiguous block of ranks at every
//! finer level, which is what makes block averaging and refinement O(1) per
//! value.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The generating sequence `m_0, ..., m_{K-1}` and its cumulative orders
/// `M_0 = 1, M_{k+1} = m_k M_k`.
#[derive(Clone)]
pub struct VilenkinBase {
    moduli: Arc<[usize]>,
    orders: Arc<[usize]>,
    /// `roots[k][j] = exp(2πi j / m_k)`.
    roots: Arc<[Vec<Complex64>]>,
}

impl PartialEq for VilenkinBase {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.moduli, &other.moduli) || self.moduli == other.moduli
    }
}

impl Eq for VilenkinBase {}

impl fmt::Debug for VilenkinBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VilenkinBase")
            .field("moduli", &&self.moduli[..])
            .field("orders", &&self.orders[..])
            .finish()
    }
}

/// `exp(2πi j / m)` with exact values at quarter turns.
pub(crate) fn unit_root(m: usize, j: usize) -> Complex64 {
    let j = j % m;
    if j == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * j == m {
        Complex64::new(-1.0, 0.0)
    } else if 4 * j == m {
        Complex64::new(0.0, 1.0)
    } else if 4 * j == 3 * m {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, TAU * j as f64 / m as f64)
    }
}

impl VilenkinBase {
    /// Builds a base of depth `depth`. A `moduli` list shorter than `depth` is
    /// repeated periodically, so `(2, 3)` with depth 4 means `(2, 3, 2, 3)`.
    pub fn new(moduli: &[usize], depth: usize) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidBase("empty modulus list".into()));
        }
        if depth == 0 {
            return Err(Error::InvalidBase("depth must be at least 1".into()));
        }
        if let Some((index, &value)) = moduli.iter().enumerate().find(|(_, &m)| m < 2) {
            return Err(Error::InvalidModulus { index, value });
        }
        let digits: Vec<usize> = moduli.iter().copied().cycle().take(depth).collect();
        let mut orders = Vec::with_capacity(depth + 1);
        orders.push(1usize);
        for &m in &digits {
            let last = *orders.last().unwrap();
            let next = last
                .checked_mul(m)
                .ok_or_else(|| Error::InvalidBase("M_K overflows usize".into()))?;
            orders.push(next);
        }
        let roots: Vec<Vec<Complex64>> = digits
            .iter()
            .map(|&m| (0..m).map(|j| unit_root(m, j)).collect())
            .collect();
        Ok(Self {
            moduli: digits.into(),
            orders: orders.into(),
            roots: roots.into(),
        })
    }

    /// The Walsh-Paley base `(2, 2, ...)`.
    pub fn dyadic(depth: usize) -> Result<Self> {
        Self::new(&[2], depth)
    }

    pub fn depth(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn modulus(&self, k: usize) -> usize {
        self.moduli[k]
    }

    /// `M_0, ..., M_K`.
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// `M_level`. Panics when `level > K`.
    pub fn order(&self, level: usize) -> usize {
        self.orders[level]
    }

    /// `M_K`, the number of points at full resolution.
    pub fn size(&self) -> usize {
        self.orders[self.depth()]
    }

    /// `λ = max_k m_k`.
    pub fn lambda(&self) -> usize {
        self.moduli.iter().copied().max().unwrap_or(2)
    }

    pub fn is_dyadic(&self) -> bool {
        self.moduli.iter().all(|&m| m == 2)
    }

    pub(crate) fn roots(&self, k: usize) -> &[Complex64] {
        &self.roots[k]
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            Err(Error::LevelOutOfRange {
                level,
                max: self.depth(),
            })
        } else {
            Ok(())
        }
    }

    /// Rank stride of digit `k` at `level`: `M_level / M_{k+1}`.
    pub(crate) fn stride(&self, k: usize, level: usize) -> usize {
        self.orders[level] / self.orders[k + 1]
    }

    /// Digit `k` of the level-`level` rank `rank`.
    pub(crate) fn rank_digit(&self, rank: usize, k: usize, level: usize) -> usize {
        (rank / self.stride(k, level)) % self.moduli[k]
    }

    /// Rank of `x - y` at `level`, both operands given as ranks at that level.
    pub fn rank_sub(&self, a: usize, b: usize, level: usize) -> usize {
        let mut out = 0;
        let mut ra = a;
        let mut rb = b;
        let mut place = 1;
        for k in (0..level).rev() {
            let m = self.moduli[k];
            let d = (ra % m + m - rb % m) % m;
            out += d * place;
            place *= m;
            ra /= m;
            rb /= m;
        }
        out
    }

    /// Rank of `x + y` at `level`.
    pub fn rank_add(&self, a: usize, b: usize, level: usize) -> usize {
        let mut out = 0;
        let mut ra = a;
        let mut rb = b;
        let mut place = 1;
        for k in (0..level).rev() {
            let m = self.moduli[k];
            out += ((ra % m + rb % m) % m) * place;
            place *= m;
            ra /= m;
            rb /= m;
        }
        out
    }

    /// The identity element.
    pub fn zero(&self) -> GroupPoint {
        GroupPoint {
            coords: vec![0; self.depth()],
        }
    }

    /// A point from its leading coordinates; missing trailing coordinates are 0.
    pub fn point(&self, coords: &[usize]) -> Result<GroupPoint> {
        if coords.len() > self.depth() {
            return Err(Error::LengthMismatch {
                expected: self.depth(),
                actual: coords.len(),
            });
        }
        let mut full = vec![0; self.depth()];
        for (k, &c) in coords.iter().enumerate() {
            if c >= self.moduli[k] {
                return Err(Error::CoordinateOutOfRange {
                    index: k,
                    value: c,
                    modulus: self.moduli[k],
                });
            }
            full[k] = c;
        }
        Ok(GroupPoint { coords: full })
    }

    /// `e_k`: the point with a single digit 1 at position `k`.
    pub fn unit(&self, k: usize) -> Result<GroupPoint> {
        self.digit_multiple(k, 1)
    }

    /// `x_k e_k`.
    pub fn digit_multiple(&self, k: usize, value: usize) -> Result<GroupPoint> {
        if k >= self.depth() {
            return Err(Error::LevelOutOfRange {
                level: k,
                max: self.depth().saturating_sub(1),
            });
        }
        let mut coords = vec![0; self.depth()];
        if value >= self.moduli[k] {
            return Err(Error::CoordinateOutOfRange {
                index: k,
                value,
                modulus: self.moduli[k],
            });
        }
        coords[k] = value;
        Ok(GroupPoint { coords })
    }

    fn check_point(&self, x: &GroupPoint) -> Result<()> {
        if x.coords.len() != self.depth() {
            return Err(Error::BaseMismatch);
        }
        for (k, (&c, &m)) in x.coords.iter().zip(self.moduli.iter()).enumerate() {
            if c >= m {
                return Err(Error::CoordinateOutOfRange {
                    index: k,
                    value: c,
                    modulus: m,
                });
            }
        }
        Ok(())
    }

    /// Coordinate-wise addition mod `m_k`.
    pub fn add(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(x)?;
        self.check_point(y)?;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(self.moduli.iter())
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupPoint { coords })
    }

    /// Coordinate-wise subtraction mod `m_k`.
    pub fn sub(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(x)?;
        self.check_point(y)?;
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(self.moduli.iter())
            .map(|((&a, &b), &m)| (a + m - b) % m)
            .collect();
        Ok(GroupPoint { coords })
    }

    /// Rank of the level-`level` cylinder containing `x`.
    pub fn rank_of(&self, x: &GroupPoint, level: usize) -> Result<usize> {
        self.check_level(level)?;
        self.check_point(x)?;
        Ok(x.coords[..level]
            .iter()
            .zip(self.moduli.iter())
            .fold(0, |acc, (&c, &m)| acc * m + c))
    }

    /// The canonical point (zero beyond `level`) of the cylinder with `rank`.
    pub fn point_of(&self, rank: usize, level: usize) -> Result<GroupPoint> {
        self.check_level(level)?;
        if rank >= self.orders[level] {
            return Err(Error::IndexOutOfRange {
                index: rank,
                limit: self.orders[level],
            });
        }
        let mut coords = vec![0; self.depth()];
        let mut r = rank;
        for k in (0..level).rev() {
            coords[k] = r % self.moduli[k];
            r /= self.moduli[k];
        }
        Ok(GroupPoint { coords })
    }

    /// Digits of `n = Σ n_j M_j`.
    pub fn nat_expand(&self, n: usize) -> Result<NatExpansion> {
        if n >= self.size() {
            return Err(Error::IndexOutOfRange {
                index: n,
                limit: self.size(),
            });
        }
        let mut digits = vec![0; self.depth()];
        let mut r = n;
        for (k, d) in digits.iter_mut().enumerate() {
            *d = r % self.moduli[k];
            r /= self.moduli[k];
        }
        let order = digits.iter().rposition(|&d| d != 0).unwrap_or(0);
        Ok(NatExpansion { n, digits, order })
    }

    /// The cylinder `I_level(x)`.
    pub fn cylinder(&self, x: &GroupPoint, level: usize) -> Result<Cylinder> {
        let rank = self.rank_of(x, level)?;
        Ok(Cylinder {
            level,
            anchor: self.point_of(rank, level)?,
            rank,
            order: self.orders[level],
        })
    }

    /// The cylinder at `level` with the given rank.
    pub fn cylinder_at(&self, rank: usize, level: usize) -> Result<Cylinder> {
        let anchor = self.point_of(rank, level)?;
        Ok(Cylinder {
            level,
            anchor,
            rank,
            order: self.orders[level],
        })
    }

    /// The family tiling `G_m \ I_M`: first every `I_{l+1}(x_k e_k + x_l e_l)`
    /// with `0 <= k < l <= M-1` and nonzero digits, then every `I_M(x_k e_k)`
    /// with `0 <= k <= M-1`.
    pub fn coset_partition(&self, level: usize) -> Result<Vec<Cylinder>> {
        if level == 0 || level > self.depth() {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.depth(),
            });
        }
        let mut out = Vec::new();
        for k in 0..level.saturating_sub(1) {
            for xk in 1..self.moduli[k] {
                for l in k + 1..level {
                    for xl in 1..self.moduli[l] {
                        let mut p = self.zero();
                        p.coords[k] = xk;
                        p.coords[l] = xl;
                        out.push(self.cylinder(&p, l + 1)?);
                    }
                }
            }
        }
        for k in 0..level {
            for xk in 1..self.moduli[k] {
                let p = self.digit_multiple(k, xk)?;
                out.push(self.cylinder(&p, level)?);
            }
        }
        Ok(out)
    }

    /// Classifies a level-`level` coset (given by rank, not `I_level` itself)
    /// into its tile of [`coset_partition`](Self::coset_partition): the
    /// positions of its first two nonzero digits.
    pub fn coset_class(&self, rank: usize, level: usize) -> Option<CosetClass> {
        let mut first = None;
        for k in 0..level {
            let d = self.rank_digit(rank, k, level);
            if d != 0 {
                match first {
                    None => first = Some((k, d)),
                    Some((k0, d0)) => {
                        return Some(CosetClass::Pair {
                            k: k0,
                            xk: d0,
                            l: k,
                            xl: d,
                        })
                    }
                }
            }
        }
        first.map(|(k, xk)| CosetClass::Single { k, xk })
    }
}

/// A tile of the complement partition, identified by its leading nonzero digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CosetClass {
    /// `I_{l+1}(x_k e_k + x_l e_l)`.
    Pair { k: usize, xk: usize, l: usize, xl: usize },
    /// `I_M(x_k e_k)`.
    Single { k: usize, xk: usize },
}

/// An element of the truncated group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPoint {
    coords: Vec<usize>,
}

impl GroupPoint {
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn coord(&self, k: usize) -> usize {
        self.coords[k]
    }

    /// Index of the first nonzero coordinate, i.e. the `t` with `x ∈ I_t \ I_{t+1}`.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coords.iter().position(|&c| c != 0)
    }
}

/// Generalized number-system expansion `n = Σ n_j M_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatExpansion {
    pub n: usize,
    pub digits: Vec<usize>,
    /// `|n|`: position of the highest nonzero digit (0 for `n = 0`).
    pub order: usize,
}

/// The cylinder `I_level(anchor)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    pub level: usize,
    pub anchor: GroupPoint,
    pub rank: usize,
    order: usize,
}

impl Cylinder {
    /// `μ(I) = 1 / M_level`.
    pub fn measure(&self) -> f64 {
        1.0 / self.order as f64
    }

    /// `M_level`.
    pub fn inverse_measure(&self) -> usize {
        self.order
    }

    pub fn contains(&self, x: &GroupPoint) -> bool {
        self.anchor.coords[..self.level] == x.coords[..self.level]
    }

    /// Ranks covered by this cylinder at a finer level `level >= self.level`.
    pub fn rank_range(&self, base: &VilenkinBase, level: usize) -> std::ops::Range<usize> {
        debug_assert!(level >= self.level);
        let width = base.order(level) / base.order(self.level);
        self.rank * width..(self.rank + 1) * width
    }
}
