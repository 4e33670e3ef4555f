//! Homogeneous pairwise potentials `U(q) = sum_{i<j} kappa_ij |q_i - q_j|^-alpha`.
//!
//! `kappa_ij = m_i m_j` gives the Newtonian family, `kappa_ij = 1 - gamma_i gamma_j`
//! the charged one. All derivatives are analytic; the sign convention is that
//! of a force function, so the equations of motion read `q'' = grad_M U(q)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mass_geometry::{mass_norm, Masses, Points};

/// Pair coefficients, homogeneity exponent and the masses of the metric.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPotential {
    kappa: DMatrix<f64>,
    alpha: f64,
    masses: Masses,
}

impl PairPotential {
    /// Explicit pair-coefficient matrix; must be symmetric with zero diagonal.
    pub fn new(masses: Masses, kappa: DMatrix<f64>, alpha: f64) -> Result<Self> {
        let n = masses.len();
        if kappa.nrows() != n || kappa.ncols() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n} pair coefficients"),
                found: format!("{}x{}", kappa.nrows(), kappa.ncols()),
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidPotential(format!("alpha = {alpha} must be positive")));
        }
        for i in 0..n {
            if kappa[(i, i)] != 0.0 {
                return Err(Error::InvalidPotential(format!("kappa[{i}][{i}] must be zero")));
            }
            for j in 0..i {
                if !kappa[(i, j)].is_finite() || kappa[(i, j)] != kappa[(j, i)] {
                    return Err(Error::InvalidPotential(format!(
                        "kappa is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { kappa, alpha, masses })
    }

    /// `kappa_ij = m_i m_j`.
    pub fn newtonian(masses: Masses, alpha: f64) -> Result<Self> {
        let m = masses.as_slice();
        let n = m.len();
        let kappa = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { m[i] * m[j] });
        Self::new(masses, kappa, alpha)
    }

    /// `kappa_ij = 1 - gamma_i gamma_j`.
    pub fn charged(masses: Masses, gamma: &[f64], alpha: f64) -> Result<Self> {
        let n = masses.len();
        if gamma.len() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n} charges"),
                found: format!("{}", gamma.len()),
            });
        }
        let kappa = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                1.0 - gamma[i] * gamma[j]
            }
        });
        Self::new(masses, kappa, alpha)
    }

    pub fn kappa(&self) -> &DMatrix<f64> {
        &self.kappa
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn masses(&self) -> &Masses {
        &self.masses
    }

    pub fn n(&self) -> usize {
        self.masses.len()
    }

    /// True when every pair coefficient is positive (attractive pairs only).
    pub fn all_attractive(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.kappa[(i, j)] > 0.0))
    }

    fn check(&self, q: &Points) -> Result<()> {
        if q.n() != self.n() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} bodies", self.n()),
                found: format!("{}", q.n()),
            });
        }
        q.check_collisions()
    }

    /// `U(q)`.
    pub fn value(&self, q: &Points) -> Result<f64> {
        self.check(q)?;
        let n = self.n();
        let mut u = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let k = self.kappa[(i, j)];
                if k != 0.0 {
                    u += k * q.pair_distance(i, j).powf(-self.alpha);
                }
            }
        }
        Ok(u)
    }

    /// Euclidean partials `dU/dq_j = alpha sum_k kappa_jk (q_k - q_j) / |q_k - q_j|^(alpha+2)`.
    pub fn euclid_gradient(&self, q: &Points) -> Result<Points> {
        self.check(q)?;
        let (n, d) = (self.n(), q.dim());
        let mut g = Points::zeros(n, d)?;
        for i in 0..n {
            for j in i + 1..n {
                let k = self.kappa[(i, j)];
                if k == 0.0 {
                    continue;
                }
                let r = q.pair_distance(i, j);
                let w = self.alpha * k * r.powf(-self.alpha - 2.0);
                for a in 0..d {
                    let delta = q.point(j)[a] - q.point(i)[a];
                    g.point_mut(i)[a] += w * delta;
                    g.point_mut(j)[a] -= w * delta;
                }
            }
        }
        Ok(g)
    }

    /// Mass-metric gradient `(grad_M U)_j = m_j^-1 dU/dq_j`.
    pub fn mass_gradient(&self, q: &Points) -> Result<Points> {
        let mut g = self.euclid_gradient(q)?;
        for (j, mj) in self.masses.as_slice().iter().enumerate() {
            g.point_mut(j).iter_mut().for_each(|c| *c /= mj);
        }
        Ok(g)
    }

    /// Ambient Hessian of `U` in the flat coordinates `q_(j*d + a)`.
    ///
    /// Each pair contributes the block
    /// `B = alpha kappa r^-(alpha+2) ((alpha+2) u u^T - I)`, `u` the unit
    /// separation, with `+B` on the diagonal blocks and `-B` off-diagonal.
    pub fn hessian(&self, q: &Points) -> Result<DMatrix<f64>> {
        self.check(q)?;
        let (n, d) = (self.n(), q.dim());
        let mut h = DMatrix::zeros(n * d, n * d);
        for i in 0..n {
            for j in i + 1..n {
                let k = self.kappa[(i, j)];
                if k == 0.0 {
                    continue;
                }
                let r = q.pair_distance(i, j);
                let w = self.alpha * k * r.powf(-self.alpha - 2.0);
                let u: Vec<f64> = (0..d).map(|a| (q.point(i)[a] - q.point(j)[a]) / r).collect();
                for a in 0..d {
                    for b in 0..d {
                        let delta = if a == b { 1.0 } else { 0.0 };
                        let blk = w * ((self.alpha + 2.0) * (u[a] * u[b]) - delta);
                        h[(i * d + a, i * d + b)] += blk;
                        h[(j * d + a, j * d + b)] += blk;
                        h[(i * d + a, j * d + b)] -= blk;
                        h[(j * d + a, i * d + b)] -= blk;
                    }
                }
            }
        }
        Ok(h)
    }
}

/// A permutation of bodies, `perm[i]` being the slot body `i` moves to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::SymmetryViolation(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(Self(perm))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Product of disjoint transpositions, zero-based.
    pub fn from_transpositions(n: usize, swaps: &[(usize, usize)]) -> Result<Self> {
        let mut p: Vec<usize> = (0..n).collect();
        for &(a, b) in swaps {
            if a >= n || b >= n {
                return Err(Error::SymmetryViolation(format!("({a} {b}) out of range")));
            }
            p.swap(a, b);
        }
        Self::new(p)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fails unless `kappa_(s i, s j) = kappa_ij` and `m_(s i) = m_i`.
    pub fn check_preserves(&self, pot: &PairPotential) -> Result<()> {
        let n = pot.n();
        if self.len() != n {
            return Err(Error::SymmetryViolation(format!(
                "permutation of {} bodies applied to {n}",
                self.len()
            )));
        }
        let (p, m, k) = (&self.0, pot.masses().as_slice(), pot.kappa());
        for i in 0..n {
            if m[p[i]] != m[i] {
                return Err(Error::SymmetryViolation(format!(
                    "body {i} (mass {}) sent to body {} (mass {})",
                    m[i], p[i], m[p[i]]
                )));
            }
            for j in 0..n {
                if k[(p[i], p[j])] != k[(i, j)] {
                    return Err(Error::SymmetryViolation(format!(
                        "pair coefficient ({i}, {j}) is not preserved"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An element `(sigma, R)` of `Sigma_n x O(d)` acting by
/// `(g q)_(sigma i) = R q_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub permutation: Permutation,
    pub rotation: DMatrix<f64>,
}

impl GroupElement {
    pub fn new(permutation: Permutation, rotation: DMatrix<f64>) -> Result<Self> {
        let d = rotation.nrows();
        if rotation.ncols() != d {
            return Err(Error::ShapeMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", d, rotation.ncols()),
            });
        }
        let orth = (&rotation * rotation.transpose() - DMatrix::identity(d, d)).norm();
        if orth > 1e-12 {
            return Err(Error::SymmetryViolation(format!(
                "matrix is not orthogonal (|R R^T - I| = {orth:e})"
            )));
        }
        Ok(Self { permutation, rotation })
    }

    pub fn act(&self, q: &Points) -> Result<Points> {
        q.transformed(&self.rotation)?.permuted(self.permutation.as_slice())
    }
}

/// Generators of the `kappa`- and mass-preserving permutation subgroup,
/// plus whether the orthogonal factor is included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetrySpec {
    pub permutations: Vec<Permutation>,
    pub include_rotations: bool,
}

impl SymmetrySpec {
    /// Validates every generator against `pot`.
    pub fn new(pot: &PairPotential, permutations: Vec<Permutation>, include_rotations: bool) -> Result<Self> {
        for p in &permutations {
            p.check_preserves(pot)?;
        }
        Ok(Self { permutations, include_rotations })
    }
}

/// Invariance residuals of `U` under a group element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceResiduals {
    /// `|U(gq) - U(q)|`.
    pub value: f64,
    /// `|grad_M U(gq) - g grad_M U(q)|_M`.
    pub gradient: f64,
}

pub fn invariance_check(pot: &PairPotential, q: &Points, g: &GroupElement) -> Result<InvarianceResiduals> {
    g.permutation.check_preserves(pot)?;
    let gq = g.act(q)?;
    let value = (pot.value(&gq)? - pot.value(q)?).abs();
    let lhs = pot.mass_gradient(&gq)?;
    let rhs = g.act(&pot.mass_gradient(q)?)?;
    let gradient = mass_norm(&lhs.sub(&rhs)?, pot.masses())?;
    Ok(InvarianceResiduals { value, gradient })
}
