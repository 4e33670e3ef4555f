//! Mass-metric geometry of the configuration space.
//!
//! A configuration of `n` bodies in `R^d` is stored as a flat row-major
//! array of length `n * d` ([`Points`]). The mass-metric is
//! `<v, w>_M = sum_j m_j v_j . w_j`; the inertia ellipsoid `S` is the set of
//! centered configurations of unit mass-norm ([`EllipsoidPoint`]).
//!
//! Rotations act diagonally (the same `d x d` matrix on every body). The
//! `so(d)` basis is fixed: the single standard generator for `d = 2` and the
//! rotations about the coordinate axes for `d = 3`.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative collision guard: the minimum pair distance must exceed this
/// fraction of the configuration diameter.
pub const COLLISION_GUARD: f64 = 1e-9;

/// Tolerance for the inertia-ellipsoid invariants.
pub const ELLIPSOID_TOL: f64 = 1e-12;

/// Positive body masses defining the mass-metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Masses(Vec<f64>);

impl Masses {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidMasses(format!(
                "need at least 2 bodies, got {}",
                values.len()
            )));
        }
        if let Some((j, m)) = values
            .iter()
            .enumerate()
            .find(|(_, m)| !(m.is_finite() && **m > 0.0))
        {
            return Err(Error::InvalidMasses(format!("mass {j} is {m}, must be positive")));
        }
        Ok(Self(values))
    }

    /// `n` unit masses.
    pub fn equal(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `sqrt(m_j)` repeated `d` times per body, the diagonal of the map
    /// `q -> x` that turns the mass-metric into the standard one.
    pub fn sqrt_weights(&self, dim: usize) -> DVector<f64> {
        DVector::from_iterator(
            self.0.len() * dim,
            self.0.iter().flat_map(|m| std::iter::repeat(m.sqrt()).take(dim)),
        )
    }
}

impl TryFrom<Vec<f64>> for Masses {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Masses> for Vec<f64> {
    fn from(m: Masses) -> Self {
        m.0
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// An `n x d` array of reals: positions, velocities or gradients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Points {
    dim: usize,
    coords: Vec<f64>,
}

impl Points {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::ShapeMismatch {
                expected: format!("a multiple of {dim} coordinates"),
                found: format!("{}", coords.len()),
            });
        }
        Ok(Self { dim, coords })
    }

    pub fn zeros(n: usize, dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; n * dim])
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (j, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::ShapeMismatch {
                    expected: format!("{dim} coordinates for body {j}"),
                    found: format!("{}", row.len()),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::new(dim, coords)
    }

    pub fn from_dvector(dim: usize, v: &DVector<f64>) -> Result<Self> {
        Self::new(dim, v.as_slice().to_vec())
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn point_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.coords.chunks(self.dim).map(|c| c.to_vec()).collect()
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    pub fn same_shape(&self, other: &Points) -> Result<()> {
        if self.dim == other.dim && self.coords.len() == other.coords.len() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.n(), self.dim),
                found: format!("{}x{}", other.n(), other.dim),
            })
        }
    }

    pub fn scaled(&self, s: f64) -> Points {
        Points {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Points) -> Result<Points> {
        self.same_shape(other)?;
        Ok(Points {
            dim: self.dim,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + s * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Points) -> Result<Points> {
        self.axpy(-1.0, other)
    }

    /// Applies the `d x d` matrix `r` to every body.
    pub fn transformed(&self, r: &DMatrix<f64>) -> Result<Points> {
        if r.nrows() != self.dim || r.ncols() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0} matrix", self.dim),
                found: format!("{}x{}", r.nrows(), r.ncols()),
            });
        }
        let mut out = vec![0.0; self.coords.len()];
        for (src, dst) in self.coords.chunks(self.dim).zip(out.chunks_mut(self.dim)) {
            for a in 0..self.dim {
                dst[a] = (0..self.dim).map(|b| r[(a, b)] * src[b]).sum();
            }
        }
        Ok(Points { dim: self.dim, coords: out })
    }

    /// Moves body `i` to slot `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Points> {
        if perm.len() != self.n() {
            return Err(Error::ShapeMismatch {
                expected: format!("permutation of {} bodies", self.n()),
                found: format!("{}", perm.len()),
            });
        }
        let mut out = Points::zeros(self.n(), self.dim)?;
        for (i, &target) in perm.iter().enumerate() {
            out.point_mut(target).copy_from_slice(self.point(i));
        }
        Ok(out)
    }

    pub fn pair_distance(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// All mutual distances `|q_i - q_j|`, `i < j`, in lexicographic pair order.
    pub fn pair_distances(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.pair_distance(i, j));
            }
        }
        out
    }

    /// Sorted multiset of mutual distances; invariant under isometries.
    pub fn distance_signature(&self) -> Vec<f64> {
        let mut d = self.pair_distances();
        d.sort_by(f64::total_cmp);
        d
    }

    /// Fails with [`Error::Collision`] when two bodies are closer than the
    /// relative guard.
    pub fn check_collisions(&self) -> Result<()> {
        let n = self.n();
        let mut closest = (0, 0, f64::INFINITY);
        let mut diameter = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let r = self.pair_distance(i, j);
                if !r.is_finite() {
                    return Err(Error::Collision { i, j, distance: r });
                }
                diameter = diameter.max(r);
                if r < closest.2 {
                    closest = (i, j, r);
                }
            }
        }
        let (i, j, distance) = closest;
        if n >= 2 && distance <= COLLISION_GUARD * diameter || diameter == 0.0 {
            return Err(Error::Collision { i, j, distance });
        }
        Ok(())
    }
}

/// A collision-free configuration (a point of `X = E^n \ Delta`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration(Points);

impl Configuration {
    pub fn new(points: Points) -> Result<Self> {
        if points.n() < 2 {
            return Err(Error::ShapeMismatch {
                expected: "at least 2 bodies".into(),
                found: format!("{}", points.n()),
            });
        }
        points.check_collisions()?;
        Ok(Self(points))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Points::from_rows(rows)?)
    }

    pub fn points(&self) -> &Points {
        &self.0
    }

    pub fn into_points(self) -> Points {
        self.0
    }

    /// Translates the center of mass to the origin; distances are unchanged.
    pub fn centered(&self, m: &Masses) -> Result<Configuration> {
        Ok(Configuration(project_center(&self.0, m)?))
    }
}

impl Deref for Configuration {
    type Target = Points;

    fn deref(&self) -> &Points {
        &self.0
    }
}

/// A configuration on the inertia ellipsoid: centered and of unit mass-norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipsoidPoint(Configuration);

impl EllipsoidPoint {
    /// Checks the ellipsoid invariants to [`ELLIPSOID_TOL`].
    pub fn new(q: Configuration, m: &Masses) -> Result<Self> {
        let com = center_of_mass(&q, m)?;
        let norm = mass_norm(&q, m)?;
        let com_norm = com.iter().map(|c| c * c).sum::<f64>().sqrt();
        if com_norm > ELLIPSOID_TOL {
            return Err(Error::Precondition(format!(
                "configuration is not centered (|c| = {com_norm:e})"
            )));
        }
        if (norm * norm - 1.0).abs() > ELLIPSOID_TOL {
            return Err(Error::Precondition(format!(
                "configuration is not on the inertia ellipsoid (|q|_M^2 = {})",
                norm * norm
            )));
        }
        Ok(Self(q))
    }

    /// Centers and normalizes an arbitrary collision-free configuration.
    pub fn from_configuration(q: &Configuration, m: &Masses) -> Result<Self> {
        normalize_to_ellipsoid(&q.centered(m)?, m)
    }

    pub fn from_points(q: Points, m: &Masses) -> Result<Self> {
        Self::from_configuration(&Configuration::new(q)?, m)
    }

    pub fn configuration(&self) -> &Configuration {
        &self.0
    }

    pub fn into_points(self) -> Points {
        self.0.into_points()
    }
}

impl Deref for EllipsoidPoint {
    type Target = Points;

    fn deref(&self) -> &Points {
        &self.0
    }
}

fn check_masses(q: &Points, m: &Masses) -> Result<()> {
    if q.n() == m.len() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            expected: format!("{} bodies", m.len()),
            found: format!("{}", q.n()),
        })
    }
}

/// `<v, w>_M = sum_j m_j v_j . w_j`.
pub fn mass_inner(v: &Points, w: &Points, m: &Masses) -> Result<f64> {
    v.same_shape(w)?;
    check_masses(v, m)?;
    let d = v.dim();
    Ok(m
        .as_slice()
        .iter()
        .enumerate()
        .map(|(j, mj)| {
            let a = &v.as_slice()[j * d..(j + 1) * d];
            let b = &w.as_slice()[j * d..(j + 1) * d];
            mj * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
        })
        .sum())
}

pub fn mass_norm(v: &Points, m: &Masses) -> Result<f64> {
    Ok(mass_inner(v, v, m)?.sqrt())
}

pub fn center_of_mass(q: &Points, m: &Masses) -> Result<Vec<f64>> {
    check_masses(q, m)?;
    let d = q.dim();
    let mut c = vec![0.0; d];
    for (j, mj) in m.as_slice().iter().enumerate() {
        for (a, ca) in c.iter_mut().enumerate() {
            *ca += mj * q.point(j)[a];
        }
    }
    let total = m.total();
    c.iter_mut().for_each(|x| *x /= total);
    Ok(c)
}

/// Mass-orthogonal projection onto `Y = { sum_j m_j q_j = 0 }`.
pub fn project_center(q: &Points, m: &Masses) -> Result<Points> {
    let c = center_of_mass(q, m)?;
    let mut out = q.clone();
    for j in 0..q.n() {
        for (a, ca) in c.iter().enumerate() {
            out.point_mut(j)[a] -= ca;
        }
    }
    Ok(out)
}

/// Radial projection of a centered configuration onto the inertia ellipsoid.
pub fn normalize_to_ellipsoid(q: &Configuration, m: &Masses) -> Result<EllipsoidPoint> {
    let norm = mass_norm(q, m)?;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    let com = center_of_mass(q, m)?;
    let com_norm = com.iter().map(|c| c * c).sum::<f64>().sqrt();
    if com_norm > ELLIPSOID_TOL * norm {
        return Err(Error::Precondition(format!(
            "configuration is not centered (|c| = {com_norm:e})"
        )));
    }
    let scaled = Configuration::new(q.scaled(1.0 / norm))?;
    EllipsoidPoint::new(scaled, m)
}

/// Basis of `so(d)`: the standard generator for `d = 2`, rotations about
/// the `x`, `y`, `z` axes for `d = 3`.
pub fn so_basis(dim: usize) -> Result<Vec<DMatrix<f64>>> {
    match dim {
        2 => Ok(vec![DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])]),
        3 => Ok(vec![
            DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]),
            DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0]),
            DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        ]),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// `d(d-1)/2`, the dimension of `SO(d)` orbits of maximal isotropy type.
pub fn orbit_dimension(dim: usize) -> usize {
    dim * (dim - 1) / 2
}

/// Infinitesimal rotations `Omega_k q` for the fixed `so(d)` basis.
pub fn orbit_directions(q: &Points) -> Vec<Points> {
    so_basis(q.dim())
        .expect("Points always has a supported dimension")
        .iter()
        .map(|w| q.transformed(w).expect("basis matches dimension"))
        .collect()
}

/// Numerical rank of the orbit directions under the mass-metric. Equals
/// `d(d-1)/2` exactly when `q` has trivial `SO(d)` isotropy.
pub fn isotropy_rank(q: &Points, m: &Masses) -> Result<usize> {
    let dirs = orbit_directions(q);
    let k = dirs.len();
    let mut gram = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            gram[(a, b)] = mass_inner(&dirs[a], &dirs[b], m)?;
        }
    }
    let scale = mass_inner(q, q, m)?;
    let eig = gram.symmetric_eigenvalues();
    Ok(eig.iter().filter(|e| **e > 1e-12 * scale.max(f64::MIN_POSITIVE)).count())
}

/// A skew-symmetric generator in block-diagonal form: `2 x 2` blocks
/// `[[0, -theta_i], [theta_i, 0]]` along the diagonal, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockGenerator {
    pub dim: usize,
    pub angles: Vec<f64>,
}

impl BlockGenerator {
    pub fn new(dim: usize, angles: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if angles.len() > dim / 2 {
            return Err(Error::NotBlockForm(format!(
                "{} blocks do not fit in dimension {dim}",
                angles.len()
            )));
        }
        Ok(Self { dim, angles })
    }

    /// Reads the angles off a block-diagonal skew matrix.
    pub fn from_matrix(omega: &DMatrix<f64>) -> Result<Self> {
        let d = omega.nrows();
        if omega.ncols() != d {
            return Err(Error::NotBlockForm("matrix is not square".into()));
        }
        check_dim(d)?;
        let blocks = d / 2;
        let mut angles = Vec::with_capacity(blocks);
        for i in 0..d {
            for j in 0..d {
                let in_block = i / 2 == j / 2 && i / 2 < blocks && i != j;
                if !in_block && omega[(i, j)] != 0.0 {
                    return Err(Error::NotBlockForm(format!(
                        "non-zero entry at ({i}, {j})"
                    )));
                }
            }
        }
        for b in 0..blocks {
            let (lo, hi) = (omega[(2 * b, 2 * b + 1)], omega[(2 * b + 1, 2 * b)]);
            if lo != -hi {
                return Err(Error::NotBlockForm(format!("block {b} is not skew-symmetric")));
            }
            angles.push(hi);
        }
        Ok(Self { dim: d, angles })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (b, theta) in self.angles.iter().enumerate() {
            m[(2 * b, 2 * b + 1)] = -theta;
            m[(2 * b + 1, 2 * b)] = *theta;
        }
        m
    }

    /// `e^Omega`, assembled block by block.
    pub fn exp(&self) -> DMatrix<f64> {
        let mut r = DMatrix::identity(self.dim, self.dim);
        for (b, theta) in self.angles.iter().enumerate() {
            let (s, c) = theta.sin_cos();
            r[(2 * b, 2 * b)] = c;
            r[(2 * b, 2 * b + 1)] = -s;
            r[(2 * b + 1, 2 * b)] = s;
            r[(2 * b + 1, 2 * b + 1)] = c;
        }
        r
    }
}

/// Both sides of `(e^Omega x) . (Omega x) = sum_i theta_i sin(theta_i) |z_i|^2`,
/// where `z_i` is the component of `x` in the `i`-th rotation plane.
///
/// The left side uses a general matrix exponential so the two sides are
/// computed independently.
pub fn rotation_form_check(omega: &DMatrix<f64>, x: &[f64]) -> Result<(f64, f64)> {
    let gen = BlockGenerator::from_matrix(omega)?;
    if x.len() != gen.dim {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coordinates", gen.dim),
            found: format!("{}", x.len()),
        });
    }
    let xv = DVector::from_column_slice(x);
    let lhs = (omega.clone().exp() * &xv).dot(&(omega * &xv));
    let rhs = gen
        .angles
        .iter()
        .enumerate()
        .map(|(i, theta)| theta * theta.sin() * (x[2 * i].powi(2) + x[2 * i + 1].powi(2)))
        .sum();
    Ok((lhs, rhs))
}

/// Rotation by `angle` about the unit vector `axis` (Rodrigues' formula).
pub fn axis_rotation(axis: &[f64; 3], angle: f64) -> DMatrix<f64> {
    let (s, c) = angle.sin_cos();
    let [x, y, z] = *axis;
    let k = DMatrix::from_row_slice(3, 3, &[0.0, -z, y, z, 0.0, -x, -y, x, 0.0]);
    DMatrix::identity(3, 3) + &k * s + &k * &k * (1.0 - c)
}

/// Planar rotation by `angle`.
pub fn planar_rotation(angle: f64) -> DMatrix<f64> {
    let (s, c) = angle.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Result of a mass-weighted orthogonal alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    /// Proper rotation `g` minimizing `|g from - to|_M`.
    pub rotation: DMatrix<f64>,
    /// The minimal value `|g from - to|_M`.
    pub residual: f64,
}

/// Finds `g` in `SO(d)` minimizing `|g from - to|_M`.
///
/// In the plane the optimal angle has a closed form; in space the optimal
/// unit quaternion is the top eigenvector of Horn's symmetric `4 x 4`
/// matrix. When the minimizer is not unique (collinear point sets) the one
/// closest to the identity is returned.
pub fn align_rotation(from: &Points, to: &Points, m: &Masses) -> Result<Alignment> {
    from.same_shape(to)?;
    check_masses(from, m)?;
    let d = from.dim();
    // s[(r, c)] = sum_j m_j from_j[r] to_j[c]
    let mut s = DMatrix::<f64>::zeros(d, d);
    for (j, mj) in m.as_slice().iter().enumerate() {
        let (a, b) = (from.point(j), to.point(j));
        for r in 0..d {
            for c in 0..d {
                s[(r, c)] += mj * a[r] * b[c];
            }
        }
    }
    let rotation = match d {
        2 => {
            let (y, x) = (s[(0, 1)] - s[(1, 0)], s[(0, 0)] + s[(1, 1)]);
            planar_rotation(if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) })
        }
        3 => horn_rotation(&s),
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    let residual = mass_norm(&from.transformed(&rotation)?.sub(to)?, m)?;
    Ok(Alignment { rotation, residual })
}

fn horn_rotation(s: &DMatrix<f64>) -> DMatrix<f64> {
    let (xx, xy, xz) = (s[(0, 0)], s[(0, 1)], s[(0, 2)]);
    let (yx, yy, yz) = (s[(1, 0)], s[(1, 1)], s[(1, 2)]);
    let (zx, zy, zz) = (s[(2, 0)], s[(2, 1)], s[(2, 2)]);
    #[rustfmt::skip]
    let n = DMatrix::from_row_slice(4, 4, &[
        xx + yy + zz, yz - zy,       zx - xz,       xy - yx,
        yz - zy,      xx - yy - zz,  xy + yx,       zx + xz,
        zx - xz,      xy + yx,       -xx + yy - zz, yz + zy,
        xy - yx,      zx + xz,       yz + zy,       -xx - yy + zz,
    ]);
    let eig = n.clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let band = 1e-12 * n.norm().max(f64::MIN_POSITIVE);
    // Among optimal quaternions, the one with the largest scalar part.
    let mut qv = nalgebra::DVector::<f64>::zeros(4);
    let mut fallback = 0;
    for k in 0..4 {
        if eig.eigenvalues[k] >= top - band {
            let v = eig.eigenvectors.column(k);
            qv += v * v[0];
            fallback = k;
        }
    }
    if qv.norm() < 1e-8 {
        qv = eig.eigenvectors.column(fallback).into_owned();
    }
    qv /= qv.norm();
    let (w, x, y, z) = (qv[0], qv[1], qv[2], qv[3]);
    #[rustfmt::skip]
    let r = DMatrix::from_row_slice(3, 3, &[
        1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z),       2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),       1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),       2.0 * (y * z + w * x),       1.0 - 2.0 * (x * x + y * y),
    ]);
    r
}
