//! Second-order data at a central configuration: the Hessian of `U`
//! restricted to the inertia ellipsoid, the Jacobian of the normalized
//! gradient map, Morse index and fixed-point index.
//!
//! Everything is computed in an adapted chart. With `x = M^(1/2) q` the
//! centered subspace becomes a Euclidean space in which the ellipsoid is the
//! unit sphere; an orthonormal frame `(e_0, e_1, .., e_l)` of that subspace
//! with `e_0 = x(q)` gives the chart `u -> (e_0 + T u) / |(1, u)|` of `S`
//! around `q`, `T = (e_1 .. e_l)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cc_solver::residual;
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_complement, sorted_symmetric_eigen};
use crate::mass_geometry::{isotropy_rank, orbit_dimension, orbit_directions, EllipsoidPoint, Masses, Points};
use crate::potentials::PairPotential;

/// Eigenvalues with `|lambda| <= KERNEL_REL_TOL * scale` count as kernel.
pub const KERNEL_REL_TOL: f64 = 1e-6;
/// Required ratio between the smallest nonkernel eigenvalue and the kernel band.
pub const MIN_GAP_RATIO: f64 = 1e3;
/// Largest [`residual`] accepted as a central configuration.
pub const CENTRAL_TOL: f64 = 1e-8;

/// Orthonormal frame of the centered subspace in mass-scaled coordinates
/// whose first vector is the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    dim: usize,
    sqrt_weights: DVector<f64>,
    /// `nd x (l + 1)`; column 0 is `x(q)`, the rest span the tangent space.
    basis: DMatrix<f64>,
}

impl AdaptedFrame {
    /// Builds the frame: an orthonormal basis `W` of the centered subspace,
    /// then the Householder reflection sending `W^T x(q)` to a multiple of
    /// the first axis, corrected to a rotation.
    pub fn new(q: &EllipsoidPoint, m: &Masses) -> Result<Self> {
        let dim = q.dim();
        if q.n() != m.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} bodies", m.len()),
                found: format!("{}", q.n()),
            });
        }
        let sw = m.sqrt_weights(dim);
        let nd = sw.len();
        let translations: Vec<DVector<f64>> = (0..dim)
            .map(|c| DVector::from_fn(nd, |i, _| if i % dim == c { sw[i] } else { 0.0 }))
            .collect();
        let (_, w) = orthonormal_complement(nd, &translations);
        let x = q.to_dvector().component_mul(&sw);
        let y = w.transpose() * &x;
        let p = y.len();
        let s = if y[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = y.clone();
        v[0] += s;
        let h = DMatrix::identity(p, p) - &v * v.transpose() * (2.0 / v.norm_squared());
        // H y = -s e_0 and det H = -1; D fixes both.
        let mut d = DMatrix::identity(p, p);
        d[(0, 0)] = -s;
        d[(p - 1, p - 1)] *= s;
        let rot = d * h;
        let mut basis = w * rot.transpose();
        basis.set_column(0, &x);
        Ok(Self { dim, sqrt_weights: sw, basis })
    }

    /// Replaces the tangent part `T` by `T R` for an orthogonal `l x l` matrix `R`.
    pub fn with_tangent_rotation(&self, r: &DMatrix<f64>) -> Result<Self> {
        let l = self.l();
        if r.nrows() != l || r.ncols() != l {
            return Err(Error::ShapeMismatch { expected: format!("{l}x{l}"), found: format!("{}x{}", r.nrows(), r.ncols()) });
        }
        if (r.transpose() * r - DMatrix::identity(l, l)).norm() > 1e-12 {
            return Err(Error::Precondition("tangent change is not orthogonal".into()));
        }
        let mut basis = self.basis.clone();
        let t = self.tangent() * r;
        basis.columns_mut(1, l).copy_from(&t);
        Ok(Self { basis, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the ellipsoid, `d(n - 1) - 1`.
    pub fn l(&self) -> usize {
        self.basis.ncols() - 1
    }

    /// The full `nd x (l + 1)` frame in mass-scaled coordinates.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn base(&self) -> DVector<f64> {
        self.basis.column(0).into_owned()
    }

    /// Tangent basis `T`, `nd x l`.
    pub fn tangent(&self) -> DMatrix<f64> {
        self.basis.columns(1, self.l()).into_owned()
    }

    /// Frame coordinates `E^T M^(1/2) v` of a centered configuration.
    pub fn coordinates(&self, v: &Points) -> DVector<f64> {
        self.basis.transpose() * v.to_dvector().component_mul(&self.sqrt_weights)
    }

    /// The point of `S` with chart coordinate `u`.
    pub fn chart(&self, u: &[f64]) -> Result<Points> {
        if u.len() != self.l() {
            return Err(Error::ShapeMismatch { expected: format!("{} chart coordinates", self.l()), found: u.len().to_string() });
        }
        let u = DVector::from_column_slice(u);
        let x = (self.base() + self.tangent() * &u) / (1.0 + u.norm_squared()).sqrt();
        Points::from_dvector(self.dim, &x.component_div(&self.sqrt_weights))
    }

    /// Chart coordinate of a point of `S` in the open hemisphere around the base.
    pub fn unchart(&self, q: &Points) -> Result<DVector<f64>> {
        let z = self.coordinates(q);
        if z[0] <= 0.0 {
            return Err(Error::Precondition("point is outside the chart hemisphere".into()));
        }
        Ok(z.rows(1, self.l()) / z[0])
    }

    fn mass_scaled_hessian(&self, pot: &PairPotential, q: &Points) -> Result<DMatrix<f64>> {
        let h = pot.hessian(q)?;
        let sw = &self.sqrt_weights;
        Ok(DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] / (sw[i] * sw[j])))
    }

    fn base_points(&self) -> Result<Points> {
        Points::from_dvector(self.dim, &self.base().component_div(&self.sqrt_weights))
    }
}

/// `D^2 U~ = T^T H_x T + alpha U I`, the Hessian of `U` in the chart at the base
/// point (valid at central configurations, where the gradient term vanishes).
pub fn restricted_hessian(pot: &PairPotential, frame: &AdaptedFrame) -> Result<DMatrix<f64>> {
    let q = frame.base_points()?;
    let hx = frame.mass_scaled_hessian(pot, &q)?;
    let t = frame.tangent();
    let l = frame.l();
    let mut out = t.transpose() * hx * &t + DMatrix::identity(l, l) * (pot.alpha() * pot.value(&q)?);
    out = (&out + out.transpose()) * 0.5;
    Ok(out)
}

/// Jacobian of `F` read through the chart at the base point,
/// `F' = -T^T (I - g g^T / |g|^2) H_x T / |g|` with `g` the gradient in `x`.
pub fn map_f_jacobian(pot: &PairPotential, frame: &AdaptedFrame) -> Result<DMatrix<f64>> {
    let q = frame.base_points()?;
    let u = pot.value(&q)?;
    if u <= 0.0 {
        return Err(Error::NonPositivePotential { value: u });
    }
    let hx = frame.mass_scaled_hessian(pot, &q)?;
    let g = pot.euclid_gradient(&q)?.to_dvector().component_div(&frame.sqrt_weights);
    let gn = g.norm();
    let ghat = &g / gn;
    let t = frame.tangent();
    let ht = hx * &t;
    let proj = &ht - &ghat * (ghat.transpose() * &ht);
    Ok(-(t.transpose() * proj) / gn)
}

/// Residuals of the relation between `F'` and `D^2 U~`, relative to `alpha U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    /// `|alpha U (I - F') - D^2 U~| / (alpha U)`.
    pub residual: f64,
    /// `|-alpha U (I - F') - D^2 U~| / (alpha U)`.
    pub stated_residual: f64,
    /// `partial U / partial x_0 + alpha U`, relative to `alpha U`.
    pub radial_residual: f64,
}

/// Compares `alpha U (I - F')` with `D^2 U~` at a central configuration.
///
/// The relation holds with a plus sign; the form with the opposite sign is
/// reported alongside and vanishes only where `D^2 U~ = 0`.
pub fn identity_check(pot: &PairPotential, q: &EllipsoidPoint) -> Result<IdentityCheck> {
    require_central(pot, q)?;
    let frame = AdaptedFrame::new(q, pot.masses())?;
    identity_check_in(pot, &frame)
}

pub fn identity_check_in(pot: &PairPotential, frame: &AdaptedFrame) -> Result<IdentityCheck> {
    let q = frame.base_points()?;
    let au = pot.alpha() * pot.value(&q)?;
    let d2 = restricted_hessian(pot, frame)?;
    let fp = map_f_jacobian(pot, frame)?;
    let l = frame.l();
    let a = (DMatrix::identity(l, l) - fp) * au;
    let g = pot.euclid_gradient(&q)?.to_dvector().component_div(&frame.sqrt_weights);
    Ok(IdentityCheck {
        residual: (&a - &d2).norm() / au,
        stated_residual: (-&a - &d2).norm() / au,
        radial_residual: (g.dot(&frame.base()) + au).abs() / au,
    })
}

/// `d(n - 1) - 1 - d(d - 1)/2`.
pub fn epsilon(n: usize, d: usize) -> i64 {
    (d * (n - 1)) as i64 - 1 - orbit_dimension(d) as i64
}

fn sign_pow(k: i64) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Spectral data and indices of a nondegenerate central configuration with
/// trivial isotropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexRecord {
    /// Number of negative eigenvalues of `D^2 U~`.
    pub morse_index: usize,
    pub kernel_dim: usize,
    pub kernel_tol: f64,
    pub gap_ratio: f64,
    pub epsilon: i64,
    /// Sign of `det(I - F')` on the slice orthogonal to the rotation orbit.
    pub fixed_point_index: i32,
    /// `(-1)^(morse_index + epsilon)`.
    pub formula_index: i32,
    pub routes_agree: bool,
    /// Eigenvalues of `D^2 U~`, ascending.
    pub spectrum: Vec<f64>,
    /// Eigenvalues of `F'` within `1e-6` of one.
    pub unit_eigenvalues: usize,
    pub identity_residual: f64,
    pub stated_identity_residual: f64,
}

fn require_central(pot: &PairPotential, q: &EllipsoidPoint) -> Result<()> {
    let r = residual(pot, q)?;
    if r > CENTRAL_TOL {
        return Err(Error::Precondition(format!("not a central configuration (residual {r:e})")));
    }
    Ok(())
}

/// Kernel dimension, tolerance and gap ratio of a sorted symmetric spectrum.
pub fn kernel_split(spectrum: &[f64], scale: f64) -> (usize, f64, f64) {
    let tol = KERNEL_REL_TOL * scale;
    let kernel: Vec<f64> = spectrum.iter().map(|v| v.abs()).filter(|v| *v <= tol).collect();
    let band = kernel.iter().cloned().fold(0.0, f64::max);
    let smallest = spectrum.iter().map(|v| v.abs()).filter(|v| *v > tol).fold(f64::INFINITY, f64::min);
    let gap = if band == 0.0 { f64::INFINITY } else { smallest / band };
    (kernel.len(), tol, gap)
}

/// Morse index and fixed-point index at `q`.
///
/// Refuses configurations that are not central, have nontrivial
/// isotropy, a kernel larger than the orbit, or no clear spectral gap.
pub fn fixed_point_index(pot: &PairPotential, q: &EllipsoidPoint) -> Result<IndexRecord> {
    require_central(pot, q)?;
    let m = pot.masses();
    let (n, d) = (q.n(), q.dim());
    let expected = orbit_dimension(d);
    let rank = isotropy_rank(q, m)?;
    if rank != expected {
        return Err(Error::NonMaximalIsotropy { rank, expected });
    }
    let frame = AdaptedFrame::new(q, m)?;
    let d2 = restricted_hessian(pot, &frame)?;
    let (spectrum, _) = sorted_symmetric_eigen(&d2);
    let au = pot.alpha() * pot.value(q)?;
    let radius = spectrum.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let (kernel_dim, kernel_tol, gap_ratio) = kernel_split(&spectrum, radius.max(au));
    if kernel_dim != expected {
        return Err(Error::Degenerate { kernel_dim, expected });
    }
    if gap_ratio < MIN_GAP_RATIO {
        return Err(Error::AmbiguousSpectrum { gap_ratio, required: MIN_GAP_RATIO });
    }
    let morse_index = spectrum.iter().filter(|v| **v < -kernel_tol).count();
    let eps = epsilon(n, d);
    let formula_index = sign_pow(morse_index as i64 + eps);

    let fp = map_f_jacobian(pot, &frame)?;
    let l = frame.l();
    let orbit: Vec<DVector<f64>> = orbit_directions(q).iter().map(|o| frame.coordinates(o).rows(1, l).into_owned()).collect();
    let (_, slice) = orthonormal_complement(l, &orbit);
    let on_slice = slice.transpose() * (DMatrix::identity(l, l) - &fp) * &slice;
    let det = if on_slice.nrows() == 0 { 1.0 } else { on_slice.determinant() };
    let fixed_point_index = if det > 0.0 { 1 } else { -1 };

    let (fp_spec, _) = sorted_symmetric_eigen(&fp);
    let unit_eigenvalues = fp_spec.iter().filter(|v| (**v - 1.0).abs() <= 1e-6).count();
    let id = identity_check_in(pot, &frame)?;
    Ok(IndexRecord {
        morse_index,
        kernel_dim,
        kernel_tol,
        gap_ratio,
        epsilon: eps,
        fixed_point_index,
        formula_index,
        routes_agree: fixed_point_index == formula_index,
        spectrum,
        unit_eigenvalues,
        identity_residual: id.residual,
        stated_identity_residual: id.stated_residual,
    })
}
