use nalgebra::DMatrix;
use serde::Serialize;

use super::map_f;
use crate::error::{Error, Result};
use crate::mass_geometry::{align_rotation, mass_norm, EllipsoidPoint, Points};
use crate::potentials::{GroupElement, PairPotential};

/// Values compliant with the sign properties are those `<= SIGN_SLACK`
/// (resp. `>= -SIGN_SLACK`).
pub const SIGN_SLACK: f64 = 1e-12;

/// Outcome of the projected sign check at the body farthest from the
/// origin in a plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropertyCheck {
    /// `argmax_k |p(q_k)|^2`.
    pub j: usize,
    /// `p(dU/dq_j) . p(q_j)`; nonpositive for attractive potentials.
    pub value: f64,
    /// `p(F_j(q)) . p(q_j)`; nonnegative for attractive potentials.
    pub f_value: f64,
    /// `|p(q_j)|^2`.
    pub projected_norm2: f64,
    /// True when `value <= SIGN_SLACK` and `f_value >= -SIGN_SLACK`.
    pub holds: bool,
}

fn project(plane: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..plane.ncols())
        .map(|c| (0..plane.nrows()).map(|r| plane[(r, c)] * v[r]).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluates the projected sign properties for `plane`, a `d x 2`
/// orthonormal frame. Does not enforce attractive `kappa`; for other
/// potentials the result is informative only.
pub fn check_property_f(pot: &PairPotential, q: &EllipsoidPoint, plane: &DMatrix<f64>) -> Result<PropertyCheck> {
    let d = q.dim();
    if plane.nrows() != d || plane.ncols() != 2 {
        return Err(Error::ShapeMismatch {
            expected: format!("{d}x2 frame"),
            found: format!("{}x{}", plane.nrows(), plane.ncols()),
        });
    }
    let gram = plane.transpose() * plane;
    if (gram - DMatrix::<f64>::identity(2, 2)).norm() > 1e-10 {
        return Err(Error::Precondition("plane frame is not orthonormal".into()));
    }
    let proj: Vec<Vec<f64>> = (0..q.n()).map(|k| project(plane, q.point(k))).collect();
    let mut j = 0;
    let mut best = f64::NEG_INFINITY;
    for (k, p) in proj.iter().enumerate() {
        let r = dot(p, p);
        if r > best {
            best = r;
            j = k;
        }
    }
    let grad = pot.euclid_gradient(q)?;
    let value = dot(&project(plane, grad.point(j)), &proj[j]);
    let f = map_f(pot, q)?;
    let f_value = dot(&project(plane, f.point(j)), &proj[j]);
    Ok(PropertyCheck {
        j,
        value,
        f_value,
        projected_norm2: best,
        holds: value <= SIGN_SLACK && f_value >= -SIGN_SLACK,
    })
}

/// Rotation aligning `q` onto `F(q)` at a quotient fixed point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftCheck {
    pub rotation: Vec<Vec<f64>>,
    /// `min_g |g q - F(q)|_M`.
    pub alignment_residual: f64,
    /// Frobenius norm `|g - I|`.
    pub deviation: f64,
    /// `deviation <= 10 tol`.
    pub is_identity: bool,
}

/// Finds `g` in `SO(d)` with `F(q) = g q` and reports how far it is from
/// the identity.
pub fn check_quotient_lift(pot: &PairPotential, q: &EllipsoidPoint, tol: f64) -> Result<LiftCheck> {
    let f = map_f(pot, q)?;
    let al = align_rotation(q, &f, pot.masses())?;
    if al.residual > tol {
        return Err(Error::NotQuotientFixedPoint { residual: al.residual, tol });
    }
    let d = q.dim();
    let deviation = (&al.rotation - DMatrix::<f64>::identity(d, d)).norm();
    Ok(LiftCheck {
        rotation: (0..d).map(|r| al.rotation.row(r).iter().copied().collect()).collect(),
        alignment_residual: al.residual,
        deviation,
        is_identity: deviation <= 10.0 * tol,
    })
}

/// `|F(g q) - g F(q)|_M` for `g = (sigma, R)`; `sigma` must preserve the
/// masses and `kappa`.
pub fn equivariance_test(pot: &PairPotential, q: &EllipsoidPoint, g: &GroupElement) -> Result<f64> {
    g.permutation.check_preserves(pot)?;
    let m = pot.masses();
    let gq = EllipsoidPoint::from_points(g.act(q)?, m)?;
    let lhs: Points = map_f(pot, &gq)?.into_points();
    let rhs = g.act(&map_f(pot, q)?.into_points())?;
    mass_norm(&lhs.sub(&rhs)?, m)
}
