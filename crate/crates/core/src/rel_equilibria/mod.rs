//! Relative equilibria in space rotating about the vertical axis, found as
//! critical points of `U` on the cylinder `<Pq, q>_M = c`, where `P` is the
//! orthogonal projection onto the horizontal plane.
//!
//! At such a point `grad_M U = -omega^2 P q` with `omega^2 = alpha U / <Pq, q>_M`,
//! so `q(t) = exp(t omega J) q` solves the equations of motion.

mod dynamics;
mod example;

pub use dynamics::{verify_dynamics, DynamicsReport, RotatingSolution};
pub use example::{
    inequality_gate, lift, maximize_restricted, restricted_eval, restricted_u, symmetry_group,
    verify_example, xyz_gradient, ExampleCertificate, ExampleParams, Gates, Maximum, RestrictedEval,
};

use nalgebra::DVector;
use serde::Serialize;

use crate::cc_solver::SolverConfig;
use crate::constrained::{Options, Problem};
use crate::error::{Error, Result};
use crate::mass_geometry::{mass_inner, mass_norm, project_center, Configuration, Masses, Points};
use crate::potentials::PairPotential;

/// Configurations with `<Pq, q>_M` below this fraction of `|q|_M^2` are refused.
pub const MIN_PLANE_RATIO: f64 = 1e-8;
/// Largest vertical coordinate of a configuration reported as planar.
pub const PLANAR_TOL: f64 = 1e-9;
/// Largest angle between `grad_M U` and `q` reported as central.
pub const CENTRAL_ANGLE_TOL: f64 = 1e-6;

/// The vertical cylinder `<Pq, q>_M = c` in `R^3`; the rotation plane is `xy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderSpec {
    pub c: f64,
}

impl CylinderSpec {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameters(format!("cylinder level {c} must be positive")));
        }
        Ok(Self { c })
    }

    /// The cylinder through `q`.
    pub fn through(q: &Points, m: &Masses) -> Result<Self> {
        let q = project_center(q, m)?;
        let c = cylinder_value(&q, m)?;
        let total = mass_inner(&q, &q, m)?;
        if c < MIN_PLANE_RATIO * total {
            return Err(Error::SingularRotationPlane { ratio: c / total });
        }
        Self::new(c)
    }
}

fn check_spatial(q: &Points) -> Result<()> {
    if q.dim() == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(q.dim()))
    }
}

/// `P q`, the horizontal part of each body.
pub fn horizontal(q: &Points) -> Points {
    let mut p = q.clone();
    for j in 0..q.n() {
        p.point_mut(j)[2] = 0.0;
    }
    p
}

/// `<Pq, q>_M = sum_j m_j |P q_j|^2`.
pub fn cylinder_value(q: &Points, m: &Masses) -> Result<f64> {
    check_spatial(q)?;
    mass_inner(&horizontal(q), q, m)
}

/// True when the angle between `grad_M U(q)` and the centered `q` is at most `tol`.
pub fn is_central(pot: &PairPotential, q: &Points, tol: f64) -> Result<bool> {
    let m = pot.masses();
    let q = project_center(q, m)?;
    let g = pot.mass_gradient(&q)?;
    let gn = mass_norm(&g, m)?;
    let qn2 = mass_inner(&q, &q, m)?;
    if gn == 0.0 || qn2 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let along = mass_inner(&g, &q, m)? / qn2;
    let sin = mass_norm(&g.axpy(-along, &q)?, m)? / gn;
    Ok(sin.asin() <= tol)
}

/// A configuration rotating rigidly about the vertical axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelEquilibriumRecord {
    pub q: Configuration,
    pub omega_sq: f64,
    /// `|grad_M U + omega^2 P q|_M / |grad_M U|_M`.
    pub residual: f64,
    /// `|grad_M U + omega^2 P q|_M`.
    pub abs_residual: f64,
    pub u_value: f64,
    pub cylinder: f64,
    /// All vertical coordinates within [`PLANAR_TOL`].
    pub planar: bool,
    /// `is_central` at [`CENTRAL_ANGLE_TOL`].
    pub central: bool,
}

impl RelEquilibriumRecord {
    /// Evaluates the relative-equilibrium data at `q` without solving.
    pub fn at(pot: &PairPotential, q: Configuration) -> Result<Self> {
        check_spatial(&q)?;
        let m = pot.masses();
        let q = q.centered(m)?;
        let u_value = pot.value(&q)?;
        let cylinder = cylinder_value(&q, m)?;
        let total = mass_inner(&q, &q, m)?;
        if cylinder < MIN_PLANE_RATIO * total {
            return Err(Error::SingularRotationPlane { ratio: cylinder / total });
        }
        let omega_sq = pot.alpha() * u_value / cylinder;
        let g = pot.mass_gradient(&q)?;
        let abs_residual = mass_norm(&g.axpy(omega_sq, &horizontal(&q))?, m)?;
        let gn = mass_norm(&g, m)?;
        let planar = (0..q.n()).all(|j| q.point(j)[2].abs() <= PLANAR_TOL);
        let central = is_central(pot, &q, CENTRAL_ANGLE_TOL)?;
        Ok(Self {
            omega_sq,
            residual: if gn > 0.0 { abs_residual / gn } else { 0.0 },
            abs_residual,
            u_value,
            cylinder,
            planar,
            central,
            q,
        })
    }
}

/// Finds a critical point of `U` on the cylinder from `seed`.
///
/// Fails with [`Error::NotAnEquilibrium`] when the critical point has
/// `U <= 0`: then no real angular speed exists.
pub fn find_re(
    pot: &PairPotential,
    spec: &CylinderSpec,
    seed: &Configuration,
    cfg: &SolverConfig,
) -> Result<RelEquilibriumRecord> {
    cfg.validate()?;
    check_spatial(seed)?;
    let m = pot.masses();
    let start = seed.centered(m)?;
    CylinderSpec::through(&start, m)?;
    let n = pot.n();
    let problem = Problem {
        pot,
        dim: 3,
        quadric: DVector::from_fn(3 * n, |i, _| if i % 3 == 2 { 0.0 } else { 1.0 }),
        level: spec.c,
        require_positive: false,
    };
    let x0 = start.to_dvector().component_mul(&m.sqrt_weights(3));
    let gauge = |x: &DVector<f64>| {
        let mut v = DVector::zeros(x.len());
        for j in 0..x.len() / 3 {
            v[3 * j] = -x[3 * j + 1];
            v[3 * j + 1] = x[3 * j];
        }
        vec![v]
    };
    let opts = Options { tol: cfg.tol, max_iter: cfg.max_iter, max_step: cfg.damping };
    let out = problem.solve(&x0, &opts, &gauge, None)?;
    let q = Configuration::new(problem.to_points(&out.x)?)?;
    let u = pot.value(&q)?;
    if u <= 0.0 {
        return Err(Error::NotAnEquilibrium { value: u });
    }
    let rec = RelEquilibriumRecord::at(pot, q)?;
    if rec.residual > cfg.tol {
        return Err(Error::NonConvergence { iterations: out.iterations, residual: rec.residual });
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cylinder_value_cases() {
        let m = Masses::new(vec![1.0, 2.0]).unwrap();
        let flat = Points::from_rows(&[[1.0, 2.0, 0.0], [-0.5, -1.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(cylinder_value(&flat, &m).unwrap(), mass_inner(&flat, &flat, &m).unwrap());
        let axis = Points::from_rows(&[[0.0, 0.0, 1.0], [0.0, 0.0, -0.5]]).unwrap();
        assert_eq!(cylinder_value(&axis, &m).unwrap(), 0.0);
        assert!(matches!(CylinderSpec::through(&axis, &m), Err(Error::SingularRotationPlane { .. })));
    }

    #[test]
    fn planar_cc_is_recovered() {
        let m = Masses::equal(3).unwrap();
        let pot = PairPotential::newtonian(m, 1.0).unwrap();
        let rows: Vec<[f64; 3]> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                [t.cos(), t.sin(), 0.0]
            })
            .collect();
        let q = Configuration::from_rows(&rows).unwrap();
        let spec = CylinderSpec::through(&q, pot.masses()).unwrap();
        let rec = find_re(&pot, &spec, &q, &SolverConfig::default()).unwrap();
        assert!(rec.planar && rec.central);
        assert_abs_diff_eq!(rec.u_value, pot.value(&q).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(rec.omega_sq, rec.u_value / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn is_central_cases() {
        let m = Masses::equal(2).unwrap();
        let pot = PairPotential::newtonian(m.clone(), 1.0).unwrap();
        let q = Points::from_rows(&[[0.7, 0.0], [-0.7, 0.0]]).unwrap();
        assert!(is_central(&pot, &q, 1e-12).unwrap());
        let m = Masses::equal(4).unwrap();
        let pot = PairPotential::newtonian(m, 1.0).unwrap();
        let q = Points::from_rows(&[[0.0, 0.0], [1.0, 0.1], [0.3, 0.9], [-0.4, 0.2]]).unwrap();
        assert!(!is_central(&pot, &q, 1e-6).unwrap());
    }
}
