//! Central configurations as fixed points of the normalized gradient map
//! `F(q) = -grad_M U(q) / |grad_M U(q)|_M` on the inertia ellipsoid.
//!
//! [`find_cc`] runs a damped Newton iteration on the Lagrange system
//! `grad_M U + alpha U q = 0` restricted to the slice orthogonal to the
//! rotation orbit, with a plain `F` step as fallback when the line search
//! stalls. [`census`] aggregates many seeded runs into `SO(d)` classes.

mod census;
mod checks;

pub use census::{census, same_class, CensusClass, CensusReport, DEDUP_TOL};
pub use checks::{
    check_property_f, check_quotient_lift, equivariance_test, LiftCheck, PropertyCheck,
};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::constrained::{Options, Problem};
use crate::error::{Error, Result};
use crate::mass_geometry::{
    isotropy_rank, mass_inner, mass_norm, orbit_directions, Configuration, EllipsoidPoint, Points,
};
use crate::potentials::PairPotential;

/// Solver settings shared by [`find_cc`], [`census`] and the cylinder solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Relative residual at which an iterate counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    /// Maximum Newton step length (mass-norm units on the ellipsoid).
    pub damping: f64,
    pub rng_seed: u64,
    pub n_starts: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_iter: 200,
            damping: 0.3,
            rng_seed: 0,
            n_starts: 64,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameters(format!("tol = {} must be positive", self.tol)));
        }
        if self.n_starts == 0 {
            return Err(Error::InvalidParameters("n_starts must be at least 1".into()));
        }
        if !(self.damping > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidParameters(
                "damping and max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A converged central configuration on the inertia ellipsoid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRecord {
    pub q: EllipsoidPoint,
    /// Multiplier in `grad_M U = lambda q`; equals `-alpha U`.
    pub lambda: f64,
    pub residual: f64,
    pub u_value: f64,
    pub distance_signature: Vec<f64>,
    /// Rank of the `SO(d)` orbit directions; `d(d-1)/2` for trivial isotropy.
    pub isotropy_rank: usize,
    pub iterations: usize,
}

impl CriticalRecord {
    /// Builds the record for a point already known to be (nearly) central.
    pub fn from_point(pot: &PairPotential, q: EllipsoidPoint, iterations: usize) -> Result<Self> {
        let u_value = pot.value(&q)?;
        Ok(Self {
            lambda: -pot.alpha() * u_value,
            residual: residual(pot, &q)?,
            u_value,
            distance_signature: q.distance_signature(),
            isotropy_rank: isotropy_rank(&q, pot.masses())?,
            iterations,
            q,
        })
    }

    /// `lambda` recovered as `<grad_M U, q>_M` and as `-|grad_M U|_M`.
    pub fn lambda_routes(&self, pot: &PairPotential) -> Result<(f64, f64)> {
        let g = pot.mass_gradient(&self.q)?;
        let m = pot.masses();
        Ok((mass_inner(&g, &self.q, m)?, -mass_norm(&g, m)?))
    }
}

/// `F(q) = -grad_M U(q) / |grad_M U(q)|_M`; defined where `U(q) > 0`.
pub fn map_f(pot: &PairPotential, q: &EllipsoidPoint) -> Result<EllipsoidPoint> {
    let u = pot.value(q)?;
    if u <= 0.0 {
        return Err(Error::NonPositivePotential { value: u });
    }
    let g = pot.mass_gradient(q)?;
    let norm = mass_norm(&g, pot.masses())?;
    EllipsoidPoint::new(Configuration::new(g.scaled(-1.0 / norm))?, pot.masses())
}

/// `|grad_M U(q) + alpha U(q) q|_M / |grad_M U(q)|_M`; zero exactly at
/// central configurations on the ellipsoid.
pub fn residual(pot: &PairPotential, q: &Points) -> Result<f64> {
    let m = pot.masses();
    let g = pot.mass_gradient(q)?;
    let u = pot.value(q)?;
    let gn = mass_norm(&g, m)?;
    if gn == 0.0 {
        return Ok(0.0);
    }
    Ok(mass_norm(&g.axpy(pot.alpha() * u, q)?, m)? / gn)
}

pub(crate) fn sphere_problem(pot: &PairPotential, dim: usize) -> Problem<'_> {
    Problem {
        pot,
        dim,
        quadric: DVector::from_element(pot.n() * dim, 1.0),
        level: 1.0,
        require_positive: true,
    }
}

/// Finds a central configuration from `seed`.
pub fn find_cc(pot: &PairPotential, seed: &Configuration, cfg: &SolverConfig) -> Result<CriticalRecord> {
    cfg.validate()?;
    let m = pot.masses();
    let start = EllipsoidPoint::from_configuration(seed, m)?;
    let dim = start.dim();
    let problem = sphere_problem(pot, dim);
    let sw = m.sqrt_weights(dim);
    let x0 = start.to_dvector().component_mul(&sw);
    let gauge = |x: &DVector<f64>| {
        let q = Points::from_dvector(dim, x).expect("dimension is fixed");
        orbit_directions(&q).iter().map(|p| p.to_dvector()).collect::<Vec<_>>()
    };
    let fallback = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let q = EllipsoidPoint::from_points(problem.to_points(x)?, m)?;
        Ok(map_f(pot, &q)?.to_dvector().component_mul(&sw))
    };
    let opts = Options { tol: cfg.tol, max_iter: cfg.max_iter, max_step: cfg.damping };
    let out = problem.solve(&x0, &opts, &gauge, Some(&fallback))?;
    let q = EllipsoidPoint::from_points(problem.to_points(&out.x)?, m)?;
    let record = CriticalRecord::from_point(pot, q, out.iterations)?;
    if record.residual > cfg.tol {
        return Err(Error::NonConvergence { iterations: out.iterations, residual: record.residual });
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass_geometry::{planar_rotation, Masses};
    use crate::sampling::random_ellipsoid_point;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_body() -> (PairPotential, EllipsoidPoint) {
        let m = Masses::equal(2).unwrap();
        let a = 0.5f64.sqrt();
        let q = EllipsoidPoint::from_points(Points::from_rows(&[[a, 0.0], [-a, 0.0]]).unwrap(), &m).unwrap();
        (PairPotential::newtonian(m, 1.0).unwrap(), q)
    }

    fn equilateral() -> (PairPotential, EllipsoidPoint) {
        let m = Masses::equal(3).unwrap();
        let rows: Vec<[f64; 2]> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                [t.cos(), t.sin()]
            })
            .collect();
        let q = EllipsoidPoint::from_points(Points::from_rows(&rows).unwrap(), &m).unwrap();
        (PairPotential::newtonian(m, 1.0).unwrap(), q)
    }

    #[test]
    fn two_body_is_fixed() {
        let (u, q) = two_body();
        let f = map_f(&u, &q).unwrap();
        for (a, b) in f.as_slice().iter().zip(q.as_slice()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        assert!(residual(&u, &q).unwrap() <= 1e-15);
    }

    #[test]
    fn equilateral_is_fixed() {
        let (u, q) = equilateral();
        let f = map_f(&u, &q).unwrap();
        assert!(mass_norm(&f.sub(&q).unwrap(), u.masses()).unwrap() < 1e-15);
        assert!(residual(&u, &q).unwrap() <= 1e-15);
    }

    #[test]
    fn random_point_is_not_fixed() {
        let m = Masses::equal(4).unwrap();
        let u = PairPotential::newtonian(m.clone(), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_ellipsoid_point(&mut rng, &m, 2).unwrap();
        let f = map_f(&u, &q).unwrap();
        assert!(mass_norm(&f.sub(&q).unwrap(), &m).unwrap() > 1e-3);
        assert_abs_diff_eq!(mass_norm(&f, &m).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn map_f_refuses_nonpositive_u() {
        let m = Masses::equal(2).unwrap();
        let u = PairPotential::charged(m.clone(), &[2.0, 2.0], 1.0).unwrap();
        let (_, q) = two_body();
        assert!(matches!(map_f(&u, &q), Err(Error::NonPositivePotential { .. })));
    }

    #[test]
    fn perturbed_equilateral_residual_band() {
        let (u, q) = equilateral();
        // Tangent noise of size 1e-3 that is not a rotation.
        let noise = Points::from_rows(&[[1e-3, 0.0], [0.0, -1e-3], [-1e-3, 1e-3]]).unwrap();
        let p = EllipsoidPoint::from_points(q.axpy(1.0, &noise).unwrap(), u.masses()).unwrap();
        let r = residual(&u, &p).unwrap();
        assert!(r > 1e-5 && r < 1e-1, "residual {r}");
    }

    #[test]
    fn two_body_solver_converges_from_any_seed() {
        let (u, q2) = two_body();
        for seed in [[[0.3, 0.1], [-1.0, 2.0]], [[5.0, 5.0], [4.0, 4.5]]] {
            let c = Configuration::from_rows(&seed).unwrap();
            let rec = find_cc(&u, &c, &SolverConfig::default()).unwrap();
            assert!(rec.residual <= 1e-11);
            assert_abs_diff_eq!(rec.u_value, u.value(&q2).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(rec.lambda, -0.5f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn lambda_two_routes_agree() {
        let (u, q) = equilateral();
        let rec = CriticalRecord::from_point(&u, q, 0).unwrap();
        let (a, b) = rec.lambda_routes(&u).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        assert_abs_diff_eq!(a, rec.lambda, epsilon = 1e-10);
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let m = Masses::equal(5).unwrap();
        let u = PairPotential::newtonian(m.clone(), 1.0).unwrap();
        let seed = random_ellipsoid_point(&mut ChaCha8Rng::seed_from_u64(9), &m, 2).unwrap();
        let cfg = SolverConfig { max_iter: 1, ..Default::default() };
        assert!(matches!(find_cc(&u, seed.configuration(), &cfg), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn rotated_two_body_still_fixed() {
        let (u, q) = two_body();
        let r = q.transformed(&planar_rotation(0.5)).unwrap();
        let p = EllipsoidPoint::from_points(r, u.masses()).unwrap();
        assert!(residual(&u, &p).unwrap() < 1e-15);
    }
}
