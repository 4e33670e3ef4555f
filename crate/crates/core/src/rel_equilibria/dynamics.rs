use nalgebra::DMatrix;
use serde::Serialize;

use super::RelEquilibriumRecord;
use crate::cc_solver::CriticalRecord;
use crate::error::{Error, Result};
use crate::mass_geometry::{mass_inner, mass_norm, Points};
use crate::potentials::PairPotential;

/// A candidate rigid rotation `q(t) = exp(t omega K) q0`, `K` a unit skew
/// generator (`K^3 = -K`).
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingSolution {
    pub q0: Points,
    pub generator: DMatrix<f64>,
    pub omega: f64,
}

fn cross_matrix(n: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, -n[2], n[1], n[2], 0.0, -n[0], -n[1], n[0], 0.0])
}

impl RotatingSolution {
    /// Rotation about the vertical axis at the record's angular speed.
    pub fn from_relative_equilibrium(rec: &RelEquilibriumRecord) -> Self {
        Self {
            q0: rec.q.points().clone(),
            generator: cross_matrix(&[0.0, 0.0, 1.0]),
            omega: rec.omega_sq.sqrt(),
        }
    }

    /// Circular motion of a central configuration: `omega^2 = alpha U` on the
    /// ellipsoid, in the plane of the configuration.
    pub fn from_central(pot: &PairPotential, rec: &CriticalRecord) -> Result<Self> {
        let q = rec.q.clone().into_points();
        let m = pot.masses();
        let omega = (pot.alpha() * pot.value(&q)? / mass_inner(&q, &q, m)?).sqrt();
        let generator = match q.dim() {
            2 => DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            3 => {
                let mut inertia = DMatrix::<f64>::zeros(3, 3);
                for (j, mj) in m.as_slice().iter().enumerate() {
                    let p = q.point(j);
                    for r in 0..3 {
                        for c in 0..3 {
                            inertia[(r, c)] += mj * p[r] * p[c];
                        }
                    }
                }
                let eig = inertia.symmetric_eigen();
                let (k, lo) = eig.eigenvalues.iter().enumerate().fold((0, f64::INFINITY), |b, (i, v)| if *v < b.1 { (i, *v) } else { b });
                let hi = eig.eigenvalues.max();
                if lo > 1e-12 * hi {
                    return Err(Error::NotPlanar);
                }
                let n: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
                cross_matrix(&n)
            }
            d => return Err(Error::UnsupportedDimension(d)),
        };
        Ok(Self { q0: q, generator, omega })
    }

    /// No rotation: the reference path is the constant `q`.
    pub fn stationary(q: Points) -> Result<Self> {
        let generator = match q.dim() {
            2 => DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            3 => cross_matrix(&[0.0, 0.0, 1.0]),
            d => return Err(Error::UnsupportedDimension(d)),
        };
        Ok(Self { q0: q, generator, omega: 0.0 })
    }

    /// `exp(t omega K)` by the Rodrigues formula.
    pub fn rotation(&self, t: f64) -> DMatrix<f64> {
        let d = self.generator.nrows();
        let (s, c) = (self.omega * t).sin_cos();
        DMatrix::identity(d, d) + &self.generator * s + &self.generator * &self.generator * (1.0 - c)
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicsReport {
    /// `max_t |q(t) - exp(t Omega) q0|_M` over the grid.
    pub drift: f64,
    /// Largest relative change of the energy `|v|_M^2 / 2 - U`.
    pub energy_drift: f64,
    pub t_end: f64,
    pub steps: usize,
    pub omega: f64,
}

/// Integrates `q'' = grad_M U(q)` with fixed-step RK4 from
/// `q(0) = q0`, `q'(0) = omega K q0` and compares with the rigid rotation.
pub fn verify_dynamics(pot: &PairPotential, sol: &RotatingSolution, t_end: f64, steps: usize) -> Result<DynamicsReport> {
    if !(t_end > 0.0 && t_end.is_finite()) || steps == 0 {
        return Err(Error::InvalidParameters("t_end and steps must be positive".into()));
    }
    let m = pot.masses();
    let dim = sol.q0.dim();
    let h = t_end / steps as f64;
    let accel = |q: &Points, t: f64| -> Result<Points> {
        pot.mass_gradient(q).map_err(|_| Error::IntegrationBlowUp { time: t })
    };
    let energy = |q: &Points, v: &Points| -> Result<f64> { Ok(0.5 * mass_inner(v, v, m)? - pot.value(q)?) };

    let mut q = sol.q0.clone();
    let mut v = sol.q0.transformed(&(&sol.generator * sol.omega))?;
    let e0 = energy(&q, &v)?;
    let mut drift = 0.0f64;
    let mut energy_drift = 0.0f64;
    for k in 0..steps {
        let t = k as f64 * h;
        let a1 = accel(&q, t)?;
        let (q2, v2) = (q.axpy(0.5 * h, &v)?, v.axpy(0.5 * h, &a1)?);
        let a2 = accel(&q2, t)?;
        let (q3, v3) = (q.axpy(0.5 * h, &v2)?, v.axpy(0.5 * h, &a2)?);
        let a3 = accel(&q3, t)?;
        let (q4, v4) = (q.axpy(h, &v3)?, v.axpy(h, &a3)?);
        let a4 = accel(&q4, t)?;
        let dq = v.axpy(2.0, &v2)?.axpy(2.0, &v3)?.axpy(1.0, &v4)?;
        let dv = a1.axpy(2.0, &a2)?.axpy(2.0, &a3)?.axpy(1.0, &a4)?;
        q = q.axpy(h / 6.0, &dq)?;
        v = v.axpy(h / 6.0, &dv)?;
        let t1 = (k + 1) as f64 * h;
        if q.as_slice().iter().chain(v.as_slice()).any(|x| !x.is_finite()) {
            return Err(Error::IntegrationBlowUp { time: t1 });
        }
        let reference = sol.q0.transformed(&sol.rotation(t1))?;
        drift = drift.max(mass_norm(&q.sub(&reference)?, m)?);
        let e = energy(&q, &v).map_err(|_| Error::IntegrationBlowUp { time: t1 })?;
        energy_drift = energy_drift.max((e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE));
    }
    debug_assert_eq!(dim, sol.generator.nrows());
    Ok(DynamicsReport { drift, energy_drift, t_end, steps, omega: sol.omega })
}
