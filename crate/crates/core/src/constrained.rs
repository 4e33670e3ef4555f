//! Damped Newton iteration for critical points of `U` restricted to a
//! quadric level set `{ x : x^T Q x = c }` intersected with the
//! center-of-mass subspace, in mass-scaled coordinates `x = M^(1/2) q`.
//!
//! The step is confined to the slice orthogonal to translations, to the
//! constraint normal and to a caller-supplied set of gauge directions
//! (infinitesimal symmetries), then retracted back to the level set by
//! scaling.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_complement, sorted_symmetric_eigen};
use crate::mass_geometry::Points;
use crate::potentials::PairPotential;

pub(crate) struct Problem<'a> {
    pub pot: &'a PairPotential,
    pub dim: usize,
    /// Diagonal of `Q` in `x` coordinates.
    pub quadric: DVector<f64>,
    pub level: f64,
    pub require_positive: bool,
}

pub(crate) struct Options {
    pub tol: f64,
    pub max_iter: usize,
    pub max_step: f64,
}

pub(crate) struct Outcome {
    pub x: DVector<f64>,
    pub iterations: usize,
}

pub(crate) type Gauge<'a> = dyn Fn(&DVector<f64>) -> Vec<DVector<f64>> + 'a;
pub(crate) type Fallback<'a> = dyn Fn(&DVector<f64>) -> Result<DVector<f64>> + 'a;

struct Eval {
    g: DVector<f64>,
    residual: f64,
}

impl Problem<'_> {
    pub fn sqrt_weights(&self) -> DVector<f64> {
        self.pot.masses().sqrt_weights(self.dim)
    }

    pub fn to_points(&self, x: &DVector<f64>) -> Result<Points> {
        Points::from_dvector(self.dim, &x.component_div(&self.sqrt_weights()))
    }

    pub fn retract(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let qx = x.dot(&x.component_mul(&self.quadric));
        if !(qx > 0.0 && qx.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        Ok(x * (self.level / qx).sqrt())
    }

    fn evaluate(&self, x: &DVector<f64>) -> Result<Eval> {
        let q = self.to_points(x)?;
        if self.require_positive {
            let u = self.pot.value(&q)?;
            if u <= 0.0 {
                return Err(Error::NonPositivePotential { value: u });
            }
        }
        let g = self
            .pot
            .euclid_gradient(&q)?
            .to_dvector()
            .component_div(&self.sqrt_weights());
        let normal = x.component_mul(&self.quadric);
        let nn = normal.norm_squared();
        let gnorm = g.norm();
        if gnorm == 0.0 || nn == 0.0 {
            return Ok(Eval { residual: 0.0, g });
        }
        let mult = g.dot(&normal) / nn;
        let residual = (&g - &normal * mult).norm() / gnorm;
        Ok(Eval { g, residual })
    }

    fn translations(&self) -> Vec<DVector<f64>> {
        let sw = self.sqrt_weights();
        (0..self.dim)
            .map(|c| DVector::from_fn(sw.len(), |i, _| if i % self.dim == c { sw[i] } else { 0.0 }))
            .collect()
    }

    fn newton_step(&self, x: &DVector<f64>, ev: &Eval, gauge: &Gauge) -> Result<DVector<f64>> {
        let sw = self.sqrt_weights();
        let q = self.to_points(x)?;
        let inv = sw.map(|s| 1.0 / s);
        let hq = self.pot.hessian(&q)?;
        let hx = DMatrix::from_fn(hq.nrows(), hq.ncols(), |i, j| hq[(i, j)] * inv[i] * inv[j]);
        let normal = x.component_mul(&self.quadric);
        let mult = ev.g.dot(&normal) / normal.norm_squared();
        let mut cons = self.translations();
        cons.push(normal);
        cons.extend(gauge(x));
        let (_, basis) = orthonormal_complement(x.len(), &cons);
        if basis.ncols() == 0 {
            return Ok(DVector::zeros(x.len()));
        }
        let lag = hx - DMatrix::from_diagonal(&(&self.quadric * mult));
        let red = basis.transpose() * lag * &basis;
        let grad = basis.transpose() * &ev.g;
        let (vals, vecs) = sorted_symmetric_eigen(&red);
        let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut step = DVector::zeros(vals.len());
        for (k, lam) in vals.iter().enumerate() {
            if lam.abs() > 1e-12 * scale {
                let v = vecs.column(k);
                step -= v * (v.dot(&grad) / lam);
            }
        }
        Ok(basis * step)
    }

    pub fn solve(
        &self,
        x0: &DVector<f64>,
        opts: &Options,
        gauge: &Gauge,
        fallback: Option<&Fallback>,
    ) -> Result<Outcome> {
        let mut x = self.retract(x0)?;
        let mut ev = self.evaluate(&x)?;
        for it in 0..opts.max_iter {
            if ev.residual <= opts.tol {
                return Ok(Outcome { x, iterations: it });
            }
            let mut step = self.newton_step(&x, &ev, gauge)?;
            let len = step.norm();
            if len > opts.max_step {
                step *= opts.max_step / len;
            }
            let mut accepted = None;
            let mut t = 1.0;
            for _ in 0..30 {
                if let Ok(trial) = self.retract(&(&x + &step * t)) {
                    if let Ok(e) = self.evaluate(&trial) {
                        if e.residual < ev.residual {
                            accepted = Some((trial, e));
                            break;
                        }
                    }
                }
                t *= 0.5;
            }
            let (nx, ne) = match (accepted, fallback) {
                (Some(a), _) => a,
                (None, Some(f)) => {
                    let trial = self.retract(&f(&x)?)?;
                    let e = self.evaluate(&trial)?;
                    (trial, e)
                }
                (None, None) => {
                    return Err(Error::NonConvergence { iterations: it, residual: ev.residual })
                }
            };
            x = nx;
            ev = ne;
        }
        if ev.residual <= opts.tol {
            return Ok(Outcome { x, iterations: opts.max_iter });
        }
        Err(Error::NonConvergence { iterations: opts.max_iter, residual: ev.residual })
    }
}
