//! A six-body charged configuration that rotates rigidly without being
//! central or planar.
//!
//! Three pairs of unit masses with charges `c1, c1, c2, c2, c3, c3` sit at
//! `(+-x, 0, 0)`, `(0, +-y, 0)`, `(0, 0, +-z)`. On the cylinder
//! `2x^2 + 2y^2 = 2` write `x = cos t`, `y = sin t`; the potential restricted
//! to this symmetric family is a function `U(t, z)` on the strip
//! `(0, pi/2) x (0, inf)`, and its interior maximum is a relative equilibrium.

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use super::RelEquilibriumRecord;
use crate::error::{Error, Result};
use crate::mass_geometry::{axis_rotation, Configuration, Masses, Points};
use crate::potentials::{GroupElement, PairPotential, Permutation};

/// Charges of the three body pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl ExampleParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for c in [c1, c2, c3] {
            if c == 0.0 || !c.is_finite() {
                return Err(Error::InvalidParameters(format!("charge {c} must be finite and nonzero")));
            }
        }
        Ok(Self { c1, c2, c3 })
    }

    pub fn gamma(&self) -> [f64; 6] {
        [self.c1, self.c1, self.c2, self.c2, self.c3, self.c3]
    }

    /// `kappa_ij = 1 - gamma_i gamma_j`, unit masses, `alpha = 1`.
    pub fn potential(&self) -> Result<PairPotential> {
        PairPotential::charged(Masses::equal(6)?, &self.gamma(), 1.0)
    }

    /// Pair coefficients `(A, B, C, D, E, G)` of the closed form.
    fn coefficients(&self) -> [f64; 6] {
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        [
            (1.0 - c1 * c1) / 2.0,
            (1.0 - c2 * c2) / 2.0,
            (1.0 - c3 * c3) / 2.0,
            4.0 * (1.0 - c1 * c2),
            4.0 * (1.0 - c1 * c3),
            4.0 * (1.0 - c2 * c3),
        ]
    }
}

/// The symmetric six-body configuration with half-extents `x, y, z`.
pub fn lift(x: f64, y: f64, z: f64) -> Result<Points> {
    Points::from_rows(&[
        [x, 0.0, 0.0],
        [-x, 0.0, 0.0],
        [0.0, y, 0.0],
        [0.0, -y, 0.0],
        [0.0, 0.0, z],
        [0.0, 0.0, -z],
    ])
}

/// The group `K` of order four fixing every lifted configuration: half
/// turns about the coordinate axes combined with the pair swaps they induce.
pub fn symmetry_group() -> Vec<GroupElement> {
    let swaps: [&[(usize, usize)]; 3] = [&[(2, 3), (4, 5)], &[(0, 1), (4, 5)], &[(0, 1), (2, 3)]];
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    swaps
        .iter()
        .zip(axes)
        .map(|(s, a)| {
            let p = Permutation::from_transpositions(6, s).expect("indices in range");
            let r = axis_rotation(&a, std::f64::consts::PI).map(|v| v.round());
            GroupElement::new(p, r).expect("half turns are orthogonal")
        })
        .collect()
}

/// Value, gradient and Hessian of `U(t, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedEval {
    pub value: f64,
    pub grad: Vector2<f64>,
    pub hess: Matrix2<f64>,
}

fn check_strip(t: f64, z: f64) -> Result<()> {
    if t > 0.0 && t < std::f64::consts::FRAC_PI_2 && z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("(t, z) = ({t}, {z}) is outside the strip")))
    }
}

pub fn restricted_eval(t: f64, z: f64, p: &ExampleParams) -> Result<RestrictedEval> {
    check_strip(t, z)?;
    let [a, b, cc, d, e, g] = p.coefficients();
    let (s, c) = t.sin_cos();
    let ra = c * c + z * z;
    let rb = s * s + z * z;
    let (ra1, ra3, ra5) = (ra.powf(-0.5), ra.powf(-1.5), ra.powf(-2.5));
    let (rb1, rb3, rb5) = (rb.powf(-0.5), rb.powf(-1.5), rb.powf(-2.5));
    let value = a / c + b / s + cc / z + d + e * ra1 + g * rb1;
    let ut = a * s / (c * c) - b * c / (s * s) + e * s * c * ra3 - g * s * c * rb3;
    let uz = -cc / (z * z) - e * z * ra3 - g * z * rb3;
    let cs = c * c - s * s;
    let utt = a * (1.0 / c + 2.0 * s * s / c.powi(3))
        + b * (1.0 / s + 2.0 * c * c / s.powi(3))
        + e * (cs * ra3 + 3.0 * s * s * c * c * ra5)
        - g * (cs * rb3 - 3.0 * s * s * c * c * rb5);
    let utz = -3.0 * e * s * c * z * ra5 + 3.0 * g * s * c * z * rb5;
    let uzz = 2.0 * cc / z.powi(3) - e * ra3 + 3.0 * e * z * z * ra5 - g * rb3 + 3.0 * g * z * z * rb5;
    Ok(RestrictedEval {
        value,
        grad: Vector2::new(ut, uz),
        hess: Matrix2::new(utt, utz, utz, uzz),
    })
}

/// `U(t, z)` in closed form.
pub fn restricted_u(t: f64, z: f64, p: &ExampleParams) -> Result<f64> {
    Ok(restricted_eval(t, z, p)?.value)
}

/// Gradient of the potential as a function of the half-extents `(x, y, z)`.
pub fn xyz_gradient(x: f64, y: f64, z: f64, p: &ExampleParams) -> [f64; 3] {
    let [a, b, cc, d, e, g] = p.coefficients();
    // U = A/x + B/y + C/z + D/|(x,y)| + E/|(x,z)| + G/|(y,z)|
    let rxy = (x * x + y * y).powf(-1.5);
    let rxz = (x * x + z * z).powf(-1.5);
    let ryz = (y * y + z * z).powf(-1.5);
    [
        -a / (x * x) - d * x * rxy - e * x * rxz,
        -b / (y * y) - d * y * rxy - g * y * ryz,
        -cc / (z * z) - e * z * rxz - g * z * ryz,
    ]
}

/// The three sign conditions on the charges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gates {
    /// `c1 > 1`, `c2 < -1`, `c3 < -1`.
    pub signs: bool,
    /// `1 - c1^2 + 8 (1 - c1 c3) < 0`.
    pub vertical: bool,
    /// `c3^2 - 1 + 8 (c2 c3 - 1) < 8 (1 - c1 c3)`.
    pub horizontal: bool,
    /// Left-hand side of the second condition.
    pub vertical_value: f64,
    /// Both sides of the third condition.
    pub horizontal_values: (f64, f64),
}

impl Gates {
    pub fn all(&self) -> bool {
        self.signs && self.vertical && self.horizontal
    }
}

pub fn inequality_gate(p: &ExampleParams) -> Gates {
    let (c1, c2, c3) = (p.c1, p.c2, p.c3);
    let vertical_value = 1.0 - c1 * c1 + 8.0 * (1.0 - c1 * c3);
    let lhs = c3 * c3 - 1.0 + 8.0 * (c2 * c3 - 1.0);
    let rhs = 8.0 * (1.0 - c1 * c3);
    Gates {
        signs: c1 > 1.0 && c2 < -1.0 && c3 < -1.0,
        vertical: vertical_value < 0.0,
        horizontal: lhs < rhs,
        vertical_value,
        horizontal_values: (lhs, rhs),
    }
}

/// Interior maximum of `U(t, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub t: f64,
    pub z: f64,
    pub u: f64,
    pub grad_norm: f64,
    /// Eigenvalues of the Hessian, ascending.
    pub hessian_eigenvalues: [f64; 2],
    pub iterations: usize,
}

/// Gradient norm at which the ascent stops.
pub const GRAD_TOL: f64 = 1e-10;

/// Starting point of the ascent.
pub const START: (f64, f64) = (std::f64::consts::FRAC_PI_4, 0.5);

/// Trust-region Newton ascent on `U(t, z)` from `(pi/4, 1/2)`.
///
/// The potential tends to `-inf` at every finite edge of the strip when the
/// gates hold, so steps leaving the strip are simply rejected.
pub fn maximize_restricted(p: &ExampleParams, max_iter: usize) -> Result<Maximum> {
    if !inequality_gate(p).all() {
        return Err(Error::Precondition("charges violate the sign conditions".into()));
    }
    let mut x = Vector2::new(START.0, START.1);
    let mut ev = restricted_eval(x[0], x[1], p)?;
    let mut radius = 0.1;
    for it in 0..max_iter {
        let gn = ev.grad.norm();
        if gn <= GRAD_TOL {
            let eig = ev.hess.symmetric_eigenvalues();
            let (lo, hi) = (eig[0].min(eig[1]), eig[0].max(eig[1]));
            if hi > 0.0 {
                return Err(Error::Precondition(format!("critical point at ({}, {}) is not a maximum", x[0], x[1])));
            }
            return Ok(Maximum { t: x[0], z: x[1], u: ev.value, grad_norm: gn, hessian_eigenvalues: [lo, hi], iterations: it });
        }
        if x[1] > 1e6 {
            return Err(Error::BoundaryMaximum { t: x[0], z: x[1] });
        }
        let newton = ev.hess.try_inverse().map(|h| -(h * ev.grad));
        let concave = ev.hess.symmetric_eigenvalues().iter().all(|v| *v < 0.0);
        let mut step = match (concave, newton) {
            (true, Some(s)) => s,
            _ => ev.grad * (radius / gn),
        };
        if step.norm() > radius {
            step *= radius / step.norm();
        }
        let predicted = ev.grad.dot(&step) + 0.5 * step.dot(&(ev.hess * step));
        let trial = x + step;
        match restricted_eval(trial[0], trial[1], p) {
            Ok(te) if te.value > ev.value => {
                let rho = (te.value - ev.value) / predicted;
                if rho > 0.75 && step.norm() > 0.9 * radius {
                    radius = (2.0 * radius).min(1.0);
                } else if rho < 0.25 {
                    radius *= 0.5;
                }
                x = trial;
                ev = te;
            }
            _ => radius *= 0.25,
        }
        if radius < 1e-300 {
            break;
        }
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: ev.grad.norm() })
}

/// Outcome of the four checks on the lifted maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleCertificate {
    pub params: ExampleParams,
    pub gates: Gates,
    pub maximum: Maximum,
    pub record: RelEquilibriumRecord,
    /// `|grad_M U + omega^2 P q|_M <= 1e-8` in the full space.
    pub critical: bool,
    /// `z > 1e-3`.
    pub nonplanar: bool,
    /// Not central at angle tolerance `1e-6`.
    pub noncentral: bool,
    pub positive: bool,
    /// Largest `|g q - q|` over the generators of `K`.
    pub symmetry_residual: f64,
    /// Largest deviation between the closed-form and lifted potential and gradient.
    pub closed_form_residual: f64,
}

impl ExampleCertificate {
    pub fn passes(&self) -> bool {
        self.critical && self.nonplanar && self.noncentral && self.positive
    }

    /// Names of the failing clauses.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.critical, "critical"),
            (self.nonplanar, "nonplanar"),
            (self.noncentral, "noncentral"),
            (self.positive, "positive"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

/// Threshold on the full-space criticality residual.
pub const CRITICAL_TOL: f64 = 1e-8;
/// Threshold on `z` for non-planarity.
pub const NONPLANAR_Z: f64 = 1e-3;

/// Maximizes `U(t, z)`, lifts the maximizer to six bodies and checks that it
/// is a non-planar, non-central relative equilibrium with `U > 0`.
pub fn verify_example(p: &ExampleParams, max_iter: usize) -> Result<ExampleCertificate> {
    let gates = inequality_gate(p);
    let maximum = maximize_restricted(p, max_iter)?;
    let pot = p.potential()?;
    let (s, c) = maximum.t.sin_cos();
    let q = lift(c, s, maximum.z)?;
    let symmetry_residual = symmetry_group()
        .iter()
        .map(|g| g.act(&q).and_then(|gq| gq.sub(&q)).map(|d| d.as_slice().iter().fold(0.0f64, |a, v| a.max(v.abs()))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let closed = {
        let full = pot.value(&q)?;
        let g = pot.euclid_gradient(&q)?;
        let chain = [g.point(0)[0] - g.point(1)[0], g.point(2)[1] - g.point(3)[1], g.point(4)[2] - g.point(5)[2]];
        let xyz = xyz_gradient(c, s, maximum.z, p);
        let mut worst = (full - maximum.u).abs() / maximum.u.abs().max(1.0);
        for k in 0..3 {
            worst = worst.max((chain[k] - xyz[k]).abs() / maximum.u.abs().max(1.0));
        }
        worst
    };
    let record = RelEquilibriumRecord::at(&pot, Configuration::new(q)?)?;
    Ok(ExampleCertificate {
        params: *p,
        gates,
        critical: record.abs_residual <= CRITICAL_TOL,
        nonplanar: maximum.z > NONPLANAR_Z,
        noncentral: !record.central,
        positive: record.u_value > 0.0,
        symmetry_residual,
        closed_form_residual: closed,
        maximum,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass_geometry::mass_inner;
    use crate::rel_equilibria::{cylinder_value, is_central, CENTRAL_ANGLE_TOL};
    use approx::assert_abs_diff_eq;

    fn paper() -> ExampleParams {
        ExampleParams::new(20.0, -2.0, -2.0).unwrap()
    }

    #[test]
    fn gates() {
        let g = inequality_gate(&paper());
        assert!(g.all());
        assert_eq!(g.vertical_value, -71.0);
        assert_eq!(g.horizontal_values, (27.0, 328.0));
        assert!(!inequality_gate(&ExampleParams::new(1.0, -2.0, -2.0).unwrap()).signs);
        let g = inequality_gate(&ExampleParams::new(2.0, -2.0, -2.0).unwrap());
        assert_eq!(g.vertical_value, 37.0);
        assert!(!g.vertical);
    }

    #[test]
    fn zero_charge_rejected() {
        assert!(ExampleParams::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn value_at_start() {
        let u = restricted_u(START.0, START.1, &paper()).unwrap();
        let grouped = 2f64.sqrt() / 2.0 * (2.0 - 404.0) + 4.0 * 41.0 + (1.0 - 4.0) + 4.0 * 38.0 / 0.75f64.sqrt();
        assert_abs_diff_eq!(u, grouped, epsilon = 1e-12);
        assert_abs_diff_eq!(u, 52.257555796654096, epsilon = 1e-11);
    }

    #[test]
    fn closed_form_matches_lift() {
        let p = ExampleParams::new(3.0, -1.5, -2.5).unwrap();
        let pot = p.potential().unwrap();
        for (t, z) in [(0.3, 0.2), (1.2, 1.7), (0.7, 0.05)] {
            let (s, c) = f64::sin_cos(t);
            let q = lift(c, s, z).unwrap();
            assert_abs_diff_eq!(restricted_u(t, z, &p).unwrap(), pot.value(&q).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(cylinder_value(&q, pot.masses()).unwrap(), 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let p = paper();
        let (t, z) = (0.6, 0.3);
        let ev = restricted_eval(t, z, &p).unwrap();
        let h = 1e-5;
        let f = |a: f64, b: f64| restricted_eval(a, b, &p).unwrap();
        let gt = (f(t + h, z).value - f(t - h, z).value) / (2.0 * h);
        let gz = (f(t, z + h).value - f(t, z - h).value) / (2.0 * h);
        assert_abs_diff_eq!(ev.grad[0], gt, epsilon = 1e-5 * gt.abs().max(1.0));
        assert_abs_diff_eq!(ev.grad[1], gz, epsilon = 1e-5 * gz.abs().max(1.0));
        let htt = (f(t + h, z).grad[0] - f(t - h, z).grad[0]) / (2.0 * h);
        let htz = (f(t, z + h).grad[0] - f(t, z - h).grad[0]) / (2.0 * h);
        let hzz = (f(t, z + h).grad[1] - f(t, z - h).grad[1]) / (2.0 * h);
        assert_abs_diff_eq!(ev.hess[(0, 0)], htt, epsilon = 1e-5 * htt.abs().max(1.0));
        assert_abs_diff_eq!(ev.hess[(0, 1)], htz, epsilon = 1e-5 * htz.abs().max(1.0));
        assert_abs_diff_eq!(ev.hess[(1, 1)], hzz, epsilon = 1e-5 * hzz.abs().max(1.0));
    }

    #[test]
    fn swapping_c2_c3_swaps_roles() {
        // Exchanging the y and z pairs at y = z leaves U unchanged.
        let p = ExampleParams::new(4.0, -2.0, -3.0).unwrap();
        let q = ExampleParams::new(4.0, -3.0, -2.0).unwrap();
        let t = 0.5f64;
        let z = t.sin();
        assert_abs_diff_eq!(restricted_u(t, z, &p).unwrap(), restricted_u(t, z, &q).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn maximum_and_certificate() {
        let m = maximize_restricted(&paper(), 200).unwrap();
        assert_abs_diff_eq!(m.t, 0.54949242, epsilon = 1e-7);
        assert_abs_diff_eq!(m.z, 0.20459818, epsilon = 1e-7);
        assert_abs_diff_eq!(m.u, 85.46751974720364, epsilon = 1e-9);
        assert!(m.u >= restricted_u(START.0, START.1, &paper()).unwrap());
        let cert = verify_example(&paper(), 200).unwrap();
        assert!(cert.passes(), "{:?}", cert.failures());
        assert!(cert.symmetry_residual <= 1e-15);
        assert!(cert.closed_form_residual <= 1e-12);
        assert_abs_diff_eq!(cert.record.omega_sq, m.u / 2.0, epsilon = 1e-12);
        let q = &cert.record.q;
        let m6 = Masses::equal(6).unwrap();
        let pot = paper().potential().unwrap();
        let lhs = mass_inner(&pot.mass_gradient(q).unwrap(), q, &m6).unwrap();
        assert_abs_diff_eq!(lhs, -pot.value(q).unwrap(), epsilon = 1e-9 * m.u);
        assert!(!is_central(&pot, q, CENTRAL_ANGLE_TOL).unwrap());
    }

    #[test]
    fn perturbed_parameters() {
        let p = ExampleParams::new(19.5, -2.0, -2.1).unwrap();
        let m = maximize_restricted(&p, 200).unwrap();
        assert!(m.hessian_eigenvalues[1] < 0.0);
        assert!(m.z > NONPLANAR_Z && m.u > 0.0);
        assert_abs_diff_eq!(m.t, 0.6136, epsilon = 1e-3);
        assert_abs_diff_eq!(m.z, 0.1963, epsilon = 1e-3);
    }

    #[test]
    fn gates_false_is_refused() {
        let p = ExampleParams::new(2.0, -2.0, -2.0).unwrap();
        assert!(matches!(maximize_restricted(&p, 50), Err(Error::Precondition(_))));
    }

    #[test]
    fn group_fixes_lift() {
        let q = lift(0.8, 0.6, 0.3).unwrap();
        let pot = paper().potential().unwrap();
        for g in symmetry_group() {
            g.permutation.check_preserves(&pot).unwrap();
            assert_eq!(g.act(&q).unwrap(), q);
        }
    }
}
