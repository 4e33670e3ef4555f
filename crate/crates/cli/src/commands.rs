//! Subcommand bodies. Each returns a serializable result or a [`Failure`].

use ccindex_core::cc_solver::{check_property_f, check_quotient_lift, LiftCheck, PropertyCheck};
use ccindex_core::indices::CENTRAL_TOL;
use ccindex_core::mass_geometry::normalize_to_ellipsoid;
use ccindex_core::rel_equilibria::{verify_dynamics, DynamicsReport, RotatingSolution};
use ccindex_core::sampling::{random_ellipsoid_point, random_plane};
use ccindex_core::{
    census, find_cc, find_re, fixed_point_index, identity_check, verify_example, CensusReport, Configuration,
    CriticalRecord, CylinderSpec, EllipsoidPoint, Error, ExampleParams, IdentityCheck, IndexRecord,
    PairPotential, RelEquilibriumRecord,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::problem::{ProblemFile, RotationMode};

/// Why a subcommand did not succeed, by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Exit 1: unusable input.
    Schema(String),
    /// Exit 2: a solver did not converge or blew up; carries a partial result.
    Solver(String, Option<serde_json::Value>),
    /// Exit 3: a check ran and failed; carries the evidence.
    Verification(String, Option<serde_json::Value>),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Schema(_) => 1,
            Failure::Solver(..) => 2,
            Failure::Verification(..) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ShapeMismatch { .. }
            | Error::InvalidMasses(_)
            | Error::UnsupportedDimension(_)
            | Error::InvalidPotential(_)
            | Error::SymmetryViolation(_)
            | Error::NotBlockForm(_)
            | Error::InvalidParameters(_) => Failure::Schema(msg),
            Error::NonConvergence { .. }
            | Error::BoundaryMaximum { .. }
            | Error::IntegrationBlowUp { .. }
            | Error::Collision { .. }
            | Error::ZeroNorm
            | Error::SingularRotationPlane { .. } => Failure::Solver(msg, None),
            Error::NonPositivePotential { .. }
            | Error::NotQuotientFixedPoint { .. }
            | Error::Degenerate { .. }
            | Error::AmbiguousSpectrum { .. }
            | Error::NonMaximalIsotropy { .. }
            | Error::NotAnEquilibrium { .. }
            | Error::NotPlanar
            | Error::Precondition(_) => Failure::Verification(msg, None),
        }
    }
}

pub type Outcome = Result<serde_json::Value, Failure>;

fn value<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn required_configuration(p: &ProblemFile) -> Result<Configuration, Failure> {
    match p.configuration() {
        Some(Ok(q)) => Ok(q),
        Some(Err(e)) => Err(Failure::Schema(format!("configuration: {e}"))),
        None => Err(Failure::Schema("this subcommand needs a `configuration`".into())),
    }
}

fn on_ellipsoid(p: &ProblemFile, pot: &PairPotential) -> Result<EllipsoidPoint, Failure> {
    let q = required_configuration(p)?;
    let m = pot.masses();
    let centered = q.centered(m).map_err(|e| Failure::Schema(format!("configuration: {e}")))?;
    normalize_to_ellipsoid(&centered, m).map_err(|e| Failure::Schema(format!("configuration: {e}")))
}

/// Index data for one census class, or the reason it was refused.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassIndex {
    Computed(IndexRecord),
    Refused(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassChecks {
    pub index: ClassIndex,
    pub identity: Option<IdentityCheck>,
    pub lift: Option<LiftCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusOutput {
    pub census: CensusReport,
    /// Parallel to `census.classes`.
    pub checks: Vec<ClassChecks>,
}

pub fn run_census(p: &ProblemFile) -> Result<CensusOutput, Failure> {
    let pot = p.potential()?;
    let report = census(&pot, p.d, &p.solver)?;
    let checks = report
        .classes
        .iter()
        .map(|c| ClassChecks {
            index: match fixed_point_index(&pot, &c.record.q) {
                Ok(r) => ClassIndex::Computed(r),
                Err(e) => ClassIndex::Refused(e.to_string()),
            },
            identity: identity_check(&pot, &c.record.q).ok(),
            lift: check_quotient_lift(&pot, &c.record.q, CENTRAL_TOL).ok(),
        })
        .collect();
    let out = CensusOutput { census: report, checks };
    if out.census.converged == 0 {
        return Err(Failure::Solver("no start converged".into(), Some(value(&out))));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct FindCcOutput {
    seed: EllipsoidPoint,
    record: CriticalRecord,
    /// `lambda` as `<grad_M U, q>_M` and as `-|grad_M U|_M`.
    lambda_routes: (f64, f64),
}

pub fn find_cc_cmd(p: &ProblemFile) -> Outcome {
    let pot = p.potential()?;
    let seed = match p.configuration() {
        Some(_) => on_ellipsoid(p, &pot)?,
        None => random_ellipsoid_point(&mut ChaCha8Rng::seed_from_u64(p.solver.rng_seed), pot.masses(), p.d)?,
    };
    let record = find_cc(&pot, seed.configuration(), &p.solver)?;
    let lambda_routes = record.lambda_routes(&pot)?;
    Ok(value(&FindCcOutput { seed, record, lambda_routes }))
}

pub fn index_cmd(p: &ProblemFile) -> Outcome {
    let pot = p.potential()?;
    let q = on_ellipsoid(p, &pot)?;
    Ok(value(&fixed_point_index(&pot, &q)?))
}

#[derive(Debug, Serialize)]
struct IdentityOutput {
    check: IdentityCheck,
    tol: f64,
    holds: bool,
    stated_form_holds: bool,
}

pub fn verify_identity_cmd(p: &ProblemFile) -> Outcome {
    let pot = p.potential()?;
    let q = on_ellipsoid(p, &pot)?;
    let check = identity_check(&pot, &q)?;
    let out = IdentityOutput {
        check,
        tol: p.identity_tol,
        holds: check.residual <= p.identity_tol,
        stated_form_holds: check.stated_residual <= p.identity_tol,
    };
    if !out.holds {
        let msg = format!("identity residual {:e} exceeds {:e}", check.residual, p.identity_tol);
        return Err(Failure::Verification(msg, Some(value(&out))));
    }
    Ok(value(&out))
}

pub fn find_re_cmd(p: &ProblemFile) -> Outcome {
    let pot = p.potential()?;
    if p.d != 3 {
        return Err(Failure::Schema("find-re needs d = 3".into()));
    }
    let seed = required_configuration(p)?;
    let spec = match p.cylinder {
        Some(c) => CylinderSpec::new(c)?,
        None => CylinderSpec::through(&seed, pot.masses())?,
    };
    let rec: RelEquilibriumRecord = find_re(&pot, &spec, &seed, &p.solver)?;
    Ok(value(&rec))
}

pub fn example_cmd(params: &ExampleParams, max_iter: usize) -> Outcome {
    let cert = verify_example(params, max_iter)?;
    if !cert.passes() {
        let msg = format!("failing clauses: {}", cert.failures().join(", "));
        return Err(Failure::Verification(msg, Some(value(&cert))));
    }
    Ok(value(&cert))
}

#[derive(Debug, Serialize)]
struct PropertyOutput {
    samples: usize,
    /// All pair coefficients positive; the sign properties are claimed only then.
    applicable: bool,
    violations: usize,
    /// Largest `p(dU/dq_j) . p(q_j)`.
    worst_value: f64,
    /// Smallest `p(F_j) . p(q_j)`.
    worst_f_value: f64,
    first_violation: Option<PropertyCheck>,
}

pub fn property_check_cmd(p: &ProblemFile) -> Outcome {
    let pot = p.potential()?;
    if p.samples == 0 {
        return Err(Failure::Schema("samples must be positive".into()));
    }
    let fixed = match p.configuration() {
        Some(_) => Some(on_ellipsoid(p, &pot)?),
        None => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p.solver.rng_seed);
    let applicable = pot.all_attractive();
    let mut out = PropertyOutput {
        samples: p.samples,
        applicable,
        violations: 0,
        worst_value: f64::NEG_INFINITY,
        worst_f_value: f64::INFINITY,
        first_violation: None,
    };
    for _ in 0..p.samples {
        let q = match &fixed {
            Some(q) => q.clone(),
            None => random_ellipsoid_point(&mut rng, pot.masses(), p.d)?,
        };
        let plane = random_plane(&mut rng, p.d);
        let c = check_property_f(&pot, &q, &plane)?;
        out.worst_value = out.worst_value.max(c.value);
        out.worst_f_value = out.worst_f_value.min(c.f_value);
        let ok = c.holds && c.projected_norm2 > 0.0;
        if !ok {
            out.violations += 1;
            out.first_violation.get_or_insert(c);
        }
    }
    if applicable && out.violations > 0 {
        let msg = format!("{} of {} samples violate the sign properties", out.violations, out.samples);
        return Err(Failure::Verification(msg, Some(value(&out))));
    }
    Ok(value(&out))
}

#[derive(Debug, Serialize)]
struct DynamicsOutput {
    rotation: RotationMode,
    report: DynamicsReport,
    tol: f64,
}

pub fn dynamics_cmd(p: &ProblemFile) -> Outcome {
    let pot = p.potential()?;
    let dp = &p.dynamics;
    if dp.steps == 0 || !(dp.tol > 0.0) || !(dp.periods > 0.0) {
        return Err(Failure::Schema("dynamics.steps, dynamics.tol and dynamics.periods must be positive".into()));
    }
    let sol = match dp.rotation {
        RotationMode::Central => {
            let q = on_ellipsoid(p, &pot)?;
            RotatingSolution::from_central(&pot, &CriticalRecord::from_point(&pot, q, 0)?)?
        }
        RotationMode::Vertical => {
            let q = required_configuration(p)?;
            RotatingSolution::from_relative_equilibrium(&RelEquilibriumRecord::at(&pot, q)?)
        }
        RotationMode::None => {
            let q = required_configuration(p)?;
            RotatingSolution::stationary(q.centered(pot.masses())?.into_points())?
        }
    };
    let t_end = match (dp.t_end, dp.rotation) {
        (Some(t), _) => t,
        (None, RotationMode::None) => {
            return Err(Failure::Schema("dynamics.t_end is required without rotation".into()));
        }
        (None, _) => dp.periods * sol.period(),
    };
    let report = verify_dynamics(&pot, &sol, t_end, dp.steps)?;
    let out = DynamicsOutput { rotation: dp.rotation, report, tol: dp.tol };
    if report.drift > dp.tol {
        let msg = format!("drift {:e} exceeds {:e}", report.drift, dp.tol);
        return Err(Failure::Verification(msg, Some(value(&out))));
    }
    Ok(value(&out))
}
