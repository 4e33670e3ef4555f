use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{find_cc, CriticalRecord, SolverConfig};
use crate::error::{Error, Result};
use crate::mass_geometry::{align_rotation, Masses};
use crate::potentials::PairPotential;
use crate::sampling::random_ellipsoid_point;

/// Two records belong to the same class when their distance signatures
/// agree to this tolerance and one is a rotation of the other to it.
pub const DEDUP_TOL: f64 = 1e-7;

/// One `SO(d)` class of central configurations found by the census.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusClass {
    /// Representative from the earliest start that reached the class.
    pub record: CriticalRecord,
    pub hits: usize,
    pub first_start: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub dim: usize,
    pub n_starts: usize,
    pub converged: usize,
    /// Starts that failed, with the error message.
    pub failures: Vec<(usize, String)>,
    /// Sorted by `U` and then by distance signature.
    pub classes: Vec<CensusClass>,
}

/// True when `b` is a proper rotation of `a` up to [`DEDUP_TOL`].
pub fn same_class(a: &CriticalRecord, b: &CriticalRecord, m: &Masses) -> bool {
    if a.q.dim() != b.q.dim() || a.distance_signature.len() != b.distance_signature.len() {
        return false;
    }
    let sig = a
        .distance_signature
        .iter()
        .zip(&b.distance_signature)
        .all(|(x, y)| (x - y).abs() <= DEDUP_TOL);
    sig && align_rotation(&a.q, &b.q, m).is_ok_and(|al| al.residual <= DEDUP_TOL)
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Runs [`find_cc`] from `cfg.n_starts` random seeds on the inertia
/// ellipsoid in dimension `dim` and groups the converged records into
/// rotation classes.
///
/// Seeds are drawn sequentially from a generator seeded with
/// `cfg.rng_seed`; starts are solved in parallel and merged in start order,
/// so the report does not depend on scheduling.
pub fn census(pot: &PairPotential, dim: usize, cfg: &SolverConfig) -> Result<CensusReport> {
    cfg.validate()?;
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let m = pot.masses();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let seeds = (0..cfg.n_starts)
        .map(|_| random_ellipsoid_point(&mut rng, m, dim))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<CriticalRecord>> = seeds
        .par_iter()
        .map(|s| find_cc(pot, s.configuration(), cfg))
        .collect();

    let mut classes: Vec<CensusClass> = Vec::new();
    let mut failures = Vec::new();
    let mut converged = 0;
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => {
                converged += 1;
                match classes.iter_mut().find(|c| same_class(&c.record, &rec, m)) {
                    Some(c) => c.hits += 1,
                    None => classes.push(CensusClass { record: rec, hits: 1, first_start: k }),
                }
            }
            Err(e) => failures.push((k, e.to_string())),
        }
    }
    classes.sort_by(|a, b| {
        a.record
            .u_value
            .total_cmp(&b.record.u_value)
            .then_with(|| lex(&a.record.distance_signature, &b.record.distance_signature))
    });
    Ok(CensusReport { dim, n_starts: cfg.n_starts, converged, failures, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: usize, dim: usize, starts: usize) -> CensusReport {
        let pot = PairPotential::newtonian(Masses::equal(n).unwrap(), 1.0).unwrap();
        let cfg = SolverConfig { n_starts: starts, rng_seed: 5, ..Default::default() };
        census(&pot, dim, &cfg).unwrap()
    }

    #[test]
    fn two_bodies_one_class() {
        let r = run(2, 2, 20);
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.converged, 20);
    }

    #[test]
    fn three_bodies_planar_five_classes() {
        let r = run(3, 2, 200);
        assert_eq!(r.classes.len(), 5, "{:#?}", r.classes.iter().map(|c| c.record.u_value).collect::<Vec<_>>());
        let eq: Vec<_> = r.classes.iter().filter(|c| c.record.isotropy_rank == 1).collect();
        assert_eq!(eq.len(), 5);
    }

    #[test]
    fn three_bodies_spatial_four_classes() {
        let r = run(3, 3, 200);
        // Mirror images coincide under SO(3).
        assert_eq!(r.classes.len(), 4);
        let collinear = r.classes.iter().filter(|c| c.record.isotropy_rank == 2).count();
        assert_eq!(collinear, 3);
    }

    #[test]
    fn deterministic() {
        assert_eq!(run(4, 2, 40), run(4, 2, 40));
    }

    #[test]
    fn sorted_by_potential() {
        let r = run(4, 2, 60);
        assert!(r.classes.windows(2).all(|w| w[0].record.u_value <= w[1].record.u_value));
    }
}
