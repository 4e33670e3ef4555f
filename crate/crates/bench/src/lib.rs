//! Fixtures shared by the benchmarks.

use ccindex_core::sampling::random_ellipsoid_point;
use ccindex_core::{find_cc, CriticalRecord, EllipsoidPoint, Masses, PairPotential, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn newtonian(n: usize) -> PairPotential {
    PairPotential::newtonian(Masses::equal(n).expect("n >= 1"), 1.0).expect("valid potential")
}

/// A fixed random point on the inertia ellipsoid.
pub fn random_point(pot: &PairPotential, dim: usize, seed: u64) -> EllipsoidPoint {
    random_ellipsoid_point(&mut ChaCha8Rng::seed_from_u64(seed), pot.masses(), dim).expect("valid dimension")
}

/// A central configuration reached from a fixed seed.
pub fn central(pot: &PairPotential, dim: usize, seed: u64) -> CriticalRecord {
    let q = random_point(pot, dim, seed);
    find_cc(pot, q.configuration(), &SolverConfig::default()).expect("fixture converges")
}
