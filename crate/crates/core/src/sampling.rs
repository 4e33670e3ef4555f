//! Seeded random draws used for multistart seeds and randomized checks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::mass_geometry::{EllipsoidPoint, Masses, Points};

/// Seeds closer than this (relative to the diameter) are redrawn.
pub const SEED_SEPARATION: f64 = 1e-2;

/// Centered Gaussian configuration projected onto the inertia ellipsoid,
/// redrawn until all pair distances exceed [`SEED_SEPARATION`] of the diameter.
pub fn random_ellipsoid_point<R: Rng + ?Sized>(rng: &mut R, m: &Masses, dim: usize) -> Result<EllipsoidPoint> {
    loop {
        let coords: Vec<f64> = (0..m.len() * dim).map(|_| rng.sample(StandardNormal)).collect();
        let q = Points::new(dim, coords)?;
        let dist = q.pair_distances();
        let diameter = dist.iter().cloned().fold(0.0, f64::max);
        if dist.iter().all(|r| *r > SEED_SEPARATION * diameter) {
            return EllipsoidPoint::from_points(q, m);
        }
    }
}

/// Haar-distributed proper rotation (QR of a Gaussian matrix, signs fixed).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..dim {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Random orthonormal 2-frame in `R^dim` as a `dim x 2` matrix.
pub fn random_plane<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    random_rotation(rng, dim).columns(0, 2).into_owned()
}

/// Uniformly random permutation (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}
