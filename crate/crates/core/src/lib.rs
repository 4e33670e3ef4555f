//! Central configurations of weighted pair potentials `U = sum kappa_ij r_ij^-alpha`
//! as fixed points of the normalized gradient map on the inertia ellipsoid,
//! their fixed-point indices, and relative equilibria found as critical
//! points on cylinders.

pub mod cc_solver;
mod constrained;
pub mod error;
pub mod indices;
pub mod linalg;
pub mod mass_geometry;
pub mod potentials;
pub mod rel_equilibria;
pub mod sampling;

pub use cc_solver::{
    census, find_cc, map_f, residual, CensusClass, CensusReport, CriticalRecord, SolverConfig,
};
pub use error::{Error, Result};
pub use indices::{fixed_point_index, identity_check, AdaptedFrame, IdentityCheck, IndexRecord};
pub use mass_geometry::{Configuration, EllipsoidPoint, Masses, Points};
pub use potentials::{GroupElement, PairPotential, Permutation, SymmetrySpec};
pub use rel_equilibria::{find_re, verify_example, CylinderSpec, ExampleParams, RelEquilibriumRecord};
