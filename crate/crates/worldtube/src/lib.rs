//! A numerical laboratory for classical point-charge electrodynamics in
//! 4- and 6-dimensional flat spacetime.
//!
//! The crate computes retarded Liénard–Wiechert potentials and field
//! strengths of a point charge on a prescribed worldline, integrates the
//! flux of field energy-momentum and angular momentum through world tubes
//! built from retarded spheres, splits both into bound and radiative
//! parts, evaluates the renormalized particle momenta and spin that close
//! the balance equations, and integrates the resulting radiation-reaction
//! equations of motion.
//!
//! Module map:
//! - [`minkowski`]: metric, vectors, bivectors, Lorentz boosts, sphere areas.
//! - [`worldline`]: analytic worldline catalog with derivatives to fifth
//!   order and retarded-time root solving.
//! - [`fields`]: Liénard–Wiechert potential and field strength, stress
//!   tensor, radiative/bound decomposition.
//! - [`quad`]: Gauss–Jacobi nodes, product quadrature on S² and S⁴,
//!   adaptive line quadrature, deterministic pairwise reduction.
//! - [`fluxlab`]: world-tube flux windows, angular-moment identities,
//!   power-law fits of the bound divergences, closed-form comparators.
//! - [`balance`]: renormalized momenta, spin, balance-equation residuals.
//! - [`motion`]: radiation-reaction equations of motion (direct and
//!   reduced-order) with constraint projection.
//!
//! Conventions: mostly-plus signature (−,+,…,+), units c = 1, proper time
//! τ parametrizes worldlines, and the charge enters the 6D field with the
//! overall coefficient e/2π (exposed as [`fields::FIELD_COEFF_6D`]).

pub mod balance;
pub mod error;
pub mod fields;
pub mod fluxlab;
pub mod minkowski;
pub mod motion;
pub mod quad;
pub mod worldline;

pub use balance::{BalanceReport, ParticleMomenta, ParticleParams, SpinMagnitude};
pub use error::{Error, Result};
pub use minkowski::{sphere_area, Bivector, Dim, LorentzTransform, LorentzVector, SymTensor2};
pub use motion::{ForceLaw, Method4D, MotionState4D, MotionState6D, Trajectory};
pub use worldline::{KinematicState, RetardedFrame, Worldline};
