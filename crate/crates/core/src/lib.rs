//! Hopf bifurcation analysis of van der Pol type oscillators coupled on an
//! `N x N x N` torus lattice.
//!
//! * [`model`]: parameters, state layout, vector fields and Jacobians.
//! * [`spectral`]: Fourier modes, closed-form spectra and the bifurcation catalog.
//! * [`symmetry`]: group actions, twisted subgroups and orbit symmetry checks.
//! * [`stability`]: stability of the origin, Lyapunov coefficient, Floquet multipliers.
//! * [`orbits`]: integration, shooting, branch continuation and prescribed-period search.

pub mod error;
pub mod linalg;
pub mod model;
pub mod orbits;
pub mod spectral;
pub mod stability;
pub mod symmetry;

pub use error::{Error, Resonance, Result};
pub use model::{CouplingMatrix, CubicTerm, LatticeParams, LatticeState, Variant};
pub use orbits::PeriodicOrbit;
pub use spectral::{BifurcationRecord, ModeIndex};
pub use symmetry::{GroupElement, TwistedSubgroup};
