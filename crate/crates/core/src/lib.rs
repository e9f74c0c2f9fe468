//! Numerics for the five-component Maxwell-Bloch system: Hamilton-Poisson
//! structure, time integration with drift monitoring, equilibrium
//! classification, closed-form homoclinic and periodic orbits, and the
//! invariant set `M1 ∪ M2`.

pub mod cli;
pub mod equilibria;
pub mod error;
pub mod integrate;
pub mod invariant_sets;
pub mod quartic;
pub mod solutions;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use integrate::{drift_report, integrate, DriftReport, IntegratorConfig, Method, Trajectory};
pub use system::{conserved, vector_field, ComplexState, ConservedTriple, State5};
