//! Numerical verification of Bohr radii for univalent harmonic mappings.
//!
//! The crate builds the extremal maps as truncated power series, evaluates
//! the majorant function behind each radius, certifies every root with a
//! sign-changing bracket, and checks the Bohr inequalities on grids below
//! each radius together with their sharpness just above it.
//!
//! Modules, bottom-up:
//!
//! - [`series`]: truncated complex power series and harmonic maps.
//! - [`dilatation`]: co-analytic parts from prescribed dilatations.
//! - [`catalog`]: the named extremal maps.
//! - [`radius`]: majorants and closed-form radii.
//! - [`solver`]: certified bracketed root-finding.
//! - [`bohr`]: Bohr sums, profiles, sharpness and boundary sampling.
//! - [`subordination`]: Schwarz functions and the domination campaign.
//! - [`selfcheck`]: the aggregated invariant suite behind `bohr selfcheck`.

pub mod bohr;
pub mod catalog;
pub mod cli;
pub mod dilatation;
pub mod error;
pub mod format;
pub mod par;
pub mod radius;
pub mod selfcheck;
pub mod series;
pub mod solver;
pub mod subordination;

pub use bohr::{BohrProfile, BohrSubject, BoundaryReach};
pub use catalog::{MapName, NamedMap};
pub use error::{Error, Result};
pub use par::Exec;
pub use radius::{MajorantIdentity, Quasiconformal, RadiusProblem};
pub use series::{HarmonicMap, PowerSeries};
pub use solver::RootCertificate;
pub use subordination::{SchwarzFunction, Subordinate};
