//! Multi-objective routing for aeronautical ad-hoc networks.
//!
//! Aircraft relay traffic to ground stations over distance-adapted links.
//! A route is scored on end-to-end spectral efficiency, latency and path
//! expiration time; [`edmoga`] searches for the Pareto-optimal routes of a
//! source aircraft with an epsilon-dominance genetic algorithm, and
//! [`oracle`] checks it against exhaustive enumeration on small instances.

pub mod cli;
pub mod edmoga;
pub mod error;
pub mod flightdata;
pub mod geo;
pub mod linkmodel;
pub mod oracle;
pub mod par;
pub mod pathobjectives;
pub mod scenario;
pub mod seed;
pub mod simharness;

pub use error::{Error, Result};
