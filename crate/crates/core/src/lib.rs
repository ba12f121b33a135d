//! Thermal plug-flow pipe models.
//!
//! A pipe carries an incompressible medium at velocity `v(t)` through a wall
//! that exchanges heat with the surroundings. The crate provides
//!
//! - the 1-D medium/wall PDE ([`pde`]), used as the high-resolution benchmark,
//! - the delayed-field model and its DDE reductions ([`dpde`]),
//! - lumped ODE/DDE models ([`lumped`]),
//! - the variable transport delay ([`signal`]),
//! - constant-flow closed forms ([`analytic`]),
//! - error metrics and parameter identification ([`metrics`], [`identify`]),
//! - scenario files and the comparison runner behind the `thermopipe` CLI
//!   ([`scenario`]).
//!
//! ```
//! use thermopipe::{Boundary, ModelKind, PipeParameters, RunSettings};
//!
//! let params = PipeParameters::simulation_study();
//! let boundary = Boundary::ramp_study();
//! let out = ModelKind::Dpde(5)
//!     .run(&params, &boundary, &RunSettings::new(0.05, 200.0), &[])
//!     .unwrap();
//! let last = *out.outlet().last().unwrap();
//! assert!((last - 57.6).abs() < 0.5);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

pub mod analytic;
pub mod dpde;
pub mod error;
pub mod identify;
pub mod io;
pub mod lumped;
pub mod metrics;
pub mod model;
pub mod output;
pub mod par;
pub mod params;
pub mod pde;
pub mod scenario;
pub mod signal;

pub use error::{Error, Result};
pub use model::{Boundary, ModelKind, RunSettings};
pub use output::ModelOutput;
pub use par::Exec;
pub use params::PipeParameters;
pub use signal::{Signal, SignalKind};
