//! Blow-up criteria, virial functionals and two-sided decay bounds for
//! compressible Euler and Navier-Stokes flows.
//!
//! The crate is organised bottom-up:
//!
//! - [`gas_state`]: gas model, grids, initial data, equation of state, decay checks.
//! - [`functionals`]: mass, momentum, virial and energy functionals, the
//!   interpolation inequality bounding mass by the `L^gamma` norm and second moment.
//! - [`criteria`]: initial-data blow-up criteria, their constants, and the
//!   life-span bound for compactly supported data.
//! - [`blowup_time`]: two-sided envelopes for the internal energy and the
//!   latest time `T*` at which a classical solution can survive.
//! - [`simulate`]: a 1D finite-volume solver that tracks the functionals
//!   and checks the identities and bounds along a trajectory.
//! - [`config`] and [`report`]: the configuration format and the CLI pipeline.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup_time;
pub mod config;
pub mod criteria;
pub mod error;
pub mod functionals;
pub mod gas_state;
pub mod quadrature;
pub mod report;
pub mod simulate;

pub use error::{Error, Result};
pub use gas_state::{FlowKind, FlowState, GasModel, Grid, ProfileSpec, Regime};
pub use functionals::{snapshot, FunctionalSnapshot};
