//! Device-to-array simulator for piezoelectric strain FET (PeFET)
//! non-volatile memories.
//!
//! A PeFET stores a bit as the remnant polarization of a ferroelectric
//! capacitor mechanically coupled to a monolayer-MoS2 transistor. Writes
//! switch the polarization with an electric field; reads sense the
//! stress-induced bandgap shift of the channel as a low/high resistance
//! state. This crate models the full stack:
//!
//! - [`ferroelectric`]: Landau-Khalatnikov statics and switching dynamics.
//! - [`transduction`]: lumped stress chain with the hammer-and-nail boost.
//! - [`tmdfet`]: smooth charge-sheet FET model with contact resistance.
//! - [`pefet`]: the composed four-terminal device (read, write, margins).
//! - [`arrays`]: HD, 1T-1PeFET (tall/wide, segmented) and cross-coupled
//!   array protocols, disturb checks and read/write simulation.
//! - [`metrics`]: layout area, capacitance, energy/latency accounting and
//!   the 2D-FET SRAM comparison baseline.
//! - [`calibrate`]: the deterministic calibration that ties all model
//!   constants to their published anchor points.
//! - [`cli`]: the `pefet` command-line front end (device / array / sweep /
//!   calibrate subcommands).
//!
//! Start with the examples: each major capability has a runnable example
//! under `examples/`, e.g. `cargo run --example device_characterization`.

pub mod arrays;
pub mod calibrate;
pub mod cli;
pub mod config;
pub mod constants;
pub mod error;
pub mod ferroelectric;
pub mod metrics;
pub mod pefet;
pub mod report;
pub mod tmdfet;
pub mod transduction;

pub use error::{Result, SimError};
