//! Propulsion models for micron-scale robots swimming in viscous fluids.
//!
//! Covers steady tangential surface motion, small-amplitude surface
//! oscillation, the surrounding Stokes flow, an axisymmetric boundary-element
//! solver for spheroids, actuator dissipation, Brownian navigation limits,
//! constrained shape sweeps and feasibility regions.

pub mod actuators;
pub mod bem;
pub mod brownian;
pub mod design;
pub mod error;
pub mod field;
pub mod modes;
pub mod numerics;
pub mod quantities;
pub mod shape;
pub mod squirmer;
pub mod tangential;

pub use error::{Error, Result};
pub use quantities::{
    drag_power, make_scenario, reynolds, stokes_drag, PerformanceRecord, Preset, Scenario,
    ScenarioFields, ScenarioSpec, BOLTZMANN,
};
