//! Downlink interference, coverage and throughput of tri-sectorized
//! hexagonal networks with random 3D beamforming.
//!
//! Distances are in km and angles in radians throughout; dB quantities are
//! converted once, in [`propagation::ChannelParams::linear`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod interference;
pub mod propagation;
pub mod quadrature;
pub mod special;
pub mod stochastic;

pub use antenna::{beam_exponent, pattern_value, PatternParams};
pub use engine::{
    compare_scenarios, coverage_curve, throughput_vs_load, CcdfCurve, Downtilt, Mode, NetworkConfig, Scenario,
    Simulation,
};
pub use error::{Error, Result};
pub use geometry::{PlanePoint, SectorId, SiteCoord};
pub use interference::{expected_isr, isr_cumulative, isr_series_approx, IsrSample, MimoConfig};
pub use propagation::ChannelParams;
