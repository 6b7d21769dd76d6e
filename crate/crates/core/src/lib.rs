//! Motion-variability immersion index and 3-DoF motion platform simulation.
//!
//! The analysis path reduces motion traces to per-submetric variability
//! values (IQR or minimum-enclosing-circle radius), lays them out as a radar
//! polygon, converts each polygon into a gyration circle, and scores a test
//! condition against a reference by circle intersection over union. The
//! simulation path renders reference accelerations or boat poses on a
//! 3-leg platform and measures what an on-board IMU would read.

pub mod config;
pub mod cueing;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod pipeline;
pub mod platform;
pub mod submetrics;
pub mod svg;
pub mod synth;
pub mod trace;
pub mod validation;

pub use error::{Error, Result};
