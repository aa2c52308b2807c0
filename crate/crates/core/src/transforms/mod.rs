//! Rigid-body math, timed pose streams, temporal synchronization, and
//! point-set/surface registration.
//!
//! Everything here is an immutable value type and every operation is pure,
//! so concurrent use needs no synchronization.

mod latency;
mod register;
mod rigid;
mod stream;

pub use latency::{estimate_latency, SampledSignal};
pub use register::{fiducial_register, icp_register, IcpResult, IcpTarget, PointSet};
pub use rigid::RigidTransform;
pub use stream::{interpolate_pose, PoseStream, TimedPose};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("timestamp {t} outside stream range [{first}, {last}]")]
    OutOfRange { t: f64, first: f64, last: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),
    #[error("degenerate point configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("pose stream i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("pose stream parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
