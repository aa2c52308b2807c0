//! Tracked B-mode scan simulation: trajectories, a slab-occupancy imaging
//! model, tracker error models, and scan persistence.

mod io;
mod render;
mod scan;
mod spec;
mod tracker;
mod trajectory;

pub use io::{load_scan, persist_scan, ScanMeta};
pub use render::render_frame;
pub use scan::{simulate_scan, ScanResult, TrackedFrame};
pub use spec::FrameSpec;
pub use tracker::{corrupt_poses, EmDistortion, TrackerKind, TrackerModel};
pub use trajectory::{default_probe_orientation, plan_poses, TrajectoryPlan, SWEEP_GAP_S};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScanSimError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("(de)serialization failed: {0}")]
    Serde(String),
}
