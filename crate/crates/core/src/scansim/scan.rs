//! End-to-end tracked scan simulation: trajectory, rendering, tracker
//! corruption, and timestamp re-association.

use super::render::render_frame;
use super::spec::FrameSpec;
use super::tracker::{corrupt_poses, TrackerModel};
use super::trajectory::{plan_poses, TrajectoryPlan};
use super::ScanSimError;
use crate::phantom::PhantomScene;
use crate::rng::{derive_seed, Stream};
use crate::segmentation::{BinaryMask, GrayImage};
use crate::transforms::{interpolate_pose, PoseStream, RigidTransform};

/// A simulated B-mode frame with its poses and ground-truth mask.
#[derive(Debug, Clone)]
pub struct TrackedFrame {
    pub image: GrayImage,
    /// Centre-plane inclusion mask (simulation ground truth).
    pub gt_mask: BinaryMask,
    /// mm/px.
    pub pixel_spacing: f64,
    /// Seconds.
    pub timestamp: f64,
    /// Pose as the tracker reported it (after noise, latency, dropouts).
    pub reported_pose: RigidTransform,
    /// Pose the frame was actually rendered at.
    pub true_pose: RigidTransform,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub frames: Vec<TrackedFrame>,
    /// Ground-truth poses, one per planned frame.
    pub truth_poses: PoseStream,
    /// Corrupted tracker stream (timestamps include latency).
    pub reported_stream: PoseStream,
    /// Frames lost because no tracker data covered their timestamp.
    pub dropped_frames: usize,
    /// Set when more than half of the planned frames were dropped.
    pub dropout_warning: bool,
}

/// Simulates a tracked sweep: frames are rendered at ground-truth poses
/// and paired with tracker poses interpolated at the frame timestamps
/// (emulating stream synchronization).
///
/// Tracker gaps (sweep pauses, optical dropouts) are never interpolated
/// across; frames whose timestamp falls in a gap are dropped, which is
/// what produces reconstruction holes under line-of-sight loss.
/// Per-frame render streams are derived from `(seed, planned frame
/// index)`, so results are independent of evaluation order and of which
/// frames other tracker models drop.
pub fn simulate_scan(
    scene: &PhantomScene,
    plan: &TrajectoryPlan,
    spec: &FrameSpec,
    model: &TrackerModel,
    seed: u64,
) -> Result<ScanResult, ScanSimError> {
    spec.validate()?;
    model.validate()?;
    let truth = plan_poses(plan, spec.frame_rate)?;
    let reported_stream = corrupt_poses(&truth, model, seed);

    // Segment the reported stream at acquisition gaps (3 frame periods).
    let dt = 1.0 / spec.frame_rate;
    let segments = reported_stream.split_at_gaps(3.0 * dt);

    let mut frames = Vec::with_capacity(truth.len());
    let mut dropped = 0usize;
    for (index, sample) in truth.samples().iter().enumerate() {
        let t = sample.timestamp;
        let segment = segments.iter().find(|seg| {
            seg.len() >= 2
                && seg.first_timestamp().unwrap() <= t
                && t <= seg.last_timestamp().unwrap()
        });
        let Some(segment) = segment else {
            dropped += 1;
            continue;
        };
        let reported_pose = interpolate_pose(segment, t)
            .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
        let frame_seed = derive_seed(seed, Stream::Render, index as u64);
        let (image, gt_mask) = render_frame(scene, &sample.pose, spec, frame_seed)?;
        frames.push(TrackedFrame {
            image,
            gt_mask,
            pixel_spacing: spec.pixel_spacing,
            timestamp: t,
            reported_pose,
            true_pose: sample.pose,
        });
    }

    let dropout_warning = dropped * 2 > truth.len();
    Ok(ScanResult {
        frames,
        truth_poses: truth,
        reported_stream,
        dropped_frames: dropped,
        dropout_warning,
    })
}
