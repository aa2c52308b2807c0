//! Scan persistence: a directory of PGM frames, PBM ground-truth masks,
//! pose CSVs, and a JSON metadata file.

use super::scan::{ScanResult, TrackedFrame};
use super::spec::FrameSpec;
use super::tracker::TrackerModel;
use super::trajectory::TrajectoryPlan;
use super::ScanSimError;
use crate::segmentation::{BinaryMask, GrayImage};
use crate::transforms::{PoseStream, TimedPose};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::Path;

/// Everything needed to regenerate or reinterpret a persisted scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub frame_spec: FrameSpec,
    pub plan: TrajectoryPlan,
    pub tracker: TrackerModel,
    pub seed: u64,
    pub frame_count: usize,
    pub dropped_frames: usize,
    pub dropout_warning: bool,
}

/// Writes `frames/NNNNN.pgm`, `gt_masks/NNNNN.pbm`, `poses.csv`
/// (reported), `truth_poses.csv`, and `meta.json` under `dir`.
pub fn persist_scan(
    dir: &Path,
    scan: &ScanResult,
    frame_spec: &FrameSpec,
    plan: &TrajectoryPlan,
    tracker: &TrackerModel,
    seed: u64,
) -> Result<(), ScanSimError> {
    let frames_dir = dir.join("frames");
    let masks_dir = dir.join("gt_masks");
    fs::create_dir_all(&frames_dir)?;
    fs::create_dir_all(&masks_dir)?;

    let mut reported = Vec::with_capacity(scan.frames.len());
    let mut truth = Vec::with_capacity(scan.frames.len());
    for (i, frame) in scan.frames.iter().enumerate() {
        let name = format!("{i:05}");
        let f = fs::File::create(frames_dir.join(format!("{name}.pgm")))?;
        frame.image.write_pgm(BufWriter::new(f))?;
        let f = fs::File::create(masks_dir.join(format!("{name}.pbm")))?;
        frame.gt_mask.write_pbm(BufWriter::new(f))?;
        reported.push(TimedPose {
            timestamp: frame.timestamp,
            pose: frame.reported_pose,
        });
        truth.push(TimedPose {
            timestamp: frame.timestamp,
            pose: frame.true_pose,
        });
    }
    let reported = PoseStream::new(reported).map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
    let truth = PoseStream::new(truth).map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
    reported
        .write_csv(BufWriter::new(fs::File::create(dir.join("poses.csv"))?))
        .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
    truth
        .write_csv(BufWriter::new(fs::File::create(
            dir.join("truth_poses.csv"),
        )?))
        .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;

    let meta = ScanMeta {
        frame_spec: *frame_spec,
        plan: plan.clone(),
        tracker: tracker.clone(),
        seed,
        frame_count: scan.frames.len(),
        dropped_frames: scan.dropped_frames,
        dropout_warning: scan.dropout_warning,
    };
    fs::write(
        dir.join("meta.json"),
        serde_json::to_string_pretty(&meta).map_err(|e| ScanSimError::Serde(e.to_string()))?,
    )?;
    Ok(())
}

/// Loads a persisted scan directory.
pub fn load_scan(dir: &Path) -> Result<(Vec<TrackedFrame>, ScanMeta), ScanSimError> {
    let meta: ScanMeta = serde_json::from_str(&fs::read_to_string(dir.join("meta.json"))?)
        .map_err(|e| ScanSimError::Serde(e.to_string()))?;
    let reported = PoseStream::read_csv(BufReader::new(fs::File::open(dir.join("poses.csv"))?))
        .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
    let truth = PoseStream::read_csv(BufReader::new(fs::File::open(
        dir.join("truth_poses.csv"),
    )?))
    .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
    if reported.len() != meta.frame_count || truth.len() != meta.frame_count {
        return Err(ScanSimError::InvalidInput(format!(
            "pose rows ({}, {}) disagree with frame count {}",
            reported.len(),
            truth.len(),
            meta.frame_count
        )));
    }
    let mut frames = Vec::with_capacity(meta.frame_count);
    for i in 0..meta.frame_count {
        let name = format!("{i:05}");
        let image = GrayImage::read_pgm(BufReader::new(fs::File::open(
            dir.join("frames").join(format!("{name}.pgm")),
        )?))
        .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
        let gt_mask = BinaryMask::read_pbm(BufReader::new(fs::File::open(
            dir.join("gt_masks").join(format!("{name}.pbm")),
        )?))
        .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?;
        let r = reported.samples()[i];
        let t = truth.samples()[i];
        frames.push(TrackedFrame {
            image,
            gt_mask,
            pixel_spacing: meta.frame_spec.pixel_spacing,
            timestamp: r.timestamp,
            reported_pose: r.pose,
            true_pose: t.pose,
        });
    }
    Ok((frames, meta))
}
