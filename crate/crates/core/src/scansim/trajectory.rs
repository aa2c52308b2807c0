//! Sweep trajectory planning.

use super::ScanSimError;
use crate::transforms::{PoseStream, RigidTransform, TimedPose};
use nalgebra::{Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

/// Pause inserted between consecutive sweeps of a multi-sweep plan.
pub const SWEEP_GAP_S: f64 = 1.0;

/// A linear sweep plan, optionally repeated at lateral offsets.
///
/// The probe orientation is `start.rotation` composed with a rotation of
/// `axial_angle_deg` about the probe's axial (image depth) axis and
/// `lateral_tilt_deg` about the probe's lateral (image width) axis; it is
/// constant within a sweep. Sweep offsets displace the whole line along
/// the horizontal direction perpendicular to `direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPlan {
    pub start: RigidTransform,
    pub direction: Unit<Vector3<f64>>,
    /// Sweep length, mm.
    pub length: f64,
    /// mm/s.
    pub speed: f64,
    pub axial_angle_deg: f64,
    pub lateral_tilt_deg: f64,
    /// Lateral offsets (mm) for multi-sweep scans; empty means a single
    /// sweep at offset 0.
    pub sweep_offsets: Vec<f64>,
}

impl TrajectoryPlan {
    pub fn validate(&self) -> Result<(), ScanSimError> {
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(ScanSimError::InvalidInput(format!(
                "sweep length must be positive, got {}",
                self.length
            )));
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(ScanSimError::InvalidInput(format!(
                "sweep speed must be positive, got {}",
                self.speed
            )));
        }
        Ok(())
    }

    /// Sweep orientation: base orientation with axial and tilt rotations
    /// applied in the probe's local frame.
    pub fn orientation(&self) -> UnitQuaternion<f64> {
        let axial =
            UnitQuaternion::from_axis_angle(&Vector3::y_axis(), self.axial_angle_deg.to_radians());
        let tilt = UnitQuaternion::from_axis_angle(
            &Vector3::x_axis(),
            self.lateral_tilt_deg.to_radians(),
        );
        self.start.rotation * axial * tilt
    }

    /// Horizontal direction perpendicular to the scan direction, along
    /// which sweep offsets are applied.
    pub fn lateral_direction(&self) -> Vector3<f64> {
        let candidate = Vector3::z().cross(&self.direction);
        if candidate.norm() > 1e-9 {
            candidate.normalize()
        } else {
            Vector3::y()
        }
    }

    pub fn offsets(&self) -> Vec<f64> {
        if self.sweep_offsets.is_empty() {
            vec![0.0]
        } else {
            self.sweep_offsets.clone()
        }
    }

    /// Probe pose at distance `s` along the sweep with lateral offset.
    fn pose_at(&self, s: f64, offset: f64) -> RigidTransform {
        let translation =
            self.start.translation + self.direction.into_inner() * s + self.lateral_direction() * offset;
        RigidTransform::new(self.orientation(), translation)
    }
}

/// Uniformly timed poses along the plan: one sub-stream per sweep offset,
/// separated by a [`SWEEP_GAP_S`] timestamp gap.
pub fn plan_poses(plan: &TrajectoryPlan, frame_rate: f64) -> Result<PoseStream, ScanSimError> {
    plan.validate()?;
    if !(frame_rate.is_finite() && frame_rate > 0.0) {
        return Err(ScanSimError::InvalidInput(format!(
            "frame rate must be positive, got {frame_rate}"
        )));
    }
    let dt = 1.0 / frame_rate;
    let per_sweep = (plan.length / plan.speed * frame_rate).floor() as usize + 1;
    let sweep_duration = (per_sweep - 1) as f64 * dt;
    let mut samples = Vec::with_capacity(per_sweep * plan.offsets().len());
    for (sweep, &offset) in plan.offsets().iter().enumerate() {
        let t_start = sweep as f64 * (sweep_duration + SWEEP_GAP_S);
        for k in 0..per_sweep {
            let t_local = k as f64 * dt;
            let pose = plan.pose_at(plan.speed * t_local, offset);
            samples.push(
                TimedPose::new(t_start + t_local, pose)
                    .map_err(|e| ScanSimError::InvalidInput(e.to_string()))?,
            );
        }
    }
    PoseStream::new(samples).map_err(|e| ScanSimError::InvalidInput(e.to_string()))
}

/// The default probe orientation for a sweep along +x over a phantom
/// whose depth axis is +z: image width maps to world +y, image depth to
/// world +z, and the plane normal to the scan direction +x.
pub fn default_probe_orientation() -> UnitQuaternion<f64> {
    let m = nalgebra::Matrix3::from_columns(&[Vector3::y(), Vector3::z(), Vector3::x()]);
    UnitQuaternion::from_matrix(&m)
}
