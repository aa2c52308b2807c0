//! Tracker error models: noise, latency, dropouts, and field distortion.

use crate::rng::{derive_rng, Stream};
use crate::transforms::{PoseStream, RigidTransform, TimedPose};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Smooth position-dependent bias of an electromagnetic tracker:
/// `amplitude · sin(2π·s/spatial_period + phase + axis·2π/3)` per axis,
/// where `s` is the displacement from the stream start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmDistortion {
    /// mm.
    pub amplitude: f64,
    /// mm.
    pub spatial_period: f64,
    /// radians.
    pub phase: f64,
}

impl EmDistortion {
    pub fn bias(&self, displacement: f64) -> nalgebra::Vector3<f64> {
        let mut b = nalgebra::Vector3::zeros();
        for axis in 0..3 {
            let arg = 2.0 * std::f64::consts::PI * displacement / self.spatial_period
                + self.phase
                + axis as f64 * 2.0 * std::f64::consts::PI / 3.0;
            b[axis] = self.amplitude * arg.sin();
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TrackerKind {
    /// Robot joint-encoder tracking: tiny noise, no visibility issues.
    Kinematic { pos_noise_rms: f64 },
    /// Optical tracking: small noise plus line-of-sight dropouts.
    Optical {
        pos_noise_rms: f64,
        /// Half-open intervals `[t0, t1)` in seconds during which samples
        /// are lost.
        dropout_intervals: Vec<(f64, f64)>,
    },
    /// Electromagnetic tracking: moderate noise plus smooth
    /// position-dependent field distortion.
    Em {
        pos_noise_rms: f64,
        distortion: EmDistortion,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackerModel {
    pub kind: TrackerKind,
    /// Stream latency in seconds; reported timestamps are shifted by it.
    pub latency: f64,
    /// Static image-to-tracker calibration error applied to every pose.
    pub calibration_perturbation: RigidTransform,
}

impl TrackerModel {
    pub fn kinematic(pos_noise_rms: f64) -> Self {
        TrackerModel {
            kind: TrackerKind::Kinematic { pos_noise_rms },
            latency: 0.0,
            calibration_perturbation: RigidTransform::identity(),
        }
    }

    pub fn pos_noise_rms(&self) -> f64 {
        match &self.kind {
            TrackerKind::Kinematic { pos_noise_rms }
            | TrackerKind::Optical { pos_noise_rms, .. }
            | TrackerKind::Em { pos_noise_rms, .. } => *pos_noise_rms,
        }
    }

    pub fn validate(&self) -> Result<(), super::ScanSimError> {
        if self.pos_noise_rms() < 0.0 {
            return Err(super::ScanSimError::InvalidInput(
                "position noise RMS must be non-negative".into(),
            ));
        }
        if let TrackerKind::Em { distortion, .. } = &self.kind {
            if distortion.amplitude < 0.0 || distortion.spatial_period <= 0.0 {
                return Err(super::ScanSimError::InvalidInput(
                    "EM distortion needs amplitude ≥ 0 and period > 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Applies the tracker model to a ground-truth pose stream.
///
/// Each reported pose is `calibration_perturbation ∘ true_pose` with
/// isotropic Gaussian translation noise (per-axis σ = rms/√3, so the 3D
/// RMS equals the configured value). EM tracking adds its spatial bias,
/// optical tracking deletes samples inside dropout intervals, and all
/// timestamps are shifted by the latency.
pub fn corrupt_poses(truth: &PoseStream, model: &TrackerModel, seed: u64) -> PoseStream {
    let mut rng = derive_rng(seed, Stream::Tracker, 0);
    let sigma = model.pos_noise_rms() / 3.0f64.sqrt();
    let gauss = Normal::new(0.0, sigma).expect("non-negative sigma");
    let start = truth
        .samples()
        .first()
        .map(|s| s.pose.translation)
        .unwrap_or_default();

    let mut out = Vec::with_capacity(truth.len());
    for sample in truth.samples() {
        if let TrackerKind::Optical {
            dropout_intervals, ..
        } = &model.kind
        {
            let t = sample.timestamp;
            if dropout_intervals.iter().any(|&(t0, t1)| t >= t0 && t < t1) {
                continue;
            }
        }
        let mut pose = model.calibration_perturbation.compose(&sample.pose);
        for axis in 0..3 {
            pose.translation[axis] += gauss.sample(&mut rng);
        }
        if let TrackerKind::Em { distortion, .. } = &model.kind {
            let displacement = (sample.pose.translation - start).norm();
            pose.translation += distortion.bias(displacement);
        }
        out.push(TimedPose {
            timestamp: sample.timestamp + model.latency,
            pose,
        });
    }
    PoseStream::new(out).expect("monotone timestamps are preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scansim::trajectory::{default_probe_orientation, plan_poses, TrajectoryPlan};
    use nalgebra::Vector3;

    fn line_stream(speed: f64, length: f64, rate: f64) -> PoseStream {
        let plan = TrajectoryPlan {
            start: RigidTransform::new(default_probe_orientation(), Vector3::zeros()),
            direction: Vector3::x_axis(),
            length,
            speed,
            axial_angle_deg: 0.0,
            lateral_tilt_deg: 0.0,
            sweep_offsets: Vec::new(),
        };
        plan_poses(&plan, rate).unwrap()
    }

    #[test]
    fn noiseless_kinematic_model_is_transparent() {
        let truth = line_stream(5.0, 50.0, 20.0);
        let reported = corrupt_poses(&truth, &TrackerModel::kinematic(0.0), 7);
        assert_eq!(truth, reported);
    }

    #[test]
    fn dropout_removes_expected_sample_count() {
        // 20 Hz over 3 s = 61 samples; dropout [1.0, 1.5) removes 10.
        let truth = line_stream(5.0, 15.0, 20.0);
        assert_eq!(truth.len(), 61);
        let model = TrackerModel {
            kind: TrackerKind::Optical {
                pos_noise_rms: 0.0,
                dropout_intervals: vec![(1.0, 1.5)],
            },
            latency: 0.0,
            calibration_perturbation: RigidTransform::identity(),
        };
        let reported = corrupt_poses(&truth, &model, 7);
        assert_eq!(truth.len() - reported.len(), 10);
    }

    #[test]
    fn em_bias_matches_direct_formula_evaluation() {
        let truth = line_stream(5.0, 100.0, 20.0);
        let distortion = EmDistortion {
            amplitude: 2.0,
            spatial_period: 100.0,
            phase: 0.4,
        };
        let model = TrackerModel {
            kind: TrackerKind::Em {
                pos_noise_rms: 0.0,
                distortion,
            },
            latency: 0.0,
            calibration_perturbation: RigidTransform::identity(),
        };
        let reported = corrupt_poses(&truth, &model, 7);
        let mut max_dev: [f64; 3] = [0.0; 3];
        for (t, r) in truth.samples().iter().zip(reported.samples()) {
            let s = (t.pose.translation - truth.samples()[0].pose.translation).norm();
            let expected = distortion.bias(s);
            let dev = r.pose.translation - t.pose.translation;
            assert!((dev - expected).norm() < 1e-12);
            for a in 0..3 {
                max_dev[a] = max_dev[a].max(dev[a].abs());
            }
        }
        // A full period is swept, so each axis reaches its amplitude.
        for a in 0..3 {
            assert!(
                (max_dev[a] - 2.0).abs() < 0.05,
                "axis {a} max deviation {}",
                max_dev[a]
            );
        }
    }

    #[test]
    fn latency_shifts_timestamps() {
        let truth = line_stream(5.0, 20.0, 20.0);
        let mut model = TrackerModel::kinematic(0.0);
        model.latency = 0.0902;
        let reported = corrupt_poses(&truth, &model, 7);
        for (t, r) in truth.samples().iter().zip(reported.samples()) {
            assert!((r.timestamp - t.timestamp - 0.0902).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_rms_matches_configuration() {
        let truth = line_stream(5.0, 200.0, 50.0);
        let rms = 0.2;
        let reported = corrupt_poses(&truth, &TrackerModel::kinematic(rms), 11);
        let mut sum_sq = 0.0;
        for (t, r) in truth.samples().iter().zip(reported.samples()) {
            sum_sq += (r.pose.translation - t.pose.translation).norm_squared();
        }
        let empirical = (sum_sq / truth.len() as f64).sqrt();
        assert!(
            (empirical - rms).abs() < 0.02,
            "empirical RMS {empirical} vs configured {rms}"
        );
    }

    #[test]
    fn calibration_perturbation_is_composed_in() {
        let truth = line_stream(5.0, 20.0, 20.0);
        let calib = RigidTransform::from_translation(Vector3::new(0.5, -0.3, 0.8));
        let model = TrackerModel {
            kind: TrackerKind::Kinematic { pos_noise_rms: 0.0 },
            latency: 0.0,
            calibration_perturbation: calib,
        };
        let reported = corrupt_poses(&truth, &model, 7);
        for (t, r) in truth.samples().iter().zip(reported.samples()) {
            let expected = calib.compose(&t.pose);
            let (da, dt) = r.pose.delta_to(&expected);
            assert!(da < 1e-12 && dt < 1e-12);
        }
    }
}
