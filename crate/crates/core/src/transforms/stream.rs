//! Timestamped pose streams: interpolation and CSV persistence.

use super::{RigidTransform, TransformError};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// A pose with its acquisition timestamp in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedPose {
    pub timestamp: f64,
    pub pose: RigidTransform,
}

impl TimedPose {
    pub fn new(timestamp: f64, pose: RigidTransform) -> Result<Self, TransformError> {
        if !timestamp.is_finite() || timestamp < 0.0 {
            return Err(TransformError::InvalidInput(format!(
                "timestamp must be finite and non-negative, got {timestamp}"
            )));
        }
        Ok(TimedPose { timestamp, pose })
    }
}

/// An ordered pose stream with strictly increasing timestamps.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PoseStream {
    samples: Vec<TimedPose>,
}

impl PoseStream {
    pub fn new(samples: Vec<TimedPose>) -> Result<Self, TransformError> {
        for w in samples.windows(2) {
            if w[1].timestamp <= w[0].timestamp {
                return Err(TransformError::InvalidInput(format!(
                    "timestamps must be strictly increasing ({} then {})",
                    w[0].timestamp, w[1].timestamp
                )));
            }
        }
        Ok(PoseStream { samples })
    }

    pub fn push(&mut self, sample: TimedPose) -> Result<(), TransformError> {
        if let Some(last) = self.samples.last() {
            if sample.timestamp <= last.timestamp {
                return Err(TransformError::InvalidInput(format!(
                    "timestamp {} does not advance past {}",
                    sample.timestamp, last.timestamp
                )));
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn samples(&self) -> &[TimedPose] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first_timestamp(&self) -> Option<f64> {
        self.samples.first().map(|s| s.timestamp)
    }

    pub fn last_timestamp(&self) -> Option<f64> {
        self.samples.last().map(|s| s.timestamp)
    }

    /// Splits the stream at timestamp gaps larger than `max_gap` seconds.
    /// Used to keep interpolation from bridging acquisition pauses
    /// (sweep boundaries, tracker dropouts).
    pub fn split_at_gaps(&self, max_gap: f64) -> Vec<PoseStream> {
        let mut segments = Vec::new();
        let mut current: Vec<TimedPose> = Vec::new();
        for s in &self.samples {
            if let Some(last) = current.last() {
                if s.timestamp - last.timestamp > max_gap {
                    segments.push(PoseStream {
                        samples: std::mem::take(&mut current),
                    });
                }
            }
            current.push(*s);
        }
        if !current.is_empty() {
            segments.push(PoseStream { samples: current });
        }
        segments
    }

    /// Writes the stream as CSV:
    /// `timestamp_s,qx,qy,qz,qw,tx_mm,ty_mm,tz_mm` with a header row.
    ///
    /// Floats use the shortest representation that round-trips, so
    /// `read_csv(write_csv(s)) == s` bit-for-bit.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), TransformError> {
        writeln!(w, "timestamp_s,qx,qy,qz,qw,tx_mm,ty_mm,tz_mm")?;
        for s in &self.samples {
            let q = s.pose.rotation.quaternion();
            let t = s.pose.translation;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                s.timestamp, q.i, q.j, q.k, q.w, t.x, t.y, t.z
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, TransformError> {
        let mut samples = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                if line.trim() != "timestamp_s,qx,qy,qz,qw,tx_mm,ty_mm,tz_mm" {
                    return Err(TransformError::Parse {
                        line: 1,
                        message: format!("unexpected header: {line}"),
                    });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(TransformError::Parse {
                    line: lineno + 1,
                    message: format!("expected 8 fields, got {}", fields.len()),
                });
            }
            let mut v = [0.0f64; 8];
            for (i, f) in fields.iter().enumerate() {
                v[i] = f.trim().parse().map_err(|e| TransformError::Parse {
                    line: lineno + 1,
                    message: format!("bad float {f:?}: {e}"),
                })?;
            }
            let quat = nalgebra::Quaternion::new(v[4], v[1], v[2], v[3]);
            let norm = quat.norm();
            if (norm - 1.0).abs() > 1e-6 {
                return Err(TransformError::Parse {
                    line: lineno + 1,
                    message: format!("quaternion norm {norm} is not 1"),
                });
            }
            // Components were written from a unit quaternion; skipping the
            // renormalization keeps the round trip bit-exact.
            let rotation = nalgebra::UnitQuaternion::new_unchecked(quat);
            let pose = RigidTransform::new(rotation, nalgebra::Vector3::new(v[5], v[6], v[7]));
            samples.push(TimedPose {
                timestamp: v[0],
                pose,
            });
        }
        PoseStream::new(samples)
    }
}

/// Pose at time `t`: translation linearly interpolated, rotation
/// spherically interpolated between the bracketing samples. Exact at
/// sample timestamps.
pub fn interpolate_pose(stream: &PoseStream, t: f64) -> Result<RigidTransform, TransformError> {
    let samples = stream.samples();
    if samples.len() < 2 {
        return Err(TransformError::InvalidInput(format!(
            "interpolation needs at least 2 samples, stream has {}",
            samples.len()
        )));
    }
    let first = samples[0].timestamp;
    let last = samples[samples.len() - 1].timestamp;
    if !(first..=last).contains(&t) {
        return Err(TransformError::OutOfRange { t, first, last });
    }
    // partition_point: first index with timestamp > t.
    let hi = samples.partition_point(|s| s.timestamp <= t);
    if hi == 0 {
        return Ok(samples[0].pose);
    }
    let lo = hi - 1;
    if samples[lo].timestamp == t || hi == samples.len() {
        return Ok(samples[lo].pose);
    }
    let a = &samples[lo];
    let b = &samples[hi];
    let alpha = (t - a.timestamp) / (b.timestamp - a.timestamp);
    let translation = a.pose.translation.lerp(&b.pose.translation, alpha);
    let rotation = a
        .pose
        .rotation
        .try_slerp(&b.pose.rotation, alpha, 1e-12)
        // Antipodal rotations have no unique geodesic; fall back to the
        // normalized linear blend.
        .unwrap_or_else(|| {
            nalgebra::UnitQuaternion::from_quaternion(
                a.pose.rotation.lerp(&b.pose.rotation, alpha),
            )
        });
    Ok(RigidTransform::new(rotation, translation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{UnitQuaternion, Vector3};
    use std::f64::consts::FRAC_PI_2;

    fn stream_of(poses: &[(f64, RigidTransform)]) -> PoseStream {
        PoseStream::new(
            poses
                .iter()
                .map(|&(t, p)| TimedPose::new(t, p).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_increasing_timestamps() {
        let p = RigidTransform::identity();
        assert!(PoseStream::new(vec![
            TimedPose::new(1.0, p).unwrap(),
            TimedPose::new(1.0, p).unwrap(),
        ])
        .is_err());
    }

    #[test]
    fn interpolation_is_exact_at_samples() {
        let a = RigidTransform::new(
            UnitQuaternion::from_euler_angles(0.2, 0.1, -0.4),
            Vector3::new(1.0, 2.0, 3.0),
        );
        let b = RigidTransform::new(
            UnitQuaternion::from_euler_angles(-0.3, 0.5, 0.2),
            Vector3::new(4.0, -1.0, 0.0),
        );
        let s = stream_of(&[(0.0, a), (1.0, b)]);
        assert_eq!(interpolate_pose(&s, 0.0).unwrap(), a);
        assert_eq!(interpolate_pose(&s, 1.0).unwrap(), b);
    }

    #[test]
    fn translation_midpoint_is_linear() {
        let a = RigidTransform::from_translation(Vector3::zeros());
        let b = RigidTransform::from_translation(Vector3::new(10.0, 0.0, 0.0));
        let s = stream_of(&[(0.0, a), (2.0, b)]);
        let mid = interpolate_pose(&s, 1.0).unwrap();
        assert!((mid.translation - Vector3::new(5.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_midpoint_matches_slerp_closed_form() {
        // Oracle: slerp between identity and a 90° z-rotation evaluated
        // via the axis-angle closed form — the midpoint is a 45° z-rotation.
        let a = RigidTransform::identity();
        let b = RigidTransform::from_rotation(UnitQuaternion::from_axis_angle(
            &Vector3::z_axis(),
            FRAC_PI_2,
        ));
        let s = stream_of(&[(0.0, a), (1.0, b)]);
        let mid = interpolate_pose(&s, 0.5).unwrap();
        let expected = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), FRAC_PI_2 / 2.0);
        assert!(mid.rotation.angle_to(&expected) < 1e-12);
    }

    #[test]
    fn interpolated_angle_is_monotone_in_t() {
        let a = RigidTransform::identity();
        let b = RigidTransform::from_rotation(UnitQuaternion::from_euler_angles(0.9, -0.4, 1.2));
        let s = stream_of(&[(0.0, a), (1.0, b)]);
        let mut prev = -1.0;
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let angle = interpolate_pose(&s, t).unwrap().rotation.angle();
            assert!(angle >= prev - 1e-12, "angle not monotone at t={t}");
            prev = angle;
        }
    }

    #[test]
    fn out_of_range_and_empty_are_errors() {
        let p = RigidTransform::identity();
        let s = stream_of(&[(0.0, p), (1.0, p)]);
        assert!(matches!(
            interpolate_pose(&s, 1.5),
            Err(TransformError::OutOfRange { .. })
        ));
        let empty = PoseStream::default();
        assert!(matches!(
            interpolate_pose(&empty, 0.5),
            Err(TransformError::InvalidInput(_))
        ));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let mut samples = Vec::new();
        for k in 0..17 {
            let t = k as f64 * 0.05;
            let pose = RigidTransform::new(
                UnitQuaternion::from_euler_angles(0.1 * k as f64, -0.07, 0.3),
                Vector3::new(1.0 / 3.0 * k as f64, -2.5, 0.125),
            );
            samples.push(TimedPose::new(t, pose).unwrap());
        }
        let stream = PoseStream::new(samples).unwrap();
        let mut buf = Vec::new();
        stream.write_csv(&mut buf).unwrap();
        let parsed = PoseStream::read_csv(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(stream, parsed);
    }

    #[test]
    fn split_at_gaps_partitions_sweeps() {
        let p = RigidTransform::identity();
        let mut samples = Vec::new();
        for k in 0..5 {
            samples.push(TimedPose::new(k as f64 * 0.05, p).unwrap());
        }
        for k in 0..5 {
            samples.push(TimedPose::new(2.0 + k as f64 * 0.05, p).unwrap());
        }
        let s = PoseStream::new(samples).unwrap();
        let parts = s.split_at_gaps(0.2);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].len(), 5);
        assert_eq!(parts[1].len(), 5);
    }
}
