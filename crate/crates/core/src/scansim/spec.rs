//! Imaging geometry of a simulated B-mode frame.

use super::ScanSimError;
use serde::{Deserialize, Serialize};

/// Frame geometry and acquisition parameters.
///
/// Image coordinates: column (x) is the lateral in-plane axis, row (y)
/// the axial/depth axis, and z the plane normal (elevational direction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub width_px: usize,
    pub height_px: usize,
    /// Isotropic pixel pitch, mm/px.
    pub pixel_spacing: f64,
    /// Lateral field of view, mm; must equal width·pixel_spacing within
    /// one pixel.
    pub fov_width: f64,
    /// Out-of-plane slice thickness, mm (0.1 to 5).
    pub elevational_thickness: f64,
    /// Frames per second.
    pub frame_rate: f64,
}

impl FrameSpec {
    pub fn validate(&self) -> Result<(), ScanSimError> {
        if self.width_px == 0 || self.height_px == 0 {
            return Err(ScanSimError::InvalidInput("zero frame dimensions".into()));
        }
        if !(self.pixel_spacing.is_finite() && self.pixel_spacing > 0.0) {
            return Err(ScanSimError::InvalidInput(format!(
                "pixel spacing must be positive, got {}",
                self.pixel_spacing
            )));
        }
        let fov_err = (self.width_px as f64 * self.pixel_spacing - self.fov_width).abs();
        if fov_err > self.pixel_spacing {
            return Err(ScanSimError::InvalidInput(format!(
                "width·pixel_spacing differs from fov_width by {fov_err} mm (more than one pixel)"
            )));
        }
        if !(0.1..=5.0).contains(&self.elevational_thickness) {
            return Err(ScanSimError::InvalidInput(format!(
                "elevational thickness {} outside [0.1, 5] mm",
                self.elevational_thickness
            )));
        }
        if !(self.frame_rate.is_finite() && self.frame_rate > 0.0) {
            return Err(ScanSimError::InvalidInput(format!(
                "frame rate must be positive, got {}",
                self.frame_rate
            )));
        }
        Ok(())
    }
}

impl Default for FrameSpec {
    /// 38.4 mm FOV at 0.3 mm/px, 50.4 mm depth, 1 mm slice, 20 Hz.
    fn default() -> Self {
        FrameSpec {
            width_px: 128,
            height_px: 168,
            pixel_spacing: 0.3,
            fov_width: 38.4,
            elevational_thickness: 1.0,
            frame_rate: 20.0,
        }
    }
}
