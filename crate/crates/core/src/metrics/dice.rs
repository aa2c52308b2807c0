//! Voxel-wise Dice agreement.

use super::MetricsError;
use crate::reconstruction::VoxelMask;

/// 3D Dice similarity coefficient between two voxel sets on the same grid
/// geometry: `2|A∩B| / (|A|+|B|)`, 1.0 when both are empty.
pub fn dsc_3d(a: &VoxelMask, b: &VoxelMask) -> Result<f64, MetricsError> {
    if a.geom != b.geom {
        return Err(MetricsError::InvalidInput(format!(
            "grid geometries differ: {:?} vs {:?}",
            a.geom, b.geom
        )));
    }
    let mut intersection = 0usize;
    let mut total = 0usize;
    for (&x, &y) in a.data.iter().zip(&b.data) {
        intersection += (x && y) as usize;
        total += x as usize + y as usize;
    }
    if total == 0 {
        Ok(1.0)
    } else {
        Ok(2.0 * intersection as f64 / total as f64)
    }
}
