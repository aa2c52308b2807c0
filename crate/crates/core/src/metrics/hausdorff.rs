//! Bidirectional Hausdorff distances between surface point samples.

use super::MetricsError;
use crate::spatial::KdTree;
use nalgebra::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffResult {
    /// Maximum of both directed maximum distances, mm.
    pub hd_max: f64,
    /// Maximum of both directed 95th percentiles (linear-interpolated), mm.
    pub hd95: f64,
}

/// Hausdorff distances between two point samples.
///
/// Nearest-neighbour distances are computed exactly (kd-tree results are
/// bitwise identical to a quadratic scan), and the 95th percentile uses
/// linear interpolation between order statistics.
pub fn hausdorff(xs: &[Point3<f64>], ys: &[Point3<f64>]) -> Result<HausdorffResult, MetricsError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(MetricsError::InvalidInput(
            "hausdorff needs two non-empty point sets".into(),
        ));
    }
    let d_xy = directed_distances(xs, ys);
    let d_yx = directed_distances(ys, xs);
    let max_xy = d_xy.iter().cloned().fold(0.0f64, f64::max);
    let max_yx = d_yx.iter().cloned().fold(0.0f64, f64::max);
    let hd95 = percentile(d_xy, 0.95).max(percentile(d_yx, 0.95));
    Ok(HausdorffResult {
        hd_max: max_xy.max(max_yx),
        hd95,
    })
}

fn directed_distances(from: &[Point3<f64>], to: &[Point3<f64>]) -> Vec<f64> {
    let tree = KdTree::build(to);
    from.iter()
        .map(|p| {
            let (_, d_sq) = tree.nearest(p);
            d_sq.sqrt()
        })
        .collect()
}

/// Linear-interpolated percentile of an unsorted sample.
fn percentile(mut values: Vec<f64>, q: f64) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n == 1 {
        return values[0];
    }
    let rank = q * (n - 1) as f64;
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    if lo + 1 == n {
        values[n - 1]
    } else {
        values[lo] + frac * (values[lo + 1] - values[lo])
    }
}
