//! Connected-component labeling of thresholded volumes.

use super::grid::{GridGeometry, VoxelGrid, VoxelMask};

/// Labelled 26-connected components. Labels are contiguous from 1,
/// ordered by descending voxel count; 0 is background.
#[derive(Debug, Clone)]
pub struct LabeledComponents {
    pub geom: GridGeometry,
    pub labels: Vec<u32>,
    /// Voxel count per label; `voxel_counts[0]` is label 1.
    pub voxel_counts: Vec<usize>,
}

impl LabeledComponents {
    pub fn component_count(&self) -> usize {
        self.voxel_counts.len()
    }

    /// Boolean mask of one component (labels start at 1).
    pub fn component_mask(&self, label: u32) -> VoxelMask {
        VoxelMask {
            geom: self.geom,
            data: self.labels.iter().map(|&l| l == label).collect(),
        }
    }
}

/// Thresholds the grid at `iso` and labels 26-connected components,
/// discarding components smaller than `min_voxels`.
pub fn threshold_and_label(grid: &VoxelGrid, iso: u8, min_voxels: usize) -> LabeledComponents {
    let geom = grid.geom;
    let [nx, ny, nz] = geom.dims;
    let mut labels = vec![0u32; geom.len()];
    let mut sizes: Vec<(u32, usize)> = Vec::new();
    let mut next_label = 1u32;
    let mut stack = Vec::new();

    for start in 0..geom.len() {
        if labels[start] != 0 || grid.values[start] < iso {
            continue;
        }
        let mut count = 0usize;
        labels[start] = next_label;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            count += 1;
            let i = idx % nx;
            let j = (idx / nx) % ny;
            let k = idx / (nx * ny);
            for dk in -1i64..=1 {
                for dj in -1i64..=1 {
                    for di in -1i64..=1 {
                        if di == 0 && dj == 0 && dk == 0 {
                            continue;
                        }
                        let (ni, nj, nk) = (i as i64 + di, j as i64 + dj, k as i64 + dk);
                        if ni < 0
                            || nj < 0
                            || nk < 0
                            || ni >= nx as i64
                            || nj >= ny as i64
                            || nk >= nz as i64
                        {
                            continue;
                        }
                        let nidx = (nk as usize * ny + nj as usize) * nx + ni as usize;
                        if labels[nidx] == 0 && grid.values[nidx] >= iso {
                            labels[nidx] = next_label;
                            stack.push(nidx);
                        }
                    }
                }
            }
        }
        sizes.push((next_label, count));
        next_label += 1;
    }

    // Keep components ≥ min_voxels, relabel by descending size.
    sizes.retain(|&(_, c)| c >= min_voxels);
    sizes.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut remap = vec![0u32; next_label as usize];
    for (new_label, &(old, _)) in sizes.iter().enumerate() {
        remap[old as usize] = new_label as u32 + 1;
    }
    for l in &mut labels {
        *l = remap[*l as usize];
    }
    LabeledComponents {
        geom,
        labels,
        voxel_counts: sizes.iter().map(|&(_, c)| c).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Point3;

    fn geom(n: usize) -> GridGeometry {
        GridGeometry {
            origin: Point3::origin(),
            spacing: 1.0,
            dims: [n, n, n],
        }
    }

    #[test]
    fn empty_grid_has_no_components() {
        let grid = VoxelGrid::new(geom(8)).unwrap();
        let labeled = threshold_and_label(&grid, 128, 1);
        assert_eq!(labeled.component_count(), 0);
    }

    #[test]
    fn two_separated_cubes_are_two_components() {
        let mut grid = VoxelGrid::new(geom(12)).unwrap();
        let mut fill = |lo: usize, hi: usize| {
            for k in lo..hi {
                for j in lo..hi {
                    for i in lo..hi {
                        let idx = grid.geom.index(i, j, k);
                        grid.values[idx] = 255;
                    }
                }
            }
        };
        fill(0, 3); // 27 voxels
        fill(7, 11); // 64 voxels
        let labeled = threshold_and_label(&grid, 128, 1);
        assert_eq!(labeled.component_count(), 2);
        // Ordered by descending size.
        assert_eq!(labeled.voxel_counts, vec![64, 27]);
        assert_eq!(labeled.component_mask(1).count(), 64);
        assert_eq!(labeled.component_mask(2).count(), 27);
    }

    #[test]
    fn diagonal_contact_is_connected_under_26_connectivity() {
        let mut grid = VoxelGrid::new(geom(4)).unwrap();
        let idx0 = grid.geom.index(0, 0, 0);
        let idx1 = grid.geom.index(1, 1, 1);
        grid.values[idx0] = 255;
        grid.values[idx1] = 255;
        let labeled = threshold_and_label(&grid, 128, 1);
        assert_eq!(labeled.component_count(), 1);
    }

    #[test]
    fn min_voxels_filters_speckle() {
        let mut grid = VoxelGrid::new(geom(10)).unwrap();
        let idx = grid.geom.index(5, 5, 5);
        grid.values[idx] = 255;
        for k in 0..3 {
            for j in 0..3 {
                for i in 0..3 {
                    let idx = grid.geom.index(i, j, k);
                    grid.values[idx] = 255;
                }
            }
        }
        let labeled = threshold_and_label(&grid, 128, 5);
        assert_eq!(labeled.component_count(), 1);
        assert_eq!(labeled.voxel_counts, vec![27]);
    }
}
