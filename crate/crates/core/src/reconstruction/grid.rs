//! Axis-aligned voxel grids and MetaImage persistence.

use super::ReconstructionError;
use nalgebra::Point3;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Geometry of an isotropic axis-aligned voxel grid. `origin` is the
/// world position of the centre of voxel (0, 0, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub origin: Point3<f64>,
    /// Isotropic voxel edge, mm.
    pub spacing: f64,
    pub dims: [usize; 3],
}

impl GridGeometry {
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    #[inline]
    pub fn voxel_center(&self, i: usize, j: usize, k: usize) -> Point3<f64> {
        Point3::new(
            self.origin.x + i as f64 * self.spacing,
            self.origin.y + j as f64 * self.spacing,
            self.origin.z + k as f64 * self.spacing,
        )
    }

    /// Nearest voxel to a world point, or `None` when outside the grid.
    #[inline]
    pub fn world_to_voxel(&self, p: &Point3<f64>) -> Option<[usize; 3]> {
        let mut out = [0usize; 3];
        for a in 0..3 {
            let f = (p[a] - self.origin[a]) / self.spacing;
            let idx = f.round();
            if idx < 0.0 || idx >= self.dims[a] as f64 {
                return None;
            }
            out[a] = idx as usize;
        }
        Some(out)
    }

    /// Inclusive voxel index range covering a world-space box, clipped to
    /// the grid; `None` when the box misses the grid entirely.
    pub fn voxel_range(
        &self,
        min: &Point3<f64>,
        max: &Point3<f64>,
    ) -> Option<([usize; 3], [usize; 3])> {
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        for a in 0..3 {
            let fmin = ((min[a] - self.origin[a]) / self.spacing).floor().max(0.0);
            let fmax = ((max[a] - self.origin[a]) / self.spacing).ceil();
            if fmax < 0.0 || fmin >= self.dims[a] as f64 {
                return None;
            }
            lo[a] = fmin as usize;
            hi[a] = (fmax as usize).min(self.dims[a] - 1);
        }
        Some((lo, hi))
    }
}

/// 8-bit voxel volume with a per-voxel hit counter for diagnostics (how
/// many pixels compounded into each voxel).
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    pub geom: GridGeometry,
    pub values: Vec<u8>,
    pub hit_count: Vec<u32>,
}

impl VoxelGrid {
    pub fn new(geom: GridGeometry) -> Result<Self, ReconstructionError> {
        if geom.dims.iter().any(|&d| d == 0) || !(geom.spacing.is_finite() && geom.spacing > 0.0) {
            return Err(ReconstructionError::InvalidInput(format!(
                "bad grid geometry {geom:?}"
            )));
        }
        Ok(VoxelGrid {
            geom,
            values: vec![0; geom.len()],
            hit_count: vec![0; geom.len()],
        })
    }

    /// Boolean occupancy at a threshold.
    pub fn mask_at(&self, iso: u8) -> VoxelMask {
        VoxelMask {
            geom: self.geom,
            data: self.values.iter().map(|&v| v >= iso).collect(),
        }
    }

    /// MetaImage pair: `<base>.mhd` text header + `<base>.raw` voxels
    /// (x fastest, little-endian, unsigned 8-bit).
    pub fn write_meta_image(&self, base: &Path) -> std::io::Result<()> {
        let raw_name = base
            .file_name()
            .map(|n| format!("{}.raw", n.to_string_lossy()))
            .unwrap_or_else(|| "volume.raw".into());
        let mut header = std::fs::File::create(base.with_extension("mhd"))?;
        write!(
            header,
            "ObjectType = Image\nNDims = 3\nBinaryData = True\n\
             BinaryDataByteOrderMSB = False\nCompressedData = False\n\
             TransformMatrix = 1 0 0 0 1 0 0 0 1\n\
             Offset = {} {} {}\nCenterOfRotation = 0 0 0\n\
             ElementSpacing = {} {} {}\nDimSize = {} {} {}\n\
             ElementType = MET_UCHAR\nElementDataFile = {}\n",
            self.geom.origin.x,
            self.geom.origin.y,
            self.geom.origin.z,
            self.geom.spacing,
            self.geom.spacing,
            self.geom.spacing,
            self.geom.dims[0],
            self.geom.dims[1],
            self.geom.dims[2],
            raw_name,
        )?;
        std::fs::write(base.with_extension("raw"), &self.values)
    }

    pub fn read_meta_image(base: &Path) -> Result<Self, ReconstructionError> {
        let header = std::fs::read_to_string(base.with_extension("mhd"))?;
        let mut dims = None;
        let mut spacing = None;
        let mut origin = None;
        let mut data_file = None;
        for line in header.lines() {
            let Some((key, value)) = line.split_once('=') else {
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "DimSize" => {
                    let v: Vec<usize> = value
                        .split_whitespace()
                        .map(|t| t.parse())
                        .collect::<Result<_, _>>()
                        .map_err(|e| {
                            ReconstructionError::InvalidInput(format!("bad DimSize: {e}"))
                        })?;
                    dims = Some([v[0], v[1], v[2]]);
                }
                "ElementSpacing" => {
                    let v: Vec<f64> = value
                        .split_whitespace()
                        .map(|t| t.parse())
                        .collect::<Result<_, _>>()
                        .map_err(|e| {
                            ReconstructionError::InvalidInput(format!("bad spacing: {e}"))
                        })?;
                    spacing = Some(v[0]);
                }
                "Offset" => {
                    let v: Vec<f64> = value
                        .split_whitespace()
                        .map(|t| t.parse())
                        .collect::<Result<_, _>>()
                        .map_err(|e| {
                            ReconstructionError::InvalidInput(format!("bad offset: {e}"))
                        })?;
                    origin = Some(Point3::new(v[0], v[1], v[2]));
                }
                "ElementType" => {
                    if value != "MET_UCHAR" {
                        return Err(ReconstructionError::InvalidInput(format!(
                            "unsupported element type {value}"
                        )));
                    }
                }
                "ElementDataFile" => data_file = Some(value.to_string()),
                _ => {}
            }
        }
        let (Some(dims), Some(spacing), Some(origin), Some(data_file)) =
            (dims, spacing, origin, data_file)
        else {
            return Err(ReconstructionError::InvalidInput(
                "incomplete MetaImage header".into(),
            ));
        };
        let geom = GridGeometry {
            origin,
            spacing,
            dims,
        };
        let raw_path = base
            .parent()
            .map(|p| p.join(&data_file))
            .unwrap_or_else(|| data_file.clone().into());
        let values = std::fs::read(raw_path)?;
        if values.len() != geom.len() {
            return Err(ReconstructionError::InvalidInput(format!(
                "raw file has {} bytes, header implies {}",
                values.len(),
                geom.len()
            )));
        }
        let hit_count = vec![0; geom.len()];
        Ok(VoxelGrid {
            geom,
            values,
            hit_count,
        })
    }
}

/// Boolean voxel set on a grid geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelMask {
    pub geom: GridGeometry,
    pub data: Vec<bool>,
}

impl VoxelMask {
    pub fn new(geom: GridGeometry) -> Self {
        VoxelMask {
            geom,
            data: vec![false; geom.len()],
        }
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Mean world position of set voxels.
    pub fn centroid(&self) -> Option<Point3<f64>> {
        let mut sum = nalgebra::Vector3::zeros();
        let mut n = 0usize;
        let [nx, ny, nz] = self.geom.dims;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    if self.data[self.geom.index(i, j, k)] {
                        sum += self.geom.voxel_center(i, j, k).coords;
                        n += 1;
                    }
                }
            }
        }
        (n > 0).then(|| Point3::from(sum / n as f64))
    }

    /// World positions of all set voxel centres.
    pub fn voxel_centers(&self) -> Vec<Point3<f64>> {
        let [nx, ny, nz] = self.geom.dims;
        let mut out = Vec::new();
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    if self.data[self.geom.index(i, j, k)] {
                        out.push(self.geom.voxel_center(i, j, k));
                    }
                }
            }
        }
        out
    }
}

/// Marks every voxel whose centre satisfies `inside`, restricted to the
/// world-space box `[min, max]` for efficiency.
pub fn voxelize_region<F: Fn(&Point3<f64>) -> bool>(
    geom: &GridGeometry,
    min: &Point3<f64>,
    max: &Point3<f64>,
    inside: F,
) -> VoxelMask {
    let mut mask = VoxelMask::new(*geom);
    let Some((lo, hi)) = geom.voxel_range(min, max) else {
        return mask;
    };
    for k in lo[2]..=hi[2] {
        for j in lo[1]..=hi[1] {
            for i in lo[0]..=hi[0] {
                if inside(&geom.voxel_center(i, j, k)) {
                    mask.data[geom.index(i, j, k)] = true;
                }
            }
        }
    }
    mask
}

/// Voxelizes an analytic shape (voxel centre inside the surface).
pub fn voxelize_shape(shape: &crate::phantom::ShapeSpec, geom: &GridGeometry) -> VoxelMask {
    let bb = shape.aabb().inflate(1.0);
    voxelize_region(geom, &bb.min, &bb.max, |p| shape.inside(p))
}
