//! The QA phantom scene: labelled inclusions inside a speckle block.

use super::mesh::ground_truth_mesh;
use super::shape::{Aabb, ShapeSpec};
use super::PhantomError;
use nalgebra::{Point3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

/// Intensity model parameters (8-bit scale). For the background the sigma
/// is the log-scale multiplicative speckle spread; for inclusions it is an
/// additive Gaussian sigma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityModel {
    pub mean: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inclusion {
    pub label: String,
    pub shape: ShapeSpec,
}

/// Analytic phantom: geometric inclusions embedded in a speckle block.
///
/// Invariants (checked by [`PhantomScene::validate`]): inclusions lie fully
/// inside `block_bounds` and are pairwise separated by a positive margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhantomScene {
    pub inclusions: Vec<Inclusion>,
    pub block_bounds: Aabb,
    pub background_speckle: IntensityModel,
    pub inclusion_intensity: IntensityModel,
}

/// Result of a scene distance query: the signed distance to the nearest
/// inclusion and which inclusion that is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneDistance {
    /// Negative inside the nearest inclusion, positive outside all.
    pub distance: f64,
    /// Index into `inclusions`; `None` when the scene has no inclusions.
    pub label: Option<usize>,
}

impl PhantomScene {
    pub fn new(
        inclusions: Vec<Inclusion>,
        block_bounds: Aabb,
        background_speckle: IntensityModel,
        inclusion_intensity: IntensityModel,
    ) -> Result<Self, PhantomError> {
        let scene = PhantomScene {
            inclusions,
            block_bounds,
            background_speckle,
            inclusion_intensity,
        };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<(), PhantomError> {
        for inc in &self.inclusions {
            inc.shape.validate()?;
            if !self.block_bounds.contains_box(&inc.shape.aabb()) {
                return Err(PhantomError::OutsideBlock(inc.label.clone()));
            }
        }
        for i in 0..self.inclusions.len() {
            for j in (i + 1)..self.inclusions.len() {
                let a = &self.inclusions[i];
                let b = &self.inclusions[j];
                if !a.shape.aabb().intersects(&b.shape.aabb()) {
                    continue;
                }
                let sep = min_surface_separation(&a.shape, &b.shape)?;
                if sep <= 0.0 {
                    return Err(PhantomError::Overlap {
                        a: a.label.clone(),
                        b: b.label.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Signed distance to the nearest inclusion and its label.
    pub fn signed_distance(&self, p: &Point3<f64>) -> SceneDistance {
        let mut best = SceneDistance {
            distance: f64::INFINITY,
            label: None,
        };
        for (idx, inc) in self.inclusions.iter().enumerate() {
            let d = inc.shape.signed_distance(p);
            if d < best.distance {
                best = SceneDistance {
                    distance: d,
                    label: Some(idx),
                };
            }
        }
        best
    }

    /// Union bounding box of all inclusions.
    pub fn inclusion_bounds(&self) -> Option<Aabb> {
        let mut it = self.inclusions.iter();
        let first = it.next()?.shape.aabb();
        Some(it.fold(first, |acc, inc| acc.union(&inc.shape.aabb())))
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self, PhantomError> {
        let scene: PhantomScene =
            serde_json::from_str(text).map_err(|e| PhantomError::Serde(e.to_string()))?;
        scene.validate()?;
        Ok(scene)
    }
}

/// Minimum of one shape's signed distance over the other's surface
/// (coarse tessellation), evaluated both ways. Positive = separated.
fn min_surface_separation(a: &ShapeSpec, b: &ShapeSpec) -> Result<f64, PhantomError> {
    let mut min_sep = f64::INFINITY;
    for (surf, other) in [(a, b), (b, a)] {
        let mesh = ground_truth_mesh(surf, 2.0)?;
        for v in &mesh.vertices {
            min_sep = min_sep.min(other.signed_distance(v));
        }
    }
    Ok(min_sep)
}

/// The default four-inclusion QA scene.
///
/// A 180×80×60 mm block, inclusions centred at depth 30 mm along the scan
/// (x) axis: sphere r 11.57, prolate ellipsoid (24.65, 12.33, 12.33),
/// cylinder r 11.96 × h 42.57, equilateral prism edge 23.51 × h 36.98 —
/// all long axes along x so a single 38.4 mm-FOV sweep covers each shape
/// laterally. Exact positions are a declared layout convention.
pub fn default_scene() -> PhantomScene {
    let block = Aabb::new(Point3::new(0.0, -40.0, 0.0), Point3::new(180.0, 40.0, 60.0));
    let inclusions = vec![
        Inclusion {
            label: "sphere".into(),
            shape: ShapeSpec::Sphere {
                center: Point3::new(18.0, 0.0, 30.0),
                radius: 11.57,
            },
        },
        Inclusion {
            label: "ellipsoid".into(),
            shape: ShapeSpec::Ellipsoid {
                center: Point3::new(60.0, 0.0, 30.0),
                semi_axes: [24.65, 12.33, 12.33],
                orientation: UnitQuaternion::identity(),
            },
        },
        Inclusion {
            label: "cylinder".into(),
            shape: ShapeSpec::Cylinder {
                center: Point3::new(111.0, 0.0, 30.0),
                axis: Vector3::x_axis(),
                radius: 11.96,
                height: 42.57,
            },
        },
        Inclusion {
            label: "prism".into(),
            shape: ShapeSpec::TriPrism {
                edge_length: 23.51,
                height: 36.98,
                // Extrusion axis (local z) along world x.
                pose: crate::transforms::RigidTransform::new(
                    UnitQuaternion::from_axis_angle(
                        &Vector3::y_axis(),
                        std::f64::consts::FRAC_PI_2,
                    ),
                    Vector3::new(156.0, 0.0, 30.0),
                ),
            },
        },
    ];
    PhantomScene {
        inclusions,
        block_bounds: block,
        background_speckle: IntensityModel {
            mean: 150.0,
            sigma: 0.35,
        },
        inclusion_intensity: IntensityModel {
            mean: 20.0,
            sigma: 8.0,
        },
    }
}
