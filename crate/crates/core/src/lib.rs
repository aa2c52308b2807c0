//! Simulation, reconstruction, and quality-assurance toolkit for tracked
//! 3D ultrasound.
//!
//! The crate covers the full desk-scale QA loop for freehand/robotic 3D
//! ultrasound systems:
//!
//! 1. [`phantom`] — an analytic QA phantom (sphere, ellipsoid, cylinder,
//!    triangular prism embedded in a speckle block) with exact signed
//!    distances, ground-truth meshes, and closed-form shape descriptors.
//! 2. [`scansim`] — tracked B-mode frame simulation: linear/angled sweep
//!    trajectories, a slab-occupancy imaging model, and tracker error
//!    models (kinematic, optical, electromagnetic).
//! 3. [`segmentation`] — the threshold pipeline that delineates anechoic
//!    inclusions per frame (median filter, Otsu, morphology, trimming).
//! 4. [`reconstruction`] — voxel-based forward mapping with maximum-value
//!    compounding, connected-component labeling, and surface extraction.
//! 5. [`metrics`] + [`shapefit`] — Dice/Hausdorff agreement, shape
//!    descriptors, surface error maps, and parametric shape fits.
//! 6. [`pipeline`] — end-to-end experiments (baseline, speed and angle
//!    sweeps) producing machine-readable QA reports.
//!
//! All operations are deterministic for a fixed seed: random streams are
//! derived per (seed, purpose, index), so results never depend on
//! evaluation order.

pub mod metrics;
pub mod phantom;
pub mod reconstruction;
pub mod segmentation;
pub mod rng;
pub mod scansim;
pub mod spatial;
pub mod transforms;
