//! Per-frame delineation of anechoic inclusions in B-mode images: median
//! filtering, Otsu thresholding, morphological refinement, and 2D Dice
//! scoring. All functions are pure; frames can be segmented in parallel
//! with order-independent results.

mod filters;
mod image;
mod morphology;
mod pipeline;

pub use filters::{median_filter, otsu_threshold};
pub use image::{BinaryMask, GrayImage, Rect};
pub use morphology::{close, dilate, erode, fill_holes, open};
pub use pipeline::{
    dsc_2d, segment_frame, DropoutThreshold, EmptyReason, SegConfig, SegmentedFrame,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SegmentationError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate histogram: no intensity split exists")]
    DegenerateHistogram,
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
