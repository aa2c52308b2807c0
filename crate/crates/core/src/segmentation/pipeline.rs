//! The per-frame segmentation pipeline that delineates anechoic
//! inclusions in B-mode images.

use super::filters::{median_filter, otsu_threshold};
use super::image::{BinaryMask, GrayImage, Rect};
use super::morphology::{close, fill_holes, open};
use super::SegmentationError;
use serde::{Deserialize, Serialize};

/// Columns whose mean (pre-threshold) intensity falls below this limit are
/// treated as coupling dropouts and removed from the mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum DropoutThreshold {
    /// Fraction of the ROI mean intensity (the default, 0.25).
    RelativeToRoiMean(f64),
    /// Absolute 8-bit intensity.
    Absolute(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegConfig {
    /// Region of interest; `None` uses the full frame minus a 16 px border.
    pub roi: Option<Rect>,
    pub median_kernel: usize,
    pub close_kernel: usize,
    pub open_kernel: usize,
    pub dropout_column_mean_threshold: DropoutThreshold,
    /// Guard against segmenting pure speckle: the dark class is only
    /// accepted when its mean is at most this fraction of the bright
    /// class mean.
    pub max_dark_bright_ratio: f64,
}

impl Default for SegConfig {
    fn default() -> Self {
        SegConfig {
            roi: None,
            median_kernel: 7,
            close_kernel: 5,
            open_kernel: 5,
            dropout_column_mean_threshold: DropoutThreshold::RelativeToRoiMean(0.25),
            max_dark_bright_ratio: 0.5,
        }
    }
}

impl SegConfig {
    pub fn validate(&self) -> Result<(), SegmentationError> {
        for (name, k) in [
            ("median", self.median_kernel),
            ("close", self.close_kernel),
            ("open", self.open_kernel),
        ] {
            if k == 0 || k % 2 == 0 {
                return Err(SegmentationError::InvalidInput(format!(
                    "{name} kernel must be odd and ≥ 1, got {k}"
                )));
            }
        }
        Ok(())
    }

    /// Default ROI rule: full image minus a 16 px border, shrunk when the
    /// image is too small for that.
    pub fn resolve_roi(&self, width: usize, height: usize) -> Result<Rect, SegmentationError> {
        let roi = match self.roi {
            Some(r) => r,
            None => {
                let border = 16usize.min(width.saturating_sub(1) / 2).min(height.saturating_sub(1) / 2);
                Rect::new(border, border, width - 2 * border, height - 2 * border)
            }
        };
        if !roi.fits_in(width, height) {
            return Err(SegmentationError::InvalidInput(format!(
                "ROI {roi:?} does not fit a {width}x{height} image"
            )));
        }
        Ok(roi)
    }
}

/// Why a frame produced an empty mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmptyReason {
    /// The ROI histogram had no usable split (constant image).
    DegenerateHistogram,
    /// A split existed but the dark class was not dark enough to be an
    /// anechoic inclusion (speckle-only frame).
    LowContrast,
}

#[derive(Debug, Clone)]
pub struct SegmentedFrame {
    /// Full-frame mask (foreground = inclusion).
    pub mask: BinaryMask,
    /// `Some` when the pipeline returned an empty mask on purpose.
    pub empty_reason: Option<EmptyReason>,
    /// Otsu cut value actually used (None for empty outcomes).
    pub threshold: Option<u8>,
}

/// Threshold segmentation pipeline: crop → median filter → Otsu →
/// below-threshold selection → hole filling → close → open → dark-column
/// trimming → paste back to frame coordinates.
pub fn segment_frame(img: &GrayImage, cfg: &SegConfig) -> Result<SegmentedFrame, SegmentationError> {
    cfg.validate()?;
    let roi = cfg.resolve_roi(img.width, img.height)?;
    let cropped = img.crop(&roi);
    let filtered = median_filter(&cropped, cfg.median_kernel)?;

    let full_roi = Rect::new(0, 0, roi.width, roi.height);
    let threshold = match otsu_threshold(&filtered, &full_roi) {
        Ok(t) => t,
        Err(SegmentationError::DegenerateHistogram) => {
            return Ok(SegmentedFrame {
                mask: BinaryMask::new(img.width, img.height),
                empty_reason: Some(EmptyReason::DegenerateHistogram),
                threshold: None,
            });
        }
        Err(e) => return Err(e),
    };

    // Inclusions are anechoic: accept the split only when the dark class
    // is substantially darker than the bright class.
    let (mut dark_sum, mut dark_n, mut bright_sum, mut bright_n) = (0u64, 0u64, 0u64, 0u64);
    for &v in &filtered.data {
        if v < threshold {
            dark_sum += v as u64;
            dark_n += 1;
        } else {
            bright_sum += v as u64;
            bright_n += 1;
        }
    }
    let dark_mean = dark_sum as f64 / dark_n.max(1) as f64;
    let bright_mean = bright_sum as f64 / bright_n.max(1) as f64;
    if dark_mean > cfg.max_dark_bright_ratio * bright_mean {
        return Ok(SegmentedFrame {
            mask: BinaryMask::new(img.width, img.height),
            empty_reason: Some(EmptyReason::LowContrast),
            threshold: Some(threshold),
        });
    }

    let mut mask = BinaryMask::new(roi.width, roi.height);
    for (i, &v) in filtered.data.iter().enumerate() {
        mask.data[i] = v < threshold;
    }
    mask = fill_holes(&mask);
    mask = close(&mask, cfg.close_kernel);
    mask = open(&mask, cfg.open_kernel);

    // Dark-column trimming: columns with poor acoustic coupling show up
    // as low mean intensity. Means are taken on the raw crop so that
    // dropouts narrower than the median kernel are still caught.
    let column_limit = match cfg.dropout_column_mean_threshold {
        DropoutThreshold::Absolute(v) => v,
        DropoutThreshold::RelativeToRoiMean(f) => {
            let total: u64 = cropped.data.iter().map(|&v| v as u64).sum();
            f * total as f64 / cropped.data.len() as f64
        }
    };
    for x in 0..roi.width {
        let mut sum = 0u64;
        for y in 0..roi.height {
            sum += cropped.get(x, y) as u64;
        }
        if (sum as f64 / roi.height as f64) < column_limit {
            for y in 0..roi.height {
                mask.set(x, y, false);
            }
        }
    }

    let mut full = BinaryMask::new(img.width, img.height);
    for y in 0..roi.height {
        for x in 0..roi.width {
            if mask.get(x, y) {
                full.set(roi.x + x, roi.y + y, true);
            }
        }
    }
    Ok(SegmentedFrame {
        mask: full,
        empty_reason: None,
        threshold: Some(threshold),
    })
}

/// 2D Dice similarity coefficient: `2|X∩Y| / (|X|+|Y|)`, defined as 1.0
/// when both masks are empty.
pub fn dsc_2d(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64, SegmentationError> {
    if pred.width != gt.width || pred.height != gt.height {
        return Err(SegmentationError::InvalidInput(format!(
            "mask dimensions differ: {}x{} vs {}x{}",
            pred.width, pred.height, gt.width, gt.height
        )));
    }
    let mut intersection = 0usize;
    let mut total = 0usize;
    for (&p, &g) in pred.data.iter().zip(&gt.data) {
        intersection += (p && g) as usize;
        total += p as usize + g as usize;
    }
    if total == 0 {
        Ok(1.0)
    } else {
        Ok(2.0 * intersection as f64 / total as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, LogNormal};

    /// Synthetic B-mode-like frame: lognormal speckle background with an
    /// optional dark disc.
    fn synthetic_frame(
        w: usize,
        h: usize,
        disc: Option<(f64, f64, f64)>,
        seed: u64,
    ) -> (GrayImage, BinaryMask) {
        let mut rng = crate::rng::derive_rng(seed, crate::rng::Stream::Render, 0);
        let speckle: LogNormal<f64> = LogNormal::new(0.0, 0.35).unwrap();
        let mut img = GrayImage::new(w, h);
        let mut gt = BinaryMask::new(w, h);
        for y in 0..h {
            for x in 0..w {
                let bg = (150.0 * speckle.sample(&mut rng)).clamp(0.0, 255.0);
                let inc = (20.0 + rng.random_range(-8.0f64..8.0)).clamp(0.0, 255.0);
                let inside = disc
                    .map(|(cx, cy, r)| {
                        let dx = x as f64 - cx;
                        let dy = y as f64 - cy;
                        dx * dx + dy * dy < r * r
                    })
                    .unwrap_or(false);
                img.set(x, y, if inside { inc as u8 } else { bg as u8 });
                gt.set(x, y, inside);
            }
        }
        (img, gt)
    }

    #[test]
    fn dark_disc_is_segmented_accurately() {
        let (img, gt) = synthetic_frame(128, 128, Some((64.0, 64.0, 30.0)), 71);
        let seg = segment_frame(&img, &SegConfig::default()).unwrap();
        assert!(seg.empty_reason.is_none());
        let dsc = dsc_2d(&seg.mask, &gt).unwrap();
        assert!(dsc >= 0.95, "DSC {dsc}");
    }

    #[test]
    fn speckle_only_frame_yields_tiny_mask() {
        for seed in 0..10 {
            let (img, _) = synthetic_frame(128, 128, None, 100 + seed);
            let seg = segment_frame(&img, &SegConfig::default()).unwrap();
            let roi_area = (128 - 32) * (128 - 32);
            assert!(
                (seg.mask.count() as f64) < 0.01 * roi_area as f64,
                "seed {seed}: mask area {}",
                seg.mask.count()
            );
        }
    }

    #[test]
    fn intensity_offset_leaves_mask_unchanged() {
        let (img, _) = synthetic_frame(128, 128, Some((60.0, 70.0, 25.0)), 72);
        let seg0 = segment_frame(&img, &SegConfig::default()).unwrap();
        let mut shifted = img.clone();
        for v in &mut shifted.data {
            *v = v.saturating_add(20);
        }
        let seg1 = segment_frame(&shifted, &SegConfig::default()).unwrap();
        let agreement = dsc_2d(&seg0.mask, &seg1.mask).unwrap();
        assert!(agreement > 0.99, "masks diverged: DSC {agreement}");
    }

    #[test]
    fn dark_columns_are_trimmed() {
        let (mut img, _) = synthetic_frame(128, 128, Some((64.0, 64.0, 30.0)), 73);
        // Simulated coupling loss: three dark columns through the disc.
        for x in 60..63 {
            for y in 0..128 {
                img.set(x, y, 3);
            }
        }
        let seg = segment_frame(&img, &SegConfig::default()).unwrap();
        for x in 60..63 {
            for y in 0..128 {
                assert!(!seg.mask.get(x, y), "column {x} should be excluded");
            }
        }
        // The rest of the disc survives.
        assert!(seg.mask.count() > 1000);
    }

    #[test]
    fn constant_frame_reports_degenerate_histogram() {
        let img = GrayImage::from_data(64, 64, vec![80; 64 * 64]).unwrap();
        let seg = segment_frame(&img, &SegConfig::default()).unwrap();
        assert_eq!(seg.empty_reason, Some(EmptyReason::DegenerateHistogram));
        assert_eq!(seg.mask.count(), 0);
    }

    #[test]
    fn dsc_basics() {
        let mut a = BinaryMask::new(4, 4);
        let mut b = BinaryMask::new(4, 4);
        assert_eq!(dsc_2d(&a, &b).unwrap(), 1.0);
        a.set(0, 0, true);
        a.set(1, 0, true);
        b.set(1, 0, true);
        b.set(2, 0, true);
        assert_eq!(dsc_2d(&a, &b).unwrap(), 0.5);
        let c = BinaryMask::new(3, 3);
        assert!(dsc_2d(&a, &c).is_err());
    }
}
