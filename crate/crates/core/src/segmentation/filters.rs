//! Median filtering and Otsu thresholding.

use super::image::{GrayImage, Rect};
use super::SegmentationError;

/// k×k median filter with edge replication.
///
/// Sliding two-level histogram (Huang): O(k) updates per pixel plus an
/// O(32) median scan, fast enough for real-time frame rates.
pub fn median_filter(img: &GrayImage, k: usize) -> Result<GrayImage, SegmentationError> {
    if k == 0 || k % 2 == 0 {
        return Err(SegmentationError::InvalidInput(format!(
            "median kernel must be odd and ≥ 1, got {k}"
        )));
    }
    if k == 1 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width, img.height);
    let r = (k / 2) as isize;
    // 0-based rank of the median among k² samples.
    let rank = (k * k / 2) as u32;
    let mut out = GrayImage::new(w, h);

    let clamp_x = |x: isize| x.clamp(0, w as isize - 1) as usize;
    let clamp_y = |y: isize| y.clamp(0, h as isize - 1) as usize;

    let mut fine = [0u32; 256];
    let mut coarse = [0u32; 16];

    for y in 0..h as isize {
        fine.fill(0);
        coarse.fill(0);
        // Initial window centred on x = 0.
        for dx in -r..=r {
            let sx = clamp_x(dx);
            for dy in -r..=r {
                let v = img.get(sx, clamp_y(y + dy)) as usize;
                fine[v] += 1;
                coarse[v >> 4] += 1;
            }
        }
        for x in 0..w as isize {
            // Median via coarse bucket scan then fine scan.
            let mut acc = 0u32;
            let mut bucket = 0usize;
            while acc + coarse[bucket] <= rank {
                acc += coarse[bucket];
                bucket += 1;
            }
            let mut v = bucket << 4;
            while acc + fine[v] <= rank {
                acc += fine[v];
                v += 1;
            }
            out.set(x as usize, y as usize, v as u8);

            if x + 1 < w as isize {
                let leaving = clamp_x(x - r);
                let entering = clamp_x(x + r + 1);
                for dy in -r..=r {
                    let sy = clamp_y(y + dy);
                    let lv = img.get(leaving, sy) as usize;
                    fine[lv] -= 1;
                    coarse[lv >> 4] -= 1;
                    let ev = img.get(entering, sy) as usize;
                    fine[ev] += 1;
                    coarse[ev >> 4] += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Otsu's threshold over the ROI histogram.
///
/// Returns the cut value `t` in 1..=255 such that pixels `< t` form the
/// dark class; `t` maximizes the between-class variance. The comparison is
/// done in exact integer arithmetic, with ties broken toward the lowest
/// threshold.
pub fn otsu_threshold(img: &GrayImage, roi: &Rect) -> Result<u8, SegmentationError> {
    if !roi.fits_in(img.width, img.height) {
        return Err(SegmentationError::InvalidInput(format!(
            "ROI {roi:?} does not fit a {}x{} image",
            img.width, img.height
        )));
    }
    let mut hist = [0u64; 256];
    for y in roi.y..roi.y + roi.height {
        for x in roi.x..roi.x + roi.width {
            hist[img.get(x, y) as usize] += 1;
        }
    }
    otsu_from_histogram(&hist)
}

pub(crate) fn otsu_from_histogram(hist: &[u64; 256]) -> Result<u8, SegmentationError> {
    let total: u64 = hist.iter().sum();
    let total_moment: u64 = hist.iter().enumerate().map(|(v, &c)| v as u64 * c).sum();

    // Between-class variance at cut t is (m0·w1 − m1·w0)² / (w0·w1); the
    // best cut is found by exact cross-multiplied fraction comparison.
    let mut best: Option<(u8, u128, u128)> = None; // (t, numerator², denominator)
    let mut w0: u64 = 0;
    let mut m0: u64 = 0;
    for t in 1..=255u32 {
        let below = (t - 1) as usize;
        w0 += hist[below];
        m0 += below as u64 * hist[below];
        let w1 = total - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let m1 = total_moment - m0;
        let diff = (m0 as i128) * (w1 as i128) - (m1 as i128) * (w0 as i128);
        let num = (diff * diff) as u128;
        let den = (w0 as u128) * (w1 as u128);
        let better = match &best {
            None => true,
            Some((_, bn, bd)) => num * bd > bn * den,
        };
        if better {
            best = Some((t as u8, num, den));
        }
    }
    match best {
        Some((t, num, _)) if num > 0 => Ok(t),
        _ => Err(SegmentationError::DegenerateHistogram),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_image(w: usize, h: usize, seed: u64) -> GrayImage {
        let mut rng = crate::rng::derive_rng(seed, crate::rng::Stream::Render, 0);
        let data = (0..w * h).map(|_| rng.random::<u8>()).collect();
        GrayImage::from_data(w, h, data).unwrap()
    }

    /// Brute-force median with edge replication: sort the window.
    fn naive_median(img: &GrayImage, k: usize) -> GrayImage {
        let r = (k / 2) as isize;
        let mut out = GrayImage::new(img.width, img.height);
        for y in 0..img.height as isize {
            for x in 0..img.width as isize {
                let mut window = Vec::with_capacity(k * k);
                for dy in -r..=r {
                    for dx in -r..=r {
                        let sx = (x + dx).clamp(0, img.width as isize - 1) as usize;
                        let sy = (y + dy).clamp(0, img.height as isize - 1) as usize;
                        window.push(img.get(sx, sy));
                    }
                }
                window.sort_unstable();
                out.set(x as usize, y as usize, window[window.len() / 2]);
            }
        }
        out
    }

    #[test]
    fn kernel_one_is_identity() {
        let img = random_image(9, 7, 31);
        assert_eq!(median_filter(&img, 1).unwrap(), img);
    }

    #[test]
    fn even_kernel_is_invalid() {
        let img = random_image(4, 4, 32);
        assert!(median_filter(&img, 4).is_err());
    }

    #[test]
    fn salt_pixel_is_removed() {
        let mut img = GrayImage::new(7, 7);
        img.data.fill(10);
        img.set(3, 3, 255);
        let filtered = median_filter(&img, 3).unwrap();
        assert!(filtered.data.iter().all(|&v| v == 10));
    }

    #[test]
    fn matches_naive_sort_oracle() {
        for seed in 0..4 {
            let img = random_image(16, 16, 40 + seed);
            for k in [3, 5, 7] {
                assert_eq!(
                    median_filter(&img, k).unwrap(),
                    naive_median(&img, k),
                    "k={k} seed={seed}"
                );
            }
        }
    }

    /// Independent Otsu oracle: recompute the class statistics from
    /// scratch for every candidate cut.
    fn naive_otsu(hist: &[u64; 256]) -> Option<u8> {
        let mut best: Option<(u8, u128, u128)> = None;
        for t in 1..=255usize {
            let w0: u64 = hist[..t].iter().sum();
            let w1: u64 = hist[t..].iter().sum();
            if w0 == 0 || w1 == 0 {
                continue;
            }
            let m0: u64 = hist[..t].iter().enumerate().map(|(v, &c)| v as u64 * c).sum();
            let m1: u64 = hist[t..]
                .iter()
                .enumerate()
                .map(|(v, &c)| (v + t) as u64 * c)
                .sum();
            let diff = (m0 as i128) * (w1 as i128) - (m1 as i128) * (w0 as i128);
            let num = (diff * diff) as u128;
            let den = (w0 as u128) * (w1 as u128);
            let better = match &best {
                None => num > 0,
                Some((_, bn, bd)) => num * bd > bn * den,
            };
            if better && num > 0 {
                best = Some((t as u8, num, den));
            }
        }
        best.map(|(t, _, _)| t)
    }

    #[test]
    fn bimodal_image_is_separated_exactly() {
        let mut data = vec![20u8; 60];
        data.extend(vec![150u8; 40]);
        let img = GrayImage::from_data(10, 10, data).unwrap();
        let t = otsu_threshold(&img, &Rect::new(0, 0, 10, 10)).unwrap();
        assert!(t > 20 && t < 150, "threshold {t} not in (20, 150)");
        // The cut separates the two populations exactly.
        assert!(img.data.iter().all(|&v| (v < t) == (v == 20)));
    }

    #[test]
    fn matches_exhaustive_search_oracle() {
        for seed in 0..20 {
            let img = random_image(24, 24, 60 + seed);
            let mut hist = [0u64; 256];
            for &v in &img.data {
                hist[v as usize] += 1;
            }
            let got = otsu_threshold(&img, &Rect::new(0, 0, 24, 24)).unwrap();
            assert_eq!(Some(got), naive_otsu(&hist), "seed {seed}");
        }
    }

    #[test]
    fn constant_image_is_degenerate() {
        let img = GrayImage::from_data(8, 8, vec![42; 64]).unwrap();
        assert!(matches!(
            otsu_threshold(&img, &Rect::new(0, 0, 8, 8)),
            Err(SegmentationError::DegenerateHistogram)
        ));
    }
}
