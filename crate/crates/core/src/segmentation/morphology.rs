//! Binary morphology with square structuring elements, plus hole filling.
//!
//! Pixels outside the mask are treated as background for both dilation
//! and erosion (zero padding).

use super::image::BinaryMask;

/// Sliding-window boolean reduction along rows then columns (separable
/// square kernel). `require_all` = erosion semantics, otherwise dilation.
fn separable_pass(mask: &BinaryMask, k: usize, require_all: bool) -> BinaryMask {
    let r = k / 2;
    let (w, h) = (mask.width, mask.height);
    let mut horiz = BinaryMask::new(w, h);
    for y in 0..h {
        let row = &mask.data[y * w..(y + 1) * w];
        let mut count = 0usize;
        // Window [x-r, x+r] clipped to the row; outside counts as false.
        for x in 0..w.min(r + 1) {
            count += row[x] as usize;
        }
        for x in 0..w {
            let v = if require_all {
                // Zero padding: a window touching the border is never
                // all-true at the full kernel width.
                x >= r && x + r < w && count == k
            } else {
                count > 0
            };
            horiz.set(x, y, v);
            // Slide.
            if x + r + 1 < w {
                count += row[x + r + 1] as usize;
            }
            if x >= r {
                count -= row[x - r] as usize;
            }
        }
    }
    let mut out = BinaryMask::new(w, h);
    for x in 0..w {
        let mut count = 0usize;
        for y in 0..h.min(r + 1) {
            count += horiz.get(x, y) as usize;
        }
        for y in 0..h {
            let v = if require_all {
                y >= r && y + r < h && count == k
            } else {
                count > 0
            };
            out.set(x, y, v);
            if y + r + 1 < h {
                count += horiz.get(x, y + r + 1) as usize;
            }
            if y >= r {
                count -= horiz.get(x, y - r) as usize;
            }
        }
    }
    out
}

pub fn dilate(mask: &BinaryMask, k: usize) -> BinaryMask {
    if k <= 1 {
        return mask.clone();
    }
    separable_pass(mask, k, false)
}

pub fn erode(mask: &BinaryMask, k: usize) -> BinaryMask {
    if k <= 1 {
        return mask.clone();
    }
    separable_pass(mask, k, true)
}

/// Morphological closing: dilation then erosion.
pub fn close(mask: &BinaryMask, k: usize) -> BinaryMask {
    erode(&dilate(mask, k), k)
}

/// Morphological opening: erosion then dilation.
pub fn open(mask: &BinaryMask, k: usize) -> BinaryMask {
    dilate(&erode(mask, k), k)
}

/// Fills fully enclosed background holes: background connected to the
/// image border (4-connectivity) stays background, everything else
/// becomes foreground.
pub fn fill_holes(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width, mask.height);
    let mut reachable = vec![false; w * h];
    let mut stack = Vec::new();
    let mut push = |x: usize, y: usize, reachable: &mut Vec<bool>, stack: &mut Vec<(usize, usize)>| {
        let idx = y * w + x;
        if !reachable[idx] && !mask.data[idx] {
            reachable[idx] = true;
            stack.push((x, y));
        }
    };
    for x in 0..w {
        push(x, 0, &mut reachable, &mut stack);
        push(x, h - 1, &mut reachable, &mut stack);
    }
    for y in 0..h {
        push(0, y, &mut reachable, &mut stack);
        push(w - 1, y, &mut reachable, &mut stack);
    }
    while let Some((x, y)) = stack.pop() {
        if x > 0 {
            push(x - 1, y, &mut reachable, &mut stack);
        }
        if x + 1 < w {
            push(x + 1, y, &mut reachable, &mut stack);
        }
        if y > 0 {
            push(x, y - 1, &mut reachable, &mut stack);
        }
        if y + 1 < h {
            push(x, y + 1, &mut reachable, &mut stack);
        }
    }
    let mut out = mask.clone();
    for (idx, &r) in reachable.iter().enumerate() {
        if !r {
            out.data[idx] = true;
        }
    }
    out
}
