//! 8-bit grayscale images and binary masks, with PGM/PBM persistence.

use super::SegmentationError;
use std::io::{BufRead, Write};

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Self {
        GrayImage {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<u8>) -> Result<Self, SegmentationError> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(SegmentationError::InvalidInput(format!(
                "image dimensions {width}x{height} do not match {} pixels",
                data.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn crop(&self, roi: &Rect) -> GrayImage {
        let mut out = GrayImage::new(roi.width, roi.height);
        for y in 0..roi.height {
            let src = (roi.y + y) * self.width + roi.x;
            let dst = y * roi.width;
            out.data[dst..dst + roi.width].copy_from_slice(&self.data[src..src + roi.width]);
        }
        out
    }

    /// Binary PGM (P5, maxval 255).
    pub fn write_pgm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.data)
    }

    pub fn read_pgm<R: BufRead>(mut r: R) -> Result<Self, SegmentationError> {
        let (magic, dims) = read_netpbm_header(&mut r)?;
        if magic != "P5" {
            return Err(SegmentationError::InvalidInput(format!(
                "expected P5 PGM, got {magic}"
            )));
        }
        let [width, height, maxval] = dims;
        if maxval != 255 {
            return Err(SegmentationError::InvalidInput(format!(
                "unsupported PGM maxval {maxval}"
            )));
        }
        let mut data = vec![0u8; width * height];
        r.read_exact(&mut data)?;
        GrayImage::from_data(width, height, data)
    }
}

/// Row-major binary mask; `true` marks foreground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        BinaryMask {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Binary PBM (P4). Foreground pixels are written as 1 bits.
    pub fn write_pbm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "P4\n{} {}\n", self.width, self.height)?;
        let row_bytes = self.width.div_ceil(8);
        let mut row = vec![0u8; row_bytes];
        for y in 0..self.height {
            row.fill(0);
            for x in 0..self.width {
                if self.get(x, y) {
                    row[x / 8] |= 0x80 >> (x % 8);
                }
            }
            w.write_all(&row)?;
        }
        Ok(())
    }

    pub fn read_pbm<R: BufRead>(mut r: R) -> Result<Self, SegmentationError> {
        let (magic, dims) = read_netpbm_header_n::<2, _>(&mut r)?;
        if magic != "P4" {
            return Err(SegmentationError::InvalidInput(format!(
                "expected P4 PBM, got {magic}"
            )));
        }
        let [width, height] = dims;
        let row_bytes = width.div_ceil(8);
        let mut mask = BinaryMask::new(width, height);
        let mut row = vec![0u8; row_bytes];
        for y in 0..height {
            r.read_exact(&mut row)?;
            for x in 0..width {
                if row[x / 8] & (0x80 >> (x % 8)) != 0 {
                    mask.set(x, y, true);
                }
            }
        }
        Ok(mask)
    }
}

/// Rectangle in pixel coordinates (x, y = top-left corner).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Rect {
            x,
            y,
            width,
            height,
        }
    }

    pub fn fits_in(&self, width: usize, height: usize) -> bool {
        self.width > 0
            && self.height > 0
            && self.x + self.width <= width
            && self.y + self.height <= height
    }
}

fn read_netpbm_header<R: BufRead>(r: &mut R) -> Result<(String, [usize; 3]), SegmentationError> {
    let (magic, v) = read_netpbm_header_n::<3, _>(r)?;
    Ok((magic, v))
}

/// Reads a netpbm magic token plus N whitespace-separated integers,
/// tolerating `#` comments, then exactly one whitespace byte before data.
fn read_netpbm_header_n<const N: usize, R: BufRead>(
    r: &mut R,
) -> Result<(String, [usize; N]), SegmentationError> {
    let mut magic = [0u8; 2];
    r.read_exact(&mut magic)?;
    let magic = String::from_utf8_lossy(&magic).to_string();
    let mut values = [0usize; N];
    let mut filled = 0;
    while filled < N {
        let token = next_token(r)?;
        values[filled] = token
            .parse()
            .map_err(|e| SegmentationError::InvalidInput(format!("bad header value: {e}")))?;
        filled += 1;
    }
    Ok((magic, values))
}

fn next_token<R: BufRead>(r: &mut R) -> Result<String, SegmentationError> {
    let mut token = String::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte)?;
        let c = byte[0] as char;
        if c == '#' {
            // Comment runs to end of line.
            loop {
                r.read_exact(&mut byte)?;
                if byte[0] == b'\n' {
                    break;
                }
            }
            continue;
        }
        if c.is_ascii_whitespace() {
            if token.is_empty() {
                continue;
            }
            return Ok(token);
        }
        token.push(c);
    }
}
