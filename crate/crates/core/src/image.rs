//! Gray images and their frequency histograms.

use crate::error::{Error, Result};

/// Number of representable gray levels (8-bit).
pub const GRAY_LEVELS: usize = 256;

/// Largest image the integer pipeline accepts.
///
/// Every SMBE magnitude is below `1022 * n`, so with `n <= MAX_PIXELS` the
/// table fits a signed 32-bit register without touching the sentinel.
pub const MAX_PIXELS: u32 = 2_500_000;

/// An 8-bit grayscale raster in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        let expected = width as u64 * height as u64;
        if width == 0 || height == 0 || expected != pixels.len() as u64 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// A single-row image holding `pixels`.
    pub fn from_row(pixels: Vec<u8>) -> Result<Self> {
        let width = u32::try_from(pixels.len()).map_err(|_| Error::InvalidDimensions {
            width: u32::MAX,
            height: 1,
            len: pixels.len(),
        })?;
        Self::new(width, 1, pixels)
    }

    /// An image where every pixel is `value`.
    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn pixel_sum(&self) -> u64 {
        self.pixels.iter().map(|&p| p as u64).sum()
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// Frequency histogram of an image: the per-level counts, the pixel count
/// and the sum of all pixel values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    freq: [u32; GRAY_LEVELS],
    total: u32,
    pixel_sum: u64,
}

impl Histogram {
    /// Builds a histogram directly from per-level counts.
    pub fn from_freq(freq: [u32; GRAY_LEVELS]) -> Result<Self> {
        let total: u64 = freq.iter().map(|&c| c as u64).sum();
        if total > MAX_PIXELS as u64 {
            return Err(Error::ImageTooLarge {
                pixels: total,
                max: MAX_PIXELS as u64,
            });
        }
        if total == 0 {
            return Err(Error::InvalidDimensions {
                width: 0,
                height: 0,
                len: 0,
            });
        }
        let pixel_sum = freq
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u64 * c as u64)
            .sum();
        Ok(Self {
            freq,
            total: total as u32,
            pixel_sum,
        })
    }

    pub fn freq(&self) -> &[u32; GRAY_LEVELS] {
        &self.freq
    }

    pub fn count(&self, level: u8) -> u32 {
        self.freq[level as usize]
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn pixel_sum(&self) -> u64 {
        self.pixel_sum
    }

    pub fn is_present(&self, level: u8) -> bool {
        self.freq[level as usize] > 0
    }

    /// Cumulative frequency over the whole range, `sum(freq[0..=level])`.
    pub fn cumulative(&self, level: u8) -> u32 {
        self.freq[..=level as usize].iter().sum()
    }

    /// Gray levels that occur at least once, ascending.
    pub fn present_levels(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=255u8).filter(move |&k| self.is_present(k))
    }
}

/// Counts every pixel of `image`, one pixel at a time, keeping the running
/// pixel sum alongside the per-level counters.
pub fn generate_hist(image: &GrayImage) -> Result<Histogram> {
    let n = image.len() as u64;
    if n > MAX_PIXELS as u64 {
        return Err(Error::ImageTooLarge {
            pixels: n,
            max: MAX_PIXELS as u64,
        });
    }
    let mut freq = [0u32; GRAY_LEVELS];
    let mut pixel_sum = 0u64;
    for &p in image.pixels() {
        freq[p as usize] += 1;
        pixel_sum += p as u64;
    }
    Ok(Histogram {
        freq,
        total: n as u32,
        pixel_sum,
    })
}
