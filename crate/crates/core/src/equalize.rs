//! Integer-only histogram equalization: bounded cumulative histograms, the
//! remainder-rounded map, the bi-histogram driver and map application.

use crate::error::{Error, Result};
use crate::image::{generate_hist, GrayImage, Histogram, GRAY_LEVELS};
use crate::smbe::{calculate_smbe, find_threshold};

/// Cumulative frequencies local to the segment `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeSegment {
    lo: u8,
    hi: u8,
    cumu: Vec<u32>,
}

impl CumulativeSegment {
    pub fn lo(&self) -> u8 {
        self.lo
    }

    pub fn hi(&self) -> u8 {
        self.hi
    }

    /// Cumulative counts indexed by `level - lo`.
    pub fn cumu(&self) -> &[u32] {
        &self.cumu
    }

    /// Pixels falling inside the segment.
    pub fn count(&self) -> u32 {
        *self.cumu.last().expect("segment is never empty")
    }

    pub fn at(&self, level: u8) -> u32 {
        self.cumu[(level - self.lo) as usize]
    }
}

/// Accumulates `freq` over `[lo, hi]`, starting from zero at `lo`.
pub fn gen_cumu_hist(hist: &Histogram, lo: u8, hi: u8) -> Result<CumulativeSegment> {
    if lo > hi {
        return Err(Error::InvalidBounds { lo, hi });
    }
    let mut prev = 0u32;
    let cumu = hist.freq()[lo as usize..=hi as usize]
        .iter()
        .map(|&f| {
            prev += f;
            prev
        })
        .collect();
    Ok(CumulativeSegment { lo, hi, cumu })
}

/// Map entries for the levels `lo..=hi` of one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentMap {
    pub lo: u8,
    pub hi: u8,
    pub values: Vec<u8>,
}

/// Integer equalization of one segment onto its own range.
///
/// `map[k] = (count * lo + (hi - lo) * cumu[k]) / count`, bumped by one when
/// the remainder exceeds `count >> 1`. An empty segment maps to itself.
pub fn create_map(seg: &CumulativeSegment) -> SegmentMap {
    let (lo, hi) = (seg.lo as u64, seg.hi as u64);
    let count = seg.count() as u64;
    let values = if count == 0 {
        (seg.lo..=seg.hi).collect()
    } else {
        let half = count >> 1;
        seg.cumu
            .iter()
            .map(|&c| {
                let numerator = count * lo + (hi - lo) * c as u64;
                let mut v = numerator / count;
                if numerator % count > half {
                    v += 1;
                }
                v as u8
            })
            .collect()
    };
    SegmentMap {
        lo: seg.lo,
        hi: seg.hi,
        values,
    }
}

/// A total gray-level lookup table together with the split that built it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PixelMap {
    map: [u8; GRAY_LEVELS],
    threshold: u8,
}

impl PixelMap {
    pub fn new(map: [u8; GRAY_LEVELS], threshold: u8) -> Self {
        Self { map, threshold }
    }

    pub fn identity() -> Self {
        let mut map = [0u8; GRAY_LEVELS];
        for (k, m) in map.iter_mut().enumerate() {
            *m = k as u8;
        }
        Self {
            map,
            threshold: 255,
        }
    }

    pub fn entries(&self) -> &[u8; GRAY_LEVELS] {
        &self.map
    }

    pub fn get(&self, level: u8) -> u8 {
        self.map[level as usize]
    }

    pub fn threshold(&self) -> u8 {
        self.threshold
    }

    fn merge(&mut self, seg: &SegmentMap) {
        self.map[seg.lo as usize..=seg.hi as usize].copy_from_slice(&seg.values);
    }
}

/// Equalizes `[0, threshold]` and `[threshold + 1, 255]` independently.
/// The upper half is skipped when the threshold is 255.
pub fn bi_histogram_map(hist: &Histogram, threshold: u8) -> PixelMap {
    let mut out = PixelMap::identity();
    out.threshold = threshold;
    let lower = gen_cumu_hist(hist, 0, threshold).expect("0 <= threshold");
    out.merge(&create_map(&lower));
    if threshold < 255 {
        let upper = gen_cumu_hist(hist, threshold + 1, 255).expect("threshold < 255");
        out.merge(&create_map(&upper));
    }
    out
}

/// Minimum mean brightness error bi-histogram equalization map of `image`.
pub fn mmbebhe(image: &GrayImage) -> Result<PixelMap> {
    let hist = generate_hist(image)?;
    let threshold = find_threshold(&calculate_smbe(&hist));
    Ok(bi_histogram_map(&hist, threshold.value))
}

/// Plain full-range histogram equalization, for comparison.
pub fn he_map(image: &GrayImage) -> Result<PixelMap> {
    let hist = generate_hist(image)?;
    Ok(bi_histogram_map(&hist, 255))
}

/// Replaces every pixel by its map entry.
pub fn apply_map(image: &GrayImage, map: &PixelMap) -> GrayImage {
    let pixels = image.pixels().iter().map(|&p| map.get(p)).collect();
    GrayImage::new(image.width(), image.height(), pixels).expect("dimensions unchanged")
}
