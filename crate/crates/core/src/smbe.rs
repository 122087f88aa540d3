//! Scaled mean brightness error and threshold selection.
//!
//! For a split at gray level `g`, bi-histogram equalization maps the lower
//! segment onto `[0, g]` and the upper onto `[g + 1, 255]`. Approximating
//! each output segment mean by its midpoint gives an output mean whose
//! error against the input mean, scaled by `2n`, is an integer:
//!
//! ```text
//! smbe(0) = L * (n - freq[0]) - 2 * S
//! smbe(g) = smbe(g - 1) + (n - L * freq[g])
//! ```
//!
//! where `n` is the pixel count, `S` the pixel sum and `L = 256`.

use crate::image::{Histogram, GRAY_LEVELS};

/// Marks the entries of gray levels absent from the image.
pub const SENTINEL: i32 = 0x7fff_ffff;

const L: i64 = GRAY_LEVELS as i64;

/// One SMBE value per gray level, [`SENTINEL`] for absent levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmbeTable {
    entries: [i32; GRAY_LEVELS],
}

impl SmbeTable {
    /// Wraps raw entries. At least one entry must differ from [`SENTINEL`].
    pub fn from_entries(entries: [i32; GRAY_LEVELS]) -> Option<Self> {
        entries
            .iter()
            .any(|&e| e != SENTINEL)
            .then_some(Self { entries })
    }

    pub fn entries(&self) -> &[i32; GRAY_LEVELS] {
        &self.entries
    }

    pub fn get(&self, level: u8) -> i32 {
        self.entries[level as usize]
    }
}

/// The chosen split point and its SMBE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    pub value: u8,
    pub smbe: i32,
}

/// Runs the SMBE recursion serially over all 256 levels.
///
/// The accumulator advances at every level, present or not; only the stored
/// entry is replaced by the sentinel for absent levels.
pub fn calculate_smbe(hist: &Histogram) -> SmbeTable {
    let n = hist.total() as i64;
    let sum = hist.pixel_sum() as i64;
    let freq = hist.freq();

    let mut entries = [SENTINEL; GRAY_LEVELS];
    let mut prev = L * (n - freq[0] as i64) - 2 * sum;
    for (level, entry) in entries.iter_mut().enumerate() {
        if level > 0 {
            prev += n - L * freq[level] as i64;
        }
        if freq[level] > 0 {
            *entry = to_register(prev);
        }
    }
    SmbeTable { entries }
}

fn to_register(value: i64) -> i32 {
    // MAX_PIXELS keeps every magnitude well inside i32 and off the sentinel.
    debug_assert!(value.unsigned_abs() < SENTINEL as u64);
    i32::try_from(value).expect("SMBE exceeds 32-bit register; histogram bypassed MAX_PIXELS")
}

/// `n * (L + g) - L * f_c(g) - 2 * S`, the unrolled recursion, defined for
/// every level whether present or not.
pub fn smbe_closed_form(hist: &Histogram, gamma: u8) -> i64 {
    let n = hist.total() as i64;
    let fc = hist.cumulative(gamma) as i64;
    n * (L + gamma as i64) - L * fc - 2 * hist.pixel_sum() as i64
}

/// Scans levels in ascending order for the smallest absolute SMBE.
///
/// Ties keep the earlier level because replacement needs a strictly smaller
/// magnitude. Sentinel entries never displace the initial best.
pub fn find_threshold(table: &SmbeTable) -> Threshold {
    let mut best = SENTINEL;
    let mut found = Threshold {
        value: 0,
        smbe: SENTINEL,
    };
    for (level, &value) in table.entries.iter().enumerate() {
        let replace = (value < 0 && -value < best) || (value >= 0 && value < best);
        if replace {
            best = value.abs();
            found = Threshold {
                value: level as u8,
                smbe: value,
            };
        }
    }
    debug_assert_ne!(found.smbe, SENTINEL, "table without candidates");
    found
}
