//! Exact-arithmetic reference for the integer pipeline.
//!
//! Everything here is computed with rationals straight from the textbook
//! definitions (probability, CDF, unrounded transfer function, mean
//! brightness), so it shares no arithmetic shortcuts with `equalize` or
//! `smbe`. The integer pipeline is checked against it level by level.

pub mod corpus;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::equalize::{he_map, mmbebhe, apply_map, PixelMap};
use crate::error::Result;
use crate::image::{GrayImage, Histogram, GRAY_LEVELS};
use crate::smbe::{calculate_smbe, find_threshold, smbe_closed_form};

pub type Rational = Ratio<i128>;

/// Unrounded transfer function values per input level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    pub entries: Vec<Rational>,
    pub threshold: u8,
}

fn int(v: impl Into<i128>) -> Rational {
    Rational::from_integer(v.into())
}

fn counts(image: &GrayImage) -> [i128; GRAY_LEVELS] {
    let mut c = [0i128; GRAY_LEVELS];
    for &p in image.pixels() {
        c[p as usize] += 1;
    }
    c
}

/// Mean gray value of `image`.
pub fn mean(image: &GrayImage) -> Rational {
    Rational::new(image.pixel_sum() as i128, image.len() as i128)
}

/// Expected output mean minus input mean for a split at `gamma`, with each
/// output segment mean approximated by the midpoint of its range.
pub fn brightness_error(counts: &[i128; GRAY_LEVELS], gamma: u8) -> Rational {
    let n: i128 = counts.iter().sum();
    let weighted: i128 = counts.iter().enumerate().map(|(k, &c)| k as i128 * c).sum();
    let input_mean = Rational::new(weighted, n);
    let lower_prob = Rational::new(counts[..=gamma as usize].iter().sum(), n);
    let lower_mid = Rational::new(gamma as i128, 2);
    let upper_mid = Rational::new(gamma as i128 + 1 + 255, 2);
    let output_mean = lower_mid * lower_prob + upper_mid * (int(1) - lower_prob);
    output_mean - input_mean
}

/// Exact version of the whole pipeline: threshold by minimal absolute
/// brightness error over present levels (first wins on ties), then the
/// unrounded per-segment transfer function `lo + (hi - lo) * c(k)`.
pub fn reference_mmbebhe(image: &GrayImage) -> RationalMap {
    let c = counts(image);
    let mut best: Option<(u8, Rational)> = None;
    for gamma in 0..=255u8 {
        if c[gamma as usize] == 0 {
            continue;
        }
        let err = brightness_error(&c, gamma).abs();
        if best.as_ref().is_none_or(|(_, b)| err < *b) {
            best = Some((gamma, err));
        }
    }
    let threshold = best.expect("image has at least one pixel").0;
    let mut entries: Vec<Rational> = (0..GRAY_LEVELS).map(|k| int(k as i64)).collect();
    reference_segment(&c, 0, threshold, &mut entries);
    if threshold < 255 {
        reference_segment(&c, threshold + 1, 255, &mut entries);
    }
    RationalMap { entries, threshold }
}

/// Exact full-range equalization.
pub fn reference_he(image: &GrayImage) -> RationalMap {
    let c = counts(image);
    let mut entries: Vec<Rational> = (0..GRAY_LEVELS).map(|k| int(k as i64)).collect();
    reference_segment(&c, 0, 255, &mut entries);
    RationalMap {
        entries,
        threshold: 255,
    }
}

fn reference_segment(c: &[i128; GRAY_LEVELS], lo: u8, hi: u8, out: &mut [Rational]) {
    let n: i128 = c[lo as usize..=hi as usize].iter().sum();
    if n == 0 {
        return;
    }
    // probability density, then its running sum
    let mut cdf = Rational::zero();
    for k in lo..=hi {
        cdf += Rational::new(c[k as usize], n);
        out[k as usize] = int(lo as i64) + int((hi - lo) as i64) * cdf;
    }
}

/// Rounds up exactly when the fractional part exceeds one half.
pub fn remainder_rule(x: &Rational) -> u8 {
    let floor = x.floor();
    let bump = (x - floor) > Rational::new(1, 2);
    (floor.to_integer() + bump as i128) as u8
}

/// Conventional round-half-up.
pub fn round_nearest(x: &Rational) -> u8 {
    (x + Rational::new(1, 2)).floor().to_integer() as u8
}

/// Independent threshold search: closed-form SMBE at every present level.
pub fn brute_force_threshold(hist: &Histogram) -> u8 {
    hist.present_levels()
        .map(|g| (smbe_closed_form(hist, g).abs(), g))
        .min()
        .expect("histogram has a present level")
        .1
}

/// Absolute mean brightness error between two images of equal size.
pub fn ambe(a: &GrayImage, b: &GrayImage) -> Result<Rational> {
    a.same_dimensions(b)?;
    Ok((mean(a) - mean(b)).abs())
}

/// A disagreement between the integer pipeline and the exact reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    Threshold { integer: u8, reference: u8 },
    /// Integer map entry differs from the remainder rule applied exactly.
    RoundingRule { level: u8, integer: u8, reference: u8 },
    /// Integer map entry is more than one level from round-to-nearest.
    Distance { level: u8, integer: u8, nearest: u8 },
}

impl Mismatch {
    pub fn level(&self) -> u8 {
        match *self {
            Mismatch::Threshold { integer, .. } => integer,
            Mismatch::RoundingRule { level, .. } | Mismatch::Distance { level, .. } => level,
        }
    }
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mismatch::Threshold { integer, reference } => write!(
                f,
                "threshold mismatch: integer {integer}, reference {reference}"
            ),
            Mismatch::RoundingRule {
                level,
                integer,
                reference,
            } => write!(
                f,
                "level {level}: integer map {integer}, exact remainder rule {reference}"
            ),
            Mismatch::Distance {
                level,
                integer,
                nearest,
            } => write!(
                f,
                "level {level}: integer map {integer} is more than 1 from {nearest}"
            ),
        }
    }
}

/// Compares an integer map with an exact one at every level.
pub fn compare_maps(integer: &PixelMap, exact: &RationalMap) -> std::result::Result<(), Mismatch> {
    if integer.threshold() != exact.threshold {
        return Err(Mismatch::Threshold {
            integer: integer.threshold(),
            reference: exact.threshold,
        });
    }
    for level in 0..=255u8 {
        let x = &exact.entries[level as usize];
        let got = integer.get(level);
        let rule = remainder_rule(x);
        if got != rule {
            return Err(Mismatch::RoundingRule {
                level,
                integer: got,
                reference: rule,
            });
        }
        let nearest = round_nearest(x);
        if got.abs_diff(nearest) > 1 {
            return Err(Mismatch::Distance {
                level,
                integer: got,
                nearest,
            });
        }
    }
    Ok(())
}

/// Full integer-vs-exact check of one image: threshold, MMBEBHE map and
/// plain HE map.
pub fn verify(image: &GrayImage) -> Result<std::result::Result<(), Mismatch>> {
    let hist = crate::image::generate_hist(image)?;
    let integer_t = find_threshold(&calculate_smbe(&hist)).value;
    let brute = brute_force_threshold(&hist);
    if integer_t != brute {
        return Ok(Err(Mismatch::Threshold {
            integer: integer_t,
            reference: brute,
        }));
    }
    let map = mmbebhe(image)?;
    if let Err(m) = compare_maps(&map, &reference_mmbebhe(image)) {
        return Ok(Err(m));
    }
    Ok(compare_maps(&he_map(image)?, &reference_he(image)))
}

/// Output mean and AMBE of one enhancement method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodSummary {
    pub method: &'static str,
    pub output_mean: Rational,
    pub ambe: Rational,
}

/// HE, MMBEBHE and identity applied to `image`, each with its AMBE.
pub fn compare_methods(image: &GrayImage) -> Result<Vec<MethodSummary>> {
    let maps = [
        ("HE", he_map(image)?),
        ("MMBEBHE", mmbebhe(image)?),
        ("identity", PixelMap::identity()),
    ];
    maps.into_iter()
        .map(|(method, map)| {
            let out = apply_map(image, &map);
            Ok(MethodSummary {
                method,
                output_mean: mean(&out),
                ambe: ambe(image, &out)?,
            })
        })
        .collect()
}

/// Renders `x` in decimal, rounded half-up to at most `digits` fractional
/// digits with trailing zeros removed.
pub fn format_decimal(x: &Rational, digits: u32) -> String {
    let scale = 10i128.pow(digits);
    let negative = x.is_negative();
    let scaled = (x.abs() * int(scale) + Rational::new(1, 2)).floor().to_integer();
    let (whole, frac) = (scaled / scale, scaled % scale);
    let sign = if negative && scaled != 0 { "-" } else { "" };
    if frac == 0 {
        return format!("{sign}{whole}");
    }
    let frac = format!("{:0width$}", frac, width = digits as usize);
    format!("{sign}{whole}.{}", frac.trim_end_matches('0'))
}
