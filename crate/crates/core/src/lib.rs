//! Brightness-preserving contrast enhancement in integer arithmetic.
//!
//! The pipeline histograms an 8-bit image, picks the split level whose
//! bi-histogram equalization best preserves mean brightness, and equalizes
//! each half onto its own gray range using integer division with remainder
//! rounding. No floating point is involved anywhere on that path.
//!
//! ```
//! use mmbebhe::{apply_map, mmbebhe, GrayImage};
//!
//! let image = GrayImage::from_row(vec![0, 0, 0, 50, 50, 100, 200, 200]).unwrap();
//! let map = mmbebhe(&image).unwrap();
//! assert_eq!(map.threshold(), 50);
//! assert_eq!(apply_map(&image, &map).pixels(), &[30, 30, 30, 50, 50, 119, 255, 255]);
//! ```
//!
//! Alongside it live an exact rational reference ([`oracle`]) and a
//! stage-level model of a clocked hardware implementation ([`hwsim`]).

pub mod equalize;
pub mod error;
pub mod hwsim;
pub mod image;
pub mod imgio;
pub mod oracle;
pub mod smbe;

pub use equalize::{
    apply_map, bi_histogram_map, create_map, gen_cumu_hist, he_map, mmbebhe, CumulativeSegment,
    PixelMap, SegmentMap,
};
pub use error::{Error, Result};
pub use hwsim::{simulate, CycleModel, Stage, StageReport};
pub use image::{generate_hist, GrayImage, Histogram, GRAY_LEVELS, MAX_PIXELS};
pub use smbe::{calculate_smbe, find_threshold, smbe_closed_form, SmbeTable, Threshold, SENTINEL};
