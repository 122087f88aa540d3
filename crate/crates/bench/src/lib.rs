//! Inputs shared by the criterion benchmarks.

use mmbebhe::GrayImage;

/// A deterministic `side`x`side` scene with smooth gradients and texture.
pub fn scene(side: u32) -> GrayImage {
    let mut px = Vec::with_capacity(side as usize * side as usize);
    for y in 0..side {
        for x in 0..side {
            let v = (x * 3 + y * 5) % 181 + (x ^ y) % 47 + 10;
            px.push(v.min(255) as u8);
        }
    }
    GrayImage::new(side, side, px).expect("side > 0")
}
