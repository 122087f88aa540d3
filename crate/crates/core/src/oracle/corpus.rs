//! Deterministic synthetic test images and histograms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::image::{GrayImage, Histogram, GRAY_LEVELS};
use crate::smbe::smbe_closed_form;

/// A named corpus image.
#[derive(Debug, Clone)]
pub struct Sample {
    pub name: String,
    pub image: GrayImage,
}

fn sample(name: impl Into<String>, image: GrayImage) -> Sample {
    Sample {
        name: name.into(),
        image,
    }
}

fn clamp_gray(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn dims(rng: &mut ChaCha8Rng) -> (u32, u32) {
    (rng.random_range(8..=96), rng.random_range(8..=96))
}

fn from_fn(w: u32, h: u32, mut f: impl FnMut(u32, u32) -> u8) -> GrayImage {
    let mut px = Vec::with_capacity(w as usize * h as usize);
    for y in 0..h {
        for x in 0..w {
            px.push(f(x, y));
        }
    }
    GrayImage::new(w, h, px).expect("non-zero dimensions")
}

/// Edge-case images: constant, all-black, all-white, two-delta and a few
/// whose threshold lands on 255.
pub fn edge_images() -> Vec<Sample> {
    let mut out = vec![
        sample("all-black", GrayImage::filled(16, 16, 0).unwrap()),
        sample("all-white", GrayImage::filled(16, 16, 255).unwrap()),
        sample("constant-7", GrayImage::filled(2, 2, 7).unwrap()),
        sample("constant-128", GrayImage::filled(9, 7, 128).unwrap()),
        sample("single-pixel", GrayImage::filled(1, 1, 93).unwrap()),
        sample(
            "e1",
            GrayImage::from_row(vec![0, 0, 0, 50, 50, 100, 200, 200]).unwrap(),
        ),
        sample(
            "two-delta-extremes",
            GrayImage::from_row(vec![0, 0, 0, 0, 255, 255, 255, 255]).unwrap(),
        ),
    ];
    out.push(sample(
        "two-delta-mid",
        from_fn(20, 10, |x, _| if x < 12 { 60 } else { 190 }),
    ));
    out.push(sample(
        "two-delta-top",
        from_fn(10, 10, |x, y| if (x + y) % 3 == 0 { 254 } else { 255 }),
    ));
    out
}

/// "Standard" structured scenes: ramps, a checkerboard, a vignette.
pub fn structured_images() -> Vec<Sample> {
    vec![
        sample("ramp-horizontal", from_fn(256, 32, |x, _| x as u8)),
        sample("ramp-dark", from_fn(128, 32, |x, y| ((x + y) / 4) as u8)),
        sample(
            "checkerboard",
            from_fn(64, 64, |x, y| if (x / 8 + y / 8) % 2 == 0 { 40 } else { 170 }),
        ),
        sample(
            "vignette",
            from_fn(96, 96, |x, y| {
                let dx = x as f64 - 48.0;
                let dy = y as f64 - 48.0;
                clamp_gray(220.0 - 2.2 * (dx * dx + dy * dy).sqrt())
            }),
        ),
        sample(
            "sky-and-ground",
            from_fn(80, 60, |x, y| {
                if y < 25 {
                    clamp_gray(200.0 + (x % 7) as f64)
                } else {
                    clamp_gray(50.0 + ((x * y) % 23) as f64)
                }
            }),
        ),
    ]
}

/// Randomized images: uniform, Gaussian brightness and bimodal families,
/// `per_family` of each.
pub fn random_images(seed: u64, per_family: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..per_family {
        let (w, h) = dims(&mut rng);
        let lo: u8 = rng.random_range(0..=200);
        let hi: u8 = rng.random_range(lo..=255);
        let img = from_fn(w, h, |_, _| rng.random_range(lo..=hi));
        out.push(sample(format!("uniform-{i}"), img));
    }
    for i in 0..per_family {
        let (w, h) = dims(&mut rng);
        let mean = rng.random_range(20.0..235.0);
        let sd = rng.random_range(4.0..50.0);
        let normal = Normal::new(mean, sd).expect("positive sd");
        let img = from_fn(w, h, |_, _| clamp_gray(normal.sample(&mut rng)));
        out.push(sample(format!("gaussian-{i}"), img));
    }
    for i in 0..per_family {
        let (w, h) = dims(&mut rng);
        let a = Normal::new(rng.random_range(10.0..110.0), rng.random_range(3.0..25.0)).unwrap();
        let b = Normal::new(rng.random_range(140.0..245.0), rng.random_range(3.0..25.0)).unwrap();
        let weight = rng.random_range(0.1..0.9);
        let img = from_fn(w, h, |_, _| {
            let d = if rng.random_bool(weight) { &a } else { &b };
            clamp_gray(d.sample(&mut rng))
        });
        out.push(sample(format!("bimodal-{i}"), img));
    }
    out
}

/// The full evaluation corpus: edge cases, structured scenes and 35 images
/// from each random family (more than 100 images in total).
pub fn standard_corpus() -> Vec<Sample> {
    let mut all = edge_images();
    all.extend(structured_images());
    all.extend(random_images(0x5eed_b1e5, 35));
    all
}

/// Randomized histograms with pixel counts in `1..=100_000`. Every third
/// one is sparse, with at most 56 present levels.
pub fn random_histograms(seed: u64, count: usize) -> Vec<Histogram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let total: u32 = if i % 10 == 0 {
                rng.random_range(1..=20)
            } else {
                rng.random_range(1..=100_000)
            };
            let levels: Vec<usize> = if i % 3 == 0 {
                let k = rng.random_range(1..=56);
                (0..k).map(|_| rng.random_range(0..GRAY_LEVELS)).collect()
            } else {
                (0..GRAY_LEVELS).collect()
            };
            let mut freq = [0u32; GRAY_LEVELS];
            for _ in 0..total {
                freq[levels[rng.random_range(0..levels.len())]] += 1;
            }
            Histogram::from_freq(freq).expect("total within limits")
        })
        .collect()
}

/// Small histograms in which two present levels share the minimal absolute
/// SMBE, so the earlier level must win.
pub fn tied_histograms(seed: u64, count: usize) -> Vec<Histogram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut freq = [0u32; GRAY_LEVELS];
        for _ in 0..rng.random_range(2..=4) {
            freq[rng.random_range(0..GRAY_LEVELS)] += rng.random_range(1..=6);
        }
        let Ok(h) = Histogram::from_freq(freq) else {
            continue;
        };
        let mut abs: Vec<i64> = h
            .present_levels()
            .map(|g| smbe_closed_form(&h, g).abs())
            .collect();
        let min = *abs.iter().min().unwrap();
        abs.retain(|&a| a == min);
        if abs.len() >= 2 {
            out.push(h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_large_enough() {
        let a = standard_corpus();
        let b = standard_corpus();
        assert!(a.len() >= 100);
        assert!(a.iter().zip(&b).all(|(x, y)| x.image == y.image));
    }

    #[test]
    fn sparse_histograms_have_many_gaps() {
        let hs = random_histograms(1, 30);
        for h in hs.iter().step_by(3) {
            assert!(h.present_levels().count() <= 56);
        }
        assert!(hs.iter().all(|h| (1..=100_000).contains(&h.total())));
    }

    #[test]
    fn ties_are_real() {
        for h in tied_histograms(3, 5) {
            let mins: Vec<_> = h
                .present_levels()
                .map(|g| smbe_closed_form(&h, g).abs())
                .collect();
            let m = mins.iter().min().unwrap();
            assert!(mins.iter().filter(|&v| v == m).count() >= 2);
        }
    }
}
