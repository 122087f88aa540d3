//! Binary (P5) and ASCII (P2) graymaps with maxval 255.

use crate::error::{Error, Result};
use crate::image::{GrayImage, MAX_PIXELS};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments running to end of line.
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        let tok = self
            .token()
            .ok_or_else(|| Error::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::MalformedHeader(format!(
                    "bad {what} {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Parses a P2 or P5 graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::MalformedHeader("expected magic P2 or P5".into())),
    };
    cur.pos = 2;
    if !bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(Error::MalformedHeader("expected magic P2 or P5".into()));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    let n = width as u64 * height as u64;
    if n > MAX_PIXELS as u64 {
        return Err(Error::ImageTooLarge {
            pixels: n,
            max: MAX_PIXELS as u64,
        });
    }
    let n = n as usize;

    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(Error::MalformedHeader("missing raster separator".into())),
        }
        let raster = &bytes[cur.pos..];
        if raster.len() < n {
            return Err(Error::TruncatedData {
                expected: n,
                found: raster.len(),
            });
        }
        raster[..n].to_vec()
    } else {
        let mut px = Vec::with_capacity(n);
        while px.len() < n {
            let Some(tok) = cur.token() else {
                return Err(Error::TruncatedData {
                    expected: n,
                    found: px.len(),
                });
            };
            let v = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&v| v <= 255)
                .ok_or_else(|| {
                    Error::MalformedData(format!(
                        "sample {:?} at index {}",
                        String::from_utf8_lossy(tok),
                        px.len()
                    ))
                })?;
            px.push(v as u8);
        }
        px
    };
    GrayImage::new(width, height, pixels)
}

/// Binary P5 encoding: `P5\n<w> <h>\n255\n` then the raster.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

/// ASCII P2 encoding, one image row per line.
pub fn write_pgm_ascii(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", image.width(), image.height());
    for row in image.pixels().chunks(image.width() as usize) {
        let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        out += &line.join(" ");
        out.push('\n');
    }
    out.into_bytes()
}
