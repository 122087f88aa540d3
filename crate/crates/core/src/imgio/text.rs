//! Map files and histogram CSV.
//!
//! A map file is one `# threshold=T` line followed by 256 lines
//! `k<TAB>map[k]`, ascending `k`, LF endings.

use crate::equalize::PixelMap;
use crate::error::{Error, Result};
use crate::image::{Histogram, GRAY_LEVELS};

pub fn write_map_file(map: &PixelMap) -> String {
    let mut out = format!("# threshold={}\n", map.threshold());
    for (k, v) in map.entries().iter().enumerate() {
        out += &format!("{k}\t{v}\n");
    }
    out
}

fn bad(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedMapFile {
        line,
        reason: reason.into(),
    }
}

fn gray(line: usize, s: &str) -> Result<u8> {
    // reject signs, padding and anything parse::<u8> would tolerate
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(line, format!("not a gray level: {s:?}")));
    }
    s.parse().map_err(|_| bad(line, format!("out of range: {s:?}")))
}

pub fn parse_map_file(text: &str) -> Result<PixelMap> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| bad(0, "missing final newline"))?;
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or_default();
    let threshold = header
        .strip_prefix("# threshold=")
        .ok_or_else(|| bad(1, "expected '# threshold=T'"))
        .and_then(|t| gray(1, t))?;

    let mut map = [0u8; GRAY_LEVELS];
    let mut seen = 0usize;
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if seen == GRAY_LEVELS {
            return Err(bad(lineno, "more than 256 entries"));
        }
        let (k, v) = line
            .split_once('\t')
            .ok_or_else(|| bad(lineno, "expected 'k<TAB>value'"))?;
        let k = gray(lineno, k)?;
        if k as usize != seen {
            return Err(bad(lineno, format!("expected level {seen}, found {k}")));
        }
        map[seen] = gray(lineno, v)?;
        seen += 1;
    }
    if seen != GRAY_LEVELS {
        return Err(bad(seen + 2, format!("only {seen} entries")));
    }
    Ok(PixelMap::new(map, threshold))
}

/// `value,frequency` header plus one row per gray level.
pub fn hist_csv(hist: &Histogram) -> String {
    let mut out = String::from("value,frequency\n");
    for (k, f) in hist.freq().iter().enumerate() {
        out += &format!("{k},{f}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_file() {
        let text = write_map_file(&PixelMap::identity());
        assert_eq!(text.lines().count(), 257);
        assert!(text.starts_with("# threshold=255\n0\t0\n1\t1\n"));
        assert!(text.ends_with("255\t255\n"));
        assert_eq!(parse_map_file(&text).unwrap(), PixelMap::identity());
    }

    #[test]
    fn malformed_map_files() {
        let good = write_map_file(&PixelMap::identity());
        assert!(parse_map_file(good.trim_end()).is_err());
        assert!(parse_map_file(&good.replace("# threshold=255", "# t=1")).is_err());
        assert!(parse_map_file(&good.replace("7\t7\n", "")).is_err());
        assert!(parse_map_file(&good.replace("7\t7\n", "7\t300\n")).is_err());
        assert!(parse_map_file(&good.replace("7\t7\n", "7 7\n")).is_err());
        assert!(parse_map_file(&good.replace("7\t7\n", "7\t+7\n")).is_err());
        assert!(parse_map_file(&format!("{good}256\t0\n")).is_err());
        assert!(parse_map_file(&good.replace('\n', "\r\n")).is_err());
    }

    #[test]
    fn histogram_csv() {
        let mut f = [0u32; GRAY_LEVELS];
        f[3] = 2;
        let csv = hist_csv(&Histogram::from_freq(f).unwrap());
        assert_eq!(csv.lines().count(), 257);
        assert!(csv.starts_with("value,frequency\n0,0\n1,0\n2,0\n3,2\n"));
        assert!(csv.ends_with("255,0\n"));
    }
}
