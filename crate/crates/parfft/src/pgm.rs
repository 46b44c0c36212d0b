//! PGM codec: reads ASCII `P2` and binary `P5` grayscale images, writes
//! binary `P5`. Parse failures report the byte offset of the offending
//! input.

use crate::error::{Error, Result};
use crate::image::GrayImage;

fn parse_err(offset: usize, reason: impl Into<String>) -> Error {
    Error::PgmParse {
        offset,
        reason: reason.into(),
    }
}

fn is_separator(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Skips whitespace and `#`-to-end-of-line comments.
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if is_separator(b) {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(usize, &'a [u8])> {
        self.skip_separators();
        if self.pos >= self.bytes.len() {
            return Err(parse_err(self.bytes.len(), "unexpected end of data"));
        }
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !is_separator(self.bytes[self.pos])
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        Ok((start, &self.bytes[start..self.pos]))
    }

    fn next_number(&mut self, what: &str) -> Result<(usize, u64)> {
        let (offset, token) = self.next_token()?;
        let text = std::str::from_utf8(token)
            .map_err(|_| parse_err(offset, format!("{what} is not ASCII")))?;
        let value = text
            .parse::<u64>()
            .map_err(|_| parse_err(offset, format!("{what} is not a number: {text:?}")))?;
        Ok((offset, value))
    }
}

/// Parses a `P2` or `P5` image with `max_val <= 65535`.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cursor = Cursor::new(bytes);
    let (magic_offset, magic) = cursor.next_token()?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        _ => return Err(parse_err(magic_offset, "bad magic, expected P2 or P5")),
    };

    let (w_off, width) = cursor.next_number("width")?;
    let (h_off, height) = cursor.next_number("height")?;
    let (m_off, max_val) = cursor.next_number("max_val")?;
    if width == 0 {
        return Err(parse_err(w_off, "width must be positive"));
    }
    if height == 0 {
        return Err(parse_err(h_off, "height must be positive"));
    }
    if max_val == 0 || max_val > 65535 {
        return Err(parse_err(m_off, format!("max_val {max_val} outside 1..=65535")));
    }
    let (width, height, max_val) = (width as usize, height as usize, max_val as u16);
    let count = width
        .checked_mul(height)
        .ok_or_else(|| parse_err(w_off, "image dimensions overflow"))?;

    let mut pixels = Vec::with_capacity(count);
    if binary {
        // Exactly one separator byte between the header and the raster.
        if cursor.pos >= bytes.len() || !is_separator(bytes[cursor.pos]) {
            return Err(parse_err(cursor.pos, "expected whitespace before raster"));
        }
        cursor.pos += 1;
        let bytes_per_sample = if max_val < 256 { 1 } else { 2 };
        let needed = count * bytes_per_sample;
        let raster = &bytes[cursor.pos..];
        if raster.len() < needed {
            return Err(parse_err(
                bytes.len(),
                format!("truncated raster: need {needed} bytes, found {}", raster.len()),
            ));
        }
        for i in 0..count {
            let offset = cursor.pos + i * bytes_per_sample;
            let value = if bytes_per_sample == 1 {
                raster[i] as u16
            } else {
                u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]])
            };
            if value > max_val {
                return Err(parse_err(
                    offset,
                    format!("pixel value {value} exceeds max_val {max_val}"),
                ));
            }
            pixels.push(value);
        }
    } else {
        for _ in 0..count {
            let (offset, value) = cursor.next_number("pixel")?;
            if value > max_val as u64 {
                return Err(parse_err(
                    offset,
                    format!("pixel value {value} exceeds max_val {max_val}"),
                ));
            }
            pixels.push(value as u16);
        }
    }

    GrayImage::new(width, height, max_val, pixels)
}

/// Encodes as binary `P5`; two big-endian bytes per sample when
/// `max_val` exceeds 255. Lossless against [`read_pgm`].
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!(
        "P5\n{} {}\n{}\n",
        image.width(),
        image.height(),
        image.max_val()
    )
    .into_bytes();
    if image.max_val() < 256 {
        out.extend(image.pixels().iter().map(|&p| p as u8));
    } else {
        for &p in image.pixels() {
            out.extend_from_slice(&p.to_be_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn minimal_ascii_image() {
        let img = read_pgm(b"P2 1 1 255 7").unwrap();
        assert_eq!((img.width(), img.height(), img.max_val()), (1, 1, 255));
        assert_eq!(img.pixels(), &[7]);
    }

    #[test]
    fn ascii_with_comments_and_mixed_whitespace() {
        let data = b"P2 # format\n# another comment\n2 2\t65535\n1 2\n3 4\n";
        let img = read_pgm(data).unwrap();
        assert_eq!((img.width(), img.height(), img.max_val()), (2, 2, 65535));
        assert_eq!(img.pixels(), &[1, 2, 3, 4]);
    }

    #[test]
    fn write_then_read_is_lossless() {
        let mut rng = StdRng::seed_from_u64(139);
        let pixels: Vec<u16> = (0..13 * 9).map(|_| rng.random_range(0..=255)).collect();
        let img = GrayImage::new(13, 9, 255, pixels).unwrap();
        assert_eq!(read_pgm(&write_pgm(&img)).unwrap(), img);

        let wide: Vec<u16> = (0..6).map(|_| rng.random_range(0..=1000)).collect();
        let img16 = GrayImage::new(3, 2, 1000, wide).unwrap();
        assert_eq!(read_pgm(&write_pgm(&img16)).unwrap(), img16);
    }

    #[test]
    fn binary_raster_byte_count_is_enforced() {
        let ok = b"P5 2 3 255\n\x01\x02\x03\x04\x05\x06";
        assert_eq!(read_pgm(ok).unwrap().pixels(), &[1, 2, 3, 4, 5, 6]);

        let short = b"P5 2 3 255\n\x01\x02\x03\x04\x05";
        match read_pgm(short) {
            Err(Error::PgmParse { offset, reason }) => {
                assert_eq!(offset, short.len());
                assert!(reason.contains("truncated"), "{reason}");
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn two_byte_samples_are_big_endian() {
        let data = b"P5 2 1 65535\n\x01\x00\x00\xff";
        let img = read_pgm(data).unwrap();
        assert_eq!(img.pixels(), &[256, 255]);
    }

    #[test]
    fn bad_magic_is_reported_at_the_start() {
        match read_pgm(b"P3 1 1 255 7") {
            Err(Error::PgmParse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(read_pgm(b"").is_err());
    }

    #[test]
    fn oversized_ascii_pixel_is_located() {
        let data = b"P2 1 1 10 11";
        match read_pgm(data) {
            Err(Error::PgmParse { offset, reason }) => {
                assert_eq!(offset, 10);
                assert!(reason.contains("exceeds"), "{reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn oversized_binary_sample_is_located() {
        let data = b"P5 2 1 100\n\x10\xc8";
        match read_pgm(data) {
            Err(Error::PgmParse { offset, reason }) => {
                assert_eq!(offset, 12);
                assert!(reason.contains("200"), "{reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn header_bounds_are_validated() {
        assert!(read_pgm(b"P2 0 1 255 0").is_err());
        assert!(read_pgm(b"P2 1 0 255 0").is_err());
        assert!(read_pgm(b"P2 1 1 0 0").is_err());
        assert!(read_pgm(b"P2 1 1 70000 0").is_err());
        assert!(read_pgm(b"P2 1 1 255").is_err());
    }
}
