//! In-memory images and binary coverage masks, with PPM/PGM (P6/P5) IO.
//!
//! PPM keeps the imaging pipeline testable without codec dependencies; the
//! writer output is bit-specified: `P6\n{w} {h}\n255\n` followed by
//! row-major samples.

use std::io::{self, BufRead, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed image: {0}")]
    Malformed(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
}

/// Row-major 8-bit image with 1 (gray) or 3 (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

impl Raster {
    pub fn new(width: usize, height: usize, channels: usize) -> Self {
        assert!(channels == 1 || channels == 3, "1 or 3 channels only");
        Raster {
            width,
            height,
            channels,
            data: vec![0; width * height * channels],
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    pub fn pixel_mut(&mut self, x: usize, y: usize) -> &mut [u8] {
        let i = (y * self.width + x) * self.channels;
        &mut self.data[i..i + self.channels]
    }

    /// Channel value at (x, y) as f64, bilinear neighbors handled by caller.
    pub fn sample(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c] as f64
    }

    /// Write as binary PGM (1 channel) or PPM (3 channels).
    pub fn write_pnm<W: Write>(&self, w: &mut W) -> Result<(), RasterError> {
        let magic = if self.channels == 1 { "P5" } else { "P6" };
        write!(w, "{magic}\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.data)?;
        Ok(())
    }

    pub fn save_pnm<P: AsRef<Path>>(&self, path: P) -> Result<(), RasterError> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_pnm(&mut f)
    }

    /// Read a binary PGM/PPM stream. Comments and arbitrary whitespace in
    /// the header are accepted; only maxval 255 is supported.
    pub fn read_pnm<R: BufRead>(r: &mut R) -> Result<Self, RasterError> {
        let mut magic = [0u8; 2];
        r.read_exact(&mut magic)?;
        let channels = match &magic {
            b"P5" => 1,
            b"P6" => 3,
            _ => return Err(RasterError::Malformed("expected P5 or P6 magic")),
        };
        let mut fields = [0usize; 3];
        for field in fields.iter_mut() {
            *field = read_header_number(r)?;
        }
        let (width, height, maxval) = (fields[0], fields[1], fields[2]);
        if maxval != 255 {
            return Err(RasterError::Malformed("only maxval 255 supported"));
        }
        if width == 0 || height == 0 || width.saturating_mul(height) > 1 << 28 {
            return Err(RasterError::Malformed("implausible dimensions"));
        }
        let mut data = vec![0u8; width * height * channels];
        r.read_exact(&mut data)?;
        Ok(Raster {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn load_pnm<P: AsRef<Path>>(path: P) -> Result<Self, RasterError> {
        let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_pnm(&mut f)
    }
}

/// Parse one whitespace-delimited decimal from a PNM header, skipping `#`
/// comments. Exactly one trailing whitespace byte is consumed after the
/// number, as the format requires.
fn read_header_number<R: BufRead>(r: &mut R) -> Result<usize, RasterError> {
    let mut byte = [0u8; 1];
    // Skip whitespace and comments.
    loop {
        r.read_exact(&mut byte)?;
        match byte[0] {
            b' ' | b'\t' | b'\r' | b'\n' => continue,
            b'#' => {
                while byte[0] != b'\n' {
                    r.read_exact(&mut byte)?;
                }
            }
            _ => break,
        }
    }
    let mut value: usize = 0;
    let mut any = false;
    loop {
        match byte[0] {
            b'0'..=b'9' => {
                any = true;
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add((byte[0] - b'0') as usize))
                    .ok_or(RasterError::Malformed("header number overflow"))?;
            }
            b' ' | b'\t' | b'\r' | b'\n' => break,
            _ => return Err(RasterError::Malformed("unexpected byte in header")),
        }
        r.read_exact(&mut byte)?;
    }
    if !any {
        return Err(RasterError::Malformed("missing header number"));
    }
    Ok(value)
}

/// Binary coverage mask over a canvas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pnm_roundtrip_is_bit_exact() {
        let mut img = Raster::new(4, 3, 3);
        for (i, v) in img.data.iter_mut().enumerate() {
            *v = (i * 7 % 256) as u8;
        }
        let mut buf = Vec::new();
        img.write_pnm(&mut buf).unwrap();
        assert!(buf.starts_with(b"P6\n4 3\n255\n"));
        let back = Raster::read_pnm(&mut &buf[..]).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn pgm_roundtrip_single_channel() {
        let mut img = Raster::new(5, 2, 1);
        img.data.copy_from_slice(&[0, 50, 100, 150, 200, 250, 1, 2, 3, 4]);
        let mut buf = Vec::new();
        img.write_pnm(&mut buf).unwrap();
        let back = Raster::read_pnm(&mut &buf[..]).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn header_comments_are_skipped() {
        let buf = b"P5\n# a comment\n2 1\n# another\n255\n\x10\x20".to_vec();
        let img = Raster::read_pnm(&mut &buf[..]).unwrap();
        assert_eq!((img.width, img.height), (2, 1));
        assert_eq!(img.data, vec![0x10, 0x20]);
    }

    #[test]
    fn truncated_data_is_rejected() {
        let buf = b"P6\n2 2\n255\nabc".to_vec();
        assert!(Raster::read_pnm(&mut &buf[..]).is_err());
    }
}
