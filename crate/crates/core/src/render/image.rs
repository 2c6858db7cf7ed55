//! Linear-radiance image buffer with PFM (metrics) and PPM (viewing) IO.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::vec3::Rgb;
use super::RenderError;

/// Row-major, top-left origin, 3 channels of linear radiance.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageBuf {
    pub width: u32,
    pub height: u32,
    data: Vec<f32>,
}

impl ImageBuf {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; (width * height * 3) as usize],
        }
    }

    pub fn from_pixels(width: u32, height: u32, pixels: &[Rgb]) -> Self {
        assert_eq!(pixels.len(), (width * height) as usize);
        let mut img = Self::new(width, height);
        for (i, p) in pixels.iter().enumerate() {
            img.data[3 * i] = p.x as f32;
            img.data[3 * i + 1] = p.y as f32;
            img.data[3 * i + 2] = p.z as f32;
        }
        img
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let i = ((y * self.width + x) * 3) as usize;
        Rgb::new(
            self.data[i] as f64,
            self.data[i + 1] as f64,
            self.data[i + 2] as f64,
        )
    }

    pub fn set(&mut self, x: u32, y: u32, c: Rgb) {
        let i = ((y * self.width + x) * 3) as usize;
        self.data[i] = c.x as f32;
        self.data[i + 1] = c.y as f32;
        self.data[i + 2] = c.z as f32;
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Little-endian 32-bit float PFM, scanlines bottom-up.
    pub fn write_pfm(&self, path: &Path) -> Result<(), RenderError> {
        let mut out = BufWriter::new(std::fs::File::create(path)?);
        write!(out, "PF\n{} {}\n-1.0\n", self.width, self.height)?;
        for y in (0..self.height).rev() {
            let row = &self.data
                [((y * self.width * 3) as usize)..(((y + 1) * self.width * 3) as usize)];
            for v in row {
                out.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_pfm(path: &Path) -> Result<Self, RenderError> {
        let mut reader = BufReader::new(std::fs::File::open(path)?);
        let magic = read_token(&mut reader)?;
        if magic != "PF" {
            return Err(RenderError::BadImage {
                reason: format!("expected PF magic, got `{magic}`"),
            });
        }
        let width: u32 = parse_token(&mut reader, "width")?;
        let height: u32 = parse_token(&mut reader, "height")?;
        let scale: f64 = parse_token(&mut reader, "scale")?;
        if scale >= 0.0 {
            return Err(RenderError::BadImage {
                reason: "big-endian PFM is not supported".into(),
            });
        }
        let mut img = Self::new(width, height);
        let mut buf = vec![0u8; (width * 3 * 4) as usize];
        for y in (0..height).rev() {
            reader.read_exact(&mut buf)?;
            let row_start = (y * width * 3) as usize;
            for (i, chunk) in buf.chunks_exact(4).enumerate() {
                img.data[row_start + i] =
                    f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
            }
        }
        Ok(img)
    }

    /// Binary P6, 8-bit, gamma 2.2 (viewing only; metrics stay linear).
    pub fn write_ppm(&self, path: &Path) -> Result<(), RenderError> {
        let mut out = BufWriter::new(std::fs::File::create(path)?);
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        for v in &self.data {
            let u = (v.clamp(0.0, 1.0) as f64).powf(1.0 / 2.2);
            out.write_all(&[(u * 255.0).round() as u8])?;
        }
        Ok(())
    }
}

fn read_token(reader: &mut impl BufRead) -> Result<String, RenderError> {
    let mut token = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        reader.read_exact(&mut byte)?;
        if byte[0].is_ascii_whitespace() {
            if token.is_empty() {
                continue;
            }
            break;
        }
        token.push(byte[0]);
    }
    String::from_utf8(token).map_err(|_| RenderError::BadImage {
        reason: "non-UTF8 header token".into(),
    })
}

fn parse_token<T: std::str::FromStr>(
    reader: &mut impl BufRead,
    what: &str,
) -> Result<T, RenderError> {
    read_token(reader)?.parse().map_err(|_| RenderError::BadImage {
        reason: format!("bad {what} in header"),
    })
}

/// Mean over pixels and channels of the squared difference, on linear data.
pub fn compute_mse(a: &ImageBuf, b: &ImageBuf) -> Result<f64, RenderError> {
    if a.width != b.width || a.height != b.height {
        return Err(RenderError::ResolutionMismatch {
            a: (a.width, a.height),
            b: (b.width, b.height),
        });
    }
    let sum: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| {
            let d = *x as f64 - *y as f64;
            d * d
        })
        .sum();
    Ok(sum / a.data.len() as f64)
}

/// MSE restricted to the pixel rectangle [x0, x1) × [y0, y1).
pub fn compute_mse_region(
    a: &ImageBuf,
    b: &ImageBuf,
    x0: u32,
    y0: u32,
    x1: u32,
    y1: u32,
) -> Result<f64, RenderError> {
    if a.width != b.width || a.height != b.height {
        return Err(RenderError::ResolutionMismatch {
            a: (a.width, a.height),
            b: (b.width, b.height),
        });
    }
    assert!(x0 < x1 && y0 < y1 && x1 <= a.width && y1 <= a.height);
    let mut sum = 0.0;
    let mut count = 0usize;
    for y in y0..y1 {
        for x in x0..x1 {
            let d = a.get(x, y) - b.get(x, y);
            sum += d.dot(d);
            count += 3;
        }
    }
    Ok(sum / count as f64)
}
