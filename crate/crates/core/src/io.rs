//! Grayscale image loading (PNG, binary PGM), PGM/PNG writers, and NPY tensor export.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{CstError, Result};
use crate::feature::ChannelStack;
use crate::field::ScalarField;
use crate::viz::RgbImage;

/// BT.601 luma weights for R, G, B.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Loads an image as a grayscale field scaled to `[0, 1]`.
pub fn load_gray(path: impl AsRef<Path>) -> Result<ScalarField> {
    let path = path.as_ref();
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(CstError::FileNotFound(path.to_path_buf()))
        }
        Err(e) => return Err(e.into()),
    };
    decode_gray(&bytes)
}

/// Decodes PNG or binary PGM bytes, detected by magic number.
pub fn decode_gray(bytes: &[u8]) -> Result<ScalarField> {
    if bytes.starts_with(PNG_MAGIC) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else if bytes.len() >= 2 && bytes[0] == b'P' && bytes[1].is_ascii_digit() {
        Err(CstError::UnsupportedFormat(format!(
            "netpbm variant P{} (only binary P5 is supported)",
            bytes[1] as char
        )))
    } else {
        Err(CstError::UnsupportedFormat(
            "unrecognized image signature".into(),
        ))
    }
}

fn decode_png(bytes: &[u8]) -> Result<ScalarField> {
    let mut decoder = png::Decoder::new(bytes);
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder
        .read_info()
        .map_err(|e| CstError::Decode(e.to_string()))?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| CstError::Decode(e.to_string()))?;
    let (w, h) = (info.width as usize, info.height as usize);
    let samples = info.color_type.samples();
    let wide = info.bit_depth == png::BitDepth::Sixteen;
    let max = if wide { 65535.0 } else { 255.0 };
    let bytes_per_sample = if wide { 2 } else { 1 };
    let sample = |i: usize| -> f64 {
        if wide {
            f64::from(u16::from_be_bytes([buf[2 * i], buf[2 * i + 1]]))
        } else {
            f64::from(buf[i])
        }
    };
    let row_samples = info.line_size / bytes_per_sample;
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let base = y * row_samples + x * samples;
            let v = match info.color_type {
                png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha => sample(base),
                png::ColorType::Rgb | png::ColorType::Rgba => {
                    LUMA_WEIGHTS[0] * sample(base)
                        + LUMA_WEIGHTS[1] * sample(base + 1)
                        + LUMA_WEIGHTS[2] * sample(base + 2)
                }
                png::ColorType::Indexed => {
                    return Err(CstError::UnsupportedFormat("unexpanded palette PNG".into()))
                }
            };
            data.push(v / max);
        }
    }
    ScalarField::new(w, h, data)
}

/// Splits a netpbm header into tokens, skipping `#` comments, and returns the
/// offset just past the single whitespace byte that ends the header.
fn pgm_header(bytes: &[u8]) -> Result<([usize; 3], usize)> {
    let mut tokens = [0usize; 3];
    let mut pos = 2;
    for slot in &mut tokens {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(CstError::Decode("truncated PGM header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(CstError::Decode("malformed PGM header".into()));
        }
        *slot = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CstError::Decode("PGM header value out of range".into()))?;
    }
    match bytes.get(pos) {
        Some(c) if c.is_ascii_whitespace() => Ok((tokens, pos + 1)),
        _ => Err(CstError::Decode("truncated PGM header".into())),
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<ScalarField> {
    let ([w, h, maxval], offset) = pgm_header(bytes)?;
    if w == 0 || h == 0 {
        return Err(CstError::Decode("PGM has zero size".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(CstError::Decode(format!(
            "PGM maxval {maxval} out of range"
        )));
    }
    let wide = maxval > 255;
    let need = w * h * if wide { 2 } else { 1 };
    let body = &bytes[offset..];
    if body.len() < need {
        return Err(CstError::Decode(format!(
            "PGM data truncated: {} of {need} bytes",
            body.len()
        )));
    }
    let max = maxval as f64;
    let data = if wide {
        body[..need]
            .chunks_exact(2)
            .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])) / max)
            .collect()
    } else {
        body[..need].iter().map(|&b| f64::from(b) / max).collect()
    };
    ScalarField::new(w, h, data)
}

fn quantize(v: f64, lo: f64, hi: f64, max: f64) -> u16 {
    let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
    (t.clamp(0.0, 1.0) * max).round() as u16
}

/// Bit depth of written grayscale images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrayDepth {
    Eight,
    Sixteen,
}

/// Writes a binary PGM, mapping `[lo, hi]` linearly onto the full sample range (clamped).
pub fn write_pgm(
    f: &ScalarField,
    path: impl AsRef<Path>,
    lo: f64,
    hi: f64,
    depth: GrayDepth,
) -> Result<()> {
    let max = if depth == GrayDepth::Eight {
        255.0
    } else {
        65535.0
    };
    let mut out = format!("P5\n{} {}\n{}\n", f.width(), f.height(), max as u32).into_bytes();
    for &v in f.data() {
        let q = quantize(v, lo, hi, max);
        match depth {
            GrayDepth::Eight => out.push(q as u8),
            GrayDepth::Sixteen => out.extend(q.to_be_bytes()),
        }
    }
    fs::write(path, out)?;
    Ok(())
}

fn png_writer(
    path: &Path,
    w: usize,
    h: usize,
    color: png::ColorType,
    depth: png::BitDepth,
) -> Result<png::Writer<BufWriter<fs::File>>> {
    let file = BufWriter::new(fs::File::create(path)?);
    let mut enc = png::Encoder::new(file, w as u32, h as u32);
    enc.set_color(color);
    enc.set_depth(depth);
    enc.write_header()
        .map_err(|e| CstError::Io(std::io::Error::other(e)))
}

/// Writes a grayscale PNG with the same `[lo, hi]` mapping as [`write_pgm`].
pub fn write_png_gray(
    f: &ScalarField,
    path: impl AsRef<Path>,
    lo: f64,
    hi: f64,
    depth: GrayDepth,
) -> Result<()> {
    let (bit_depth, max) = match depth {
        GrayDepth::Eight => (png::BitDepth::Eight, 255.0),
        GrayDepth::Sixteen => (png::BitDepth::Sixteen, 65535.0),
    };
    let mut bytes = Vec::new();
    for &v in f.data() {
        let q = quantize(v, lo, hi, max);
        match depth {
            GrayDepth::Eight => bytes.push(q as u8),
            GrayDepth::Sixteen => bytes.extend(q.to_be_bytes()),
        }
    }
    let mut w = png_writer(
        path.as_ref(),
        f.width(),
        f.height(),
        png::ColorType::Grayscale,
        bit_depth,
    )?;
    w.write_image_data(&bytes)
        .map_err(|e| CstError::Io(std::io::Error::other(e)))
}

pub fn write_png_rgb(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let mut w = png_writer(
        path.as_ref(),
        img.width,
        img.height,
        png::ColorType::Rgb,
        png::BitDepth::Eight,
    )?;
    w.write_image_data(&img.data)
        .map_err(|e| CstError::Io(std::io::Error::other(e)))
}

/// Element type of exported tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DType {
    #[default]
    F32,
    F64,
}

impl DType {
    pub fn descr(self) -> &'static str {
        match self {
            DType::F32 => "<f4",
            DType::F64 => "<f8",
        }
    }

    pub fn size(self) -> usize {
        match self {
            DType::F32 => 4,
            DType::F64 => 8,
        }
    }
}

impl std::str::FromStr for DType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f32" => Ok(DType::F32),
            "f64" => Ok(DType::F64),
            other => Err(format!("unknown dtype '{other}' (expected f32 or f64)")),
        }
    }
}

/// NPY v1.0 header for a C-order array; total header size is a multiple of 64.
pub fn npy_header(dtype: DType, shape: &[usize]) -> Vec<u8> {
    let dims = match shape {
        [d] => format!("({d},)"),
        _ => format!(
            "({})",
            shape
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    };
    let mut dict = format!(
        "{{'descr': '{}', 'fortran_order': False, 'shape': {dims}, }}",
        dtype.descr()
    );
    // magic (6) + version (2) + length (2) + dict + '\n'
    let unpadded = 10 + dict.len() + 1;
    dict.extend(std::iter::repeat_n(' ', (64 - unpadded % 64) % 64));
    dict.push('\n');
    let mut out = Vec::with_capacity(10 + dict.len());
    out.extend_from_slice(b"\x93NUMPY");
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(dict.len() as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out
}

/// Serializes a stack as a `(channels, height, width)` NPY array.
pub fn encode_npy(stack: &ChannelStack, dtype: DType) -> Vec<u8> {
    let (w, h) = stack.dims();
    let mut out = npy_header(dtype, &[stack.len(), h, w]);
    out.reserve(stack.len() * w * h * dtype.size());
    for (_, c) in stack.channels() {
        for &v in c.data() {
            match dtype {
                DType::F32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
                DType::F64 => out.extend_from_slice(&v.to_le_bytes()),
            }
        }
    }
    out
}

/// Path of the label manifest written next to a tensor: `<path>.labels`.
pub fn labels_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".labels");
    PathBuf::from(s)
}

/// Writes the NPY tensor and its `.labels` manifest (one label per line).
pub fn write_tensor(stack: &ChannelStack, path: impl AsRef<Path>, dtype: DType) -> Result<()> {
    let path = path.as_ref();
    let mut file = BufWriter::new(fs::File::create(path)?);
    file.write_all(&encode_npy(stack, dtype))?;
    file.flush()?;
    let manifest: String = stack.labels().iter().map(|l| format!("{l}\n")).collect();
    fs::write(labels_path(path), manifest)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_with_comments_and_16_bit() {
        let mut bytes = b"P5\n# made by hand\n2 1\n# max\n65535\n".to_vec();
        bytes.extend([0xff, 0xff, 0x00, 0x00]);
        let f = decode_gray(&bytes).unwrap();
        assert_eq!(f.data(), &[1.0, 0.0]);
    }

    #[test]
    fn pgm_all_white() {
        let mut bytes = b"P5 3 2 255\n".to_vec();
        bytes.extend([255u8; 6]);
        let f = decode_gray(&bytes).unwrap();
        assert_eq!(f.dims(), (3, 2));
        assert!(f.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn pgm_errors() {
        assert!(matches!(
            decode_gray(b"P5 3 2 255\n\x01\x02"),
            Err(CstError::Decode(_))
        ));
        assert!(matches!(decode_gray(b"P5 3"), Err(CstError::Decode(_))));
        assert!(matches!(
            decode_gray(b"P5 3 x 255\n"),
            Err(CstError::Decode(_))
        ));
        assert!(matches!(
            decode_gray(b"P5 1 1 0\n\x00"),
            Err(CstError::Decode(_))
        ));
        assert!(matches!(
            decode_gray(b"P2 1 1 255\n0"),
            Err(CstError::UnsupportedFormat(_))
        ));
        assert!(matches!(
            decode_gray(b"GIF89a"),
            Err(CstError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn truncated_png_is_decode_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ramp.png");
        let f = ScalarField::from_fn(16, 4, |x, _| x as f64 / 15.0).unwrap();
        write_png_gray(&f, &path, 0.0, 1.0, GrayDepth::Eight).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert!(decode_gray(&bytes).is_ok());
        assert!(matches!(
            decode_gray(&bytes[..bytes.len() / 2]),
            Err(CstError::Decode(_))
        ));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_gray("/nonexistent/x.pgm"),
            Err(CstError::FileNotFound(_))
        ));
    }

    #[test]
    fn npy_header_alignment() {
        for shape in [vec![1usize], vec![4, 128, 128], vec![12, 3000, 70000]] {
            for dtype in [DType::F32, DType::F64] {
                let h = npy_header(dtype, &shape);
                assert_eq!(h.len() % 64, 0);
                assert_eq!(*h.last().unwrap(), b'\n');
                let len = u16::from_le_bytes([h[8], h[9]]) as usize;
                assert_eq!(len + 10, h.len());
            }
        }
        let h = npy_header(DType::F64, &[7]);
        assert!(std::str::from_utf8(&h[10..])
            .unwrap()
            .contains("'shape': (7,)"));
    }

    #[test]
    fn labels_manifest_path() {
        assert_eq!(
            labels_path(Path::new("a/out.npy")),
            PathBuf::from("a/out.npy.labels")
        );
    }
}
