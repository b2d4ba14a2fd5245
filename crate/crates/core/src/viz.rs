//! HSV rendering of feature maps: hue from `arg I_2n,0` (0 degrees is red),
//! saturation from `I_n,n`, value from `|I_2n,0|`.

use crate::feature::CstFeatureMap;
use crate::field::ScalarField;
use crate::stats::percentile;

/// 8-bit interleaved RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// Saturation and value are divided by this interior percentile of their source, then clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VizOptions {
    pub percentile: f64,
}

impl Default for VizOptions {
    fn default() -> Self {
        Self { percentile: 99.0 }
    }
}

/// Standard hexcone HSV to RGB; `h` in degrees, `s` and `v` in `[0, 1]`.
pub fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [f64; 3] {
    let h = h.rem_euclid(360.0) / 60.0;
    let c = v * s;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [r + m, g + m, b + m]
}

/// Hue in degrees `[0, 360)` of an RGB triple; `None` for grays.
pub fn rgb_hue(rgb: [u8; 3]) -> Option<f64> {
    let [r, g, b] = rgb.map(f64::from);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let d = max - min;
    if d == 0.0 {
        return None;
    }
    let h = if max == r {
        ((g - b) / d).rem_euclid(6.0)
    } else if max == g {
        (b - r) / d + 2.0
    } else {
        (r - g) / d + 4.0
    };
    Some((h * 60.0).rem_euclid(360.0))
}

fn scale_of(c: &ScalarField, margin: usize, q: f64) -> f64 {
    let mut sample = c.interior(margin);
    if sample.is_empty() {
        sample = c.data().to_vec();
    }
    percentile(&sample, q).unwrap_or(0.0)
}

fn unit(v: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        (v / scale).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

fn to_byte(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

pub fn render_hsv(m: &CstFeatureMap) -> RgbImage {
    render_hsv_with(m, VizOptions::default())
}

pub fn render_hsv_with(m: &CstFeatureMap, opts: VizOptions) -> RgbImage {
    let margin = m.interior_margin();
    let mag = m.i2n0().norm();
    let hue = m.i2n0().arg_degrees();
    let s_scale = scale_of(m.inn(), margin, opts.percentile);
    let v_scale = scale_of(&mag, margin, opts.percentile);
    let (width, height) = m.dims();
    let mut data = Vec::with_capacity(3 * width * height);
    for ((&h, &s), &v) in hue.data().iter().zip(m.inn().data()).zip(mag.data()) {
        let rgb = hsv_to_rgb(h, unit(s, s_scale), unit(v, v_scale));
        data.extend(rgb.map(to_byte));
    }
    RgbImage {
        width,
        height,
        data,
    }
}
