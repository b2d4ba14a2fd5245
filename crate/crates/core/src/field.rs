//! Row-major 2-D grids of real and complex samples.
//!
//! Origin is the top-left pixel; `x` grows rightward and `y` grows downward.

use num_complex::Complex64;

use crate::error::{CstError, Result};

/// Sample types that can live in a [`Field`].
pub trait Sample: Copy + Send + Sync + Default + 'static {
    fn is_finite_sample(&self) -> bool;
}

impl Sample for f64 {
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    fn is_finite_sample(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// A `width x height` grid stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// Real-valued grid (images, `I_nn` maps, magnitudes).
pub type ScalarField = Field<f64>;
/// Complex-valued grid (filter responses, `I_2n,0` maps).
pub type ComplexField = Field<Complex64>;

impl<T: Sample> Field<T> {
    /// Builds a field, rejecting empty shapes, length mismatches and non-finite samples.
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(CstError::InvalidShape {
                width,
                height,
                len: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite_sample()) {
            return Err(CstError::NonFinite(i));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Internal constructor for data already known to be well formed.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Evaluates `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[T] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Applies `f` pointwise. The caller is responsible for keeping results finite.
    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field::from_parts(
            self.width,
            self.height,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn same_dims<U>(&self, other: &Field<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Samples at least `margin` pixels away from every edge, row-major.
    /// Empty when the margin swallows the whole field.
    pub fn interior(&self, margin: usize) -> Vec<T> {
        if 2 * margin >= self.width || 2 * margin >= self.height {
            return Vec::new();
        }
        let mut out = Vec::with_capacity((self.width - 2 * margin) * (self.height - 2 * margin));
        for y in margin..self.height - margin {
            out.extend_from_slice(&self.row(y)[margin..self.width - margin]);
        }
        out
    }

    /// Copy of the field translated by `(dx, dy)`; uncovered pixels take `fill`.
    pub fn shifted(&self, dx: isize, dy: isize, fill: T) -> Self {
        let (w, h) = (self.width as isize, self.height as isize);
        let mut data = vec![fill; self.data.len()];
        for y in 0..h {
            let sy = y - dy;
            if sy < 0 || sy >= h {
                continue;
            }
            for x in 0..w {
                let sx = x - dx;
                if sx >= 0 && sx < w {
                    data[(y * w + x) as usize] = self.data[(sy * w + sx) as usize];
                }
            }
        }
        Self::from_parts(self.width, self.height, data)
    }
}

impl ScalarField {
    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn to_complex(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }

    /// Pointwise `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &ScalarField, b: f64) -> Result<ScalarField> {
        if !self.same_dims(other) {
            return Err(CstError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Ok(Self::from_parts(self.width, self.height, data))
    }
}

impl ComplexField {
    pub fn re(&self) -> ScalarField {
        self.map(|c| c.re)
    }

    pub fn im(&self) -> ScalarField {
        self.map(|c| c.im)
    }

    pub fn norm(&self) -> ScalarField {
        self.map(|c| c.norm())
    }

    /// Argument in degrees, wrapped to `[0, 360)`.
    pub fn arg_degrees(&self) -> ScalarField {
        self.map(|c| wrap_degrees(c.arg().to_degrees()))
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}

/// Wraps an angle in degrees into `[0, 360)`.
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}
