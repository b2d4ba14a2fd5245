//! Brute-force references for the pipeline.
//!
//! * [`st_gradient_oracle`] builds the classic real structure tensor from gradient
//!   outer products, eigen-decomposes it per pixel, and maps the eigen system to
//!   `(I20, I11) = ((l1 - l2) exp(2i angle(u1)), l1 + l2)`.
//! * [`dft_moment_oracle`] evaluates complex moments of a windowed local power
//!   spectrum directly from an FFT.
//! * [`dense_convolve`] and [`dense_complex_dog`] are non-separable references for
//!   the convolution and kernel construction.
//!
//! These are slow and meant for validation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::convolve::{convolve_real, convolve_separable};
use crate::error::{CstError, Result};
use crate::feature::CstFeatureMap;
use crate::field::{ComplexField, Field, ScalarField};
use crate::params::{validate_params, Boundary, CstParams};
use crate::pipeline::{derivative_kernel, pooling_kernel};

/// Eigen system of a 2x2 symmetric positive semidefinite tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StDecomposition {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Direction of the major eigenvector, radians in `[0, pi)`.
    pub u1_angle: f64,
}

impl StDecomposition {
    /// Decomposes `[[jxx, jxy], [jxy, jyy]]`.
    pub fn from_tensor(jxx: f64, jxy: f64, jyy: f64) -> Self {
        let half_trace = 0.5 * (jxx + jyy);
        let disc = (0.25 * (jxx - jyy) * (jxx - jyy) + jxy * jxy).sqrt();
        let lambda1 = half_trace + disc;
        let lambda2 = (half_trace - disc).max(0.0);
        // Rows of (J - l1 E) are orthogonal to u1; take the better conditioned one.
        let (a, b) = (jxx - lambda1, jyy - lambda1);
        let (ux, uy) = if a.abs() >= b.abs() {
            (-jxy, a)
        } else {
            (b, -jxy)
        };
        let u1_angle = if ux == 0.0 && uy == 0.0 {
            0.0
        } else {
            let t = uy.atan2(ux).rem_euclid(PI);
            if t >= PI {
                0.0
            } else {
                t
            }
        };
        Self {
            lambda1,
            lambda2,
            u1_angle,
        }
    }

    /// `((l1 - l2) exp(2i angle(u1)), l1 + l2)`.
    pub fn to_cst(&self) -> (Complex64, f64) {
        (
            Complex64::from_polar(self.lambda1 - self.lambda2, 2.0 * self.u1_angle),
            self.lambda1 + self.lambda2,
        )
    }
}

/// Order-1 map from pooled gradient outer products and per-pixel eigen-decomposition.
///
/// Gradients are the real and imaginary parts of the pipeline's order-1 derivative
/// response, so with `gamma = 2` this must agree with the pipeline up to round-off.
/// The returned map records `gamma = 2` in its parameters.
pub fn st_gradient_oracle(f: &ScalarField, p: &CstParams) -> Result<CstFeatureMap> {
    validate_params(p)?;
    let p = p.clone().with_gamma(2.0);
    let grad = convolve_separable(f, &derivative_kernel(1, &p)?, p.boundary)?;
    let pool = pooling_kernel(&p)?;
    let gx = grad.re();
    let gy = grad.im();
    let prod = |a: &ScalarField, b: &ScalarField| {
        Field::from_parts(
            a.width(),
            a.height(),
            a.data().iter().zip(b.data()).map(|(u, v)| u * v).collect(),
        )
    };
    let jxx = convolve_real(&prod(&gx, &gx), &pool, p.boundary)?;
    let jxy = convolve_real(&prod(&gx, &gy), &pool, p.boundary)?;
    let jyy = convolve_real(&prod(&gy, &gy), &pool, p.boundary)?;
    let mut i20 = Vec::with_capacity(jxx.data().len());
    let mut i11 = Vec::with_capacity(jxx.data().len());
    for ((&a, &b), &c) in jxx.data().iter().zip(jxy.data()).zip(jyy.data()) {
        let (z, s) = StDecomposition::from_tensor(a, b, c).to_cst();
        i20.push(z);
        i11.push(s);
    }
    let (w, h) = f.dims();
    CstFeatureMap::new(1, Field::new(w, h, i20)?, Field::new(w, h, i11)?, p)
}

/// Direct sampling of `(-(x + i y) / sigma^2)^n G_sigma^2(x, y)` on a `(2r+1)^2` grid, row-major.
pub fn dense_complex_dog(n: u32, sigma: f64, radius: usize) -> Vec<Complex64> {
    let r = radius as isize;
    let s2 = sigma * sigma;
    let mut out = Vec::with_capacity((2 * radius + 1).pow(2));
    for y in -r..=r {
        for x in -r..=r {
            let (xf, yf) = (x as f64, y as f64);
            let g = (-(xf * xf + yf * yf) / (2.0 * s2)).exp() / (2.0 * PI * s2);
            out.push((Complex64::new(xf, yf) * (-1.0 / s2)).powu(n) * g);
        }
    }
    out
}

/// Non-separable same-size convolution with a dense `(2r+1)^2` kernel.
pub fn dense_convolve(
    f: &ComplexField,
    kernel: &[Complex64],
    radius: usize,
    boundary: Boundary,
) -> ComplexField {
    let (w, h) = f.dims();
    let r = radius as isize;
    let s = 2 * radius + 1;
    assert_eq!(kernel.len(), s * s, "kernel must be (2r+1)^2");
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = Complex64::new(0.0, 0.0);
            for v in -r..=r {
                let Some(sy) = boundary.resolve(y - v, h) else {
                    continue;
                };
                for u in -r..=r {
                    if let Some(sx) = boundary.resolve(x - u, w) {
                        acc += kernel[((v + r) as usize) * s + (u + r) as usize] * f.get(sx, sy);
                    }
                }
            }
            out.push(acc);
        }
    }
    Field::from_parts(w, h, out)
}

/// In-place 2-D FFT of an `n x n` row-major buffer.
fn fft2(buf: &mut [Complex64], n: usize) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    for row in buf.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        for y in 0..n {
            col[y] = buf[y * n + x];
        }
        fft.process(&mut col);
        for y in 0..n {
            buf[y * n + x] = col[y];
        }
    }
}

/// Angular frequency of DFT bin `k` on an `n`-point axis, in `[-pi, pi)`.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    let k = k as isize;
    let n_i = n as isize;
    let signed = if k < n_i / 2 { k } else { k - n_i };
    2.0 * PI * signed as f64 / n as f64
}

/// Complex moment `sum (wx + i wy)^p (wx - i wy)^q |F|^2 dw` of the local power spectrum at `center`.
///
/// The patch within `ceil(4 window_sigma)` of `center` has its window-weighted mean
/// removed, is multiplied by a Gaussian window, and is zero-padded to the next power
/// of two. Frequencies are in `[-pi, pi)` with bin spacing `2 pi / N`; the sum is
/// weighted by the bin area `(2 pi / N)^2` and skips the DC bin.
pub fn dft_moment_oracle(
    f: &ScalarField,
    center: (usize, usize),
    window_sigma: f64,
    p: u32,
    q: u32,
) -> Result<Complex64> {
    if !(window_sigma.is_finite() && window_sigma > 0.0) {
        return Err(CstError::InvalidSigma(window_sigma));
    }
    let radius = (4.0 * window_sigma).ceil() as usize;
    let (cx, cy) = center;
    let (w, h) = f.dims();
    if cx < radius || cy < radius || cx + radius >= w || cy + radius >= h {
        return Err(CstError::WindowTooLarge {
            radius,
            x: cx,
            y: cy,
            width: w,
            height: h,
        });
    }
    let side = 2 * radius + 1;
    let mut weights = Vec::with_capacity(side * side);
    let mut values = Vec::with_capacity(side * side);
    for dy in 0..side {
        for dx in 0..side {
            let (ox, oy) = (dx as f64 - radius as f64, dy as f64 - radius as f64);
            weights.push((-(ox * ox + oy * oy) / (2.0 * window_sigma * window_sigma)).exp());
            values.push(f.get(cx + dx - radius, cy + dy - radius));
        }
    }
    let wsum: f64 = weights.iter().sum();
    let mean = weights.iter().zip(&values).map(|(a, b)| a * b).sum::<f64>() / wsum;

    let n = side.next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for dy in 0..side {
        for dx in 0..side {
            let i = dy * side + dx;
            buf[dy * n + dx] = Complex64::new(weights[i] * (values[i] - mean), 0.0);
        }
    }
    fft2(&mut buf, n);

    let dw = 2.0 * PI / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for ky in 0..n {
        for kx in 0..n {
            if kx == 0 && ky == 0 {
                continue;
            }
            let z = Complex64::new(bin_frequency(kx, n), bin_frequency(ky, n));
            acc += z.powu(p) * z.conj().powu(q) * buf[ky * n + kx].norm_sqr();
        }
    }
    Ok(acc * dw * dw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_decomposition_reconstructs_tensor() {
        for &(a, b, c) in &[
            (3.0, 1.0, 2.0),
            (1.0, 0.0, 1.0),
            (0.0, 0.0, 0.0),
            (5.0, -1.2, 0.5),
            (0.0, 0.0, 4.0),
        ] {
            let d = StDecomposition::from_tensor(a, b, c);
            assert!(d.lambda1 >= d.lambda2 && d.lambda2 >= 0.0);
            assert!((0.0..PI).contains(&d.u1_angle));
            let (ux, uy) = (d.u1_angle.cos(), d.u1_angle.sin());
            // J = (l1 - l2) u u^T + l2 E
            let diff = d.lambda1 - d.lambda2;
            let rxx = diff * ux * ux + d.lambda2;
            let rxy = diff * ux * uy;
            let ryy = diff * uy * uy + d.lambda2;
            assert!(
                (rxx - a).abs() < 1e-12 && (rxy - b).abs() < 1e-12 && (ryy - c).abs() < 1e-12,
                "{a} {b} {c}: {d:?} -> {rxx} {rxy} {ryy}"
            );
        }
    }

    #[test]
    fn to_cst_matches_tensor_form() {
        // I20 = (jxx - jyy) + 2i jxy and I11 = jxx + jyy.
        let d = StDecomposition::from_tensor(3.0, 1.0, 2.0);
        let (z, s) = d.to_cst();
        assert!((z - Complex64::new(1.0, 2.0)).norm() < 1e-12);
        assert!((s - 5.0).abs() < 1e-12);
    }

    #[test]
    fn frequency_convention() {
        assert_eq!(bin_frequency(0, 8), 0.0);
        assert!((bin_frequency(1, 8) - PI / 4.0).abs() < 1e-15);
        assert!((bin_frequency(4, 8) + PI).abs() < 1e-15);
        assert!((bin_frequency(7, 8) + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn window_must_fit() {
        let f = ScalarField::filled(20, 20, 1.0).unwrap();
        assert!(matches!(
            dft_moment_oracle(&f, (10, 10), 3.0, 2, 0),
            Err(CstError::WindowTooLarge { .. })
        ));
        assert!(dft_moment_oracle(&f, (10, 10), 2.0, 2, 0).is_ok());
    }

    #[test]
    fn constant_image_has_zero_moments() {
        let f = ScalarField::filled(40, 40, 0.8).unwrap();
        for (p, q) in [(1, 1), (2, 0), (2, 2), (4, 0)] {
            let m = dft_moment_oracle(&f, (20, 20), 3.0, p, q).unwrap();
            assert!(m.norm() < 1e-20, "({p},{q}): {m}");
        }
    }

    #[test]
    fn dense_kernel_vanishes_at_origin() {
        let k = dense_complex_dog(2, 1.0, 3);
        assert_eq!(k[3 * 7 + 3], Complex64::new(0.0, 0.0));
    }
}
