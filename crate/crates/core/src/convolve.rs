//! Same-size separable convolution under a boundary policy.
//!
//! `out(x, y) = sum_{u,v} K(u, v) f(x - u, y - v)`: a true convolution, so the
//! impulse response is the kernel itself. Each output sample accumulates its taps
//! in a fixed order (offset `-r` to `r`, horizontal pass first, terms in kernel
//! order), so results do not depend on how rows are split across threads.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CstError, Result};
use crate::field::{ComplexField, Field, Sample, ScalarField};
use crate::filters::SeparableKernel;
use crate::params::Boundary;

fn check_fit<T: Sample>(f: &Field<T>, radius: usize) -> Result<()> {
    if radius >= f.width().min(f.height()) {
        return Err(CstError::KernelTooLarge {
            radius,
            width: f.width(),
            height: f.height(),
        });
    }
    Ok(())
}

/// Rows below this many samples are not worth splitting across threads.
const PAR_MIN_LEN: usize = 4096;

fn horizontal_pass(src: &[f64], width: usize, profile: &[f64], boundary: Boundary) -> Vec<f64> {
    let r = (profile.len() / 2) as isize;
    let mut out = vec![0.0; src.len()];
    let body = |(row_out, row_in): (&mut [f64], &[f64])| {
        for (x, o) in row_out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &p) in profile.iter().enumerate() {
                let u = k as isize - r;
                if let Some(sx) = boundary.resolve(x as isize - u, width) {
                    acc += p * row_in[sx];
                }
            }
            *o = acc;
        }
    };
    if src.len() >= PAR_MIN_LEN {
        out.par_chunks_mut(width)
            .zip(src.par_chunks(width))
            .for_each(body);
    } else {
        out.chunks_mut(width).zip(src.chunks(width)).for_each(body);
    }
    out
}

fn vertical_pass(
    src: &[f64],
    width: usize,
    height: usize,
    profile: &[f64],
    boundary: Boundary,
) -> Vec<f64> {
    let r = (profile.len() / 2) as isize;
    let mut out = vec![0.0; src.len()];
    let body = |(y, row_out): (usize, &mut [f64])| {
        for (k, &p) in profile.iter().enumerate() {
            let v = k as isize - r;
            if let Some(sy) = boundary.resolve(y as isize - v, height) {
                let row_in = &src[sy * width..(sy + 1) * width];
                for (o, &s) in row_out.iter_mut().zip(row_in) {
                    *o += p * s;
                }
            }
        }
    };
    if src.len() >= PAR_MIN_LEN {
        out.par_chunks_mut(width).enumerate().for_each(body);
    } else {
        out.chunks_mut(width).enumerate().for_each(body);
    }
    out
}

/// Applies each term's profiles to a real plane and returns the per-term results.
fn term_planes(
    src: &[f64],
    width: usize,
    height: usize,
    k: &SeparableKernel,
    boundary: Boundary,
) -> Vec<Vec<f64>> {
    k.terms()
        .iter()
        .map(|t| {
            let h = horizontal_pass(src, width, &t.horiz, boundary);
            vertical_pass(&h, width, height, &t.vert, boundary)
        })
        .collect()
}

/// Convolves a real field with a (possibly complex) separable kernel.
pub fn convolve_separable(
    f: &ScalarField,
    k: &SeparableKernel,
    boundary: Boundary,
) -> Result<ComplexField> {
    check_fit(f, k.radius())?;
    let (w, h) = f.dims();
    let planes = term_planes(f.data(), w, h, k, boundary);
    let mut out = vec![Complex64::new(0.0, 0.0); w * h];
    for (t, plane) in k.terms().iter().zip(&planes) {
        for (o, &p) in out.iter_mut().zip(plane) {
            *o += t.coeff * p;
        }
    }
    Ok(Field::from_parts(w, h, out))
}

/// Convolves a complex field with a separable kernel.
pub fn convolve_separable_complex(
    f: &ComplexField,
    k: &SeparableKernel,
    boundary: Boundary,
) -> Result<ComplexField> {
    check_fit(f, k.radius())?;
    let (w, h) = f.dims();
    let re: Vec<f64> = f.data().iter().map(|c| c.re).collect();
    let im: Vec<f64> = f.data().iter().map(|c| c.im).collect();
    let re_planes = term_planes(&re, w, h, k, boundary);
    let im_planes = term_planes(&im, w, h, k, boundary);
    let mut out = vec![Complex64::new(0.0, 0.0); w * h];
    for ((t, pr), pi) in k.terms().iter().zip(&re_planes).zip(&im_planes) {
        for ((o, &a), &b) in out.iter_mut().zip(pr).zip(pi) {
            *o += t.coeff * Complex64::new(a, b);
        }
    }
    Ok(Field::from_parts(w, h, out))
}

/// Real-output convolution; the kernel must have purely real coefficients.
pub fn convolve_real(
    f: &ScalarField,
    k: &SeparableKernel,
    boundary: Boundary,
) -> Result<ScalarField> {
    if !k.is_real() {
        return Err(CstError::ShapeMismatch(
            "convolve_real needs a kernel with real coefficients".into(),
        ));
    }
    check_fit(f, k.radius())?;
    let (w, h) = f.dims();
    let planes = term_planes(f.data(), w, h, k, boundary);
    let mut out = vec![0.0; w * h];
    for (t, plane) in k.terms().iter().zip(&planes) {
        for (o, &p) in out.iter_mut().zip(plane) {
            *o += t.coeff.re * p;
        }
    }
    Ok(Field::from_parts(w, h, out))
}
