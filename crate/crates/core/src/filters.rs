//! Complex derivative-of-Gaussian kernels and their separable decompositions.
//!
//! The order-`n` kernel is `(Dx + i Dy)^n G(x, y)`, which has the closed form
//! `(-(x + i y) / sigma^2)^n G(x, y)`. Expanding `(x + i y)^n` binomially gives
//! `n + 1` separable terms `binom(n, k) (-1/sigma^2)^n i^(n-k) * x^k g(x) * y^(n-k) g(y)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{CstError, Result};

/// One separable term `coeff * vert(y) * horiz(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTerm {
    pub coeff: Complex64,
    pub horiz: Vec<f64>,
    pub vert: Vec<f64>,
}

/// A 2-D kernel written as a sum of rank-one real profiles with complex weights.
/// Profiles are indexed from `-radius` to `radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableKernel {
    terms: Vec<KernelTerm>,
    radius: usize,
}

impl SeparableKernel {
    pub fn new(terms: Vec<KernelTerm>, radius: usize) -> Result<Self> {
        let len = 2 * radius + 1;
        if terms.is_empty()
            || terms
                .iter()
                .any(|t| t.horiz.len() != len || t.vert.len() != len)
        {
            return Err(CstError::ShapeMismatch(format!(
                "separable kernel profiles must all have length {len}"
            )));
        }
        Ok(Self { terms, radius })
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn size(&self) -> usize {
        2 * self.radius + 1
    }

    /// True when every coefficient is real, so real inputs give real outputs.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.im == 0.0)
    }

    /// Dense `(2r+1) x (2r+1)` kernel, row-major, `[0]` at offset `(-r, -r)`.
    pub fn expand(&self) -> Vec<Complex64> {
        let s = self.size();
        let mut out = vec![Complex64::new(0.0, 0.0); s * s];
        for t in &self.terms {
            for (v, &kv) in t.vert.iter().enumerate() {
                for (u, &ku) in t.horiz.iter().enumerate() {
                    out[v * s + u] += t.coeff * (kv * ku);
                }
            }
        }
        out
    }

    /// Kernel value at offset `(dx, dy)` from the center.
    pub fn at(&self, dx: isize, dy: isize) -> Complex64 {
        let r = self.radius as isize;
        if dx.abs() > r || dy.abs() > r {
            return Complex64::new(0.0, 0.0);
        }
        let (u, v) = ((dx + r) as usize, (dy + r) as usize);
        self.terms
            .iter()
            .map(|t| t.coeff * (t.vert[v] * t.horiz[u]))
            .sum()
    }

    /// Sum of absolute values of the expanded taps.
    pub fn l1_norm(&self) -> f64 {
        self.expand().iter().map(|c| c.norm()).sum()
    }

    /// Complex conjugate kernel: mirrors the imaginary axis of every coefficient.
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| KernelTerm {
                    coeff: t.coeff.conj(),
                    ..t.clone()
                })
                .collect(),
            radius: self.radius,
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(CstError::InvalidSigma(sigma))
    }
}

/// `exp(-t^2 / 2 sigma^2) / sqrt(2 pi sigma^2)` on `-radius..=radius`.
fn gaussian_profile(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let norm = 1.0 / (2.0 * PI * sigma * sigma).sqrt();
    (-r..=r)
        .map(|t| {
            let t = t as f64;
            norm * (-t * t / (2.0 * sigma * sigma)).exp()
        })
        .collect()
}

/// Truncated Gaussian pooling kernel, renormalized to unit sum.
///
/// `radius` below 1 is raised to 1 so the kernel always has three taps per axis.
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Result<SeparableKernel> {
    check_sigma(sigma)?;
    let radius = radius.max(1);
    let mut g = gaussian_profile(sigma, radius);
    let sum: f64 = g.iter().sum();
    g.iter_mut().for_each(|v| *v /= sum);
    SeparableKernel::new(
        vec![KernelTerm {
            coeff: Complex64::new(1.0, 0.0),
            horiz: g.clone(),
            vert: g,
        }],
        radius,
    )
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// `i^p` for `p >= 0`.
fn i_pow(p: u32) -> Complex64 {
    match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Order-`n` complex derivative of Gaussian, `(Dx + i Dy)^n G_sigma^2`, as `n + 1` separable terms.
///
/// Built from the analytic closed form sampled on the integer grid, not by
/// differencing a sampled Gaussian. Odd orders are odd under `(x, y) -> (-x, -y)`,
/// even orders are even, and every tap sum vanishes on the symmetric grid.
/// With `sigma` near 0.5 the profiles are only a few taps wide, so the kernel
/// approximates the continuous derivative only coarsely.
pub fn complex_dog_kernel(n: u32, sigma: f64, radius: usize) -> Result<SeparableKernel> {
    if n == 0 {
        return Err(CstError::InvalidOrder(
            "derivative order must be >= 1".into(),
        ));
    }
    check_sigma(sigma)?;
    let radius = radius.max(1);
    let g = gaussian_profile(sigma, radius);
    let r = radius as isize;
    let moment = |p: u32| -> Vec<f64> {
        (-r..=r)
            .zip(&g)
            .map(|(t, &gv)| (t as f64).powi(p as i32) * gv)
            .collect()
    };
    let scale = (-1.0 / (sigma * sigma)).powi(n as i32);
    let terms = (0..=n)
        .map(|k| KernelTerm {
            coeff: i_pow(n - k) * (binomial(n, k) * scale),
            horiz: moment(k),
            vert: moment(n - k),
        })
        .collect();
    SeparableKernel::new(terms, radius)
}
