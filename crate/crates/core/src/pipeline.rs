//! Order-`n` complex structure tensor: derivative filtering, magnitude-emphasized
//! angle multiplication, then Gaussian pooling.
//!
//! For order `n` the three steps are
//! 1. `r = f * Gamma(n, sigma1)`,
//! 2. `r_a = |r|^gamma exp(2i arg r)` and `r_b = |r|^gamma`,
//! 3. `I_2n,0 = r_a * G(sigma2)` and `I_n,n = r_b * G(sigma2)`.
//!
//! Step 3 pools with a nonnegative kernel, so `|I_2n,0| <= I_n,n` pointwise.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::convolve::{convolve_real, convolve_separable, convolve_separable_complex};
use crate::error::{CstError, Result};
use crate::feature::CstFeatureMap;
use crate::field::{ComplexField, Field, ScalarField};
use crate::filters::{complex_dog_kernel, gaussian_kernel, SeparableKernel};
use crate::params::{validate_params, CstParams};

/// Responses at or below this magnitude have no defined angle and are treated as zero.
pub const ZERO_RESPONSE: f64 = 1e-300;

/// Step-1 responses smaller than this fraction of `||Gamma||_1 * max|f|` are
/// indistinguishable from convolution round-off and are treated as zero.
pub const RELATIVE_RESPONSE_FLOOR: f64 = 1e-12;

#[inline]
fn power_sample(c: Complex64, gamma: f64, floor: f64) -> (Complex64, f64) {
    let m = c.norm();
    if m <= floor || m <= ZERO_RESPONSE {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let unit = c / m;
    let weight = m.powf(gamma);
    (unit * unit * weight, weight)
}

/// Pointwise `r_a = |r|^gamma exp(2i arg r)`, `r_b = |r|^gamma`, with zero output where `r = 0`.
pub fn complex_power_step(r: &ComplexField, gamma: f64) -> Result<(ComplexField, ScalarField)> {
    complex_power_step_with_floor(r, gamma, 0.0)
}

/// As [`complex_power_step`], additionally zeroing responses with `|r| <= floor`.
pub fn complex_power_step_with_floor(
    r: &ComplexField,
    gamma: f64,
    floor: f64,
) -> Result<(ComplexField, ScalarField)> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(CstError::InvalidGamma(gamma));
    }
    let (ra, rb): (Vec<_>, Vec<_>) = r
        .data()
        .iter()
        .map(|&c| power_sample(c, gamma, floor))
        .unzip();
    let (w, h) = r.dims();
    // large |r| with large gamma can overflow
    let ra = Field::new(w, h, ra)?;
    let rb = Field::new(w, h, rb)?;
    Ok((ra, rb))
}

/// Runs the three steps with explicit kernels.
pub(crate) fn cst_with_kernels(
    f: &ScalarField,
    order: u32,
    derivative: &SeparableKernel,
    pooling: &SeparableKernel,
    p: &CstParams,
) -> Result<CstFeatureMap> {
    let r = convolve_separable(f, derivative, p.boundary)?;
    let floor = RELATIVE_RESPONSE_FLOOR * derivative.l1_norm() * f.max_abs();
    let (ra, rb) = complex_power_step_with_floor(&r, p.gamma, floor)?;
    let i2n0 = convolve_separable_complex(&ra, pooling, p.boundary)?;
    let inn = convolve_real(&rb, pooling, p.boundary)?;
    CstFeatureMap::new(order, i2n0, inn, p.clone())
}

/// Derivative kernel of order `n` at the configured scale.
pub fn derivative_kernel(n: u32, p: &CstParams) -> Result<SeparableKernel> {
    complex_dog_kernel(n, p.sigma1_for(n), p.radius1(n))
}

/// Pooling Gaussian at the configured scale.
pub fn pooling_kernel(p: &CstParams) -> Result<SeparableKernel> {
    gaussian_kernel(p.sigma2, p.radius2())
}

/// Computes `(I_2n,0, I_n,n)` for one order `n` listed in `p.orders`.
pub fn cst_order(f: &ScalarField, n: u32, p: &CstParams) -> Result<CstFeatureMap> {
    validate_params(p)?;
    if !p.orders.contains(&n) {
        return Err(CstError::InvalidOrder(format!(
            "order {n} is not in the configured order set"
        )));
    }
    cst_with_kernels(f, n, &derivative_kernel(n, p)?, &pooling_kernel(p)?, p)
}

/// One feature map per configured order, in ascending order.
pub fn cst_extract(f: &ScalarField, p: &CstParams) -> Result<Vec<CstFeatureMap>> {
    validate_params(p)?;
    let pooling = pooling_kernel(p)?;
    let orders: Vec<u32> = p.orders.iter().copied().collect();
    orders
        .par_iter()
        .map(|&n| cst_with_kernels(f, n, &derivative_kernel(n, p)?, &pooling, p))
        .collect()
}
