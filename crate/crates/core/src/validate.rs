//! Self-check suite: bound invariant, structural exactness, oracle equivalence
//! and angle equivariance on synthetic inputs.

use std::time::Instant;

use num_complex::Complex64;

use crate::convolve::convolve_separable;
use crate::error::Result;
use crate::feature::CstFeatureMap;
use crate::field::ScalarField;
use crate::filters::{complex_dog_kernel, gaussian_kernel};
use crate::oracle::{dense_complex_dog, dense_convolve, st_gradient_oracle};
use crate::params::{kernel_radius, Boundary, CstParams};
use crate::pipeline::{cst_with_kernels, derivative_kernel, pooling_kernel};
use crate::stats::{circular_diff, circular_median, median};
use crate::synth::{crossed_waves, planar_wave, white_noise, WaveSpec};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Run only the noise bound check.
    pub quick: bool,
    /// Conjugate the derivative kernel in the angle checks, which must then fail.
    pub inject_sign_fault: bool,
}

const SWEEP: [f64; 7] = [0.0, 15.0, 30.0, 45.0, 60.0, 90.0, 120.0];

/// Interior median of `|I_2n,0| / I_n,n` over pixels with `I_n,n > 0`.
pub fn interior_certainty(m: &CstFeatureMap) -> f64 {
    let margin = m.interior_margin();
    let mag = m.i2n0().norm().interior(margin);
    let bound = m.inn().interior(margin);
    let ratios: Vec<f64> = mag
        .iter()
        .zip(&bound)
        .filter(|(_, &b)| b > 0.0)
        .map(|(a, b)| a / b)
        .collect();
    median(&ratios).unwrap_or(0.0)
}

/// Interior circular median of `arg I_2n,0`, degrees in `[0, 360)`.
pub fn interior_angle(m: &CstFeatureMap) -> f64 {
    let a = m.i2n0().arg_degrees().interior(m.interior_margin());
    circular_median(&a, 360.0).unwrap_or(0.0)
}

fn map_with_fault(f: &ScalarField, n: u32, p: &CstParams, fault: bool) -> Result<CstFeatureMap> {
    let mut k = derivative_kernel(n, p)?;
    if fault {
        k = k.conj();
    }
    cst_with_kernels(f, n, &k, &pooling_kernel(p)?, p)
}

fn wave(lambda: f64, theta: f64, size: usize) -> Result<ScalarField> {
    planar_wave(&WaveSpec::new(lambda, theta), size, size)
}

fn crossed(thetas: &[f64], size: usize) -> Result<ScalarField> {
    let specs: Vec<_> = thetas.iter().map(|&t| WaveSpec::new(8.0, t)).collect();
    crossed_waves(&specs, size, size)
}

fn noise_bound(seeds: u64, size: usize) -> Result<(bool, String)> {
    let p = CstParams::default().with_orders([1, 2, 3]);
    let mut violations = 0;
    for seed in 1..=seeds {
        let f = white_noise(size, size, seed)?;
        for n in 1..=3 {
            violations += map_with_fault(&f, n, &p, false)?.bound_violations();
        }
    }
    Ok((
        violations == 0,
        format!("{violations} violations over {seeds} fields, n=1..3"),
    ))
}

fn structural() -> Result<(bool, String)> {
    let mut kernel_err: f64 = 0.0;
    let mut dc: f64 = 0.0;
    for n in 1..=3 {
        for sigma in [0.6, 1.5, 4.0] {
            let r = kernel_radius(sigma, 4.0);
            let k = complex_dog_kernel(n, sigma, r)?;
            let expanded = k.expand();
            let direct = dense_complex_dog(n, sigma, r);
            for (a, b) in expanded.iter().zip(&direct) {
                kernel_err = kernel_err.max((a - b).norm());
            }
            dc = dc.max(expanded.iter().sum::<Complex64>().norm());
        }
    }
    let mut unit: f64 = 0.0;
    for sigma in [0.6, 1.5, 4.0] {
        let g = gaussian_kernel(sigma, kernel_radius(sigma, 4.0))?;
        unit = unit.max((g.expand().iter().sum::<Complex64>() - 1.0).norm());
    }
    let f = white_noise(32, 32, 11)?;
    let k = complex_dog_kernel(1, 0.6, kernel_radius(0.6, 4.0))?;
    let fast = convolve_separable(&f, &k, Boundary::Reflect)?;
    let slow = dense_convolve(&f.to_complex(), &k.expand(), k.radius(), Boundary::Reflect);
    let conv_err = fast
        .data()
        .iter()
        .zip(slow.data())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let ok = kernel_err < 1e-12 && dc < 1e-12 && unit < 1e-12 && conv_err < 1e-10;
    Ok((
        ok,
        format!("kernel {kernel_err:.1e}, conv {conv_err:.1e}, dc {dc:.1e}, unit-sum {unit:.1e}"),
    ))
}

fn saturation() -> Result<(bool, String)> {
    let p = CstParams::default();
    let mut worst = f64::INFINITY;
    for lambda in [6.0, 8.0, 12.0] {
        worst = worst.min(interior_certainty(&map_with_fault(
            &wave(lambda, 30.0, 128)?,
            1,
            &p,
            false,
        )?));
    }
    Ok((worst >= 0.99, format!("min certainty {worst:.6}")))
}

fn double_angle(fault: bool) -> Result<(bool, String)> {
    let p = CstParams::default();
    let mut worst: f64 = 0.0;
    for theta in SWEEP {
        let m = map_with_fault(&wave(8.0, theta, 128)?, 1, &p, fault)?;
        worst = worst.max(circular_diff(interior_angle(&m), 2.0 * theta, 360.0).abs());
    }
    Ok((worst < 1.0, format!("max error {worst:.3} deg")))
}

fn four_angle(fault: bool) -> Result<(bool, String)> {
    let p = CstParams::default().with_orders([2]).with_sigmas(1.0, 4.0);
    let mut worst: f64 = 0.0;
    for theta in SWEEP {
        let m = map_with_fault(&crossed(&[theta, theta + 90.0], 128)?, 2, &p, fault)?;
        worst = worst.max(circular_diff(interior_angle(&m), 4.0 * theta, 360.0).abs());
    }
    Ok((
        worst < 2.0,
        format!("max error {worst:.3} deg (sigma1 = 1.0)"),
    ))
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let p = CstParams::default().with_gamma(2.0);
    let inputs = [
        ("wave", wave(8.0, 30.0, 96)?),
        ("crossed", crossed(&[0.0, 90.0], 96)?),
        ("noise", white_noise(64, 64, 17)?),
    ];
    let mut worst: f64 = 0.0;
    for (_, f) in &inputs {
        let a = map_with_fault(f, 1, &p, false)?;
        let b = st_gradient_oracle(f, &p)?;
        let m = a.interior_margin();
        let scale = b.inn().interior(m).into_iter().fold(0.0, f64::max);
        let d20 = a
            .i2n0()
            .interior(m)
            .iter()
            .zip(b.i2n0().interior(m))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        let d11 = a
            .inn()
            .interior(m)
            .iter()
            .zip(b.inn().interior(m))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        worst = worst.max(d20.max(d11) / scale);
    }
    Ok((worst < 1e-6, format!("max relative error {worst:.2e}")))
}

fn selectivity() -> Result<(bool, String)> {
    let p = CstParams::default().with_orders([1, 2]);
    let f = crossed(&[0.0, 90.0], 128)?;
    let c1 = interior_certainty(&map_with_fault(&f, 1, &p, false)?);
    let c2 = interior_certainty(&map_with_fault(&f, 2, &p, false)?);
    Ok((
        c1 <= 0.2 && c2 >= 0.9,
        format!("|I20|/I11 {c1:.4}, |I40|/I22 {c2:.4}"),
    ))
}

/// Runs the suite and returns one result per check.
pub fn run_suite(opts: ValidateOptions) -> Result<Vec<CheckResult>> {
    type Check = Box<dyn Fn() -> Result<(bool, String)>>;
    let fault = opts.inject_sign_fault;
    let mut checks: Vec<(&'static str, Check)> = vec![];
    if opts.quick {
        checks.push(("noise-bound", Box::new(|| noise_bound(3, 128))));
    } else {
        checks.push(("noise-bound", Box::new(|| noise_bound(10, 256))));
        checks.push(("structural-exactness", Box::new(structural)));
        checks.push(("linear-saturation", Box::new(saturation)));
        checks.push(("double-angle-n1", Box::new(move || double_angle(fault))));
        checks.push(("four-angle-n2", Box::new(move || four_angle(fault))));
        checks.push(("oracle-equivalence", Box::new(oracle_equivalence)));
        checks.push(("folded-selectivity", Box::new(selectivity)));
    }
    checks
        .into_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (passed, detail) = check()?;
            Ok(CheckResult {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}
