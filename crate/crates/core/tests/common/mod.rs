#![allow(dead_code)]

use cst_core::stats::{circular_median, median};
use cst_core::{crossed_waves, CstFeatureMap, WaveSpec};

pub fn crossed(thetas: &[f64], wavelength: f64, size: usize) -> cst_core::ScalarField {
    let specs: Vec<WaveSpec> = thetas
        .iter()
        .map(|&t| WaveSpec::new(wavelength, t))
        .collect();
    crossed_waves(&specs, size, size).unwrap()
}

/// Interior median of `|I_2n,0| / I_n,n` over pixels with positive `I_n,n`.
pub fn certainty(m: &CstFeatureMap) -> f64 {
    let margin = m.interior_margin();
    let mag = m.i2n0().norm().interior(margin);
    let bound = m.inn().interior(margin);
    let ratios: Vec<f64> = mag
        .iter()
        .zip(&bound)
        .filter(|(_, &b)| b > 0.0)
        .map(|(a, b)| a / b)
        .collect();
    median(&ratios).unwrap()
}

/// Interior circular median of `arg I_2n,0` in degrees.
pub fn angle(m: &CstFeatureMap) -> f64 {
    let a = m.i2n0().arg_degrees().interior(m.interior_margin());
    circular_median(&a, 360.0).unwrap()
}
