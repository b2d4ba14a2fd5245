//! Synthetic test patterns: planar waves, sums of waves, and seeded white noise.

use std::f64::consts::PI;

use crate::error::{CstError, Result};
use crate::field::ScalarField;

/// `amplitude * cos((2 pi / wavelength) (x cos theta + y sin theta) + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpec {
    pub amplitude: f64,
    /// Period in pixels; must exceed 2 (Nyquist).
    pub wavelength: f64,
    /// Direction of the wave vector in degrees, measured from +x toward +y (downward).
    pub theta: f64,
    /// Phase offset in radians.
    pub phase: f64,
}

impl WaveSpec {
    pub fn new(wavelength: f64, theta: f64) -> Self {
        Self {
            amplitude: 1.0,
            wavelength,
            theta,
            phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength.is_finite() && self.wavelength > 2.0) {
            return Err(CstError::InvalidWave(format!(
                "wavelength {} must exceed 2 pixels",
                self.wavelength
            )));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(CstError::InvalidWave(format!(
                "amplitude {} must be > 0",
                self.amplitude
            )));
        }
        if !self.theta.is_finite() || !self.phase.is_finite() {
            return Err(CstError::InvalidWave(
                "theta and phase must be finite".into(),
            ));
        }
        Ok(())
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let t = self.theta.to_radians();
        let k = 2.0 * PI / self.wavelength;
        self.amplitude * (k * (x * t.cos() + y * t.sin()) + self.phase).cos()
    }
}

pub fn planar_wave(w: &WaveSpec, width: usize, height: usize) -> Result<ScalarField> {
    crossed_waves(std::slice::from_ref(w), width, height)
}

/// Pointwise sum of planar waves; two perpendicular waves give a 2-folded pattern.
pub fn crossed_waves(specs: &[WaveSpec], width: usize, height: usize) -> Result<ScalarField> {
    if specs.is_empty() {
        return Err(CstError::InvalidWave("no waves given".into()));
    }
    for s in specs {
        s.validate()?;
    }
    ScalarField::from_fn(width, height, |x, y| {
        specs.iter().map(|s| s.eval(x as f64, y as f64)).sum()
    })
}

/// SplitMix64: `state += 0x9E3779B97F4A7C15`, then two xor-shift-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Uniform noise in `[0, 1)`, filled row-major from a [`SplitMix64`] seeded with `seed`.
pub fn white_noise(width: usize, height: usize, seed: u64) -> Result<ScalarField> {
    let mut rng = SplitMix64::new(seed);
    ScalarField::from_fn(width, height, |_, _| rng.next_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 from the published SplitMix64 reference.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn wave_examples() {
        let w = WaveSpec::new(8.0, 0.0);
        let f = planar_wave(&w, 32, 32).unwrap();
        assert_eq!(f.get(0, 0), 1.0);
        for x in 0..32 {
            for y in 1..32 {
                assert_eq!(f.get(x, y), f.get(x, 0));
            }
        }
        for y in 0..32 {
            for x in 0..24 {
                assert!((f.get(x + 8, y) - f.get(x, y)).abs() < 1e-12);
            }
        }
        let g = planar_wave(&WaveSpec::new(8.0, 90.0), 32, 32).unwrap();
        for y in 0..32 {
            for x in 0..32 {
                assert!((g.get(x, y) - f.get(y, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wave_validation() {
        assert!(matches!(
            planar_wave(&WaveSpec::new(2.0, 0.0), 8, 8),
            Err(CstError::InvalidWave(_))
        ));
        let mut w = WaveSpec::new(8.0, 0.0);
        w.amplitude = 0.0;
        assert!(planar_wave(&w, 8, 8).is_err());
        assert!(crossed_waves(&[], 8, 8).is_err());
    }

    #[test]
    fn crossed_single_is_planar() {
        let w = WaveSpec {
            amplitude: 2.0,
            wavelength: 7.0,
            theta: 33.0,
            phase: 0.4,
        };
        assert_eq!(
            crossed_waves(&[w], 20, 16).unwrap(),
            planar_wave(&w, 20, 16).unwrap()
        );
    }

    #[test]
    fn noise_determinism_and_mean() {
        let a = white_noise(64, 64, 1).unwrap();
        assert_eq!(a, white_noise(64, 64, 1).unwrap());
        assert_ne!(a, white_noise(64, 64, 2).unwrap());
        let big = white_noise(256, 256, 3).unwrap();
        assert!((big.mean() - 0.5).abs() < 0.01);
        assert!(big.min() >= 0.0 && big.max() < 1.0);
    }
}
