//! Pipeline configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{CstError, Result};

/// How samples outside the field are synthesized during convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    /// Mirror about the edge sample without repeating it: `-1 -> 1`.
    #[default]
    Reflect,
    /// Repeat the edge sample.
    Replicate,
    /// Treat everything outside as zero.
    Zero,
}

impl Boundary {
    /// Maps a possibly out-of-range index into `0..len`, or `None` for zero padding.
    /// Requires `len > 1` for reflect unless the index is already in range.
    #[inline]
    pub fn resolve(self, i: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        if (0..n).contains(&i) {
            return Some(i as usize);
        }
        match self {
            Boundary::Zero => None,
            Boundary::Replicate => Some(i.clamp(0, n - 1) as usize),
            Boundary::Reflect => {
                if n == 1 {
                    return Some(0);
                }
                let period = 2 * (n - 1);
                let mut j = i.rem_euclid(period);
                if j >= n {
                    j = period - j;
                }
                Some(j as usize)
            }
        }
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "reflect" => Ok(Boundary::Reflect),
            "replicate" => Ok(Boundary::Replicate),
            "zero" => Ok(Boundary::Zero),
            other => Err(format!("unknown boundary policy '{other}'")),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Reflect => "reflect",
            Boundary::Replicate => "replicate",
            Boundary::Zero => "zero",
        })
    }
}

pub const DEFAULT_SIGMA1: f64 = 0.6;
pub const DEFAULT_SIGMA2: f64 = 4.0;
pub const DEFAULT_GAMMA: f64 = 0.1;
pub const DEFAULT_TRUNCATION: f64 = 4.0;

/// Kernel radius `max(1, ceil(truncation * sigma))`.
pub fn kernel_radius(sigma: f64, truncation: f64) -> usize {
    ((truncation * sigma).ceil() as usize).max(1)
}

/// Parameters of the complex structure tensor pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct CstParams {
    /// Derivation scale of the first filter, in pixels.
    pub sigma1: f64,
    /// Pooling scale, in pixels.
    pub sigma2: f64,
    /// Magnitude exponent applied before pooling.
    pub gamma: f64,
    /// Symmetry orders `n >= 1`.
    pub orders: BTreeSet<u32>,
    pub boundary: Boundary,
    /// Kernel radius is `ceil(truncation * sigma)`.
    pub truncation: f64,
    /// Optional per-order replacement for `sigma1`.
    pub sigma1_overrides: BTreeMap<u32, f64>,
}

impl Default for CstParams {
    fn default() -> Self {
        Self {
            sigma1: DEFAULT_SIGMA1,
            sigma2: DEFAULT_SIGMA2,
            gamma: DEFAULT_GAMMA,
            orders: BTreeSet::from([1]),
            boundary: Boundary::Reflect,
            truncation: DEFAULT_TRUNCATION,
            sigma1_overrides: BTreeMap::new(),
        }
    }
}

impl CstParams {
    pub fn with_orders(mut self, orders: impl IntoIterator<Item = u32>) -> Self {
        self.orders = orders.into_iter().collect();
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_sigmas(mut self, sigma1: f64, sigma2: f64) -> Self {
        self.sigma1 = sigma1;
        self.sigma2 = sigma2;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn sigma1_for(&self, order: u32) -> f64 {
        self.sigma1_overrides
            .get(&order)
            .copied()
            .unwrap_or(self.sigma1)
    }

    pub fn radius1(&self, order: u32) -> usize {
        kernel_radius(self.sigma1_for(order), self.truncation)
    }

    pub fn radius2(&self) -> usize {
        kernel_radius(self.sigma2, self.truncation)
    }

    /// Border width excluded from statistics: `radius1 + radius2`, maximized over orders.
    pub fn interior_margin(&self) -> usize {
        let r1 = self
            .orders
            .iter()
            .map(|&n| self.radius1(n))
            .max()
            .unwrap_or_else(|| kernel_radius(self.sigma1, self.truncation));
        r1 + self.radius2()
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(CstError::InvalidSigma(sigma))
    }
}

/// Checks every [`CstParams`] invariant.
pub fn validate_params(p: &CstParams) -> Result<()> {
    check_sigma(p.sigma1)?;
    check_sigma(p.sigma2)?;
    for &s in p.sigma1_overrides.values() {
        check_sigma(s)?;
    }
    if !(p.gamma.is_finite() && p.gamma >= 0.0) {
        return Err(CstError::InvalidGamma(p.gamma));
    }
    if p.orders.is_empty() {
        return Err(CstError::InvalidOrder("no orders requested".into()));
    }
    if p.orders.contains(&0) {
        return Err(CstError::InvalidOrder("orders must be >= 1".into()));
    }
    if !(p.truncation.is_finite() && p.truncation > 0.0) {
        return Err(CstError::InvalidTruncation(p.truncation));
    }
    Ok(())
}
