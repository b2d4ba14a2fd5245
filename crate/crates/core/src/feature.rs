//! Output bundles: per-order feature maps and labelled channel stacks.

use std::fmt;
use std::str::FromStr;

use crate::error::{CstError, Result};
use crate::field::{ComplexField, ScalarField};
use crate::params::CstParams;

/// The pair `(I_2n,0, I_n,n)` for one symmetry order, with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct CstFeatureMap {
    order: u32,
    i2n0: ComplexField,
    inn: ScalarField,
    params: CstParams,
}

impl CstFeatureMap {
    pub fn new(
        order: u32,
        i2n0: ComplexField,
        inn: ScalarField,
        params: CstParams,
    ) -> Result<Self> {
        if !i2n0.same_dims(&inn) {
            return Err(CstError::ShapeMismatch(format!(
                "i2n0 is {}x{}, inn is {}x{}",
                i2n0.width(),
                i2n0.height(),
                inn.width(),
                inn.height()
            )));
        }
        Ok(Self {
            order,
            i2n0,
            inn,
            params,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Complex moment `I_2n,0`: magnitude is certainty, argument is `2n` times the orientation.
    pub fn i2n0(&self) -> &ComplexField {
        &self.i2n0
    }

    /// Real moment `I_n,n`, an upper bound on `|I_2n,0|`.
    pub fn inn(&self) -> &ScalarField {
        &self.inn
    }

    pub fn params(&self) -> &CstParams {
        &self.params
    }

    pub fn dims(&self) -> (usize, usize) {
        self.inn.dims()
    }

    /// Border width excluded from statistics for this map.
    pub fn interior_margin(&self) -> usize {
        self.params.radius1(self.order) + self.params.radius2()
    }

    /// Number of pixels where `|I_2n,0| > I_n,n + 1e-9 * max(I_n,n)` or `I_n,n < 0`.
    pub fn bound_violations(&self) -> usize {
        let eps = 1e-9 * self.inn.max().max(0.0);
        self.i2n0
            .data()
            .iter()
            .zip(self.inn.data())
            .filter(|(c, &b)| b < 0.0 || c.norm() > b + eps)
            .count()
    }
}

/// Name of one exported channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelLabel {
    /// The grayscale input.
    Bw,
    /// `Re(I_2n,0)`.
    Re(u32),
    /// `Im(I_2n,0)`.
    Im(u32),
    /// `|I_2n,0|`.
    Mag(u32),
    /// `arg(I_2n,0)` in degrees, `[0, 360)`.
    Ang(u32),
    /// `I_n,n`.
    I11(u32),
}

impl ChannelLabel {
    /// The order this channel depends on, if any.
    pub fn order(self) -> Option<u32> {
        match self {
            ChannelLabel::Bw => None,
            ChannelLabel::Re(n)
            | ChannelLabel::Im(n)
            | ChannelLabel::Mag(n)
            | ChannelLabel::Ang(n)
            | ChannelLabel::I11(n) => Some(n),
        }
    }
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelLabel::Bw => f.write_str("BW"),
            ChannelLabel::Re(n) => write!(f, "RE({n})"),
            ChannelLabel::Im(n) => write!(f, "IM({n})"),
            ChannelLabel::Mag(n) => write!(f, "MAG({n})"),
            ChannelLabel::Ang(n) => write!(f, "ANG({n})"),
            ChannelLabel::I11(n) => write!(f, "I11({n})"),
        }
    }
}

impl FromStr for ChannelLabel {
    type Err = CstError;

    /// Accepts `BW`, `RE(2)`, and the shorthand `RE2`; a bare `RE` means order 1.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        if t == "BW" {
            return Ok(ChannelLabel::Bw);
        }
        let unknown = || CstError::UnknownLabel(s.to_string());
        let split = t
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(t.len());
        // I11 has digits in its name
        let (kind, rest) = if let Some(rest) = t.strip_prefix("I11") {
            ("I11", rest)
        } else {
            (&t[..split], &t[split..])
        };
        let rest = rest.trim();
        let digits = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(rest)
            .trim();
        let order = if digits.is_empty() {
            1
        } else {
            digits.parse::<u32>().map_err(|_| unknown())?
        };
        if order == 0 {
            return Err(unknown());
        }
        match kind {
            "RE" => Ok(ChannelLabel::Re(order)),
            "IM" => Ok(ChannelLabel::Im(order)),
            "MAG" => Ok(ChannelLabel::Mag(order)),
            "ANG" => Ok(ChannelLabel::Ang(order)),
            "I11" => Ok(ChannelLabel::I11(order)),
            _ => Err(unknown()),
        }
    }
}

/// Ordered, labelled channels sharing one shape.
#[derive(Debug, Clone)]
pub struct ChannelStack {
    channels: Vec<(ChannelLabel, ScalarField)>,
}

impl ChannelStack {
    pub fn new(channels: Vec<(ChannelLabel, ScalarField)>) -> Result<Self> {
        if channels.is_empty() {
            return Err(CstError::ShapeMismatch("channel stack is empty".into()));
        }
        let dims = channels[0].1.dims();
        for (i, (label, field)) in channels.iter().enumerate() {
            if field.dims() != dims {
                return Err(CstError::ShapeMismatch(format!(
                    "channel {label} is {}x{}, expected {}x{}",
                    field.width(),
                    field.height(),
                    dims.0,
                    dims.1
                )));
            }
            if channels[..i].iter().any(|(l, _)| l == label) {
                return Err(CstError::DuplicateLabel(label.to_string()));
            }
        }
        Ok(Self { channels })
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// `(width, height)` shared by every channel.
    pub fn dims(&self) -> (usize, usize) {
        self.channels[0].1.dims()
    }

    pub fn labels(&self) -> Vec<ChannelLabel> {
        self.channels.iter().map(|(l, _)| *l).collect()
    }

    pub fn channels(&self) -> &[(ChannelLabel, ScalarField)] {
        &self.channels
    }

    pub fn get(&self, label: ChannelLabel) -> Option<&ScalarField> {
        self.channels
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, f)| f)
    }
}
