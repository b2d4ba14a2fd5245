//! Named channel stacks assembled from feature maps.
//!
//! Row presets `row1`..`row9` cover the grayscale/CST input combinations
//! (`bw` is an alias of `row1`). Within a row, channels follow the fixed order
//! BW, MAG, ANG, RE, IM, I11. Order presets `n1`, `n2`, `n3`, `n12`, `n123`
//! stack RE, IM, I11 for each listed order.
//!
//! | preset | channels |
//! |--------|----------|
//! | row1 / bw | BW |
//! | row2 | MAG(1) |
//! | row3 | MAG(1) I11(1) |
//! | row4 | MAG(1) ANG(1) I11(1) |
//! | row5 | RE(1) IM(1) |
//! | row6 | RE(1) IM(1) I11(1) |
//! | row7 | MAG(1) RE(1) IM(1) I11(1) |
//! | row8 | BW RE(1) IM(1) I11(1) |
//! | row9 | BW MAG(1) RE(1) IM(1) I11(1) |
//! | n1, n2, n3 | RE(n) IM(n) I11(n) |
//! | n12 | RE(1) IM(1) I11(1) RE(2) IM(2) I11(2) |
//! | n123 | as n12, then RE(3) IM(3) I11(3) |
//!
//! ANG is stored in degrees in `[0, 360)` and is discontinuous at the wrap.

use std::str::FromStr;

use crate::error::{CstError, Result};
use crate::feature::{ChannelLabel, ChannelStack, CstFeatureMap};
use crate::field::ScalarField;
use crate::stats::percentile;

use ChannelLabel::{Ang, Bw, Im, Mag, Re, I11};

/// Every preset name accepted by [`preset_labels`].
pub const PRESETS: &[&str] = &[
    "bw", "row1", "row2", "row3", "row4", "row5", "row6", "row7", "row8", "row9", "n1", "n2", "n3",
    "n12", "n123",
];

/// Default export preset.
pub const DEFAULT_PRESET: &str = "row7";

fn per_order(orders: &[u32]) -> Vec<ChannelLabel> {
    orders
        .iter()
        .flat_map(|&n| [Re(n), Im(n), I11(n)])
        .collect()
}

/// Channel list for a preset name (case-insensitive).
pub fn preset_labels(name: &str) -> Result<Vec<ChannelLabel>> {
    let labels = match name.to_ascii_lowercase().as_str() {
        "bw" | "row1" => vec![Bw],
        "row2" => vec![Mag(1)],
        "row3" => vec![Mag(1), I11(1)],
        "row4" => vec![Mag(1), Ang(1), I11(1)],
        "row5" => vec![Re(1), Im(1)],
        "row6" => vec![Re(1), Im(1), I11(1)],
        "row7" => vec![Mag(1), Re(1), Im(1), I11(1)],
        "row8" => vec![Bw, Re(1), Im(1), I11(1)],
        "row9" => vec![Bw, Mag(1), Re(1), Im(1), I11(1)],
        "n1" => per_order(&[1]),
        "n2" => per_order(&[2]),
        "n3" => per_order(&[3]),
        "n12" => per_order(&[1, 2]),
        "n123" => per_order(&[1, 2, 3]),
        _ => return Err(CstError::UnknownLabel(name.to_string())),
    };
    Ok(labels)
}

/// Which channels to assemble.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    Preset(String),
    Labels(Vec<ChannelLabel>),
}

impl Selection {
    pub fn labels(&self) -> Result<Vec<ChannelLabel>> {
        match self {
            Selection::Preset(name) => preset_labels(name),
            Selection::Labels(l) => Ok(l.clone()),
        }
    }
}

impl Default for Selection {
    fn default() -> Self {
        Selection::Preset(DEFAULT_PRESET.to_string())
    }
}

/// Parses a comma-separated label list such as `BW,RE(1),IM(1)`.
pub fn parse_labels(list: &str) -> Result<Vec<ChannelLabel>> {
    // commas inside parentheses are not expected, so a plain split is enough
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(ChannelLabel::from_str)
        .collect()
}

fn channel(f: &ScalarField, maps: &[CstFeatureMap], label: ChannelLabel) -> Result<ScalarField> {
    let Some(n) = label.order() else {
        return Ok(f.clone());
    };
    let m = maps
        .iter()
        .find(|m| m.order() == n)
        .ok_or(CstError::MissingOrder(n))?;
    if m.dims() != f.dims() {
        return Err(CstError::ShapeMismatch(format!(
            "order {n} map is {:?}, image is {:?}",
            m.dims(),
            f.dims()
        )));
    }
    Ok(match label {
        Re(_) => m.i2n0().re(),
        Im(_) => m.i2n0().im(),
        Mag(_) => m.i2n0().norm(),
        Ang(_) => m.i2n0().arg_degrees(),
        I11(_) => m.inn().clone(),
        Bw => unreachable!(),
    })
}

/// Affine map taking the interior 1st..99th percentile range onto `[0, 1]`.
/// Values outside the range are not clamped; a flat channel maps to zero.
pub fn normalize_channel(c: &ScalarField, margin: usize) -> ScalarField {
    let mut sample = c.interior(margin);
    if sample.is_empty() {
        sample = c.data().to_vec();
    }
    let lo = percentile(&sample, 1.0).unwrap_or(0.0);
    let hi = percentile(&sample, 99.0).unwrap_or(0.0);
    let span = hi - lo;
    if span > 0.0 && span.is_finite() {
        c.map(|v| (v - lo) / span)
    } else {
        c.map(|v| v - lo)
    }
}

/// Builds a channel stack from the grayscale image and its feature maps.
pub fn assemble(
    f: &ScalarField,
    maps: &[CstFeatureMap],
    selection: &Selection,
    normalize: bool,
) -> Result<ChannelStack> {
    let labels = selection.labels()?;
    let margin = maps.iter().map(|m| m.interior_margin()).max().unwrap_or(0);
    let channels = labels
        .into_iter()
        .map(|label| {
            let c = channel(f, maps, label)?;
            let c = if normalize {
                normalize_channel(&c, margin)
            } else {
                c
            };
            Ok((label, c))
        })
        .collect::<Result<Vec<_>>>()?;
    ChannelStack::new(channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CstParams;
    use crate::pipeline::cst_extract;
    use crate::synth::{planar_wave, WaveSpec};

    fn sample() -> (ScalarField, Vec<CstFeatureMap>) {
        let f = planar_wave(&WaveSpec::new(8.0, 30.0), 48, 48).unwrap();
        let maps = cst_extract(&f, &CstParams::default()).unwrap();
        (f, maps)
    }

    #[test]
    fn table_presets() {
        assert_eq!(
            preset_labels("row7").unwrap(),
            vec![Mag(1), Re(1), Im(1), I11(1)]
        );
        assert_eq!(
            preset_labels("ROW8").unwrap(),
            vec![Bw, Re(1), Im(1), I11(1)]
        );
        assert_eq!(preset_labels("bw").unwrap(), vec![Bw]);
        assert_eq!(preset_labels("n12").unwrap().len(), 6);
        for name in PRESETS {
            let labels = preset_labels(name).unwrap();
            assert!(!labels.is_empty());
        }
        assert!(matches!(
            preset_labels("row10"),
            Err(CstError::UnknownLabel(_))
        ));
    }

    #[test]
    fn parse_label_lists() {
        assert_eq!(
            parse_labels("BW, RE(1),im(1)").unwrap(),
            vec![Bw, Re(1), Im(1)]
        );
        assert!(parse_labels("BW,XX").is_err());
    }

    #[test]
    fn missing_order() {
        let (f, maps) = sample();
        let sel = Selection::Labels(vec![Re(2)]);
        assert!(matches!(
            assemble(&f, &maps, &sel, false),
            Err(CstError::MissingOrder(2))
        ));
    }

    #[test]
    fn raw_channels_match_maps() {
        let (f, maps) = sample();
        let sel = Selection::Labels(vec![Bw, Re(1), Im(1), Mag(1), Ang(1), I11(1)]);
        let s = assemble(&f, &maps, &sel, false).unwrap();
        let m = &maps[0];
        assert_eq!(s.get(Bw).unwrap(), &f);
        assert_eq!(s.get(I11(1)).unwrap(), m.inn());
        for (i, c) in m.i2n0().data().iter().enumerate() {
            let re = s.get(Re(1)).unwrap().data()[i];
            let im = s.get(Im(1)).unwrap().data()[i];
            assert_eq!((re, im), (c.re, c.im));
            assert_eq!(s.get(Mag(1)).unwrap().data()[i], c.norm());
            let ang = s.get(Ang(1)).unwrap().data()[i];
            assert!((0.0..360.0).contains(&ang));
        }
    }

    #[test]
    fn normalization_spans_unit_interval() {
        let (f, maps) = sample();
        let s = assemble(&f, &maps, &Selection::Preset("row9".into()), true).unwrap();
        let margin = maps[0].interior_margin();
        for (label, c) in s.channels() {
            let inner = c.interior(margin);
            let lo = percentile(&inner, 1.0).unwrap();
            let hi = percentile(&inner, 99.0).unwrap();
            assert!(lo.abs() < 1e-9, "{label}: {lo}");
            assert!((hi - 1.0).abs() < 1e-9 || hi.abs() < 1e-9, "{label}: {hi}");
        }
        let flat = ScalarField::filled(10, 10, 3.0).unwrap();
        assert!(normalize_channel(&flat, 2).data().iter().all(|&v| v == 0.0));
    }
}
