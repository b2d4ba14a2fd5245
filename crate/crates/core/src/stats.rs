//! Order statistics used by normalization, rendering and validation.

/// Linear-interpolated percentile, `q` in `[0, 100]`. Non-finite values are ignored.
/// Returns `None` for empty input.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let pos = (q.clamp(0.0, 100.0) / 100.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let t = pos - lo as f64;
    Some(v[lo] + (v[hi] - v[lo]) * t)
}

pub fn median(values: &[f64]) -> Option<f64> {
    percentile(values, 50.0)
}

/// Median of angles (degrees) on a circle of the given period.
///
/// Angles are unwrapped around their circular mean into `[-period/2, period/2)`
/// before taking the ordinary median, which is exact for unimodal data that
/// does not span more than half the circle.
pub fn circular_median(values: &[f64], period: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let scale = std::f64::consts::TAU / period;
    let (s, c) = values.iter().fold((0.0, 0.0), |(s, c), &a| {
        (s + (a * scale).sin(), c + (a * scale).cos())
    });
    let mean = s.atan2(c) / scale;
    let offsets: Vec<f64> = values
        .iter()
        .map(|&a| (a - mean + period / 2.0).rem_euclid(period) - period / 2.0)
        .collect();
    median(&offsets).map(|m| (mean + m).rem_euclid(period))
}

/// Signed distance `a - b` on a circle, in `[-period/2, period/2)`.
pub fn circular_diff(a: f64, b: f64, period: f64) -> f64 {
    (a - b + period / 2.0).rem_euclid(period) - period / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentiles() {
        let v = [4.0, 1.0, 3.0, 2.0, 5.0];
        assert_eq!(percentile(&v, 0.0), Some(1.0));
        assert_eq!(percentile(&v, 100.0), Some(5.0));
        assert_eq!(median(&v), Some(3.0));
        assert_eq!(percentile(&v, 12.5), Some(1.5));
        assert_eq!(percentile(&[], 50.0), None);
        assert_eq!(percentile(&[f64::NAN, 2.0], 50.0), Some(2.0));
    }

    #[test]
    fn circular_median_wraps() {
        let m = circular_median(&[358.0, 359.0, 1.0, 2.0, 0.5], 360.0).unwrap();
        assert!(circular_diff(m, 0.5, 360.0).abs() < 1e-9);
        // one far outlier pulls the median by one rank, as on a line
        let m = circular_median(&[170.0, 175.0, 180.0, 185.0, 10.0], 360.0).unwrap();
        assert!((m - 175.0).abs() < 1e-9);
        assert_eq!(circular_median(&[], 360.0), None);
    }

    #[test]
    fn circular_diff_range() {
        assert_eq!(circular_diff(10.0, 350.0, 360.0), 20.0);
        assert_eq!(circular_diff(350.0, 10.0, 360.0), -20.0);
    }
}
