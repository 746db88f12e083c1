use super::{AnalysisError, AngleSeries};

/// Default median window, in frames (about 1/6 s at 30 fps).
pub const DEFAULT_WINDOW: usize = 5;

/// Centered moving median of one channel.
///
/// The window is truncated at the series edges. Absent samples are skipped
/// when taking the median and stay absent at their own frame. An even number
/// of present samples takes the mean of the two middle values.
pub fn median_filter(values: &[Option<f64>], window: usize) -> Vec<Option<f64>> {
    let half = window / 2;
    let n = values.len();
    let mut buf = Vec::with_capacity(window);
    (0..n)
        .map(|i| {
            values[i]?;
            buf.clear();
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            buf.extend(values[lo..=hi].iter().flatten().copied());
            buf.sort_by(f64::total_cmp);
            let m = buf.len();
            Some(if m % 2 == 1 { buf[m / 2] } else { 0.5 * (buf[m / 2 - 1] + buf[m / 2]) })
        })
        .collect()
}

/// Median-smooths every channel of `series`. `window = 1` is the identity.
pub fn smooth(series: &AngleSeries, window: usize) -> Result<AngleSeries, AnalysisError> {
    if window == 0 || window.is_multiple_of(2) || window > series.len() {
        return Err(AnalysisError::InvalidWindow { window, len: series.len() });
    }
    if window == 1 {
        return Ok(series.clone());
    }
    Ok(series.map_channels(|c| median_filter(c, window)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Channel;

    fn series(values: Vec<Option<f64>>) -> AngleSeries {
        AngleSeries::single_channel("t", 30.0, Channel::default_segmentation(), values)
    }

    #[test]
    fn window_one_is_identity() {
        let s = series(vec![Some(1.0), Some(9.0), None, Some(3.0)]);
        assert_eq!(smooth(&s, 1).unwrap(), s);
    }

    #[test]
    fn invalid_windows() {
        let s = series(vec![Some(1.0); 4]);
        for w in [0, 2, 5] {
            assert_eq!(smooth(&s, w), Err(AnalysisError::InvalidWindow { window: w, len: 4 }));
        }
    }

    #[test]
    fn constant_channel_unchanged() {
        let s = series(vec![Some(12.5); 30]);
        for w in [3, 5, 7, 29] {
            assert_eq!(smooth(&s, w).unwrap(), s);
        }
    }

    #[test]
    fn single_spike_removed() {
        let mut v = vec![Some(20.0); 15];
        v[7] = Some(70.0);
        let out = smooth(&series(v), 5).unwrap();
        // direct median of the 5-sample neighbourhood: four 20s and one 70
        assert_eq!(out.channel(Channel::default_segmentation())[7], Some(20.0));
        assert!(out.channel(Channel::default_segmentation()).iter().all(|x| *x == Some(20.0)));
    }

    #[test]
    fn absences_skipped_and_preserved() {
        let v = vec![Some(1.0), None, Some(3.0), Some(100.0), Some(5.0)];
        let out = median_filter(&v, 3);
        assert_eq!(out, vec![Some(1.0), None, Some(51.5), Some(5.0), Some(52.5)]);
    }
}
