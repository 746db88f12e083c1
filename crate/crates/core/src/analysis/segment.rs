use std::fmt;

use super::extrema::{detect_extrema, ExtremumKind};
use super::series::fill_gaps;
use super::{AnalysisError, AngleSeries, Channel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleSource {
    Auto,
    Landmark,
}

impl fmt::Display for CycleSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CycleSource::Auto => "auto",
            CycleSource::Landmark => "landmark",
        })
    }
}

/// One repetition of a movement. Frames are inclusive.
///
/// Consecutive automatic cycles share their boundary frame: the trough that
/// ends one repetition starts the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MovementCycle {
    pub channel: Channel,
    pub start_frame: usize,
    pub peak_frame: usize,
    pub end_frame: usize,
    pub source: CycleSource,
}

impl MovementCycle {
    pub fn len(&self) -> usize {
        self.end_frame - self.start_frame + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// How to find cycles: by prominence-filtered extrema, or from given
/// `(start, end)` frame pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum Segmentation {
    Auto { prominence: f64 },
    Landmarks(Vec<(usize, usize)>),
}

pub fn segment_cycles(
    series: &AngleSeries,
    channel: Channel,
    how: &Segmentation,
) -> Result<Vec<MovementCycle>, AnalysisError> {
    match how {
        Segmentation::Auto { prominence } => segment_auto(series, channel, *prominence),
        Segmentation::Landmarks(pairs) => segment_landmarks(series, channel, pairs),
    }
}

fn filled(series: &AngleSeries, channel: Channel) -> Result<Vec<f64>, AnalysisError> {
    fill_gaps(series.channel(channel)).ok_or(AnalysisError::AllAbsent(channel))
}

/// Each detected maximum bracketed by a minimum on both sides becomes a cycle
/// spanning those two minima.
pub fn segment_auto(
    series: &AngleSeries,
    channel: Channel,
    prominence: f64,
) -> Result<Vec<MovementCycle>, AnalysisError> {
    if !(prominence > 0.0 && prominence.is_finite()) {
        return Err(AnalysisError::InvalidProminence(prominence));
    }
    let values = filled(series, channel)?;
    let extrema = detect_extrema(&values, prominence);
    Ok(extrema
        .windows(3)
        .filter(|w| w[0].kind == ExtremumKind::Min && w[1].kind == ExtremumKind::Max && w[2].kind == ExtremumKind::Min)
        .map(|w| MovementCycle {
            channel,
            start_frame: w[0].frame,
            peak_frame: w[1].frame,
            end_frame: w[2].frame,
            source: CycleSource::Auto,
        })
        .collect())
}

/// One cycle per landmark pair; the peak is the first frame holding the
/// channel's maximum inside the pair.
pub fn segment_landmarks(
    series: &AngleSeries,
    channel: Channel,
    pairs: &[(usize, usize)],
) -> Result<Vec<MovementCycle>, AnalysisError> {
    let n = series.len();
    let mut prev_end: Option<usize> = None;
    for (i, &(start, end)) in pairs.iter().enumerate() {
        let reason = if start >= end {
            Some("start must precede end")
        } else if end >= n {
            Some("frame beyond the end of the series")
        } else if prev_end.is_some_and(|p| start < p) {
            Some("overlaps or precedes the previous pair")
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(AnalysisError::InvalidLandmark { pair: i, start, end, reason });
        }
        prev_end = Some(end);
    }
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let values = filled(series, channel)?;
    Ok(pairs
        .iter()
        .map(|&(start, end)| {
            let mut peak = start;
            for k in start..=end {
                if values[k] > values[peak] {
                    peak = k;
                }
            }
            MovementCycle {
                channel,
                start_frame: start,
                peak_frame: peak,
                end_frame: end,
                source: CycleSource::Landmark,
            }
        })
        .collect())
}
