//! Cycle time normalization, mean/std profiles and group comparison.

use super::segment::MovementCycle;
use super::{AnalysisError, AngleSeries, Channel};

/// Samples per normalized cycle.
pub const DEFAULT_SAMPLES: usize = 100;

/// Linear interpolation of `channel` over the cycle onto `n_samples` equally
/// spaced points from `start_frame` to `end_frame`.
///
/// Gaps between present samples are bridged linearly; points before the first
/// (after the last) present sample hold that sample's value.
pub fn resample_cycle(
    series: &AngleSeries,
    channel: Channel,
    cycle: &MovementCycle,
    n_samples: usize,
) -> Result<Vec<f64>, AnalysisError> {
    if n_samples < 2 {
        return Err(AnalysisError::InvalidSampleCount(n_samples));
    }
    let (start, end) = (cycle.start_frame, cycle.end_frame);
    if start >= end || end >= series.len() {
        return Err(AnalysisError::CycleOutOfRange { start, end, len: series.len() });
    }
    let present: Vec<(f64, f64)> = series.channel(channel)[start..=end]
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.map(|x| ((start + k) as f64, x)))
        .collect();
    if present.len() < 2 {
        return Err(AnalysisError::TooShortCycle { start, end, present: present.len() });
    }

    let span = (end - start) as f64;
    let mut seg = 0;
    Ok((0..n_samples)
        .map(|i| {
            let t = start as f64 + span * i as f64 / (n_samples - 1) as f64;
            let (t0, v0) = present[0];
            let (tn, vn) = present[present.len() - 1];
            if t <= t0 {
                return v0;
            }
            if t >= tn {
                return vn;
            }
            while present[seg + 1].0 < t {
                seg += 1;
            }
            let ((a, va), (b, vb)) = (present[seg], present[seg + 1]);
            va + (vb - va) * ((t - a) / (b - a))
        })
        .collect())
}

/// Pointwise mean and population standard deviation over cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleProfile {
    pub channel: Channel,
    pub n_samples: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub n_cycles: usize,
}

impl CycleProfile {
    /// Percent of cycle for sample `i`: 0 at the start, 100 at the end.
    pub fn x(&self, i: usize) -> f64 {
        100.0 * i as f64 / (self.n_samples - 1) as f64
    }

    pub fn peak_mean(&self) -> f64 {
        self.mean.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Average of the std curve over the cycle.
    pub fn mean_std(&self) -> f64 {
        self.std.iter().sum::<f64>() / self.std.len() as f64
    }

    /// Max minus min of the mean curve.
    pub fn mean_range(&self) -> f64 {
        let min = self.mean.iter().copied().fold(f64::INFINITY, f64::min);
        self.peak_mean() - min
    }
}

/// Folds resampled cycles (in the given order) into a profile.
pub fn aggregate(channel: Channel, cycles: &[Vec<f64>]) -> Result<CycleProfile, AnalysisError> {
    let first = cycles.first().ok_or(AnalysisError::NoCycles)?;
    let n = first.len();
    if n < 2 {
        return Err(AnalysisError::InvalidSampleCount(n));
    }
    if let Some(bad) = cycles.iter().find(|c| c.len() != n) {
        return Err(AnalysisError::MismatchedLength { expected: n, found: bad.len() });
    }
    let k = cycles.len() as f64;
    let mean: Vec<f64> = (0..n).map(|i| cycles.iter().map(|c| c[i]).sum::<f64>() / k).collect();
    let std = (0..n)
        .map(|i| {
            let var = cycles.iter().map(|c| (c[i] - mean[i]).powi(2)).sum::<f64>() / k;
            var.sqrt()
        })
        .collect();
    Ok(CycleProfile { channel, n_samples: n, mean, std, n_cycles: cycles.len() })
}

/// Scalar summary of one labelled profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSummary {
    pub label: String,
    pub n_cycles: usize,
    pub peak_mean: f64,
    pub mean_std: f64,
    pub mean_range: f64,
}

/// Spread with and without an orthosis, for the same channel.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthosisObservation {
    pub mean_std_without: f64,
    pub mean_std_with: f64,
    /// Fraction of normalized samples where the orthosis std is strictly lower.
    pub fraction_samples_lower: f64,
}

impl OrthosisObservation {
    pub fn lower_with_orthosis(&self) -> bool {
        self.mean_std_with < self.mean_std_without
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub channel: Channel,
    pub n_samples: usize,
    /// Input order is kept.
    pub profiles: Vec<(String, CycleProfile)>,
    pub summaries: Vec<ProfileSummary>,
    pub orthosis: Option<OrthosisObservation>,
}

impl Comparison {
    pub fn summary(&self, label: &str) -> Option<&ProfileSummary> {
        self.summaries.iter().find(|s| s.label == label)
    }

    /// Labels ordered by decreasing peak of the mean curve.
    pub fn labels_by_peak(&self) -> Vec<&str> {
        let mut s: Vec<&ProfileSummary> = self.summaries.iter().collect();
        s.sort_by(|a, b| b.peak_mean.total_cmp(&a.peak_mean));
        s.into_iter().map(|x| x.label.as_str()).collect()
    }

    /// Pointwise `mean(a) - mean(b)`.
    pub fn mean_difference(&self, a: &str, b: &str) -> Option<Vec<f64>> {
        let pa = &self.profiles.iter().find(|(l, _)| l == a)?.1;
        let pb = &self.profiles.iter().find(|(l, _)| l == b)?.1;
        Some(pa.mean.iter().zip(&pb.mean).map(|(x, y)| x - y).collect())
    }
}

/// Group label of patients recorded without an orthosis.
pub const LABEL_PATIENT: &str = "patient";
/// Group label of patients recorded with an orthosis.
pub const LABEL_ORTHOSIS: &str = "patient_orthosis";
pub const LABEL_CONTROL: &str = "control";

/// Side-by-side comparison of profiles that share channel and sample count.
///
/// When both `patient` and `patient_orthosis` are present the orthosis
/// observation is filled in.
pub fn compare_profiles(profiles: Vec<(String, CycleProfile)>) -> Result<Comparison, AnalysisError> {
    let (_, first) = profiles.first().ok_or(AnalysisError::NoCycles)?;
    let (channel, n_samples) = (first.channel, first.n_samples);
    for (label, p) in &profiles {
        if p.channel != channel || p.n_samples != n_samples {
            return Err(AnalysisError::MismatchedProfile { label: label.clone() });
        }
    }
    let summaries = profiles
        .iter()
        .map(|(label, p)| ProfileSummary {
            label: label.clone(),
            n_cycles: p.n_cycles,
            peak_mean: p.peak_mean(),
            mean_std: p.mean_std(),
            mean_range: p.mean_range(),
        })
        .collect();
    let find = |l: &str| profiles.iter().find(|(label, _)| label == l).map(|(_, p)| p);
    let orthosis = match (find(LABEL_PATIENT), find(LABEL_ORTHOSIS)) {
        (Some(without), Some(with)) => {
            let lower = with.std.iter().zip(&without.std).filter(|(w, wo)| w < wo).count();
            Some(OrthosisObservation {
                mean_std_without: without.mean_std(),
                mean_std_with: with.mean_std(),
                fraction_samples_lower: lower as f64 / n_samples as f64,
            })
        }
        _ => None,
    };
    Ok(Comparison { channel, n_samples, profiles, summaries, orthosis })
}
