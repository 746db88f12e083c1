//! From per-frame angles to movement structure: smoothing, extrema,
//! cycle segmentation, time normalization, profiles and range of motion.

mod extrema;
mod profile;
mod rom;
mod segment;
mod series;
mod smooth;

use thiserror::Error;

pub use extrema::{detect_extrema, Extremum, ExtremumKind, DEFAULT_PROMINENCE};
pub use profile::{
    aggregate, compare_profiles, resample_cycle, Comparison, CycleProfile, OrthosisObservation, ProfileSummary,
    DEFAULT_SAMPLES, LABEL_CONTROL, LABEL_ORTHOSIS, LABEL_PATIENT,
};
pub use rom::{channel_rom, rom_summary, RomEntry, RomSummary};
pub use segment::{segment_auto, segment_cycles, segment_landmarks, CycleSource, MovementCycle, Segmentation};
pub use series::{angle_series, fill_gaps, AngleSeries, Channel, CHANNEL_COUNT};
pub use smooth::{median_filter, smooth, DEFAULT_WINDOW};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("smoothing window must be odd and between 1 and the series length ({len}), got {window}")]
    InvalidWindow { window: usize, len: usize },
    #[error("prominence must be positive, got {0}")]
    InvalidProminence(f64),
    #[error("landmark pair {pair} ({start}, {end}): {reason}")]
    InvalidLandmark { pair: usize, start: usize, end: usize, reason: &'static str },
    #[error("channel {0} has no present samples")]
    AllAbsent(Channel),
    #[error("need at least 2 samples per cycle, got {0}")]
    InvalidSampleCount(usize),
    #[error("cycle {start}..={end} is outside a series of {len} frames")]
    CycleOutOfRange { start: usize, end: usize, len: usize },
    #[error("cycle {start}..={end} has {present} present samples, need at least 2")]
    TooShortCycle { start: usize, end: usize, present: usize },
    #[error("no cycles to aggregate")]
    NoCycles,
    #[error("cycle length {found} differs from {expected}")]
    MismatchedLength { expected: usize, found: usize },
    #[error("profile '{label}' does not share channel and sample count with the others")]
    MismatchedProfile { label: String },
}
