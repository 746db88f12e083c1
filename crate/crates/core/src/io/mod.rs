//! File formats: skeleton sequences, dataset manifests, landmark pairs and
//! result tables.

mod landmarks;
mod manifest;
mod sequence;
mod tables;

pub use landmarks::read_landmarks;
pub use manifest::{
    load_manifest, DatasetManifest, DatasetSummary, Group, ManifestError, Movement, SequenceEntry, Subject,
};
pub use sequence::{
    parse_sequence, render_exact, write_sequence, SequenceFileHeader, SequenceParseError, SequenceWriteError,
    FORMAT_VERSION, ROW_CELLS,
};
pub use tables::{
    read_angles, read_profiles, write_angles, write_comparison_summary, write_cycles, write_profiles, write_rom,
    TableParseError, PROFILE_HEADER,
};
