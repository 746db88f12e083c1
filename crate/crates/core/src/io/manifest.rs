//! Dataset manifest: who was recorded, and which file holds which recording.
//!
//! The manifest is a TOML document:
//!
//! ```toml
//! [[subjects]]
//! id = "P01"
//! group = "patient"          # "control" or "patient"
//! notes = "ulnar deviation, right hand"
//!
//! [[sequences]]
//! path = "p01/right_flexion_1.csv"   # relative to the manifest's directory
//! subject = "P01"
//! hand = "right"             # "left" or "right"
//! movement = "flexion"       # "flexion" or "abduction"
//! orthosis = true            # optional, default false; patients only
//! frame_rate = 30.0          # optional, default 30
//! ```

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{LABEL_CONTROL, LABEL_ORTHOSIS, LABEL_PATIENT};
use crate::skeleton::{Handedness, DEFAULT_FRAME_RATE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Control,
    Patient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Movement {
    Flexion,
    Abduction,
}

impl fmt::Display for Movement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Movement::Flexion => "flexion",
            Movement::Abduction => "abduction",
        })
    }
}

impl std::str::FromStr for Movement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "flexion" => Ok(Movement::Flexion),
            "abduction" => Ok(Movement::Abduction),
            other => Err(format!("unknown movement '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subject {
    pub id: String,
    pub group: Group,
    #[serde(default)]
    pub notes: String,
}

fn default_frame_rate() -> f64 {
    DEFAULT_FRAME_RATE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceEntry {
    pub path: PathBuf,
    pub subject: String,
    pub hand: Handedness,
    pub movement: Movement,
    #[serde(default)]
    pub orthosis: bool,
    #[serde(default = "default_frame_rate")]
    pub frame_rate: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    #[serde(default)]
    pub subjects: Vec<Subject>,
    #[serde(default)]
    pub sequences: Vec<SequenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManifestError {
    #[error("manifest syntax: {0}")]
    Syntax(String),
    #[error("duplicate subject id '{0}'")]
    DuplicateSubject(String),
    #[error("sequence '{path}' references unknown subject '{subject}'")]
    DanglingSubject { path: PathBuf, subject: String },
    #[error("sequence '{path}' is marked orthosis but subject '{subject}' is a control")]
    OrthosisOnControl { path: PathBuf, subject: String },
    #[error("duplicate sequence path '{0}'")]
    DuplicatePath(PathBuf),
    #[error("sequence '{path}' has non-positive frame rate {frame_rate}")]
    InvalidFrameRate { path: PathBuf, frame_rate: f64 },
}

impl ManifestError {
    /// Syntax errors are parse failures; everything else breaks a manifest rule.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ManifestError::Syntax(_))
    }
}

/// Totals in the shape of a dataset summary table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DatasetSummary {
    pub patients: usize,
    pub controls: usize,
    pub patient_sequences: usize,
    pub orthosis_sequences: usize,
    pub control_sequences: usize,
}

impl DatasetManifest {
    pub fn subject(&self, id: &str) -> Option<&Subject> {
        self.subjects.iter().find(|s| s.id == id)
    }

    /// Referential integrity and flag rules.
    pub fn check(&self) -> Result<(), ManifestError> {
        let mut ids = HashSet::new();
        for s in &self.subjects {
            if !ids.insert(s.id.as_str()) {
                return Err(ManifestError::DuplicateSubject(s.id.clone()));
            }
        }
        let mut paths = HashSet::new();
        for seq in &self.sequences {
            let subject = self.subject(&seq.subject).ok_or_else(|| ManifestError::DanglingSubject {
                path: seq.path.clone(),
                subject: seq.subject.clone(),
            })?;
            if seq.orthosis && subject.group != Group::Patient {
                return Err(ManifestError::OrthosisOnControl { path: seq.path.clone(), subject: seq.subject.clone() });
            }
            if !paths.insert(&seq.path) {
                return Err(ManifestError::DuplicatePath(seq.path.clone()));
            }
            if !(seq.frame_rate.is_finite() && seq.frame_rate > 0.0) {
                return Err(ManifestError::InvalidFrameRate { path: seq.path.clone(), frame_rate: seq.frame_rate });
            }
        }
        Ok(())
    }

    /// `control`, `patient` or `patient_orthosis`. Panics on a dangling subject;
    /// only call on a checked manifest.
    pub fn label(&self, seq: &SequenceEntry) -> &'static str {
        let subject = self.subject(&seq.subject).expect("checked manifest");
        match (subject.group, seq.orthosis) {
            (Group::Control, _) => LABEL_CONTROL,
            (Group::Patient, false) => LABEL_PATIENT,
            (Group::Patient, true) => LABEL_ORTHOSIS,
        }
    }

    /// Sequences with the given group label and movement, in manifest order.
    pub fn select<'a>(&'a self, label: &'a str, movement: Movement) -> impl Iterator<Item = &'a SequenceEntry> + 'a {
        self.sequences.iter().filter(move |s| s.movement == movement && self.label(s) == label)
    }

    pub fn summary(&self) -> DatasetSummary {
        let mut out = DatasetSummary {
            patients: self.subjects.iter().filter(|s| s.group == Group::Patient).count(),
            controls: self.subjects.iter().filter(|s| s.group == Group::Control).count(),
            ..Default::default()
        };
        for seq in &self.sequences {
            match self.subject(&seq.subject).map(|s| s.group) {
                Some(Group::Patient) => {
                    out.patient_sequences += 1;
                    out.orthosis_sequences += usize::from(seq.orthosis);
                }
                Some(Group::Control) => out.control_sequences += 1,
                None => {}
            }
        }
        out
    }

    /// Resolves a sequence path against the manifest's directory.
    pub fn resolve(base_dir: &Path, seq: &SequenceEntry) -> PathBuf {
        if seq.path.is_absolute() {
            seq.path.clone()
        } else {
            base_dir.join(&seq.path)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

/// Parses and checks a manifest.
pub fn load_manifest(source: &str) -> Result<DatasetManifest, ManifestError> {
    let manifest: DatasetManifest = toml::from_str(source).map_err(|e| ManifestError::Syntax(e.to_string()))?;
    manifest.check()?;
    Ok(manifest)
}
