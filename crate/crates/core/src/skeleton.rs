//! The canonical 21-joint hand skeleton.
//!
//! Joint layout: index 0 is the wrist, then four joints per finger from the
//! thumb (I) to the pinky (V), ordered proximal to distal. The thumb reuses
//! the same four slots: CMC sits in the MCP slot, the thumb MCP in the PIP
//! slot and IP in the DIP slot, so every finger shares one layout.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Number of joints in a hand skeleton.
pub const JOINT_COUNT: usize = 21;

/// Default capture rate when a recording does not state one.
pub const DEFAULT_FRAME_RATE: f64 = 30.0;

/// Positions are millimeters in sensor camera space.
pub type Point3 = Vector3<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Finger {
    Thumb,
    Index,
    Middle,
    Ring,
    Pinky,
}

impl Finger {
    pub const ALL: [Finger; 5] = [Finger::Thumb, Finger::Index, Finger::Middle, Finger::Ring, Finger::Pinky];

    /// Clinical finger number, 1 (thumb) through 5 (pinky).
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(n: usize) -> Option<Finger> {
        Finger::ALL.get(n.checked_sub(1)?).copied()
    }

    pub fn roman(self) -> &'static str {
        ["I", "II", "III", "IV", "V"][self as usize]
    }
}

impl fmt::Display for Finger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for Finger {
    type Err = String;

    /// Accepts `1`..`5`, roman numerals `I`..`V`, or English names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(n) = t.parse::<usize>() {
            return Finger::from_number(n).ok_or_else(|| format!("finger number out of range: {t}"));
        }
        match t.to_ascii_lowercase().as_str() {
            "i" | "thumb" => Ok(Finger::Thumb),
            "ii" | "index" => Ok(Finger::Index),
            "iii" | "middle" => Ok(Finger::Middle),
            "iv" | "ring" => Ok(Finger::Ring),
            "v" | "pinky" | "little" => Ok(Finger::Pinky),
            _ => Err(format!("unknown finger: {t}")),
        }
    }
}

/// Position of a joint along a finger, proximal to distal.
///
/// For the thumb: `Mcp` holds CMC, `Pip` holds the thumb MCP, `Dip` holds IP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Mcp,
    Pip,
    Dip,
    Tip,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::Mcp, Slot::Pip, Slot::Dip, Slot::Tip];

    pub fn name(self) -> &'static str {
        match self {
            Slot::Mcp => "MCP",
            Slot::Pip => "PIP",
            Slot::Dip => "DIP",
            Slot::Tip => "TIP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JointId {
    Wrist,
    Finger(Finger, Slot),
}

impl JointId {
    /// Canonical linear index in `0..21`.
    pub fn index(self) -> usize {
        match self {
            JointId::Wrist => 0,
            JointId::Finger(f, s) => 1 + 4 * (f as usize) + s as usize,
        }
    }

    pub fn from_index(index: usize) -> Option<JointId> {
        match index {
            0 => Some(JointId::Wrist),
            1..=20 => {
                let k = index - 1;
                Some(JointId::Finger(Finger::ALL[k / 4], Slot::ALL[k % 4]))
            }
            _ => None,
        }
    }

    /// All joints in canonical order.
    pub fn all() -> impl Iterator<Item = JointId> {
        (0..JOINT_COUNT).map(|i| JointId::from_index(i).expect("index in range"))
    }

    /// Stable name used in file headers, e.g. `WRIST` or `IV_PIP`.
    pub fn name(self) -> String {
        match self {
            JointId::Wrist => "WRIST".to_string(),
            JointId::Finger(f, s) => format!("{}_{}", f.roman(), s.name()),
        }
    }

    /// The joint one step closer to the wrist, if any.
    pub fn parent(self) -> Option<JointId> {
        match self {
            JointId::Wrist => None,
            JointId::Finger(_, Slot::Mcp) => Some(JointId::Wrist),
            JointId::Finger(f, Slot::Pip) => Some(JointId::Finger(f, Slot::Mcp)),
            JointId::Finger(f, Slot::Dip) => Some(JointId::Finger(f, Slot::Pip)),
            JointId::Finger(f, Slot::Tip) => Some(JointId::Finger(f, Slot::Dip)),
        }
    }
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The comma-joined canonical joint order, as declared in sequence files.
pub fn canonical_joint_order() -> String {
    JointId::all().map(|j| j.name()).collect::<Vec<_>>().join(",")
}

/// A bone is the segment from a joint's parent to the joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bone {
    pub from: JointId,
    pub to: JointId,
}

impl Bone {
    /// The four bones of one finger: W→MCP, MCP→PIP, PIP→DIP, DIP→TIP.
    pub fn of_finger(finger: Finger) -> [Bone; 4] {
        Slot::ALL.map(|s| {
            let to = JointId::Finger(finger, s);
            Bone { from: to.parent().expect("finger joints have parents"), to }
        })
    }

    /// All 20 bones of the hand.
    pub fn all() -> impl Iterator<Item = Bone> {
        Finger::ALL.into_iter().flat_map(Bone::of_finger)
    }
}

impl fmt::Display for Bone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandSkeletonFrame {
    pub joints: [Point3; JOINT_COUNT],
    /// Seconds since the start of the recording, when the source provides it.
    pub timestamp: Option<f64>,
}

impl HandSkeletonFrame {
    pub fn new(joints: [Point3; JOINT_COUNT]) -> Self {
        Self { joints, timestamp: None }
    }

    pub fn with_timestamp(mut self, t: f64) -> Self {
        self.timestamp = Some(t);
        self
    }

    pub fn joint(&self, id: JointId) -> Point3 {
        self.joints[id.index()]
    }

    pub fn set_joint(&mut self, id: JointId, p: Point3) {
        self.joints[id.index()] = p;
    }

    /// Vector from the bone's proximal joint to its distal joint.
    pub fn bone_vector(&self, bone: Bone) -> Point3 {
        self.joint(bone.to) - self.joint(bone.from)
    }

    pub fn is_finite(&self) -> bool {
        self.joints.iter().all(|p| p.iter().all(|c| c.is_finite()))
    }

    /// Applies `f` to every joint position.
    pub fn map_joints(&self, f: impl Fn(&Point3) -> Point3) -> Self {
        Self { joints: self.joints.map(|p| f(&p)), timestamp: self.timestamp }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Handedness::Left => "left",
            Handedness::Right => "right",
        }
    }
}

impl fmt::Display for Handedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Handedness {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Handedness::Left),
            "right" | "r" => Ok(Handedness::Right),
            other => Err(format!("unknown handedness: {other}")),
        }
    }
}

/// One recording. Handedness is metadata only; no mirroring is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSequence {
    pub frames: Vec<HandSkeletonFrame>,
    pub handedness: Handedness,
    pub frame_rate: f64,
}

impl SkeletonSequence {
    pub fn new(frames: Vec<HandSkeletonFrame>, handedness: Handedness, frame_rate: f64) -> Self {
        Self { frames, handedness, frame_rate }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FindingKind {
    EmptySequence,
    InvalidFrameRate(f64),
    NonFiniteCoordinate { joint: JointId },
    NonMonotoneTimestamp { previous: f64, current: f64 },
    ZeroLengthBone(Bone),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    /// `None` for sequence-level findings.
    pub frame: Option<usize>,
    pub kind: FindingKind,
}

impl Finding {
    /// Zero-length bones degrade single angles but leave the frame usable.
    pub fn is_fatal(&self) -> bool {
        !matches!(self.kind, FindingKind::ZeroLengthBone(_))
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.frame {
            write!(f, "frame {i}: ")?;
        }
        match &self.kind {
            FindingKind::EmptySequence => write!(f, "sequence has no frames"),
            FindingKind::InvalidFrameRate(r) => write!(f, "frame rate must be positive, got {r}"),
            FindingKind::NonFiniteCoordinate { joint } => {
                write!(f, "non-finite coordinate at joint {joint}")
            }
            FindingKind::NonMonotoneTimestamp { previous, current } => {
                write!(f, "timestamp {current} does not follow {previous}")
            }
            FindingKind::ZeroLengthBone(b) => write!(f, "zero-length bone {b}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_fatal(&self) -> bool {
        self.findings.iter().any(Finding::is_fatal)
    }

    pub fn frames_flagged(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.findings.iter().filter_map(|f| f.frame).collect();
        v.dedup();
        v
    }
}

/// Bones shorter than this (mm) count as collapsed.
pub const ZERO_BONE_EPS: f64 = 1e-9;

pub fn validate(seq: &SkeletonSequence) -> ValidationReport {
    let mut findings = Vec::new();
    if seq.frames.is_empty() {
        findings.push(Finding { frame: None, kind: FindingKind::EmptySequence });
    }
    if !(seq.frame_rate.is_finite() && seq.frame_rate > 0.0) {
        findings.push(Finding { frame: None, kind: FindingKind::InvalidFrameRate(seq.frame_rate) });
    }

    let mut last_ts: Option<f64> = None;
    for (i, frame) in seq.frames.iter().enumerate() {
        for joint in JointId::all() {
            if !frame.joint(joint).iter().all(|c| c.is_finite()) {
                findings.push(Finding { frame: Some(i), kind: FindingKind::NonFiniteCoordinate { joint } });
            }
        }
        if let Some(t) = frame.timestamp {
            if let Some(prev) = last_ts {
                if t.partial_cmp(&prev) != Some(std::cmp::Ordering::Greater) {
                    findings.push(Finding {
                        frame: Some(i),
                        kind: FindingKind::NonMonotoneTimestamp { previous: prev, current: t },
                    });
                }
            }
            last_ts = Some(t);
        }
        for bone in Bone::all() {
            let v = frame.bone_vector(bone);
            if v.iter().all(|c| c.is_finite()) && v.norm() <= ZERO_BONE_EPS {
                findings.push(Finding { frame: Some(i), kind: FindingKind::ZeroLengthBone(bone) });
            }
        }
    }
    ValidationReport { findings }
}
