use std::fmt;
use std::str::FromStr;

use crate::geometry::{frame_angles, AngleFrame, FlexJoint};
use crate::skeleton::{Finger, SkeletonSequence};

/// Number of angle channels: 15 flexion plus 5 abduction.
pub const CHANNEL_COUNT: usize = 20;

/// One angle tracked over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Flexion(Finger, FlexJoint),
    Abduction(Finger),
}

impl Channel {
    /// Flexion channels finger by finger (MCP, PIP, DIP), then abduction I..V.
    pub fn all() -> impl Iterator<Item = Channel> {
        (0..CHANNEL_COUNT).map(Channel::from_index)
    }

    pub fn index(self) -> usize {
        match self {
            Channel::Flexion(f, j) => 3 * f as usize + j as usize,
            Channel::Abduction(f) => 15 + f as usize,
        }
    }

    /// Panics if `i >= CHANNEL_COUNT`.
    pub fn from_index(i: usize) -> Channel {
        assert!(i < CHANNEL_COUNT, "channel index {i} out of range");
        if i < 15 {
            Channel::Flexion(Finger::ALL[i / 3], FlexJoint::ALL[i % 3])
        } else {
            Channel::Abduction(Finger::ALL[i - 15])
        }
    }

    pub fn finger(self) -> Finger {
        match self {
            Channel::Flexion(f, _) | Channel::Abduction(f) => f,
        }
    }

    /// Channels belonging to one finger: MCP, PIP, DIP flexion and abduction.
    pub fn of_finger(finger: Finger) -> [Channel; 4] {
        [
            Channel::Flexion(finger, FlexJoint::Mcp),
            Channel::Flexion(finger, FlexJoint::Pip),
            Channel::Flexion(finger, FlexJoint::Dip),
            Channel::Abduction(finger),
        ]
    }

    /// Default segmentation channel: PIP flexion of the ring finger.
    pub fn default_segmentation() -> Channel {
        Channel::Flexion(Finger::Ring, FlexJoint::Pip)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Flexion(finger, joint) => write!(f, "flex_{}_{}", joint.name(), finger.roman()),
            Channel::Abduction(finger) => write!(f, "abd_{}", finger.roman()),
        }
    }
}

impl FromStr for Channel {
    type Err = String;

    /// Parses `flex_pip_IV`, `abd_II` and the like; finger may also be a number.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parts: Vec<&str> = t.split('_').collect();
        match parts.as_slice() {
            ["flex", joint, finger] => {
                let joint = match joint.to_ascii_lowercase().as_str() {
                    "mcp" | "cmc" => FlexJoint::Mcp,
                    "pip" => FlexJoint::Pip,
                    "dip" | "ip" => FlexJoint::Dip,
                    other => return Err(format!("unknown joint '{other}' in channel '{t}'")),
                };
                Ok(Channel::Flexion(finger.parse()?, joint))
            }
            ["abd", finger] => Ok(Channel::Abduction(finger.parse()?)),
            _ => Err(format!("unknown channel '{t}' (expected e.g. flex_pip_IV or abd_II)")),
        }
    }
}

/// Time-indexed angle channels of one recording, degrees, `None` where absent.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSeries {
    pub id: String,
    pub frame_rate: f64,
    channels: Vec<Vec<Option<f64>>>,
}

impl AngleSeries {
    /// Builds a series from one vector per channel, in `Channel::all()` order.
    /// Panics unless there are 20 channels of equal length.
    pub fn from_channels(id: impl Into<String>, frame_rate: f64, channels: Vec<Vec<Option<f64>>>) -> Self {
        assert_eq!(channels.len(), CHANNEL_COUNT, "expected {CHANNEL_COUNT} channels");
        let n = channels[0].len();
        assert!(channels.iter().all(|c| c.len() == n), "channel lengths differ");
        Self { id: id.into(), frame_rate, channels }
    }

    pub fn from_frames(id: impl Into<String>, frame_rate: f64, frames: &[AngleFrame]) -> Self {
        let channels = Channel::all()
            .map(|ch| {
                frames
                    .iter()
                    .map(|af| match ch {
                        Channel::Flexion(f, j) => af.flexion(f, j),
                        Channel::Abduction(f) => af.abduction(f),
                    })
                    .collect()
            })
            .collect();
        Self::from_channels(id, frame_rate, channels)
    }

    /// Same-value series with only `channel` replaced; handy for synthetic signals.
    pub fn single_channel(id: impl Into<String>, frame_rate: f64, channel: Channel, values: Vec<Option<f64>>) -> Self {
        let n = values.len();
        let mut channels = vec![vec![None; n]; CHANNEL_COUNT];
        channels[channel.index()] = values;
        Self::from_channels(id, frame_rate, channels)
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, ch: Channel) -> &[Option<f64>] {
        &self.channels[ch.index()]
    }

    pub(crate) fn map_channels(&self, f: impl Fn(&[Option<f64>]) -> Vec<Option<f64>>) -> Self {
        Self {
            id: self.id.clone(),
            frame_rate: self.frame_rate,
            channels: self.channels.iter().map(|c| f(c)).collect(),
        }
    }

    /// The 20 angles of frame `i`, in channel order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = Option<f64>> + '_ {
        self.channels.iter().map(move |c| c[i])
    }
}

/// Applies the per-frame angle computation to every frame of `seq`.
pub fn angle_series(id: impl Into<String>, seq: &SkeletonSequence) -> AngleSeries {
    let frames: Vec<AngleFrame> = seq.frames.iter().enumerate().map(|(i, f)| frame_angles(f, i)).collect();
    AngleSeries::from_frames(id, seq.frame_rate, &frames)
}

/// Fills absences by linear interpolation between present neighbours and
/// holds the nearest present value at the edges. Returns `None` if the
/// channel has no present values.
pub fn fill_gaps(values: &[Option<f64>]) -> Option<Vec<f64>> {
    let present: Vec<(usize, f64)> = values.iter().enumerate().filter_map(|(i, v)| v.map(|x| (i, x))).collect();
    let (&(first_i, first_v), &(last_i, last_v)) = (present.first()?, present.last()?);
    let mut out = vec![0.0; values.len()];
    out[..first_i].fill(first_v);
    out[last_i..].fill(last_v);
    for pair in present.windows(2) {
        let ((i0, v0), (i1, v1)) = (pair[0], pair[1]);
        for (k, slot) in out.iter_mut().enumerate().take(i1 + 1).skip(i0) {
            let t = (k - i0) as f64 / (i1 - i0) as f64;
            *slot = v0 + (v1 - v0) * t;
        }
    }
    Some(out)
}
