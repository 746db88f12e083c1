//! Synthetic hand motion with known joint angles.
//!
//! Each finger is a kinematic chain rooted at its MCP joint on a flat palm.
//! Per frame, the chain is first turned within the palm by the abduction
//! angle, then bent out of the palm: the proximal phalanx leaves the palm at
//! the MCP flexion angle and each further joint adds its own flexion in the
//! same plane. The whole hand is then placed in camera space by a fixed rigid
//! transform.
//!
//! Every driven angle follows `offset - amplitude * cos(2 pi t / period)`, so
//! each cycle starts and ends at the low point. With no noise, analyzed PIP and
//! DIP flexion and abduction equal their drives exactly; MCP flexion equals
//! its drive whenever abduction is zero and `acos(cos(flexion) cos(abduction))`
//! otherwise (see [`SynthParams::expected`]).

use std::f64::consts::PI;

use nalgebra::{Rotation3, Unit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::geometry::FlexJoint;
use crate::skeleton::{Finger, HandSkeletonFrame, Handedness, JointId, Point3, SkeletonSequence, Slot, JOINT_COUNT};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid synthesis parameters: {0}")]
pub struct SynthError(pub String);

/// A sinusoidal drive, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub offset: f64,
    pub amplitude: f64,
}

impl Drive {
    pub const fn new(offset: f64, amplitude: f64) -> Self {
        Self { offset, amplitude }
    }

    /// Value at `phase` cycles (1.0 = one full period).
    pub fn at(&self, phase: f64) -> f64 {
        self.offset - self.amplitude * (2.0 * PI * phase).cos()
    }

    fn low(&self) -> f64 {
        self.offset - self.amplitude
    }

    fn high(&self) -> f64 {
        self.offset + self.amplitude
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub n_cycles: usize,
    pub frames_per_cycle: usize,
    pub frame_rate: f64,
    /// MCP, PIP and DIP drives, shared by all five fingers.
    pub flexion: [Drive; 3],
    pub abduction: Drive,
    /// Standard deviation, degrees, that the positional jitter induces on the
    /// ring finger's PIP flexion (to first order). Zero disables noise.
    pub noise_sigma: f64,
    pub seed: u64,
    pub handedness: Handedness,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n_cycles: 3,
            frames_per_cycle: 60,
            frame_rate: 30.0,
            flexion: [Drive::new(40.0, 30.0), Drive::new(50.0, 40.0), Drive::new(30.0, 20.0)],
            abduction: Drive::new(0.0, 0.0),
            noise_sigma: 0.0,
            seed: 0,
            handedness: Handedness::Right,
        }
    }
}

/// MCP position (mm, palm frame) and phalanx lengths for each finger.
const HAND: [(Point3Tuple, [f64; 3]); 5] = [
    ((24.0, 22.0, 0.0), [35.0, 30.0, 25.0]),
    ((20.0, 78.0, 0.0), [40.0, 25.0, 20.0]),
    ((3.0, 80.0, 0.0), [45.0, 28.0, 22.0]),
    ((-13.0, 74.0, 0.0), [42.0, 27.0, 21.0]),
    ((-27.0, 64.0, 0.0), [32.0, 20.0, 18.0]),
];

type Point3Tuple = (f64, f64, f64);

/// Abduction spreads fingers away from the middle finger.
const ABDUCTION_SIDE: [f64; 5] = [1.0, 1.0, 1.0, -1.0, -1.0];

impl SynthParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |m: String| Err(SynthError(m));
        if self.n_cycles == 0 {
            return fail("n_cycles must be at least 1".into());
        }
        if self.frames_per_cycle < 8 {
            return fail(format!("frames_per_cycle must be at least 8, got {}", self.frames_per_cycle));
        }
        if !(self.frame_rate.is_finite() && self.frame_rate > 0.0) {
            return fail(format!("frame_rate must be positive, got {}", self.frame_rate));
        }
        for (d, joint) in self.flexion.iter().zip(FlexJoint::ALL) {
            if !(d.amplitude >= 0.0 && d.low() >= 0.0 && d.high() <= 180.0) {
                return fail(format!("{joint} flexion must stay within [0, 180] with amplitude >= 0"));
            }
        }
        if self.flexion[0].high().partial_cmp(&90.0) != Some(std::cmp::Ordering::Less) {
            return fail("mcp flexion must stay below 90 degrees".into());
        }
        let a = self.abduction;
        if !(a.amplitude >= 0.0 && a.low() >= 0.0 && a.high() < 90.0) {
            return fail("abduction must stay within [0, 90) with amplitude >= 0".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return fail(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        Ok(())
    }

    /// Frames generated: every cycle plus the closing frame of the last one.
    pub fn frame_count(&self) -> usize {
        self.n_cycles * self.frames_per_cycle + 1
    }

    pub fn phase(&self, frame: usize) -> f64 {
        frame as f64 / self.frames_per_cycle as f64
    }

    /// Driven flexion angle of `joint` at a (possibly fractional) frame time.
    pub fn driven_flexion(&self, joint: FlexJoint, t: f64) -> f64 {
        self.flexion[joint as usize].at(t / self.frames_per_cycle as f64)
    }

    pub fn driven_abduction(&self, t: f64) -> f64 {
        self.abduction.at(t / self.frames_per_cycle as f64)
    }

    /// Noise-free analyzed values at frame time `t`: MCP, PIP, DIP flexion and abduction.
    pub fn expected(&self, t: f64) -> [f64; 4] {
        let a = self.driven_abduction(t).to_radians();
        let e = self.driven_flexion(FlexJoint::Mcp, t).to_radians();
        [
            (e.cos() * a.cos()).clamp(-1.0, 1.0).acos().to_degrees(),
            self.driven_flexion(FlexJoint::Pip, t),
            self.driven_flexion(FlexJoint::Dip, t),
            self.driven_abduction(t),
        ]
    }

    /// Landmark pairs `(k * period, (k + 1) * period)` for every cycle.
    pub fn cycle_bounds(&self) -> Vec<(usize, usize)> {
        (0..self.n_cycles).map(|k| (k * self.frames_per_cycle, (k + 1) * self.frames_per_cycle)).collect()
    }

    /// Positional jitter per coordinate, mm.
    pub fn positional_sigma(&self) -> f64 {
        let [l1, l2, _] = HAND[Finger::Ring as usize].1;
        let gain = (1.0 / (l1 * l1) + (1.0 / l1 + 1.0 / l2).powi(2) + 1.0 / (l2 * l2)).sqrt();
        self.noise_sigma.to_radians() / gain
    }
}

/// Camera-space placement of the palm frame.
fn camera_pose() -> (Rotation3<f64>, Point3) {
    let r = Rotation3::from_euler_angles(0.45, -0.3, 0.2);
    (r, Point3::new(15.0, -30.0, 420.0))
}

fn pose_frame(params: &SynthParams, t: f64) -> [Point3; JOINT_COUNT] {
    let normal = Point3::z();
    let mut joints = [Point3::zeros(); JOINT_COUNT];
    let abduction = params.driven_abduction(t).to_radians();
    for finger in Finger::ALL {
        let ((x, y, z), lengths) = HAND[finger as usize];
        let mcp = Point3::new(x, y, z);
        let axis = Unit::new_normalize(normal);
        let turned = Rotation3::from_axis_angle(&axis, ABDUCTION_SIDE[finger as usize] * abduction) * mcp.normalize();
        joints[JointId::Finger(finger, Slot::Mcp).index()] = mcp;
        let mut bend = 0.0;
        let mut p = mcp;
        for ((joint, slot), len) in FlexJoint::ALL.into_iter().zip([Slot::Pip, Slot::Dip, Slot::Tip]).zip(lengths) {
            bend += params.driven_flexion(joint, t).to_radians();
            let dir = turned * bend.cos() - normal * bend.sin();
            p += dir * len;
            joints[JointId::Finger(finger, slot).index()] = p;
        }
    }
    joints
}

pub fn generate_synthetic(params: &SynthParams) -> Result<SkeletonSequence, SynthError> {
    params.validate()?;
    let (rotation, translation) = camera_pose();
    let sigma = params.positional_sigma();
    let noise = Normal::new(0.0, sigma).map_err(|e| SynthError(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let frames = (0..params.frame_count())
        .map(|i| {
            let mut joints = pose_frame(params, i as f64);
            for p in joints.iter_mut() {
                *p = rotation * *p + translation;
                if sigma > 0.0 {
                    for c in p.iter_mut() {
                        *c += noise.sample(&mut rng);
                    }
                }
            }
            HandSkeletonFrame::new(joints).with_timestamp(i as f64 / params.frame_rate)
        })
        .collect();
    Ok(SkeletonSequence::new(frames, params.handedness, params.frame_rate))
}
