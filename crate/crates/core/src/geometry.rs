//! Flexion and abduction angles from joint positions.
//!
//! All vectors are normalized before their dot product is taken; the cosine
//! is clamped to `[-1, 1]` ahead of `acos`. Angles are radians internally and
//! degrees at the public `*_angles` / `abduction_angle` boundary.

use std::fmt;

use thiserror::Error;

use crate::skeleton::{Bone, Finger, HandSkeletonFrame, JointId, Point3, Slot};

/// Norms at or below this (mm, or mm² for cross products) are degenerate.
pub const EPS: f64 = 1e-9;

/// Shorter than [`EPS`], or not a number.
fn degenerate(v: &Point3) -> bool {
    v.norm().partial_cmp(&EPS) != Some(std::cmp::Ordering::Greater)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate vector (norm <= {EPS})")]
    DegenerateVector,
    #[error("degenerate bone {0}")]
    DegenerateBone(Bone),
    #[error("degenerate palm plane: wrist, index MCP and pinky MCP are collinear or coincident")]
    DegeneratePlane,
    #[error("finger {0} has no in-palm projection (proximal phalanx along the palm normal)")]
    DegenerateProjection(Finger),
}

/// The three flexing joints of a finger. For the thumb these are CMC, MCP and IP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlexJoint {
    Mcp,
    Pip,
    Dip,
}

impl FlexJoint {
    pub const ALL: [FlexJoint; 3] = [FlexJoint::Mcp, FlexJoint::Pip, FlexJoint::Dip];

    pub fn name(self) -> &'static str {
        match self {
            FlexJoint::Mcp => "mcp",
            FlexJoint::Pip => "pip",
            FlexJoint::Dip => "dip",
        }
    }

    /// Bones on either side of this joint, proximal first.
    fn bones(self, finger: Finger) -> (Bone, Bone) {
        let b = Bone::of_finger(finger);
        let k = self as usize;
        (b[k], b[k + 1])
    }
}

impl fmt::Display for FlexJoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PalmPlane {
    /// Unit normal.
    pub normal: Point3,
    /// The wrist position.
    pub anchor: Point3,
}

/// Degrees; 0 means straight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlexionAngles {
    pub mcp: f64,
    pub pip: f64,
    pub dip: f64,
}

impl FlexionAngles {
    pub fn get(&self, joint: FlexJoint) -> f64 {
        match joint {
            FlexJoint::Mcp => self.mcp,
            FlexJoint::Pip => self.pip,
            FlexJoint::Dip => self.dip,
        }
    }
}

/// Per-frame angles in degrees. `None` marks an angle whose geometry was degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleFrame {
    pub frame_index: usize,
    /// Indexed by finger, then `FlexJoint`.
    pub flexion: [[Option<f64>; 3]; 5],
    pub abduction: [Option<f64>; 5],
}

impl AngleFrame {
    pub fn flexion(&self, finger: Finger, joint: FlexJoint) -> Option<f64> {
        self.flexion[finger as usize][joint as usize]
    }

    pub fn abduction(&self, finger: Finger) -> Option<f64> {
        self.abduction[finger as usize]
    }
}

/// Unsigned angle between two vectors, in radians.
pub fn angle_between(u: &Point3, v: &Point3) -> Result<f64, GeometryError> {
    let nu = u.norm();
    let nv = v.norm();
    if !(nu > EPS && nv > EPS) {
        return Err(GeometryError::DegenerateVector);
    }
    let cos = (u / nu).dot(&(v / nv)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

fn joint_angle(frame: &HandSkeletonFrame, finger: Finger, joint: FlexJoint) -> Result<f64, GeometryError> {
    let (proximal, distal) = joint.bones(finger);
    let a = frame.bone_vector(proximal);
    let b = frame.bone_vector(distal);
    for (bone, v) in [(proximal, &a), (distal, &b)] {
        if degenerate(v) {
            return Err(GeometryError::DegenerateBone(bone));
        }
    }
    angle_between(&a, &b)
}

/// Flexion at the three joints of `finger`, in degrees.
pub fn flexion_angles(frame: &HandSkeletonFrame, finger: Finger) -> Result<FlexionAngles, GeometryError> {
    if let Some(bone) = Bone::of_finger(finger).into_iter().find(|b| degenerate(&frame.bone_vector(*b))) {
        return Err(GeometryError::DegenerateBone(bone));
    }
    Ok(FlexionAngles {
        mcp: joint_angle(frame, finger, FlexJoint::Mcp)?.to_degrees(),
        pip: joint_angle(frame, finger, FlexJoint::Pip)?.to_degrees(),
        dip: joint_angle(frame, finger, FlexJoint::Dip)?.to_degrees(),
    })
}

/// Plane through the wrist and the index and pinky MCP joints.
///
/// The normal is `(MCP_II - W) x (MCP_V - W)`, normalized.
pub fn palm_plane(frame: &HandSkeletonFrame) -> Result<PalmPlane, GeometryError> {
    let w = frame.joint(JointId::Wrist);
    let a = frame.joint(JointId::Finger(Finger::Index, Slot::Mcp)) - w;
    let b = frame.joint(JointId::Finger(Finger::Pinky, Slot::Mcp)) - w;
    let n = a.cross(&b);
    let len = n.norm();
    if !(a.norm() > EPS && b.norm() > EPS && len > EPS) {
        return Err(GeometryError::DegeneratePlane);
    }
    Ok(PalmPlane { normal: n / len, anchor: w })
}

/// Removes the normal component of `v`.
pub fn project_onto_plane(v: &Point3, plane: &PalmPlane) -> Point3 {
    v - plane.normal * v.dot(&plane.normal)
}

fn abduction_vectors(
    frame: &HandSkeletonFrame,
    plane: &PalmPlane,
    finger: Finger,
) -> Result<(Point3, Point3), GeometryError> {
    let [metacarpal, proximal, ..] = Bone::of_finger(finger);
    let m = frame.bone_vector(metacarpal);
    if degenerate(&m) {
        return Err(GeometryError::DegenerateBone(metacarpal));
    }
    let p = project_onto_plane(&frame.bone_vector(proximal), plane);
    if degenerate(&p) {
        return Err(GeometryError::DegenerateProjection(finger));
    }
    Ok((m, p))
}

fn abduction_in_plane(frame: &HandSkeletonFrame, plane: &PalmPlane, finger: Finger) -> Result<f64, GeometryError> {
    let (m, p) = abduction_vectors(frame, plane, finger)?;
    Ok(angle_between(&m, &p)?.to_degrees())
}

/// Unsigned angle (degrees) between the metacarpal `MCP - W` and the in-palm
/// projection of the proximal phalanx `PIP - MCP`.
pub fn abduction_angle(frame: &HandSkeletonFrame, finger: Finger) -> Result<f64, GeometryError> {
    let plane = palm_plane(frame)?;
    abduction_in_plane(frame, &plane, finger)
}

/// Abduction with a sign taken from `((MCP - W) x P) . N`.
///
/// This is an extension over the unsigned measure: positive means the
/// phalanx turns counter-clockwise about the palm normal. Its meaning in
/// ulnar/radial terms depends on handedness. Not used by any table output.
pub fn signed_abduction_angle(frame: &HandSkeletonFrame, finger: Finger) -> Result<f64, GeometryError> {
    let plane = palm_plane(frame)?;
    let (m, p) = abduction_vectors(frame, &plane, finger)?;
    let unsigned = angle_between(&m, &p)?.to_degrees();
    Ok(if m.cross(&p).dot(&plane.normal) < 0.0 { -unsigned } else { unsigned })
}

/// All 20 angles of one frame. Degenerate geometry yields `None` for the
/// affected angles only; a degenerate palm plane blanks every abduction.
pub fn frame_angles(frame: &HandSkeletonFrame, frame_index: usize) -> AngleFrame {
    let plane = palm_plane(frame).ok();
    let mut flexion = [[None; 3]; 5];
    let mut abduction = [None; 5];
    for finger in Finger::ALL {
        for joint in FlexJoint::ALL {
            flexion[finger as usize][joint as usize] = joint_angle(frame, finger, joint).ok().map(f64::to_degrees);
        }
        abduction[finger as usize] = plane.as_ref().and_then(|pl| abduction_in_plane(frame, pl, finger).ok());
    }
    AngleFrame { frame_index, flexion, abduction }
}
