//! Test support: random hands and an independent angle oracle written with
//! plain arrays (no nalgebra, no library geometry code).

#![allow(dead_code)]

pub mod corpus;

use nalgebra::{Quaternion, Rotation3, Unit, UnitQuaternion, Vector3};
use rand::Rng;
use romkit::skeleton::{HandSkeletonFrame, Point3, JOINT_COUNT};

pub type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// acos of the cosine computed as dot / (|a| |b|), clamped.
fn oracle_angle(a: V3, b: V3) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na <= 1e-9 || nb <= 1e-9 {
        return None;
    }
    let c = dot(a, b) / (na * nb);
    Some(c.clamp(-1.0, 1.0).acos())
}

fn joint(frame: &HandSkeletonFrame, i: usize) -> V3 {
    let p = frame.joints[i];
    [p.x, p.y, p.z]
}

/// Joint index of finger `f` (0 = thumb) slot `s` (0 = MCP .. 3 = TIP).
fn idx(f: usize, s: usize) -> usize {
    1 + 4 * f + s
}

/// Reference angles in radians: `[finger][mcp, pip, dip, abduction]`.
pub fn oracle_angles(frame: &HandSkeletonFrame) -> [[Option<f64>; 4]; 5] {
    let w = joint(frame, 0);
    let n = cross(sub(joint(frame, idx(1, 0)), w), sub(joint(frame, idx(4, 0)), w));
    let nn = norm(n);
    let mut out = [[None; 4]; 5];
    for (f, row) in out.iter_mut().enumerate() {
        let chain =
            [w, joint(frame, idx(f, 0)), joint(frame, idx(f, 1)), joint(frame, idx(f, 2)), joint(frame, idx(f, 3))];
        for k in 0..3 {
            row[k] = oracle_angle(sub(chain[k + 1], chain[k]), sub(chain[k + 2], chain[k + 1]));
        }
        if nn > 1e-9 {
            let u = [n[0] / nn, n[1] / nn, n[2] / nn];
            let ph = sub(chain[2], chain[1]);
            let d = dot(ph, u);
            let proj = [ph[0] - d * u[0], ph[1] - d * u[1], ph[2] - d * u[2]];
            row[3] = oracle_angle(sub(chain[1], w), proj);
        }
    }
    out
}

pub fn random_point<R: Rng>(rng: &mut R, half: f64) -> Point3 {
    Point3::new(rng.random_range(-half..half), rng.random_range(-half..half), rng.random_range(-half..half))
}

/// Random frame with every angle comfortably away from 0 and 180 degrees
/// and no near-degenerate bone, palm or projection.
pub fn random_frame<R: Rng>(rng: &mut R) -> HandSkeletonFrame {
    loop {
        let mut joints = [Point3::zeros(); JOINT_COUNT];
        for p in joints.iter_mut() {
            *p = random_point(rng, 100.0);
        }
        let frame = HandSkeletonFrame::new(joints);
        if well_conditioned(&frame) {
            return frame;
        }
    }
}

fn well_conditioned(frame: &HandSkeletonFrame) -> bool {
    let w = joint(frame, 0);
    let n = cross(sub(joint(frame, idx(1, 0)), w), sub(joint(frame, idx(4, 0)), w));
    if norm(n) < 100.0 {
        return false;
    }
    for f in 0..5 {
        let chain =
            [w, joint(frame, idx(f, 0)), joint(frame, idx(f, 1)), joint(frame, idx(f, 2)), joint(frame, idx(f, 3))];
        if chain.windows(2).any(|p| norm(sub(p[1], p[0])) < 5.0) {
            return false;
        }
        let ph = sub(chain[2], chain[1]);
        let u = [n[0] / norm(n), n[1] / norm(n), n[2] / norm(n)];
        let d = dot(ph, u);
        if norm([ph[0] - d * u[0], ph[1] - d * u[1], ph[2] - d * u[2]]) < 2.0 {
            return false;
        }
    }
    oracle_angles(frame).iter().flatten().all(|a| a.is_some_and(|a| a > 1e-2 && a < std::f64::consts::PI - 1e-2))
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Rotation3<f64> {
    loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let len = q.norm();
        if len > 0.1 && len <= 1.0 {
            return UnitQuaternion::from_quaternion(q).to_rotation_matrix();
        }
    }
}

pub fn axis_rotation(axis: Vector3<f64>, angle: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle)
}
