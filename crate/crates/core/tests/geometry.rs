mod common;

use common::{oracle_angles, random_frame, random_point, random_rotation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use romkit::geometry::{
    abduction_angle, angle_between, flexion_angles, frame_angles, palm_plane, project_onto_plane, FlexJoint, PalmPlane,
};
use romkit::skeleton::{Finger, Point3};

#[test]
fn frame_angles_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let frame = random_frame(&mut rng);
        let got = frame_angles(&frame, i);
        let want = oracle_angles(&frame);
        for f in Finger::ALL {
            let row = want[f as usize];
            for j in FlexJoint::ALL {
                let d = (got.flexion(f, j).unwrap().to_radians() - row[j as usize].unwrap()).abs();
                worst = worst.max(d);
            }
            worst = worst.max((got.abduction(f).unwrap().to_radians() - row[3].unwrap()).abs());
        }
    }
    assert!(worst < 1e-9, "max deviation {worst} rad");
}

#[test]
fn frame_angles_equal_per_finger_calls() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let frame = random_frame(&mut rng);
        let af = frame_angles(&frame, 0);
        for f in Finger::ALL {
            let flex = flexion_angles(&frame, f).unwrap();
            for j in FlexJoint::ALL {
                assert_eq!(af.flexion(f, j), Some(flex.get(j)));
            }
            assert_eq!(af.abduction(f), Some(abduction_angle(&frame, f).unwrap()));
        }
    }
}

#[test]
fn palm_normal_rotates_with_hand() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let frame = random_frame(&mut rng);
        let r = random_rotation(&mut rng);
        let rotated = frame.map_joints(|p| r * p);
        let n0 = palm_plane(&frame).unwrap().normal;
        let n1 = palm_plane(&rotated).unwrap().normal;
        assert!((r * n0 - n1).norm() < 1e-9);
        assert!((n1.norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn rigid_and_scale_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let frame = random_frame(&mut rng);
        let base = frame_angles(&frame, 0);
        for _ in 0..10 {
            let r = random_rotation(&mut rng);
            let t = random_point(&mut rng, 500.0);
            let scale = rng.random_range(0.05..20.0);
            let center = random_point(&mut rng, 200.0);
            let moved = frame.map_joints(|p| r * ((p - center) * scale + center) + t);
            let af = frame_angles(&moved, 0);
            for f in Finger::ALL {
                for j in FlexJoint::ALL {
                    worst = worst.max((af.flexion(f, j).unwrap() - base.flexion(f, j).unwrap()).abs());
                }
                worst = worst.max((af.abduction(f).unwrap() - base.abduction(f).unwrap()).abs());
            }
        }
    }
    assert!(worst < 1e-6, "max deviation {worst} deg");
}

fn finite_vec() -> impl Strategy<Value = Point3> {
    (-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

proptest! {
    #[test]
    fn projection_is_orthogonal(v in finite_vec(), n in finite_vec()) {
        prop_assume!(n.norm() > 1e-3);
        let plane = PalmPlane { normal: n.normalize(), anchor: Point3::zeros() };
        let p = project_onto_plane(&v, &plane);
        prop_assert!(p.dot(&plane.normal).abs() < 1e-9);
        // idempotent
        prop_assert!((project_onto_plane(&p, &plane) - p).norm() < 1e-9);
    }

    #[test]
    fn angle_between_never_nan(u in finite_vec(), k in -1e3..1e3f64, jitter in finite_vec()) {
        prop_assume!(u.norm() > 1e-6 && k.abs() > 1e-6);
        // nearly parallel / antiparallel pairs stress the clamp
        let v = u * k + jitter * 1e-13;
        let a = angle_between(&u, &v).unwrap();
        prop_assert!(a.is_finite());
        prop_assert!((0.0..=std::f64::consts::PI).contains(&a));
    }

    #[test]
    fn every_angle_in_range(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut joints = [Point3::zeros(); 21];
        for p in joints.iter_mut() {
            *p = random_point(&mut rng, 50.0);
        }
        let af = frame_angles(&romkit::skeleton::HandSkeletonFrame::new(joints), 0);
        for a in af.flexion.iter().flatten().chain(af.abduction.iter()).flatten() {
            prop_assert!((0.0..=180.0).contains(a));
        }
    }
}
