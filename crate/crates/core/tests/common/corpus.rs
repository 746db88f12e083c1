//! Fuzzed sequences and a corpus of malformed sequence files.

use rand::Rng;
use romkit::io::SequenceParseError;
use romkit::skeleton::{canonical_joint_order, HandSkeletonFrame, Handedness, Point3, SkeletonSequence, JOINT_COUNT};

fn any_f64<R: Rng>(rng: &mut R) -> f64 {
    match rng.random_range(0..4) {
        0 => loop {
            let x = f64::from_bits(rng.random());
            if !x.is_nan() {
                break x;
            }
        },
        1 => rng.random_range(-1e3..1e3),
        2 => [0.0, -0.0, f64::MIN_POSITIVE, 5e-324, f64::MAX, -f64::MAX, 0.1, 1.0 / 3.0][rng.random_range(0..8)],
        _ => rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-300..300)),
    }
}

pub fn fuzzed_sequence<R: Rng>(rng: &mut R) -> SkeletonSequence {
    let n = rng.random_range(1..12);
    let with_time = rng.random_bool(0.5);
    let frames = (0..n)
        .map(|i| {
            let mut joints = [Point3::zeros(); JOINT_COUNT];
            for p in joints.iter_mut() {
                *p = Point3::new(any_f64(rng), any_f64(rng), any_f64(rng));
            }
            let mut f = HandSkeletonFrame::new(joints);
            if with_time {
                f.timestamp = Some(i as f64 / 30.0 + any_f64(rng).abs().min(1e-3));
            }
            f
        })
        .collect();
    let hand = if rng.random_bool(0.5) { Handedness::Left } else { Handedness::Right };
    SkeletonSequence::new(frames, hand, [30.0, 29.97, 60.0, 1.0 / 7.0][rng.random_range(0..4)])
}

pub fn header() -> String {
    format!("# version: 1\n# handedness: right\n# frame_rate: 30\n# joints: {}\n", canonical_joint_order())
}

pub fn row(i: usize) -> String {
    let mut cells = vec![i.to_string(), String::new()];
    cells.extend((0..63).map(|k| format!("{}", k as f64 * 1.5)));
    cells.join(",")
}

#[derive(Debug, PartialEq)]
pub enum Class {
    Header,
    Columns,
    NonNumeric,
    FrameIndex,
    Empty,
}

pub fn class(e: &SequenceParseError) -> Class {
    match e {
        SequenceParseError::MalformedHeader { .. } => Class::Header,
        SequenceParseError::WrongColumnCount { .. } => Class::Columns,
        SequenceParseError::NonNumericCell { .. } => Class::NonNumeric,
        SequenceParseError::FrameIndex { .. } => Class::FrameIndex,
        SequenceParseError::EmptyFile { .. } => Class::Empty,
        SequenceParseError::Io { .. } => panic!("unexpected I/O error"),
    }
}

/// (name, file content, expected class, expected 1-based line)
pub fn malformed_corpus() -> Vec<(&'static str, String, Class, usize)> {
    let h = header();
    let good = format!("{h}{}\n{}\n", row(0), row(1));
    vec![
        ("empty", String::new(), Class::Empty, 1),
        ("header only", h.clone(), Class::Empty, 4),
        ("no colon", format!("# version 1\n{}", &h[12..]), Class::Header, 1),
        ("bad version", h.replace("version: 1", "version: 7"), Class::Header, 1),
        ("bad hand", h.replace("right", "middle"), Class::Header, 2),
        ("zero rate", h.replace("frame_rate: 30", "frame_rate: 0"), Class::Header, 3),
        ("negative rate", h.replace("frame_rate: 30", "frame_rate: -30"), Class::Header, 3),
        ("unknown key", format!("{h}# camera: sr300\n{}\n", row(0)), Class::Header, 5),
        ("duplicate key", format!("# handedness: left\n{h}{}\n", row(0)), Class::Header, 3),
        ("wrong joint order", h.replace("WRIST,I_MCP", "I_MCP,WRIST"), Class::Header, 4),
        ("missing joints", format!("{}{}\n", &h[..h.find("# joints").unwrap()], row(0)), Class::Header, 4),
        ("header after data", format!("{h}{}\n# version: 1\n", row(0)), Class::Header, 6),
        ("short row", format!("{h}{}\n{}\n", row(0), &row(1)[..row(1).rfind(',').unwrap()]), Class::Columns, 6),
        ("long row", format!("{h}{},9\n", row(0)), Class::Columns, 5),
        ("text cell", format!("{h}{}\n", row(0).replacen(",3,", ",three,", 1)), Class::NonNumeric, 5),
        ("bad timestamp", format!("{h}{}\n", row(0).replacen("0,,", "0,now,", 1)), Class::NonNumeric, 5),
        ("bad index", format!("{h}x{}\n", row(0)), Class::NonNumeric, 5),
        ("skipped frame", format!("{good}{}\n", row(3)), Class::FrameIndex, 7),
        ("blank lines kept in numbering", format!("\n\n{h}\n{}\n{}\n", row(0), row(2)), Class::FrameIndex, 9),
    ]
}
