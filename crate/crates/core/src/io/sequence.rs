//! Skeleton sequence text format.
//!
//! ```text
//! # version: 1
//! # handedness: right
//! # frame_rate: 30
//! # joints: WRIST,I_MCP,I_PIP,I_DIP,I_TIP,II_MCP,...,V_TIP
//! 0,0.0000000000000000e0,<x y z of WRIST>,<x y z of I_MCP>,...
//! ```
//!
//! Header lines start with `#` and hold `key: value`; all four keys are
//! required, once each, before the first data row. Each data row has 65
//! comma-separated cells: the frame index (0, 1, 2, ...), a timestamp in
//! seconds (empty when unknown), then 63 coordinates in millimeters in the
//! declared joint order, which must be the canonical one. Blank lines are
//! ignored. The writer renders numbers with 17 significant digits so every
//! `f64` reads back bit-exactly.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::skeleton::{canonical_joint_order, HandSkeletonFrame, Handedness, Point3, SkeletonSequence, JOINT_COUNT};

pub const FORMAT_VERSION: u32 = 1;
/// Cells per data row: frame index, timestamp, 21 x 3 coordinates.
pub const ROW_CELLS: usize = 2 + 3 * JOINT_COUNT;

#[derive(Debug, Error)]
pub enum SequenceParseError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: expected {ROW_CELLS} columns, found {found}")]
    WrongColumnCount { line: usize, found: usize },
    #[error("line {line}, column {column}: not a number: '{cell}'")]
    NonNumericCell { line: usize, column: usize, cell: String },
    #[error("line {line}: frame index {found} out of sequence, expected {expected}")]
    FrameIndex { line: usize, expected: usize, found: usize },
    #[error("line {line}: file contains no frames")]
    EmptyFile { line: usize },
    #[error("line {line}: read failed: {source}")]
    Io { line: usize, source: std::io::Error },
}

impl SequenceParseError {
    pub fn line(&self) -> usize {
        match self {
            SequenceParseError::MalformedHeader { line, .. }
            | SequenceParseError::WrongColumnCount { line, .. }
            | SequenceParseError::NonNumericCell { line, .. }
            | SequenceParseError::FrameIndex { line, .. }
            | SequenceParseError::EmptyFile { line }
            | SequenceParseError::Io { line, .. } => *line,
        }
    }
}

#[derive(Debug, Error)]
pub enum SequenceWriteError {
    #[error("refusing to write a sequence with no frames")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Header fields of a sequence file.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFileHeader {
    pub version: u32,
    pub handedness: Handedness,
    pub frame_rate: f64,
    pub joints: String,
}

#[derive(Default)]
struct PartialHeader {
    version: Option<u32>,
    handedness: Option<Handedness>,
    frame_rate: Option<f64>,
    joints: Option<String>,
}

impl PartialHeader {
    fn set(&mut self, line: usize, text: &str) -> Result<(), SequenceParseError> {
        let bad = |reason: String| SequenceParseError::MalformedHeader { line, reason };
        let body = text.trim_start_matches('#').trim();
        let (key, value) = body.split_once(':').ok_or_else(|| bad(format!("expected 'key: value', got '{body}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let dup = |present: bool| if present { Err(bad(format!("duplicate key '{key}'"))) } else { Ok(()) };
        match key {
            "version" => {
                dup(self.version.is_some())?;
                let v: u32 = value.parse().map_err(|_| bad(format!("bad version '{value}'")))?;
                if v != FORMAT_VERSION {
                    return Err(bad(format!("unsupported version {v}")));
                }
                self.version = Some(v);
            }
            "handedness" => {
                dup(self.handedness.is_some())?;
                self.handedness = Some(value.parse().map_err(bad)?);
            }
            "frame_rate" => {
                dup(self.frame_rate.is_some())?;
                let r: f64 = value.parse().map_err(|_| bad(format!("bad frame rate '{value}'")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(bad(format!("frame rate must be positive, got {value}")));
                }
                self.frame_rate = Some(r);
            }
            "joints" => {
                dup(self.joints.is_some())?;
                let declared: String = value.split(',').map(str::trim).collect::<Vec<_>>().join(",");
                if declared != canonical_joint_order() {
                    return Err(bad("joint order differs from the canonical 21-joint order".to_string()));
                }
                self.joints = Some(declared);
            }
            other => return Err(bad(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn finish(self, line: usize) -> Result<SequenceFileHeader, SequenceParseError> {
        let missing = |k: &str| SequenceParseError::MalformedHeader { line, reason: format!("missing '{k}' header") };
        Ok(SequenceFileHeader {
            version: self.version.ok_or_else(|| missing("version"))?,
            handedness: self.handedness.ok_or_else(|| missing("handedness"))?,
            frame_rate: self.frame_rate.ok_or_else(|| missing("frame_rate"))?,
            joints: self.joints.ok_or_else(|| missing("joints"))?,
        })
    }
}

fn parse_number(cell: &str, line: usize, column: usize) -> Result<f64, SequenceParseError> {
    cell.parse::<f64>().map_err(|_| SequenceParseError::NonNumericCell { line, column, cell: cell.to_string() })
}

fn parse_row(text: &str, line: usize, expected_index: usize) -> Result<HandSkeletonFrame, SequenceParseError> {
    let cells: Vec<&str> = text.split(',').map(str::trim).collect();
    if cells.len() != ROW_CELLS {
        return Err(SequenceParseError::WrongColumnCount { line, found: cells.len() });
    }
    let index: usize = cells[0].parse().map_err(|_| SequenceParseError::NonNumericCell {
        line,
        column: 1,
        cell: cells[0].to_string(),
    })?;
    if index != expected_index {
        return Err(SequenceParseError::FrameIndex { line, expected: expected_index, found: index });
    }
    let timestamp = match cells[1] {
        "" => None,
        t => Some(parse_number(t, line, 2)?),
    };
    let mut joints = [Point3::zeros(); JOINT_COUNT];
    for (j, p) in joints.iter_mut().enumerate() {
        for axis in 0..3 {
            let column = 3 + 3 * j + axis;
            p[axis] = parse_number(cells[column - 1], line, column)?;
        }
    }
    Ok(HandSkeletonFrame { joints, timestamp })
}

/// Reads a sequence file. Line numbers in errors are 1-based.
///
/// Non-finite coordinates (`NaN`, `inf`) are accepted here and left for
/// [`crate::skeleton::validate`] to report.
pub fn parse_sequence<R: BufRead>(source: R) -> Result<SkeletonSequence, SequenceParseError> {
    let mut header = PartialHeader::default();
    let mut parsed: Option<SequenceFileHeader> = None;
    let mut frames = Vec::new();
    let mut line_no = 0;
    for line in source.lines() {
        line_no += 1;
        let line = line.map_err(|source| SequenceParseError::Io { line: line_no, source })?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text.starts_with('#') {
            if parsed.is_some() {
                return Err(SequenceParseError::MalformedHeader {
                    line: line_no,
                    reason: "header line after data rows".to_string(),
                });
            }
            header.set(line_no, text)?;
            continue;
        }
        if parsed.is_none() {
            parsed = Some(std::mem::take(&mut header).finish(line_no)?);
        }
        frames.push(parse_row(text, line_no, frames.len())?);
    }
    let header = parsed.ok_or(SequenceParseError::EmptyFile { line: line_no.max(1) })?;
    Ok(SkeletonSequence::new(frames, header.handedness, header.frame_rate))
}

/// 17 significant digits; reads back to the identical `f64`.
pub fn render_exact(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_sequence<W: Write>(seq: &SkeletonSequence, mut sink: W) -> Result<(), SequenceWriteError> {
    if seq.frames.is_empty() {
        return Err(SequenceWriteError::Empty);
    }
    writeln!(sink, "# version: {FORMAT_VERSION}")?;
    writeln!(sink, "# handedness: {}", seq.handedness)?;
    writeln!(sink, "# frame_rate: {}", seq.frame_rate)?;
    writeln!(sink, "# joints: {}", canonical_joint_order())?;
    let mut row = String::new();
    for (i, frame) in seq.frames.iter().enumerate() {
        row.clear();
        row.push_str(&i.to_string());
        row.push(',');
        if let Some(t) = frame.timestamp {
            row.push_str(&render_exact(t));
        }
        for p in &frame.joints {
            for c in p.iter() {
                row.push(',');
                row.push_str(&render_exact(*c));
            }
        }
        writeln!(sink, "{row}")?;
    }
    sink.flush()?;
    Ok(())
}
