//! Comma-separated result tables.
//!
//! Every table starts with a header row. Absent values are empty cells.
//! Numbers use the shortest decimal form that reads back to the same `f64`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::analysis::{AngleSeries, Channel, Comparison, CycleProfile, MovementCycle, RomSummary, CHANNEL_COUNT};

#[derive(Debug, Error)]
pub enum TableParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: read failed: {source}")]
    Io { line: usize, source: std::io::Error },
}

impl TableParseError {
    pub fn line(&self) -> usize {
        match self {
            TableParseError::Malformed { line, .. } | TableParseError::Io { line, .. } => *line,
        }
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const ANGLES_HEADER_FIRST: &str = "frame";

/// One row per frame: the frame index, then the chosen channels.
pub fn write_angles<W: Write>(series: &AngleSeries, channels: &[Channel], mut sink: W) -> std::io::Result<()> {
    let mut header = vec![ANGLES_HEADER_FIRST.to_string()];
    header.extend(channels.iter().map(Channel::to_string));
    writeln!(sink, "{}", header.join(","))?;
    for i in 0..series.len() {
        let mut row = vec![i.to_string()];
        row.extend(channels.iter().map(|ch| cell(series.channel(*ch)[i])));
        writeln!(sink, "{}", row.join(","))?;
    }
    sink.flush()
}

fn read_lines<R: BufRead>(source: R) -> Result<Vec<(usize, String)>, TableParseError> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(|source| TableParseError::Io { line: i + 1, source })?;
        if !line.trim().is_empty() {
            out.push((i + 1, line));
        }
    }
    Ok(out)
}

fn malformed(line: usize, reason: impl Into<String>) -> TableParseError {
    TableParseError::Malformed { line, reason: reason.into() }
}

fn parse_cell(text: &str, line: usize) -> Result<Option<f64>, TableParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(None);
    }
    t.parse::<f64>().map(Some).map_err(|_| malformed(line, format!("not a number: '{t}'")))
}

/// Reads an angle table back. Channels missing from the table are absent.
pub fn read_angles<R: BufRead>(source: R, id: &str, frame_rate: f64) -> Result<AngleSeries, TableParseError> {
    let lines = read_lines(source)?;
    let (header_line, header) = lines.first().ok_or_else(|| malformed(1, "empty angle table"))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.first() != Some(&ANGLES_HEADER_FIRST) {
        return Err(malformed(*header_line, "angle table must start with a 'frame' column"));
    }
    let columns: Vec<Channel> = names[1..]
        .iter()
        .map(|n| n.parse::<Channel>().map_err(|e| malformed(*header_line, e)))
        .collect::<Result<_, _>>()?;
    let n = lines.len() - 1;
    let mut channels = vec![vec![None; n]; CHANNEL_COUNT];
    for (row, (line, text)) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = text.split(',').collect();
        if cells.len() != names.len() {
            return Err(malformed(*line, format!("expected {} columns, found {}", names.len(), cells.len())));
        }
        if cells[0].trim().parse::<usize>().ok() != Some(row) {
            return Err(malformed(*line, format!("frame index '{}' out of sequence", cells[0].trim())));
        }
        for (ch, c) in columns.iter().zip(&cells[1..]) {
            channels[ch.index()][row] = parse_cell(c, *line)?;
        }
    }
    Ok(AngleSeries::from_channels(id, frame_rate, channels))
}

pub fn write_cycles<W: Write>(cycles: &[MovementCycle], mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "channel,cycle,start_frame,peak_frame,end_frame,source")?;
    for (i, c) in cycles.iter().enumerate() {
        writeln!(sink, "{},{},{},{},{},{}", c.channel, i, c.start_frame, c.peak_frame, c.end_frame, c.source)?;
    }
    sink.flush()
}

pub const PROFILE_HEADER: &str = "label,channel,x,mean,std,n_cycles";

/// Long format, one row per normalized sample: `label,channel,x,mean,std,n_cycles`
/// where `x` is percent of cycle.
pub fn write_profiles<W: Write>(profiles: &[(String, CycleProfile)], mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "{PROFILE_HEADER}")?;
    for (label, p) in profiles {
        for i in 0..p.n_samples {
            writeln!(sink, "{},{},{},{},{},{}", label, p.channel, p.x(i), p.mean[i], p.std[i], p.n_cycles)?;
        }
    }
    sink.flush()
}

/// Reads profiles written by [`write_profiles`], keeping first-appearance order.
pub fn read_profiles<R: BufRead>(source: R) -> Result<Vec<(String, CycleProfile)>, TableParseError> {
    let lines = read_lines(source)?;
    let (header_line, header) = lines.first().ok_or_else(|| malformed(1, "empty profile table"))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.join(",") != PROFILE_HEADER {
        return Err(malformed(*header_line, format!("expected header '{PROFILE_HEADER}'")));
    }
    let mut out: Vec<(String, CycleProfile)> = Vec::new();
    let mut index: HashMap<(String, Channel), usize> = HashMap::new();
    for (line, text) in &lines[1..] {
        let cells: Vec<&str> = text.split(',').map(str::trim).collect();
        if cells.len() != 6 {
            return Err(malformed(*line, format!("expected 6 columns, found {}", cells.len())));
        }
        let channel: Channel = cells[1].parse().map_err(|e| malformed(*line, e))?;
        let num = |k: usize| parse_cell(cells[k], *line)?.ok_or_else(|| malformed(*line, "empty cell"));
        let (mean, std) = (num(3)?, num(4)?);
        let n_cycles: usize = cells[5].parse().map_err(|_| malformed(*line, format!("bad n_cycles '{}'", cells[5])))?;
        let key = (cells[0].to_string(), channel);
        let slot = *index.entry(key).or_insert_with(|| {
            out.push((
                cells[0].to_string(),
                CycleProfile { channel, n_samples: 0, mean: vec![], std: vec![], n_cycles },
            ));
            out.len() - 1
        });
        let p = &mut out[slot].1;
        if p.n_cycles != n_cycles {
            return Err(malformed(*line, "n_cycles changes within one profile"));
        }
        p.mean.push(mean);
        p.std.push(std);
        p.n_samples += 1;
    }
    if let Some((label, p)) = out.iter().find(|(_, p)| p.n_samples < 2) {
        return Err(malformed(
            lines.last().map_or(1, |l| l.0),
            format!("profile '{label}/{}' has fewer than 2 samples", p.channel),
        ));
    }
    Ok(out)
}

pub fn write_rom<W: Write>(rom: &RomSummary, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "channel,min,max,range")?;
    for (ch, e) in &rom.entries {
        writeln!(sink, "{},{},{},{}", ch, cell(e.map(|e| e.min)), cell(e.map(|e| e.max)), cell(e.map(|e| e.range())))?;
    }
    sink.flush()
}

/// Scalar comparison rows: `label,channel,n_cycles,peak_mean,mean_std,mean_range`.
pub fn write_comparison_summary<W: Write>(cmp: &[Comparison], mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "label,channel,n_cycles,peak_mean,mean_std,mean_range")?;
    for c in cmp {
        for s in &c.summaries {
            writeln!(sink, "{},{},{},{},{},{}", s.label, c.channel, s.n_cycles, s.peak_mean, s.mean_std, s.mean_range)?;
        }
    }
    sink.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{aggregate, rom_summary};
    use std::io::Cursor;

    fn series(n: usize) -> AngleSeries {
        let channels = (0..CHANNEL_COUNT)
            .map(|c| {
                (0..n).map(|i| if (i + c) % 7 == 3 { None } else { Some(0.1 * (i * c) as f64 + 1.0 / 3.0) }).collect()
            })
            .collect();
        AngleSeries::from_channels("t", 30.0, channels)
    }

    #[test]
    fn angle_table_layout_and_round_trip() {
        let s = series(10);
        let all: Vec<Channel> = Channel::all().collect();
        let mut buf = Vec::new();
        write_angles(&s, &all, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 11);
        assert!(lines.iter().all(|l| l.split(',').count() == 21));
        assert_eq!(read_angles(Cursor::new(buf), "t", 30.0).unwrap(), s);
    }

    #[test]
    fn partial_angle_table() {
        let s = series(4);
        let cols = Channel::of_finger(crate::skeleton::Finger::Ring);
        let mut buf = Vec::new();
        write_angles(&s, &cols, &mut buf).unwrap();
        let back = read_angles(Cursor::new(buf), "t", 30.0).unwrap();
        for ch in Channel::all() {
            if cols.contains(&ch) {
                assert_eq!(back.channel(ch), s.channel(ch));
            } else {
                assert!(back.channel(ch).iter().all(Option::is_none));
            }
        }
    }

    #[test]
    fn angle_table_errors_carry_lines() {
        let err = read_angles(Cursor::new("frame,flex_pip_IV\n0,1\n1,x\n"), "t", 30.0).unwrap_err();
        assert_eq!(err.line(), 3);
        let err = read_angles(Cursor::new("frame,flex_pip_IV\n0,1,2\n"), "t", 30.0).unwrap_err();
        assert_eq!(err.line(), 2);
        let err = read_angles(Cursor::new("idx,flex_pip_IV\n"), "t", 30.0).unwrap_err();
        assert_eq!(err.line(), 1);
    }

    #[test]
    fn profile_rows_and_round_trip() {
        let ch = Channel::default_segmentation();
        let cycles: Vec<Vec<f64>> =
            (0..3).map(|k| (0..100).map(|i| (i as f64 * 0.1 + k as f64).sin() * 30.0).collect()).collect();
        let p = aggregate(ch, &cycles).unwrap();
        let labelled = vec![("control".to_string(), p.clone()), ("patient".to_string(), p)];
        let mut buf = Vec::new();
        write_profiles(&labelled, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 201);
        let back = read_profiles(Cursor::new(buf)).unwrap();
        assert_eq!(back.len(), 2);
        for ((la, pa), (lb, pb)) in labelled.iter().zip(&back) {
            assert_eq!(la, lb);
            assert_eq!(pa.n_cycles, pb.n_cycles);
            for i in 0..100 {
                assert!((pa.mean[i] - pb.mean[i]).abs() <= 1e-9);
                assert!((pa.std[i] - pb.std[i]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn rom_table_marks_absent() {
        let ch = Channel::default_segmentation();
        let s = AngleSeries::single_channel("t", 30.0, ch, vec![Some(1.0), Some(4.0)]);
        let mut buf = Vec::new();
        write_rom(&rom_summary(&s), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("flex_pip_IV,1,4,3\n"));
        assert!(text.contains("abd_I,,,\n"));
        assert_eq!(text.lines().count(), 21);
    }
}
