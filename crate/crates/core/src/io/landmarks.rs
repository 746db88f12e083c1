//! Landmark files: one `start,end` frame pair per line, `#` comments allowed.

use std::io::BufRead;

use super::tables::TableParseError;

pub fn read_landmarks<R: BufRead>(source: R) -> Result<Vec<(usize, usize)>, TableParseError> {
    let mut pairs = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| TableParseError::Io { line: line_no, source })?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let cells: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|c| !c.is_empty()).collect();
        let bad = || TableParseError::Malformed {
            line: line_no,
            reason: format!("expected 'start,end' frame pair, got '{text}'"),
        };
        if cells.len() != 2 {
            return Err(bad());
        }
        let start = cells[0].parse().map_err(|_| bad())?;
        let end = cells[1].parse().map_err(|_| bad())?;
        pairs.push((start, end));
    }
    Ok(pairs)
}
