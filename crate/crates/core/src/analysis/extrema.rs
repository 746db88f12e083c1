//! Prominence-filtered local extrema.
//!
//! A maximum's prominence is its height above the higher of the two lowest
//! points reached on each side before the signal climbs above it again (or the
//! series ends). Minima use the same rule on the negated signal.
//!
//! Series endpoints can be minima (a movement recorded from rest starts at a
//! trough) but never maxima: a pulse cut off by the recording edge must not
//! produce a peak. An endpoint minimum only has one side to measure against,
//! and is kept only when it brackets a retained maximum, so a monotone ramp
//! yields nothing. The same holds for any minimum with nothing lower between
//! it and an edge.

use std::cmp::Ordering;

/// Default prominence threshold, degrees.
pub const DEFAULT_PROMINENCE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub frame: usize,
    pub kind: ExtremumKind,
    pub value: f64,
    pub prominence: f64,
}

/// Plateau runs `[start, end]` of equal consecutive values.
fn runs(values: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] != values[start] {
            out.push((start, i - 1));
            start = i;
        }
    }
    out
}

/// Prominence of the plateau `[a, b]` treated as a peak of `sign * values`.
///
/// For minima (`sign < 0`) a side that runs into the series edge without
/// ever dropping below the minimum is open and does not limit prominence, the
/// same one-sided rule that applies to endpoint minima: a trough followed by a
/// few frames of noise before the recording stops is still a trough.
fn prominence(values: &[f64], a: usize, b: usize, sign: f64) -> f64 {
    let h = sign * values[a];
    // (lowest point before climbing above h, whether it did climb above h)
    let side_base = |iter: &mut dyn Iterator<Item = usize>| -> (Option<f64>, bool) {
        let mut base: Option<f64> = None;
        for i in iter {
            let y = sign * values[i];
            if y > h {
                return (base, true);
            }
            base = Some(base.map_or(y, |m: f64| m.min(y)));
        }
        (base, false)
    };
    let left = side_base(&mut (0..a).rev());
    let right = side_base(&mut (b + 1..values.len()));
    let bases = [left, right].into_iter();
    let base = if sign > 0.0 {
        bases.filter_map(|s| s.0).reduce(f64::max)
    } else if left.1 || right.1 {
        bases.filter(|s| s.1).filter_map(|s| s.0).reduce(f64::max)
    } else {
        bases.filter_map(|s| s.0).reduce(f64::min)
    };
    base.map_or(0.0, |base| h - base)
}

/// Alternating maxima and minima with prominence `>= min_prominence`,
/// ordered by frame. Plateaus report their center frame.
///
/// Non-finite samples are not expected; fill gaps before calling.
pub fn detect_extrema(values: &[f64], min_prominence: f64) -> Vec<Extremum> {
    let n = values.len();
    let runs = runs(values);
    let mut found = Vec::new();
    for (k, &(a, b)) in runs.iter().enumerate() {
        let left = k.checked_sub(1).map(|j| values[runs[j].0]);
        let right = runs.get(k + 1).map(|r| values[r.0]);
        let v = values[a];
        let center = (a + b) / 2;
        let interior = a > 0 && b + 1 < n;

        let is_max = interior && left.is_some_and(|l| l < v) && right.is_some_and(|r| r < v);
        let is_min = match (left, right) {
            (Some(l), Some(r)) => l > v && r > v,
            (None, Some(r)) => r > v,
            (Some(l), None) => l > v,
            (None, None) => false,
        };
        let (kind, sign) = if is_max {
            (ExtremumKind::Max, 1.0)
        } else if is_min {
            (ExtremumKind::Min, -1.0)
        } else {
            continue;
        };
        let p = prominence(values, a, b, sign);
        if p >= min_prominence {
            found.push(Extremum { frame: center, kind, value: v, prominence: p });
        }
    }
    let mut out = enforce_alternation(found);
    let is_bracket = |e: Option<&Extremum>| e.is_some_and(|e| e.kind == ExtremumKind::Max);
    // minima with an open side: nothing lower between them and the edge
    let at_end = |e: &Extremum| e.kind == ExtremumKind::Min && values[e.frame..].iter().all(|v| *v >= e.value);
    let at_start = |e: &Extremum| e.kind == ExtremumKind::Min && values[..=e.frame].iter().all(|v| *v >= e.value);
    if out.last().is_some_and(at_end) && !is_bracket(out.iter().rev().nth(1)) {
        out.pop();
    }
    if out.first().is_some_and(at_start) && !is_bracket(out.get(1)) {
        out.remove(0);
    }
    out
}

/// Collapses runs of same-kind extrema to the most extreme one (earliest on ties).
fn enforce_alternation(found: Vec<Extremum>) -> Vec<Extremum> {
    let mut out: Vec<Extremum> = Vec::with_capacity(found.len());
    for e in found {
        match out.last_mut() {
            Some(last) if last.kind == e.kind => {
                let better = match e.kind {
                    ExtremumKind::Max => e.value.partial_cmp(&last.value) == Some(Ordering::Greater),
                    ExtremumKind::Min => e.value.partial_cmp(&last.value) == Some(Ordering::Less),
                };
                if better {
                    *last = e;
                }
            }
            _ => out.push(e),
        }
    }
    out
}
