//! Hand range-of-motion analysis from 21-joint skeleton sequences.
//!
//! The pipeline: joint positions ([`skeleton`]) → per-frame flexion and
//! abduction angles ([`geometry`]) → smoothing, cycle segmentation and
//! mean/std profiles ([`analysis`]). [`io`] reads and writes the file
//! formats, [`synth`] generates test motion, [`cli`] drives it all.

pub mod analysis;
pub mod cli;
pub mod geometry;
pub mod io;
pub mod skeleton;
pub mod synth;
