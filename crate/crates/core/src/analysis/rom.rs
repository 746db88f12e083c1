use super::{AngleSeries, Channel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RomEntry {
    pub min: f64,
    pub max: f64,
}

impl RomEntry {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Per-channel extremes over present samples; `None` for an all-absent channel.
#[derive(Debug, Clone, PartialEq)]
pub struct RomSummary {
    pub entries: Vec<(Channel, Option<RomEntry>)>,
}

impl RomSummary {
    pub fn get(&self, ch: Channel) -> Option<RomEntry> {
        self.entries[ch.index()].1
    }
}

pub fn channel_rom(values: &[Option<f64>]) -> Option<RomEntry> {
    values.iter().flatten().fold(None, |acc, &v| {
        Some(match acc {
            None => RomEntry { min: v, max: v },
            Some(e) => RomEntry { min: e.min.min(v), max: e.max.max(v) },
        })
    })
}

pub fn rom_summary(series: &AngleSeries) -> RomSummary {
    RomSummary { entries: Channel::all().map(|ch| (ch, channel_rom(series.channel(ch)))).collect() }
}
