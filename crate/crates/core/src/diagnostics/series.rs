//! Time series of norm samples and their CSV form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CSV column header.
pub const CSV_HEADER: &str = "t,channel,j,value";

/// Channel names used throughout the crate.
pub mod channel {
    pub const TOTAL: &str = "total";
    pub const PHI: &str = "phi";
    pub const U: &str = "u";
    pub const V: &str = "v";
    pub const U_MINUS_V: &str = "u_minus_v";
    pub const V_OUTSIDE_CONE: &str = "v_outside_cone";
    pub const LOW: &str = "low";
    pub const HIGH: &str = "high";
    pub const RELAXATION_RATIO: &str = "relaxation_ratio";
    pub const HS_ENERGY: &str = "hs_energy";
    pub const LYAPUNOV: &str = "lyapunov";
    pub const TIME_WEIGHTED: &str = "time_weighted";
    pub const DIV_V: &str = "div_v";
    pub const MOMENTUM: &str = "momentum";
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChannelKey {
    pub name: String,
    pub j: u32,
}

impl ChannelKey {
    pub fn new(name: impl Into<String>, j: u32) -> Self {
        Self { name: name.into(), j }
    }
}

impl std::fmt::Display for ChannelKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[j={}]", self.name, self.j)
    }
}

/// Samples `value(channel, t_i)`; every channel has one value per time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecaySeries {
    times: Vec<f64>,
    channels: BTreeMap<ChannelKey, Vec<f64>>,
    signed: BTreeSet<String>,
}

/// 15 significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.14e}")
}

impl DecaySeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allows negative values in channels called `name` (momentum components, say).
    pub fn mark_signed(&mut self, name: &str) {
        self.signed.insert(name.to_string());
    }

    pub fn is_signed(&self, name: &str) -> bool {
        self.signed.contains(name)
    }

    /// Appends one sample. The first sample fixes the channel set.
    pub fn push(&mut self, t: f64, values: &[(ChannelKey, f64)]) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("sample time {t} is not finite")));
        }
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::Domain(format!("sample times must increase: {t} after {last}")));
            }
        }
        if !self.times.is_empty() {
            if values.len() != self.channels.len() || values.iter().any(|(k, _)| !self.channels.contains_key(k)) {
                return Err(Error::Domain("sample channel set differs from the first sample".into()));
            }
        }
        for (k, v) in values {
            if *v < 0.0 && !self.signed.contains(&k.name) {
                return Err(Error::Domain(format!("negative norm {v} in channel {k}")));
            }
        }
        let n = self.times.len();
        for (k, v) in values {
            let col = self.channels.entry(k.clone()).or_default();
            if col.len() != n {
                return Err(Error::Domain(format!("channel {k} given twice in one sample")));
            }
            col.push(*v);
        }
        self.times.push(t);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn channel(&self, key: &ChannelKey) -> Option<&[f64]> {
        self.channels.get(key).map(Vec::as_slice)
    }

    pub fn keys(&self) -> impl Iterator<Item = &ChannelKey> {
        self.channels.keys()
    }

    /// Rows `t,channel,j,value` in time order, channels sorted within a time.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.times.len() * self.channels.len().max(1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (i, t) in self.times.iter().enumerate() {
            for (k, col) in &self.channels {
                let _ = writeln!(out, "{},{},{},{}", format_value(*t), k.name, k.j, format_value(col[i]));
            }
        }
        out
    }

    /// Writes a `# dragflow <version>` line followed by [`to_csv`](Self::to_csv).
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# dragflow {}", env!("CARGO_PKG_VERSION"))?;
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    /// Parses the CSV form. Comment lines starting with `#` are skipped.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut rows: Vec<(f64, ChannelKey, f64)> = Vec::new();
        let mut header_seen = false;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                if line != CSV_HEADER {
                    return Err(Error::Format(format!("expected header `{CSV_HEADER}`, found `{line}`")));
                }
                header_seen = true;
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            let bad = || Error::Format(format!("malformed row {} `{line}`", lineno + 1));
            if parts.len() != 4 {
                return Err(bad());
            }
            let t: f64 = parts[0].parse().map_err(|_| bad())?;
            let j: u32 = parts[2].parse().map_err(|_| bad())?;
            let v: f64 = parts[3].parse().map_err(|_| bad())?;
            rows.push((t, ChannelKey::new(parts[1], j), v));
        }
        let mut series = DecaySeries::new();
        let mut i = 0;
        while i < rows.len() {
            let t = rows[i].0;
            let mut sample = Vec::new();
            while i < rows.len() && rows[i].0 == t {
                if rows[i].2 < 0.0 {
                    series.mark_signed(&rows[i].1.name);
                }
                sample.push((rows[i].1.clone(), rows[i].2));
                i += 1;
            }
            series.push(t, &sample)?;
        }
        Ok(series)
    }
}

/// `n` points log-spaced on `[a, b]`, `0 < a < b`.
pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| match i {
            0 => a,
            _ if i == n - 1 => b,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}
