//! Spike trains and their plain-text file format.
//!
//! The text format is one decimal spike time (ms) per line, strictly
//! increasing. Lines starting with `#` are comments. The first non-comment
//! line may be `!window <t_start> <t_stop>`; without it the window is
//! `[0, last spike + 1)`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Ordered spike times (ms) observed over the half-open window `[t_start, t_stop)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain {
    times: Vec<f64>,
    t_start: f64,
    t_stop: f64,
}

impl SpikeTrain {
    pub fn new(times: Vec<f64>, t_start: f64, t_stop: f64) -> Result<Self> {
        if !t_start.is_finite() || !t_stop.is_finite() {
            return Err(Error::InvalidTrain("window bounds must be finite".into()));
        }
        if t_start >= t_stop {
            return Err(Error::InvalidTrain(format!(
                "window start {t_start} is not before stop {t_stop}"
            )));
        }
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidTrain(format!("spike {i} is not finite")));
            }
            if t < t_start || t >= t_stop {
                return Err(Error::InvalidTrain(format!(
                    "spike {i} at {t} ms lies outside [{t_start}, {t_stop})"
                )));
            }
            if i > 0 && times[i - 1] >= t {
                return Err(Error::InvalidTrain(format!(
                    "spike times not strictly increasing at index {i} ({} then {t})",
                    times[i - 1]
                )));
            }
        }
        Ok(SpikeTrain {
            times,
            t_start,
            t_stop,
        })
    }

    pub fn empty(t_start: f64, t_stop: f64) -> Result<Self> {
        Self::new(Vec::new(), t_start, t_stop)
    }

    /// Builds a train over `[0, last + 1)`, or `[0, 1)` when empty.
    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        let stop = times.last().map_or(1.0, |&t| t + 1.0);
        Self::new(times, 0.0, stop)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_stop(&self) -> f64 {
        self.t_stop
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn into_times(self) -> Vec<f64> {
        self.times
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_with_origin(text, "<input>")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_with_origin(&text, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 * (self.times.len() + 1));
        let _ = writeln!(out, "!window {} {}", self.t_start, self.t_stop);
        for t in &self.times {
            let _ = writeln!(out, "{t}");
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Merges several trains into one sorted time vector. Coincident spikes from
/// different trains are all kept, so the result may contain repeated times.
pub fn merge_population<'a>(trains: impl IntoIterator<Item = &'a SpikeTrain>) -> Vec<f64> {
    let mut all: Vec<f64> = trains
        .into_iter()
        .flat_map(|t| t.times().iter().copied())
        .collect();
    all.sort_by(f64::total_cmp);
    all
}

fn parse_with_origin(text: &str, origin: &str) -> Result<SpikeTrain> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut window: Option<(f64, f64)> = None;
    let mut seen_data = false;
    let mut times = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("!window") {
            if seen_data {
                return Err(err(
                    line_no,
                    "`!window` must be the first non-comment line".into(),
                ));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err(
                    line_no,
                    "expected `!window <t_start> <t_stop>`".into(),
                ));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| err(line_no, format!("bad window bound `{s}`")))
            };
            window = Some((parse(parts[0])?, parse(parts[1])?));
            seen_data = true;
            continue;
        }
        seen_data = true;
        let t: f64 = line
            .parse()
            .map_err(|_| err(line_no, format!("bad spike time `{line}`")))?;
        if !t.is_finite() {
            return Err(err(line_no, format!("spike time `{line}` is not finite")));
        }
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(err(
                    line_no,
                    format!("spike time {t} does not exceed previous {prev}"),
                ));
            }
        }
        times.push(t);
    }
    match window {
        Some((start, stop)) => SpikeTrain::new(times, start, stop),
        None => SpikeTrain::from_times(times),
    }
    .map_err(|e| err(0, e.to_string()))
}
