//! Uniformly sampled record of named channels produced by a run.

/// One applied event (or emitted warning), for the run log.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLogEntry {
    pub t: f64,
    pub path: String,
    pub old: f64,
    pub new: f64,
}

/// Uniform multi-channel recording. All channels share the same length; row
/// `k` is at time `k·dt` from `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    dt: f64,
    t0: f64,
    f1: f64,
    names: Vec<String>,
    data: Vec<Vec<f64>>,
    events: Vec<EventLogEntry>,
}

impl TimeSeries {
    pub(crate) fn new(dt: f64, t0: f64, f1: f64, names: Vec<String>, capacity: usize) -> Self {
        let data = names.iter().map(|_| Vec::with_capacity(capacity)).collect();
        Self { dt, t0, f1, names, data, events: Vec::new() }
    }

    pub(crate) fn push_row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.data.len());
        for (channel, &v) in self.data.iter_mut().zip(values) {
            channel.push(v);
        }
    }

    pub(crate) fn log_event(&mut self, entry: EventLogEntry) {
        self.events.push(entry);
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Fundamental frequency of the run that produced this record.
    pub fn fundamental_hz(&self) -> f64 {
        self.f1
    }

    /// Sample rate, 1/dt.
    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn samples_per_cycle(&self) -> usize {
        (self.sample_rate() / self.f1).round() as usize
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Time of row `k` (same expression the engine used while stepping, so
    /// values are bit-identical).
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|idx| self.data[idx].as_slice())
    }

    /// The final `cycles` fundamental cycles of a channel.
    pub fn last_cycles(&self, name: &str, cycles: usize) -> Option<&[f64]> {
        let spc = self.samples_per_cycle();
        let window = spc.checked_mul(cycles)?;
        let channel = self.channel(name)?;
        if channel.len() < window {
            return None;
        }
        Some(&channel[channel.len() - window..])
    }

    /// A window of `cycles` fundamental cycles starting at time `t_start`
    /// (rounded to the nearest sample).
    pub fn cycles_from(&self, name: &str, t_start: f64, cycles: usize) -> Option<&[f64]> {
        let spc = self.samples_per_cycle();
        let window = spc.checked_mul(cycles)?;
        let channel = self.channel(name)?;
        let start = ((t_start - self.t0) / self.dt).round();
        if start < 0.0 {
            return None;
        }
        let start = start as usize;
        if start + window > channel.len() {
            return None;
        }
        Some(&channel[start..start + window])
    }

    pub fn events(&self) -> &[EventLogEntry] {
        &self.events
    }
}
