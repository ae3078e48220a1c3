//! Additive spike-timing-dependent plasticity.
//!
//! The window is `W(x) = A+ exp(-x/tau+)` for `x > 0` and
//! `W(x) = -A- exp(x/tau-)` for `x < 0`, with `x = t_post - t_pre`.
//! The total change of a synapse is the all-to-all sum of `W` over every
//! (pre, post) pair. [`Trace`] realises the same sum online.

use crate::error::{Error, Result};
use crate::spike_train::SpikeTrain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdpParams {
    pub a_plus: f64,
    pub a_minus: f64,
    /// Potentiation time constant (ms).
    pub tau_plus: f64,
    /// Depression time constant (ms).
    pub tau_minus: f64,
    pub w_floor: f64,
    pub w_ceiling: f64,
}

impl Default for StdpParams {
    fn default() -> Self {
        StdpParams {
            a_plus: 0.1,
            a_minus: 0.1,
            tau_plus: 10.0,
            tau_minus: 10.0,
            w_floor: 0.0,
            w_ceiling: f64::INFINITY,
        }
    }
}

impl StdpParams {
    pub fn validate(&self) -> Result<()> {
        if [self.a_plus, self.a_minus, self.tau_plus, self.tau_minus]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("STDP amplitudes or time constants"));
        }
        if self.a_plus < 0.0 || self.a_minus < 0.0 {
            return Err(Error::InvalidParams(
                "STDP amplitudes must be non-negative".into(),
            ));
        }
        if self.tau_plus <= 0.0 || self.tau_minus <= 0.0 {
            return Err(Error::InvalidParams(
                "STDP time constants must be positive".into(),
            ));
        }
        if self.w_floor.is_nan() || self.w_ceiling.is_nan() || self.w_floor >= self.w_ceiling {
            return Err(Error::InvalidParams(format!(
                "need w_floor < w_ceiling, got {} / {}",
                self.w_floor, self.w_ceiling
            )));
        }
        Ok(())
    }

    /// Same parameters with clipping disabled.
    pub fn unbounded(self) -> Self {
        StdpParams {
            w_floor: f64::NEG_INFINITY,
            w_ceiling: f64::INFINITY,
            ..self
        }
    }

    #[inline]
    pub fn clip(&self, w: f64) -> f64 {
        w.clamp(self.w_floor, self.w_ceiling)
    }
}

/// Weight change for a single pair separated by `x = t_post - t_pre` (ms).
/// Exact coincidence contributes nothing.
pub fn stdp_window(x: f64, params: &StdpParams) -> f64 {
    if x > 0.0 {
        params.a_plus * (-x / params.tau_plus).exp()
    } else if x < 0.0 {
        -params.a_minus * (x / params.tau_minus).exp()
    } else {
        0.0
    }
}

/// All-to-all pair sum over pre and post spike times. No clipping.
pub fn pair_delta(pre: &SpikeTrain, post: &SpikeTrain, params: &StdpParams) -> f64 {
    pair_delta_times(pre.times(), post.times(), params)
}

pub(crate) fn pair_delta_times(pre: &[f64], post: &[f64], params: &StdpParams) -> f64 {
    post.iter()
        .map(|&tn| pre.iter().map(|&tf| stdp_window(tn - tf, params)).sum::<f64>())
        .sum()
}

/// Exponentially decaying spike trace with lazy decay.
///
/// The value at `t` sums `exp(-(t - s)/tau)` over bumps at `s <= t`;
/// [`Trace::before`] excludes bumps made exactly at `t`, which keeps
/// coincident pre/post events out of the sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trace {
    value: f64,
    t_last: f64,
    bumps_at_last: u32,
}

impl Default for Trace {
    fn default() -> Self {
        Trace {
            value: 0.0,
            t_last: f64::NEG_INFINITY,
            bumps_at_last: 0,
        }
    }
}

impl Trace {
    #[inline]
    pub fn at(&self, t: f64, tau: f64) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.value * (-(t - self.t_last) / tau).exp()
        }
    }

    #[inline]
    pub fn before(&self, t: f64, tau: f64) -> f64 {
        if t == self.t_last {
            self.value - self.bumps_at_last as f64
        } else {
            self.at(t, tau)
        }
    }

    #[inline]
    pub fn bump(&mut self, t: f64, tau: f64) {
        if t == self.t_last {
            self.value += 1.0;
            self.bumps_at_last += 1;
        } else {
            self.value = self.at(t, tau) + 1.0;
            self.t_last = t;
            self.bumps_at_last = 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StdpEventKind {
    /// Presynaptic spike arriving at the synapse.
    Pre,
    /// Postsynaptic spike.
    Post,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdpEvent {
    pub time: f64,
    pub kind: StdpEventKind,
}

/// Replays time-ordered events through pre/post traces starting from weight
/// `w0`, clipping after every update. Returns the weight after each event.
///
/// Events sharing a timestamp see traces that exclude each other, so a
/// coincident pair contributes `W(0) = 0`. Within such a group depression is
/// applied before potentiation.
pub fn apply_online_stdp(w0: f64, events: &[StdpEvent], params: &StdpParams) -> Result<Vec<f64>> {
    if events.windows(2).any(|w| w[1].time < w[0].time) {
        return Err(Error::InvalidParams("STDP events must be time-ordered".into()));
    }
    if events.iter().any(|e| !e.time.is_finite()) {
        return Err(Error::NonFinite("STDP event time"));
    }
    let mut x_pre = Trace::default();
    let mut x_post = Trace::default();
    let mut w = w0;
    let mut trajectory = vec![0.0; events.len()];
    let mut start = 0;
    while start < events.len() {
        let t = events[start].time;
        let end = start + events[start..].iter().take_while(|e| e.time == t).count();
        let group = start..end;
        for i in group.clone() {
            if events[i].kind == StdpEventKind::Pre {
                w = params.clip(w - params.a_minus * x_post.before(t, params.tau_minus));
                trajectory[i] = w;
            }
        }
        for i in group.clone() {
            if events[i].kind == StdpEventKind::Post {
                w = params.clip(w + params.a_plus * x_pre.before(t, params.tau_plus));
                trajectory[i] = w;
            }
        }
        for i in group {
            match events[i].kind {
                StdpEventKind::Pre => x_pre.bump(t, params.tau_plus),
                StdpEventKind::Post => x_post.bump(t, params.tau_minus),
            }
        }
        start = end;
    }
    Ok(trajectory)
}

/// Interleaves pre and post trains into a time-ordered event list.
pub fn events_from_trains(pre: &[f64], post: &[f64]) -> Vec<StdpEvent> {
    let mut events: Vec<StdpEvent> = pre
        .iter()
        .map(|&time| StdpEvent {
            time,
            kind: StdpEventKind::Pre,
        })
        .chain(post.iter().map(|&time| StdpEvent {
            time,
            kind: StdpEventKind::Post,
        }))
        .collect();
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    events
}
