//! Leaky integrate-and-fire neuron.
//!
//! ```text
//! du/dt = (u_rest - u) / tau_m + I(t) / c_m
//! ```
//!
//! integrated with forward Euler. Synaptic input arrives as an instantaneous
//! membrane jump added after the Euler increment.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifParams {
    /// Resting potential (mV).
    pub u_rest: f64,
    /// Firing threshold (mV).
    pub u_th: f64,
    /// Post-spike reset potential (mV).
    pub u_reset: f64,
    /// Membrane time constant (ms).
    pub tau_m: f64,
    /// Membrane capacitance (pF).
    pub c_m: f64,
    /// Absolute refractory period (ms).
    pub t_ref: f64,
    /// Membrane jump per unit of synaptic weight (mV).
    pub kappa: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        LifParams {
            u_rest: -70.0,
            u_th: -55.0,
            u_reset: -70.0,
            tau_m: 10.0,
            c_m: 250.0,
            t_ref: 2.0,
            kappa: 0.05,
        }
    }
}

impl LifParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.u_rest,
            self.u_reset,
            self.tau_m,
            self.c_m,
            self.t_ref,
            self.kappa,
        ];
        if fields.iter().any(|v| !v.is_finite()) || self.u_th.is_nan() {
            return Err(Error::NonFinite("LIF parameters"));
        }
        if self.tau_m <= 0.0 || self.c_m <= 0.0 {
            return Err(Error::InvalidParams(
                "tau_m and c_m must be positive".into(),
            ));
        }
        if self.t_ref < 0.0 {
            return Err(Error::InvalidParams("t_ref must be non-negative".into()));
        }
        if !(self.u_reset <= self.u_rest && self.u_rest < self.u_th) {
            return Err(Error::InvalidParams(format!(
                "need u_reset <= u_rest < u_th, got {} / {} / {}",
                self.u_reset, self.u_rest, self.u_th
            )));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams("kappa must be positive".into()));
        }
        Ok(())
    }

    /// Gap between rest and threshold (mV).
    pub fn threshold_gap(&self) -> f64 {
        self.u_th - self.u_rest
    }

    /// Asymptotic potential under constant current `i` (pA), ignoring threshold.
    pub fn steady_state(&self, i: f64) -> f64 {
        self.u_rest + i * self.tau_m / self.c_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronState {
    /// Membrane potential (mV).
    pub u: f64,
    /// Time (ms) before which the neuron is refractory.
    pub refractory_until: f64,
}

impl NeuronState {
    pub fn at_rest(params: &LifParams) -> Self {
        NeuronState {
            u: params.u_rest,
            refractory_until: f64::NEG_INFINITY,
        }
    }
}

/// Advances one neuron by `dt` starting at time `now`.
///
/// While refractory the potential is clamped to `u_reset`, and any input
/// (current or jump) is dropped.
pub fn lif_step(
    state: NeuronState,
    params: &LifParams,
    input_current: f64,
    synaptic_jump: f64,
    dt: f64,
    now: f64,
) -> Result<(NeuronState, bool)> {
    if !input_current.is_finite() {
        return Err(Error::NonFinite("input current"));
    }
    if !synaptic_jump.is_finite() {
        return Err(Error::NonFinite("synaptic jump"));
    }
    if !dt.is_finite() || !now.is_finite() || !state.u.is_finite() {
        return Err(Error::NonFinite("step time or state"));
    }
    if dt <= 0.0 {
        return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
    }
    Ok(step_unchecked(state, params, input_current, synaptic_jump, dt, now))
}

#[inline]
pub(crate) fn step_unchecked(
    state: NeuronState,
    params: &LifParams,
    input_current: f64,
    synaptic_jump: f64,
    dt: f64,
    now: f64,
) -> (NeuronState, bool) {
    if now < state.refractory_until {
        return (
            NeuronState {
                u: params.u_reset,
                refractory_until: state.refractory_until,
            },
            false,
        );
    }
    let du = (params.u_rest - state.u) / params.tau_m + input_current / params.c_m;
    let u = state.u + dt * du + synaptic_jump;
    if u >= params.u_th {
        (
            NeuronState {
                u: params.u_reset,
                refractory_until: now + params.t_ref,
            },
            true,
        )
    } else {
        (
            NeuronState {
                u,
                refractory_until: state.refractory_until,
            },
            false,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_threshold() -> LifParams {
        LifParams {
            u_th: f64::INFINITY,
            ..LifParams::default()
        }
    }

    #[test]
    fn rest_is_a_fixed_point() {
        let p = LifParams::default();
        let s = NeuronState::at_rest(&p);
        let (next, spiked) = lif_step(s, &p, 0.0, 0.0, 0.1, 0.0).unwrap();
        assert_eq!(next.u, p.u_rest);
        assert!(!spiked);
    }

    #[test]
    fn constant_current_converges_to_steady_state() {
        let p = no_threshold();
        let mut s = NeuronState::at_rest(&p);
        for k in 0..20_000 {
            s = lif_step(s, &p, 250.0, 0.0, 0.1, k as f64 * 0.1).unwrap().0;
        }
        assert!((s.u - (-60.0)).abs() < 1e-9, "{}", s.u);
        assert_eq!(p.steady_state(250.0), -60.0);
    }

    #[test]
    fn euler_tracks_a_fine_reference() {
        // Reference: same integrator with a step 100x finer.
        let p = no_threshold();
        let run = |dt: f64, steps: usize| {
            let mut s = NeuronState::at_rest(&p);
            for k in 0..steps {
                s = lif_step(s, &p, 250.0, 0.0, dt, k as f64 * dt).unwrap().0;
            }
            s.u
        };
        let coarse = run(0.1, 200);
        let fine = run(0.001, 20_000);
        assert!((coarse - fine).abs() < 0.05, "{coarse} vs {fine}");
    }

    #[test]
    fn crossing_jump_resets() {
        let p = LifParams::default();
        let s = NeuronState {
            u: p.u_th - 0.5,
            refractory_until: f64::NEG_INFINITY,
        };
        let (next, spiked) = lif_step(s, &p, 0.0, 1.0, 0.1, 5.0).unwrap();
        assert!(spiked);
        assert_eq!(next.u, p.u_reset);
        assert_eq!(next.refractory_until, 5.0 + p.t_ref);
    }

    #[test]
    fn refractory_clamps_and_drops_input() {
        let p = LifParams::default();
        let s = NeuronState {
            u: -60.0,
            refractory_until: 3.0,
        };
        let (next, spiked) = lif_step(s, &p, 1e6, 100.0, 0.1, 2.9).unwrap();
        assert!(!spiked);
        assert_eq!(next.u, p.u_reset);
    }

    #[test]
    fn rejects_non_finite_inputs() {
        let p = LifParams::default();
        let s = NeuronState::at_rest(&p);
        assert!(lif_step(s, &p, f64::NAN, 0.0, 0.1, 0.0).is_err());
        assert!(lif_step(s, &p, 0.0, f64::INFINITY, 0.1, 0.0).is_err());
        assert!(lif_step(s, &p, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(LifParams::default().validate().is_ok());
        let bad = LifParams {
            u_reset: -50.0,
            ..LifParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = LifParams {
            tau_m: 0.0,
            ..LifParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = LifParams {
            kappa: 0.0,
            ..LifParams::default()
        };
        assert!(bad.validate().is_err());
    }
}
