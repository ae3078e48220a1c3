//! Spike generators that drive the input population.

use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::seed;

/// Largest grid we are willing to index (steps per run).
const MAX_GRID_STEPS: f64 = (1u64 << 40) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StimulusKind {
    Regular,
    Poisson,
}

impl StimulusKind {
    pub fn name(self) -> &'static str {
        match self {
            StimulusKind::Regular => "regular",
            StimulusKind::Poisson => "poisson",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StimulusSpec {
    pub kind: StimulusKind,
    /// Event rate (Hz).
    pub rate: f64,
    /// Seed for the Poisson stream.
    pub seed: u64,
    /// Current (pA) injected during the step of each generator event.
    pub amplitude: f64,
}

impl Default for StimulusSpec {
    /// Regular 25 Hz drive whose one-step pulse lifts a resting default
    /// neuron 24 mV, well past the 15 mV threshold gap.
    fn default() -> Self {
        StimulusSpec {
            kind: StimulusKind::Regular,
            rate: 25.0,
            seed: 0,
            amplitude: 60_000.0,
        }
    }
}

impl StimulusSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate.is_finite() && self.rate > 0.0) {
            return Err(Error::InvalidParams(format!(
                "stimulus rate must be positive, got {}",
                self.rate
            )));
        }
        // Zero amplitude is allowed: it gives a silent network for testing.
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "stimulus amplitude must be non-negative, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }

    /// Stream for one input neuron. Regular generators are shared by every
    /// input; Poisson generators get an independent stream per neuron.
    pub fn for_input(&self, run_seed: u64, input_index: usize) -> StimulusSpec {
        match self.kind {
            StimulusKind::Regular => *self,
            StimulusKind::Poisson => StimulusSpec {
                seed: seed::hash64(&[self.seed, run_seed, input_index as u64]),
                ..*self
            },
        }
    }
}

/// Event times (ms) on the `dt` grid within `[0, duration)`.
pub fn generate_stimulus(spec: &StimulusSpec, duration: f64, dt: f64) -> Result<Vec<f64>> {
    Ok(generate_steps(spec, duration, dt)?
        .into_iter()
        .map(|k| k as f64 * dt)
        .collect())
}

/// Same as [`generate_stimulus`] but as grid step indices.
pub(crate) fn generate_steps(spec: &StimulusSpec, duration: f64, dt: f64) -> Result<Vec<u64>> {
    spec.validate()?;
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidParams(format!(
            "duration must be positive, got {duration}"
        )));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
    }
    let n_steps = duration / dt;
    if n_steps > MAX_GRID_STEPS {
        return Err(Error::GridOverflow(format!(
            "{duration} ms at dt {dt} ms needs {n_steps:.0} steps"
        )));
    }
    let n_steps = n_steps.round() as u64;
    let period = 1000.0 / spec.rate;
    if period < dt {
        return Err(Error::GridOverflow(format!(
            "rate {} Hz gives a {period} ms period, finer than dt {dt} ms",
            spec.rate
        )));
    }
    let snap = |t: f64| (t / dt).round() as u64;

    let mut steps = Vec::new();
    match spec.kind {
        StimulusKind::Regular => {
            let mut k = 0u64;
            loop {
                let t = k as f64 * period;
                if t >= duration {
                    break;
                }
                let s = snap(t);
                if s < n_steps && steps.last() != Some(&s) {
                    steps.push(s);
                }
                k += 1;
            }
        }
        StimulusKind::Poisson => {
            let mut rng = seed::rng(spec.seed);
            let gaps = Exp::new(1.0 / period).expect("positive rate");
            let mut t = gaps.sample(&mut rng);
            while t < duration {
                let s = snap(t);
                if s < n_steps && steps.last() != Some(&s) {
                    steps.push(s);
                }
                t += gaps.sample(&mut rng);
            }
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_25hz() {
        let spec = StimulusSpec::default();
        let ev = generate_stimulus(&spec, 200.0, 0.1).unwrap();
        assert_eq!(ev, vec![0.0, 40.0, 80.0, 120.0, 160.0]);
    }

    #[test]
    fn regular_events_are_grid_aligned() {
        let spec = StimulusSpec {
            rate: 30.0,
            ..StimulusSpec::default()
        };
        let steps = generate_steps(&spec, 1000.0, 0.1).unwrap();
        assert_eq!(steps.len(), 30);
        assert_eq!(steps[1], 333);
    }

    #[test]
    fn poisson_is_seed_deterministic() {
        let spec = StimulusSpec {
            kind: StimulusKind::Poisson,
            seed: 42,
            ..StimulusSpec::default()
        };
        let a = generate_stimulus(&spec, 2000.0, 0.1).unwrap();
        let b = generate_stimulus(&spec, 2000.0, 0.1).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a.iter().all(|&t| (0.0..2000.0).contains(&t)));
        let other = generate_stimulus(&StimulusSpec { seed: 43, ..spec }, 2000.0, 0.1).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn poisson_per_input_streams_differ() {
        let spec = StimulusSpec {
            kind: StimulusKind::Poisson,
            ..StimulusSpec::default()
        };
        assert_ne!(spec.for_input(0, 0).seed, spec.for_input(0, 1).seed);
        let reg = StimulusSpec::default();
        assert_eq!(reg.for_input(5, 3), reg);
    }

    #[test]
    fn overflow_and_bad_inputs() {
        let fast = StimulusSpec {
            rate: 20_000.0,
            ..StimulusSpec::default()
        };
        assert!(matches!(
            generate_stimulus(&fast, 100.0, 0.1),
            Err(Error::GridOverflow(_))
        ));
        assert!(matches!(
            generate_stimulus(&StimulusSpec::default(), 1e18, 0.1),
            Err(Error::GridOverflow(_))
        ));
        assert!(generate_stimulus(&StimulusSpec::default(), 0.0, 0.1).is_err());
        let bad = StimulusSpec {
            rate: 0.0,
            ..StimulusSpec::default()
        };
        assert!(generate_stimulus(&bad, 10.0, 0.1).is_err());
    }
}
