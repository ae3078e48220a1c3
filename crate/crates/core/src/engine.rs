//! Clock-driven network simulation.
//!
//! Step `k` covers `[k dt, (k+1) dt)`. During the step, synaptic events due at
//! `k dt` are summed into a membrane jump `kappa * w * sign`, generator events
//! inject `amplitude` pA, and every neuron advances through [`lif_step`]. A
//! spike is stamped at the end of its step, `(k+1) dt`, and reaches its
//! targets `delay` later.
//!
//! [`lif_step`]: crate::neuron::lif_step

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::neuron::{step_unchecked, NeuronState};
use crate::plasticity::{StdpParams, Trace};
use crate::spike_train::SpikeTrain;
use crate::stimulus::{generate_steps, StimulusSpec};
use crate::topology::{NetworkTopology, NeuronId, SynapseKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plasticity {
    Off,
    On(StdpParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub recorded: BTreeMap<NeuronId, SpikeTrain>,
    /// Simulated time (ms); every recorded window is `[0, duration)`.
    pub duration: f64,
    /// Synaptic weights at the end of the run, in topology order.
    pub final_weights: Vec<f64>,
}

impl SimResult {
    pub fn train(&self, id: NeuronId) -> Option<&SpikeTrain> {
        self.recorded.get(&id)
    }

    pub fn trains<'a>(&'a self, ids: &'a [NeuronId]) -> impl Iterator<Item = &'a SpikeTrain> + 'a {
        ids.iter().filter_map(move |id| self.recorded.get(id))
    }
}

/// Converts a delay to whole steps, rejecting delays that are not a positive
/// multiple of `dt`.
fn delay_steps(delay: f64, dt: f64, synapse: usize) -> Result<usize> {
    let ratio = delay / dt;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidTopology(format!(
            "synapse {synapse} delay {delay} ms is not a positive multiple of dt {dt} ms"
        )));
    }
    Ok(steps as usize)
}

pub fn simulate(
    topology: &NetworkTopology,
    stimulus: &StimulusSpec,
    duration: f64,
    dt: f64,
    seed: u64,
    plasticity: Plasticity,
) -> Result<SimResult> {
    topology.validate()?;
    if let Plasticity::On(p) = &plasticity {
        p.validate()?;
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidParams(format!("duration must be positive, got {duration}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
    }
    let n_steps = (duration / dt).round() as usize;
    let n = topology.neuron_count();
    let syn = &topology.synapses;

    let delays: Vec<usize> = syn
        .iter()
        .enumerate()
        .map(|(i, s)| delay_steps(s.delay, dt, i))
        .collect::<Result<_>>()?;
    let ring_len = delays.iter().copied().max().unwrap_or(0) + 2;

    let mut outgoing: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut plastic_in: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, s) in syn.iter().enumerate() {
        outgoing[s.pre].push(i as u32);
        if s.kind == SynapseKind::Stdp {
            plastic_in[s.post].push(i as u32);
        }
    }
    let stdp = match plasticity {
        Plasticity::On(p) => Some(p),
        Plasticity::Off => None,
    };

    // Per-step generator current for each input neuron.
    let mut drive: Vec<(NeuronId, Vec<u64>)> = Vec::with_capacity(topology.input_ids.len());
    for (idx, &id) in topology.input_ids.iter().enumerate() {
        let steps = generate_steps(&stimulus.for_input(seed, idx), duration, dt)?;
        drive.push((id, steps));
    }
    let mut drive_cursor = vec![0usize; drive.len()];
    let mut current = vec![0.0f64; n];

    let mut weights: Vec<f64> = syn.iter().map(|s| s.weight).collect();
    let mut x_pre = vec![Trace::default(); syn.len()];
    let mut x_post = vec![Trace::default(); n];
    let mut state: Vec<NeuronState> = topology.neurons.iter().map(NeuronState::at_rest).collect();
    let mut jump = vec![0.0f64; n];
    let mut ring: Vec<Vec<u32>> = vec![Vec::new(); ring_len];
    let mut spikes: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut fired: Vec<NeuronId> = Vec::new();

    for k in 0..n_steps {
        let now = k as f64 * dt;
        let slot = k % ring_len;
        let arriving = std::mem::take(&mut ring[slot]);
        for &si in &arriving {
            let si = si as usize;
            let s = &syn[si];
            jump[s.post] += topology.neurons[s.post].kappa * weights[si] * s.sign.factor();
            if let (Some(p), SynapseKind::Stdp) = (&stdp, s.kind) {
                let dep = p.a_minus * x_post[s.post].before(now, p.tau_minus);
                weights[si] = p.clip(weights[si] - dep);
                x_pre[si].bump(now, p.tau_plus);
            }
        }
        ring[slot] = arriving;
        ring[slot].clear();

        for (d, (id, steps)) in drive.iter().enumerate() {
            let c = &mut drive_cursor[d];
            if *c < steps.len() && steps[*c] == k as u64 {
                current[*id] += stimulus.amplitude;
                *c += 1;
            }
        }

        fired.clear();
        for i in 0..n {
            let (next, spiked) =
                step_unchecked(state[i], &topology.neurons[i], current[i], jump[i], dt, now);
            state[i] = next;
            if spiked {
                fired.push(i);
            }
        }
        current.iter_mut().for_each(|c| *c = 0.0);
        jump.iter_mut().for_each(|j| *j = 0.0);

        let t_spike = (k + 1) as f64 * dt;
        for &i in &fired {
            if k + 1 < n_steps {
                spikes[i].push(t_spike);
            }
            if let Some(p) = &stdp {
                for &si in &plastic_in[i] {
                    let si = si as usize;
                    let pot = p.a_plus * x_pre[si].before(t_spike, p.tau_plus);
                    weights[si] = p.clip(weights[si] + pot);
                }
                x_post[i].bump(t_spike, p.tau_minus);
            }
            for &si in &outgoing[i] {
                let arrival = k + 1 + delays[si as usize];
                ring[arrival % ring_len].push(si);
            }
        }
    }

    let mut recorded = BTreeMap::new();
    for &id in &topology.recorded_ids {
        let train = SpikeTrain::new(std::mem::take(&mut spikes[id]), 0.0, duration)?;
        recorded.insert(id, train);
    }
    Ok(SimResult {
        recorded,
        duration,
        final_weights: weights,
    })
}
