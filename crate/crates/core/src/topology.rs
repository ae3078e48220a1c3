//! Network shapes used by the experiments: fully connected layered nets and
//! a liquid state machine (input, fixed recurrent liquid, read-out, plus
//! direct input-to-output synapses).

use std::fmt::Write as _;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::neuron::LifParams;
use crate::seed;
use crate::weight_init::{draw_weights_seeded, uniform_weights, InitMethod, WeightRange};

pub type NeuronId = usize;

/// Synaptic delay used for every connection (ms).
pub const SYNAPSE_DELAY_MS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Excitatory,
    Inhibitory,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Excitatory => 1.0,
            Sign::Inhibitory => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Excitatory => "excitatory",
            Sign::Inhibitory => "inhibitory",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynapseKind {
    Static,
    Stdp,
}

impl SynapseKind {
    pub fn name(self) -> &'static str {
        match self {
            SynapseKind::Static => "static",
            SynapseKind::Stdp => "stdp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerTag {
    InputLiquid,
    LiquidLiquid,
    LiquidReadout,
    InputOutputDirect,
    Interlayer,
}

impl LayerTag {
    pub fn name(self) -> &'static str {
        match self {
            LayerTag::InputLiquid => "input->liquid",
            LayerTag::LiquidLiquid => "liquid->liquid",
            LayerTag::LiquidReadout => "liquid->readout",
            LayerTag::InputOutputDirect => "input->output-direct",
            LayerTag::Interlayer => "interlayer",
        }
    }

    /// Tags whose weights are redrawn every epoch.
    pub fn is_reassigned(self) -> bool {
        matches!(
            self,
            LayerTag::InputLiquid | LayerTag::LiquidReadout | LayerTag::Interlayer
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynapseSpec {
    pub pre: NeuronId,
    pub post: NeuronId,
    pub weight: f64,
    pub sign: Sign,
    /// Transmission delay (ms).
    pub delay: f64,
    pub kind: SynapseKind,
    pub tag: LayerTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    pub neurons: Vec<LifParams>,
    pub synapses: Vec<SynapseSpec>,
    pub input_ids: Vec<NeuronId>,
    pub output_ids: Vec<NeuronId>,
    pub recorded_ids: Vec<NeuronId>,
    pub liquid_ids: Vec<NeuronId>,
}

impl NetworkTopology {
    pub fn neuron_count(&self) -> usize {
        self.neurons.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.neurons.len();
        for p in &self.neurons {
            p.validate()?;
        }
        let check_ids = |ids: &[NeuronId], what: &str| -> Result<()> {
            if let Some(&bad) = ids.iter().find(|&&id| id >= n) {
                return Err(Error::InvalidTopology(format!(
                    "{what} id {bad} out of range for {n} neurons"
                )));
            }
            Ok(())
        };
        check_ids(&self.input_ids, "input")?;
        check_ids(&self.output_ids, "output")?;
        check_ids(&self.recorded_ids, "recorded")?;
        check_ids(&self.liquid_ids, "liquid")?;
        if let Some(id) = self.input_ids.iter().find(|id| self.output_ids.contains(id)) {
            return Err(Error::InvalidTopology(format!(
                "neuron {id} is both input and output"
            )));
        }
        for (i, s) in self.synapses.iter().enumerate() {
            if s.pre >= n || s.post >= n {
                return Err(Error::InvalidTopology(format!(
                    "synapse {i} ({} -> {}) references a missing neuron",
                    s.pre, s.post
                )));
            }
            if s.pre == s.post {
                return Err(Error::InvalidTopology(format!("synapse {i} is a self-connection")));
            }
            if !(s.weight.is_finite() && s.weight >= 0.0) {
                return Err(Error::InvalidTopology(format!(
                    "synapse {i} has invalid weight {}",
                    s.weight
                )));
            }
            if !(s.delay.is_finite() && s.delay > 0.0) {
                return Err(Error::InvalidTopology(format!(
                    "synapse {i} has invalid delay {}",
                    s.delay
                )));
            }
            if s.tag == LayerTag::LiquidLiquid && s.kind != SynapseKind::Static {
                return Err(Error::InvalidTopology(format!(
                    "liquid synapse {i} must be static"
                )));
            }
        }
        Ok(())
    }

    /// Weights of the fixed liquid recurrence, in synapse order.
    pub fn liquid_weights(&self) -> Vec<f64> {
        self.synapses
            .iter()
            .filter(|s| s.tag == LayerTag::LiquidLiquid)
            .map(|s| s.weight)
            .collect()
    }

    pub fn count_tag(&self, tag: LayerTag) -> usize {
        self.synapses.iter().filter(|s| s.tag == tag).count()
    }

    /// Returns a copy with every reassignable synapse set to `weight`.
    pub fn with_interlayer_weight(&self, weight: f64) -> NetworkTopology {
        let mut out = self.clone();
        for s in out.synapses.iter_mut().filter(|s| s.tag.is_reassigned()) {
            s.weight = weight;
        }
        out
    }

    /// CSV dump: `pre,post,weight,sign,kind,delay,layer_tag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pre,post,weight,sign,kind,delay,layer_tag\n");
        for s in &self.synapses {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.pre,
                s.post,
                s.weight,
                s.sign.name(),
                s.kind.name(),
                s.delay,
                s.tag.name()
            );
        }
        out
    }
}

/// Fully connected feed-forward layers. The first layer receives the
/// stimulus; first and last layers are recorded.
pub fn build_layered(
    layer_sizes: &[usize],
    lif: &LifParams,
    init: &InitMethod,
    range: WeightRange,
    seed: u64,
) -> Result<NetworkTopology> {
    if layer_sizes.len() < 2 {
        return Err(Error::InvalidTopology(format!(
            "need at least two layers, got {}",
            layer_sizes.len()
        )));
    }
    if let Some(i) = layer_sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidTopology(format!("layer {i} is empty")));
    }
    let total: usize = layer_sizes.iter().sum();
    let mut offsets = Vec::with_capacity(layer_sizes.len());
    let mut acc = 0;
    for &s in layer_sizes {
        offsets.push(acc);
        acc += s;
    }
    let mut synapses = Vec::new();
    for l in 0..layer_sizes.len() - 1 {
        for pre in offsets[l]..offsets[l] + layer_sizes[l] {
            for post in offsets[l + 1]..offsets[l + 1] + layer_sizes[l + 1] {
                synapses.push(SynapseSpec {
                    pre,
                    post,
                    weight: 0.0,
                    sign: Sign::Excitatory,
                    delay: SYNAPSE_DELAY_MS,
                    kind: SynapseKind::Stdp,
                    tag: LayerTag::Interlayer,
                });
            }
        }
    }
    let input_ids: Vec<NeuronId> = (0..layer_sizes[0]).collect();
    let last = layer_sizes.len() - 1;
    let output_ids: Vec<NeuronId> = (offsets[last]..total).collect();
    let recorded_ids = input_ids.iter().chain(&output_ids).copied().collect();
    let topo = NetworkTopology {
        neurons: vec![*lif; total],
        synapses,
        input_ids,
        output_ids,
        recorded_ids,
        liquid_ids: Vec::new(),
    };
    reassign_interlayer_weights(&topo, init, range, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsmSpec {
    pub n_in: usize,
    pub n_liquid: usize,
    pub n_out: usize,
    /// Outgoing recurrent connections per liquid neuron.
    pub k_rec: usize,
    /// Inhibitory recurrent synapses; `None` means 20 % (at least one).
    pub n_inh: Option<usize>,
    /// Direct input-to-output weight; `None` means twice the threshold gap.
    pub w_direct: Option<f64>,
}

impl Default for LsmSpec {
    fn default() -> Self {
        LsmSpec {
            n_in: 2,
            n_liquid: 8,
            n_out: 2,
            k_rec: 2,
            n_inh: None,
            w_direct: None,
        }
    }
}

impl LsmSpec {
    pub fn recurrent_count(&self) -> usize {
        self.n_liquid * self.k_rec
    }

    pub fn inhibitory_count(&self) -> usize {
        self.n_inh
            .unwrap_or_else(|| (self.recurrent_count() / 5).max(1))
    }

    /// Weight that lifts a resting neuron twice the threshold gap.
    pub fn direct_weight(&self, lif: &LifParams) -> f64 {
        self.w_direct
            .unwrap_or_else(|| 2.0 * lif.threshold_gap() / lif.kappa)
    }
}

/// Liquid state machine. Neuron ids: inputs, then liquid, then read-out.
///
/// The liquid recurrence (wiring, inhibitory subset and weights) depends
/// only on `liquid_seed`; the plastic input→liquid and liquid→read-out
/// weights come from `epoch_seed`.
pub fn build_lsm(
    spec: &LsmSpec,
    lif: &LifParams,
    init: &InitMethod,
    range: WeightRange,
    liquid_seed: u64,
    epoch_seed: u64,
) -> Result<NetworkTopology> {
    if spec.n_in == 0 || spec.n_out == 0 {
        return Err(Error::InvalidTopology("LSM needs input and read-out neurons".into()));
    }
    if spec.n_in != spec.n_out {
        return Err(Error::InvalidTopology(format!(
            "direct wiring pairs input i with output i; got {} inputs, {} outputs",
            spec.n_in, spec.n_out
        )));
    }
    if spec.n_liquid < 2 || spec.k_rec >= spec.n_liquid {
        return Err(Error::InvalidTopology(format!(
            "need 2 <= n_liquid and k_rec < n_liquid, got n_liquid={}, k_rec={}",
            spec.n_liquid, spec.k_rec
        )));
    }
    let n_rec = spec.recurrent_count();
    let n_inh = spec.inhibitory_count();
    if n_inh > n_rec {
        return Err(Error::InvalidTopology(format!(
            "{n_inh} inhibitory synapses requested but the liquid has only {n_rec}"
        )));
    }
    let w_direct = spec.direct_weight(lif);
    if !(w_direct.is_finite() && w_direct >= 0.0) {
        return Err(Error::InvalidTopology(format!("invalid direct weight {w_direct}")));
    }

    let inputs: Vec<NeuronId> = (0..spec.n_in).collect();
    let liquid: Vec<NeuronId> = (spec.n_in..spec.n_in + spec.n_liquid).collect();
    let outputs: Vec<NeuronId> =
        (spec.n_in + spec.n_liquid..spec.n_in + spec.n_liquid + spec.n_out).collect();

    let mut rng = seed::rng(liquid_seed);
    let mut synapses = Vec::with_capacity(n_rec + 2 * spec.n_liquid * spec.n_in + spec.n_in);
    for &pre in &liquid {
        // k_rec distinct targets among the other liquid neurons.
        for k in index::sample(&mut rng, spec.n_liquid - 1, spec.k_rec) {
            let mut post = liquid[k];
            if post >= pre {
                post += 1;
            }
            synapses.push(SynapseSpec {
                pre,
                post,
                weight: 0.0,
                sign: Sign::Excitatory,
                delay: SYNAPSE_DELAY_MS,
                kind: SynapseKind::Static,
                tag: LayerTag::LiquidLiquid,
            });
        }
    }
    for (s, w) in synapses.iter_mut().zip(uniform_weights(n_rec, range, &mut rng)) {
        s.weight = w;
    }
    for i in index::sample(&mut rng, n_rec, n_inh) {
        synapses[i].sign = Sign::Inhibitory;
    }

    for &pre in &inputs {
        for &post in &liquid {
            synapses.push(plastic(pre, post, LayerTag::InputLiquid));
        }
    }
    for &pre in &liquid {
        for &post in &outputs {
            synapses.push(plastic(pre, post, LayerTag::LiquidReadout));
        }
    }
    for (&pre, &post) in inputs.iter().zip(&outputs) {
        synapses.push(SynapseSpec {
            pre,
            post,
            weight: w_direct,
            sign: Sign::Excitatory,
            delay: SYNAPSE_DELAY_MS,
            kind: SynapseKind::Static,
            tag: LayerTag::InputOutputDirect,
        });
    }

    let recorded_ids = inputs.iter().chain(&outputs).copied().collect();
    let topo = NetworkTopology {
        neurons: vec![*lif; spec.n_in + spec.n_liquid + spec.n_out],
        synapses,
        input_ids: inputs,
        output_ids: outputs,
        recorded_ids,
        liquid_ids: liquid,
    };
    reassign_interlayer_weights(&topo, init, range, epoch_seed)
}

fn plastic(pre: NeuronId, post: NeuronId, tag: LayerTag) -> SynapseSpec {
    SynapseSpec {
        pre,
        post,
        weight: 0.0,
        sign: Sign::Excitatory,
        delay: SYNAPSE_DELAY_MS,
        kind: SynapseKind::Stdp,
        tag,
    }
}

/// Redraws the weights of every input→liquid, liquid→read-out and
/// inter-layer synapse (in synapse order) from one `draw_weights` call.
/// Liquid and direct synapses are left untouched.
pub fn reassign_interlayer_weights(
    topology: &NetworkTopology,
    init: &InitMethod,
    range: WeightRange,
    epoch_seed: u64,
) -> Result<NetworkTopology> {
    let targets: Vec<usize> = topology
        .synapses
        .iter()
        .enumerate()
        .filter(|(_, s)| s.tag.is_reassigned())
        .map(|(i, _)| i)
        .collect();
    let weights = draw_weights_seeded(init, targets.len(), range, epoch_seed)?;
    let mut out = topology.clone();
    for (i, w) in targets.into_iter().zip(weights) {
        out.synapses[i].weight = w;
    }
    Ok(out)
}
