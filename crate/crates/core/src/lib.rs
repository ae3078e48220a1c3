//! Leaky integrate-and-fire networks with STDP, Victor-Purpura and van Rossum
//! spike-train distances, and a sweep harness that scores weight
//! initialisation strategies (uniform, Barabási–Albert, Erdős–Rényi) by how
//! closely a network's output spikes reproduce its input spikes.

pub mod config;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod neuron;
pub mod par;
pub mod plasticity;
pub mod plot;
pub mod seed;
pub mod spike_train;
pub mod stimulus;
pub mod topology;
pub mod weight_init;

pub use engine::{simulate, Plasticity, SimResult};
pub use error::{Error, Result};
pub use metrics::{van_rossum, victor_purpura, Metric, VpCost, VrKernel};
pub use neuron::{lif_step, LifParams, NeuronState};
pub use plasticity::StdpParams;
pub use spike_train::SpikeTrain;
pub use stimulus::{generate_stimulus, StimulusKind, StimulusSpec};
pub use topology::{LsmSpec, NetworkTopology};
pub use weight_init::{InitMethod, WeightRange};
