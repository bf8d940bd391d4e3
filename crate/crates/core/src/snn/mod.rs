//! One-layer spiking network: `N·M` input units fully connected to ten
//! output units through alpha synapses, trained with teacher-gated STDP.

mod export;
mod sim;
mod stdp;
mod train;

pub use export::{write_training_log_csv, write_weight_image};
pub use sim::{input_spikes_constant, simulate_outputs, steps_to_times, OutputRun};
pub use stdp::{apply_stdp, stdp_dw, Pairing, Regime, StdpConfig, STDP_SCALE};
pub use train::{train, train_with_observer, EpochStats, SampleEvent, TrainingLog};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::izhikevich::IzhikevichParams;
use crate::synapse::{SynapseMatrix, DEFAULT_TAU_MS};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig<T> {
    pub n_frames: usize,
    pub n_bands: usize,
    pub n_outputs: usize,
    /// Duration of one training presentation, ms.
    pub train_ms: T,
    pub epochs: usize,
    pub seed: u64,
    /// Alpha-kernel peak time, ms.
    pub tau: T,
    /// Multiplies every conductance amplitude when computing output currents.
    pub synaptic_gain: T,
    /// Parameters of both input and output units; also fixes `dt`.
    pub neuron: IzhikevichParams<T>,
}

impl<T: Scalar> Default for NetworkConfig<T> {
    fn default() -> Self {
        Self {
            n_frames: 40,
            n_bands: 5,
            n_outputs: 10,
            train_ms: T::of(100.0),
            epochs: 100,
            seed: 1,
            tau: T::of(DEFAULT_TAU_MS),
            synaptic_gain: T::of(100.0),
            neuron: IzhikevichParams::default(),
        }
    }
}

impl<T: Scalar> NetworkConfig<T> {
    pub fn n_inputs(&self) -> usize {
        self.n_frames * self.n_bands
    }

    pub fn dt(&self) -> T {
        self.neuron.dt
    }

    pub fn validate(&self) -> Result<()> {
        self.neuron.validate()?;
        if self.n_inputs() == 0 || self.n_outputs == 0 {
            return Err(Error::Config("network needs at least one input and one output".into()));
        }
        self.neuron.n_steps(self.train_ms)?;
        if !(self.tau > T::zero()) {
            return Err(Error::Config(format!("tau = {} must be positive", self.tau)));
        }
        if !(self.synaptic_gain > T::zero()) || !self.synaptic_gain.is_finite() {
            return Err(Error::Config(format!("synaptic_gain = {} must be positive", self.synaptic_gain)));
        }
        Ok(())
    }
}

/// Uniform(0, 1) amplitudes, each output column then L1-normalized.
pub fn init_weights<T: Scalar>(config: &NetworkConfig<T>, seed: u64) -> Result<SynapseMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = (0..config.n_outputs)
        .map(|_| (0..config.n_inputs()).map(|_| T::of(rng.random::<f64>())).collect())
        .collect();
    let mut w = SynapseMatrix::from_columns(columns, config.tau)?;
    l1_renormalize(&mut w)?;
    Ok(w)
}

/// Divides every output column by its L1 norm.
pub fn l1_renormalize<T: Scalar>(weights: &mut SynapseMatrix<T>) -> Result<()> {
    for j in 0..weights.cols() {
        let norm = weights.column_l1(j);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::Degenerate(format!("output {j}: weight column has L1 norm {norm}")));
        }
        weights.column_mut(j).iter_mut().for_each(|v| *v /= norm);
    }
    Ok(())
}
