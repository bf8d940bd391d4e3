use super::NetworkConfig;
use crate::izhikevich::{IzhikevichParams, SpikeTrain};
use crate::synapse::{synaptic_current_zero_reversal, AlphaTrace, SynapseMatrix};
use crate::{Error, Result, Scalar};

/// Output-layer spikes (as step indices) and, optionally, the net input
/// `I_tot` of every output unit at every step.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRun<T> {
    pub post_steps: Vec<Vec<u32>>,
    pub net_input: Option<Vec<Vec<T>>>,
}

/// Spike steps of input units each held at a constant injected current.
pub fn input_spikes_constant<T: Scalar>(neuron: &IzhikevichParams<T>, currents: &[T], n_steps: usize) -> Vec<Vec<u32>> {
    currents.iter().map(|&i| neuron.constant_current_spike_steps(i, n_steps)).collect()
}

pub fn steps_to_times<T: Scalar>(steps: &[u32], dt: T, duration: T) -> Result<SpikeTrain<T>> {
    SpikeTrain::new(steps.iter().map(|&s| T::of_usize(s as usize) * dt).collect(), duration)
}

/// Drives the output units from precomputed input spikes.
///
/// Each step first integrates every output unit with `I = -V · gain · G`,
/// then advances the conductances, so an input spike at step `s` reaches
/// the outputs from step `s + 1` on. Because amplitudes are fixed during a
/// run, the alpha kernels of all afferents of an output are folded into a
/// single recursive trace per output.
pub fn simulate_outputs<T: Scalar>(
    weights: &SynapseMatrix<T>,
    pre_steps: &[Vec<u32>],
    n_steps: usize,
    cfg: &NetworkConfig<T>,
    record_net_input: bool,
) -> Result<OutputRun<T>> {
    if pre_steps.len() != weights.rows() {
        return Err(Error::Input(format!("{} input trains for {} synapse rows", pre_steps.len(), weights.rows())));
    }
    let n_out = weights.cols();
    let dt = cfg.dt();
    let decay = (-dt / weights.tau()).exp();
    let gain = cfg.synaptic_gain;
    let neuron = &cfg.neuron;

    let mut events: Vec<(u32, u32)> = pre_steps
        .iter()
        .enumerate()
        .flat_map(|(k, steps)| steps.iter().map(move |&s| (s, k as u32)))
        .collect();
    events.sort_unstable();

    let mut traces = vec![AlphaTrace::default(); n_out];
    let mut states = vec![neuron.resting_state(); n_out];
    let mut post_steps = vec![Vec::new(); n_out];
    let mut net_input = record_net_input.then(|| vec![Vec::with_capacity(n_steps); n_out]);
    let mut next_event = 0;

    for step in 0..n_steps {
        for j in 0..n_out {
            let i_syn = synaptic_current_zero_reversal(gain * traces[j].value(), states[j].v);
            if let Some(rec) = net_input.as_mut() {
                rec[j].push(i_syn);
            }
            if neuron.advance(&mut states[j], i_syn) {
                post_steps[j].push(step as u32);
            }
        }
        for tr in &mut traces {
            tr.advance(dt, decay);
        }
        while next_event < events.len() && events[next_event].0 as usize == step {
            let k = events[next_event].1 as usize;
            for (j, tr) in traces.iter_mut().enumerate() {
                tr.add(weights.get(k, j), dt, decay);
            }
            next_event += 1;
        }
    }
    if let Some(j) = states.iter().position(|s| !s.v.is_finite() || !s.u.is_finite()) {
        return Err(Error::Numeric(format!("output unit {j} diverged")));
    }
    Ok(OutputRun { post_steps, net_input })
}
