use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sim::{input_spikes_constant, simulate_outputs, steps_to_times};
use super::{apply_stdp, init_weights, l1_renormalize, NetworkConfig, StdpConfig};
use crate::features::{CurrentScaler, FeatureMatrix};
use crate::izhikevich::SpikeTrain;
use crate::synapse::SynapseMatrix;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats<T> {
    pub epoch: usize,
    /// Mean over samples of the mean absolute amplitude change per synapse.
    pub mean_abs_dk: T,
    pub spikes_target: usize,
    pub spikes_nontarget: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingLog<T> {
    pub epochs: Vec<EpochStats<T>>,
}

/// Passed to the observer after each training sample.
#[derive(Debug, Clone, Copy)]
pub struct SampleEvent {
    pub epoch: usize,
    pub sample: usize,
    pub label: usize,
}

/// Trains the synapse matrix; see [`train_with_observer`].
pub fn train<T: Scalar>(
    train_set: &[FeatureMatrix<T>],
    scaler: &CurrentScaler<T>,
    config: &NetworkConfig<T>,
    stdp: &StdpConfig<T>,
    seed: u64,
) -> Result<(SynapseMatrix<T>, TrainingLog<T>)> {
    train_with_observer(train_set, scaler, config, stdp, seed, |_, _| {})
}

/// Presents every sample for `train_ms` per epoch, all inputs at once,
/// applies teacher-gated STDP from the recorded spikes and L1-renormalizes
/// after each sample. Sample order is reshuffled every epoch from `seed`.
///
/// The weights start from [`init_weights`] with the same seed.
pub fn train_with_observer<T: Scalar>(
    train_set: &[FeatureMatrix<T>],
    scaler: &CurrentScaler<T>,
    config: &NetworkConfig<T>,
    stdp: &StdpConfig<T>,
    seed: u64,
    mut observer: impl FnMut(&SynapseMatrix<T>, SampleEvent),
) -> Result<(SynapseMatrix<T>, TrainingLog<T>)> {
    config.validate()?;
    stdp.validate()?;
    let mut weights = init_weights(config, seed)?;
    let mut log = TrainingLog::default();
    if config.epochs == 0 {
        return Ok((weights, log));
    }
    if train_set.is_empty() {
        return Err(Error::Input("empty training set".into()));
    }
    let labels = train_set
        .iter()
        .map(|f| {
            let l = f.label.ok_or_else(|| Error::Input(format!("training sample {} has no label", f.id)))? as usize;
            if l >= config.n_outputs {
                return Err(Error::Input(format!("label {l} has no output unit")));
            }
            if f.shape() != (config.n_frames, config.n_bands) {
                return Err(Error::Input(format!("sample {} has shape {:?}", f.id, f.shape())));
            }
            Ok(l)
        })
        .collect::<Result<Vec<_>>>()?;

    let n_steps = config.neuron.n_steps(config.train_ms)?;
    let dt = config.dt();
    // Input units see a constant current, so their spikes never change.
    let cached_steps: Vec<Vec<Vec<u32>>> = train_set
        .par_iter()
        .map(|f| input_spikes_constant(&config.neuron, &scaler.scale_to_current(f), n_steps))
        .collect();
    let cached: Vec<Vec<SpikeTrain<T>>> = cached_steps
        .iter()
        .map(|steps| steps.iter().map(|s| steps_to_times(s, dt, config.train_ms)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let n_weights = T::of_usize(weights.values().len());

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut sum_dk = T::zero();
        let (mut spikes_target, mut spikes_nontarget) = (0, 0);
        for &idx in &order {
            let label = labels[idx];
            let run = simulate_outputs(&weights, &cached_steps[idx], n_steps, config, false)?;
            let post = run
                .post_steps
                .iter()
                .map(|s| steps_to_times(s, dt, config.train_ms))
                .collect::<Result<Vec<_>>>()?;
            for (j, p) in post.iter().enumerate() {
                if j == label {
                    spikes_target += p.len();
                } else {
                    spikes_nontarget += p.len();
                }
            }
            let before = weights.clone();
            apply_stdp(&mut weights, &cached[idx], &post, label, stdp)?;
            l1_renormalize(&mut weights)?;
            sum_dk += weights.values().iter().zip(before.values()).map(|(&a, &b)| (a - b).abs()).sum::<T>() / n_weights;
            observer(&weights, SampleEvent { epoch, sample: idx, label });
        }
        log.epochs.push(EpochStats {
            epoch,
            mean_abs_dk: sum_dk / T::of_usize(order.len()),
            spikes_target,
            spikes_nontarget,
        });
    }
    Ok((weights, log))
}
