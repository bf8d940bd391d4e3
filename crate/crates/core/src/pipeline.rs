//! End-to-end experiment: synthetic splits, features, training, signatures,
//! prototype distances and net-input SVM evaluation.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{
    evaluate, mean_class_distances, net_input_features, prototype_classify, train_net_input_svm, within_between,
    ConfusionMatrix, NetInputFeatures, NetInputSvm, SvmConfig, SvmLayout, VpConfig,
};
use crate::corpus::{add_noise, synth_corpus_with, AudioClip, SynthConfig, N_CLASSES};
use crate::features::{features, BandSpec, CurrentScaler, FeatureMatrix, Framing};
use crate::signatures::{prototypes, signature, PrototypeSet, Signature, SignatureConfig};
use crate::snn::{init_weights, train, NetworkConfig, StdpConfig, TrainingLog};
use crate::synapse::SynapseMatrix;
use crate::{Error, Result, Scalar};

/// Independent sub-seed for one purpose of a run.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.next_u64()
}

pub const TAG_TRAIN: u64 = 1;
pub const TAG_TEST: u64 = 2;
pub const TAG_NOISE: u64 = 3;

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub per_class: usize,
    pub duration_ms: (f64, f64),
    pub snr_db: f64,
    pub synth: SynthConfig,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { per_class: 50, duration_ms: (500.0, 1000.0), snr_db: 10.0, synth: SynthConfig::default() }
    }
}

/// Train, clean test and noisy test clips; the noisy split is the clean
/// test split with white noise added.
#[derive(Debug, Clone)]
pub struct Splits<T> {
    pub train: Vec<AudioClip<T>>,
    pub test_clean: Vec<AudioClip<T>>,
    pub test_noisy: Vec<AudioClip<T>>,
}

pub fn synth_splits<T: Scalar>(seed: u64, cfg: &CorpusConfig) -> Result<Splits<T>> {
    let train = synth_corpus_with(derive_seed(seed, TAG_TRAIN), cfg.per_class, cfg.duration_ms, &cfg.synth)?;
    let test_clean = synth_corpus_with(derive_seed(seed, TAG_TEST), cfg.per_class, cfg.duration_ms, &cfg.synth)?;
    let noise_seed = derive_seed(seed, TAG_NOISE);
    let test_noisy = test_clean
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut noisy = add_noise(c, cfg.snr_db, noise_seed.wrapping_add(i as u64))?;
            noisy.id = format!("{}_snr{}", c.id, cfg.snr_db);
            Ok(noisy)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Splits { train, test_clean, test_noisy })
}

pub fn extract_features<T: Scalar>(clips: &[AudioClip<T>], framing: &Framing<T>, bands: &BandSpec<T>) -> Result<Vec<FeatureMatrix<T>>> {
    clips.par_iter().map(|c| features(c, framing, bands)).collect()
}

pub fn signatures_of<T: Scalar>(
    feats: &[FeatureMatrix<T>],
    weights: &SynapseMatrix<T>,
    scaler: &CurrentScaler<T>,
    network: &NetworkConfig<T>,
    sig: &SignatureConfig<T>,
) -> Result<Vec<Signature<T>>> {
    feats.par_iter().map(|f| signature(f, weights, scaler, network, sig)).collect()
}

pub fn labels_of<T: Scalar>(sigs: &[Signature<T>]) -> Result<Vec<usize>> {
    sigs.iter()
        .map(|s| s.label.map(usize::from).ok_or_else(|| Error::Input(format!("signature {} has no label", s.id))))
        .collect()
}

pub fn net_inputs<T: Scalar>(sigs: &[Signature<T>]) -> Result<Vec<NetInputFeatures<T>>> {
    sigs.par_iter().map(net_input_features).collect()
}

/// Every knob of a run except where the data comes from.
#[derive(Debug, Clone)]
pub struct ExperimentConfig<T> {
    pub seed: u64,
    pub framing: Framing<T>,
    pub range_hz: T,
    pub i_min: T,
    pub i_max: T,
    pub network: NetworkConfig<T>,
    pub stdp: StdpConfig<T>,
    pub signature: SignatureConfig<T>,
    pub svm: SvmConfig<T>,
    pub layout: SvmLayout,
    pub vp: VpConfig<T>,
}

impl<T: Scalar> Default for ExperimentConfig<T> {
    fn default() -> Self {
        Self {
            seed: 1,
            framing: Framing::default(),
            range_hz: T::of(4000.0),
            i_min: T::zero(),
            i_max: T::of(250.0),
            network: NetworkConfig::default(),
            stdp: StdpConfig::default(),
            signature: SignatureConfig::default(),
            svm: SvmConfig::default(),
            layout: SvmLayout::default(),
            vp: VpConfig::default(),
        }
    }
}

impl<T: Scalar> ExperimentConfig<T> {
    pub fn bands(&self) -> Result<BandSpec<T>> {
        BandSpec::new(self.range_hz, self.network.n_bands)
    }
}

#[derive(Debug, Clone)]
pub struct Report<T> {
    pub weights: SynapseMatrix<T>,
    pub log: TrainingLog<T>,
    pub train: ConfusionMatrix,
    pub clean: ConfusionMatrix,
    pub noisy: ConfusionMatrix,
    pub prototype_clean: ConfusionMatrix,
    /// `[prototype][test class]` mean distances on the clean test split.
    pub distances: Vec<Vec<T>>,
    pub within: T,
    pub between: T,
    pub prototypes: PrototypeSet<T>,
    pub untrained_prototypes: PrototypeSet<T>,
}

/// Runs the whole pipeline on synthetic splits.
pub fn run_experiment<T: Scalar>(cfg: &ExperimentConfig<T>, corpus: &CorpusConfig) -> Result<Report<T>> {
    let splits = synth_splits(cfg.seed, corpus)?;
    let bands = cfg.bands()?;
    let train_f = extract_features(&splits.train, &cfg.framing, &bands)?;
    let clean_f = extract_features(&splits.test_clean, &cfg.framing, &bands)?;
    let noisy_f = extract_features(&splits.test_noisy, &cfg.framing, &bands)?;
    run_on_features(cfg, &train_f, &clean_f, &noisy_f)
}

pub fn run_on_features<T: Scalar>(
    cfg: &ExperimentConfig<T>,
    train_f: &[FeatureMatrix<T>],
    clean_f: &[FeatureMatrix<T>],
    noisy_f: &[FeatureMatrix<T>],
) -> Result<Report<T>> {
    let scaler = CurrentScaler::fit(train_f, cfg.i_min, cfg.i_max)?;
    let net = &cfg.network;
    let (weights, log) = train(train_f, &scaler, net, &cfg.stdp, cfg.seed)?;

    let sigs = |f: &[FeatureMatrix<T>]| signatures_of(f, &weights, &scaler, net, &cfg.signature);
    let (train_s, clean_s, noisy_s) = (sigs(train_f)?, sigs(clean_f)?, sigs(noisy_f)?);
    let svm = train_net_input_svm(&net_inputs(&train_s)?, &labels_of(&train_s)?, N_CLASSES, &cfg.svm, cfg.layout)?;
    let score = |s: &[Signature<T>]| -> Result<ConfusionMatrix> { evaluate(&svm, &net_inputs(s)?, &labels_of(s)?, N_CLASSES) };

    let protos = prototypes(train_f, &weights, &scaler, net, &cfg.signature)?;
    let untrained = prototypes(train_f, &init_weights(net, cfg.seed)?, &scaler, net, &cfg.signature)?;
    let q = cfg.vp.q;
    let distances = mean_class_distances(&protos, &clean_s, q);
    let (within, between) = within_between(&distances);
    let predicted: Vec<usize> = clean_s.par_iter().map(|s| prototype_classify(s, &protos, q)).collect();
    let prototype_clean = ConfusionMatrix::from_predictions(&labels_of(&clean_s)?, &predicted, N_CLASSES)?;

    Ok(Report {
        train: score(&train_s)?,
        clean: score(&clean_s)?,
        noisy: score(&noisy_s)?,
        prototype_clean,
        distances,
        within,
        between,
        prototypes: protos,
        untrained_prototypes: untrained,
        weights,
        log,
    })
}

/// Convenience for callers that already hold a trained SVM.
pub fn classify<T: Scalar>(svm: &NetInputSvm<T>, sigs: &[Signature<T>]) -> Result<ConfusionMatrix> {
    evaluate(svm, &net_inputs(sigs)?, &labels_of(sigs)?, N_CLASSES)
}
