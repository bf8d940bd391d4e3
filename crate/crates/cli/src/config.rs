//! Run configuration: one TOML file with a section per stage. Every field is
//! optional and falls back to the library defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use spikesig::analysis::{SvmConfig, SvmLayout, VpConfig};
use spikesig::corpus::SynthConfig;
use spikesig::features::Framing;
use spikesig::izhikevich::IzhikevichParams;
use spikesig::pipeline::{CorpusConfig, ExperimentConfig};
use spikesig::signatures::SignatureConfig;
use spikesig::snn::{NetworkConfig, Pairing, StdpConfig};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub corpus: CorpusSection,
    pub framing: FramingSection,
    pub bands: BandsSection,
    pub scaler: ScalerSection,
    pub neuron: NeuronSection,
    pub network: NetworkSection,
    pub stdp: StdpSection,
    pub signature: SignatureSection,
    pub svm: SvmSection,
    pub vp: VpSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            corpus: CorpusSection::default(),
            framing: FramingSection::default(),
            bands: BandsSection::default(),
            scaler: ScalerSection::default(),
            neuron: IzhikevichParams::default().into(),
            network: NetworkSection::default(),
            stdp: StdpSection::default(),
            signature: SignatureSection::default(),
            svm: SvmSection::default(),
            vp: VpSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    pub per_class: usize,
    pub min_ms: f64,
    pub max_ms: f64,
    pub snr_db: f64,
    pub level_step_db: f64,
    pub floor_db: f64,
}

impl Default for CorpusSection {
    fn default() -> Self {
        let c = CorpusConfig::default();
        Self {
            per_class: c.per_class,
            min_ms: c.duration_ms.0,
            max_ms: c.duration_ms.1,
            snr_db: c.snr_db,
            level_step_db: c.synth.level_step_db,
            floor_db: c.synth.floor_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FramingSection {
    pub n_frames: usize,
    pub overlap: f64,
}

impl Default for FramingSection {
    fn default() -> Self {
        let f = Framing::<f64>::default();
        Self { n_frames: f.n_frames, overlap: f.overlap }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandsSection {
    pub range_hz: f64,
    pub n_bands: usize,
}

impl Default for BandsSection {
    fn default() -> Self {
        Self { range_hz: 4000.0, n_bands: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalerSection {
    pub i_min: f64,
    pub i_max: f64,
}

impl Default for ScalerSection {
    fn default() -> Self {
        Self { i_min: 0.0, i_max: 250.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeuronSection {
    pub capacitance: f64,
    pub k: f64,
    pub v_rest: f64,
    pub v_threshold: f64,
    pub v_peak: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub u0: f64,
    pub dt: f64,
}

impl Default for NeuronSection {
    fn default() -> Self {
        IzhikevichParams::default().into()
    }
}

impl From<IzhikevichParams<f64>> for NeuronSection {
    fn from(p: IzhikevichParams<f64>) -> Self {
        Self {
            capacitance: p.capacitance,
            k: p.k,
            v_rest: p.v_rest,
            v_threshold: p.v_threshold,
            v_peak: p.v_peak,
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            u0: p.u0,
            dt: p.dt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub epochs: usize,
    pub train_ms: f64,
    pub tau: f64,
    pub synaptic_gain: f64,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let n = NetworkConfig::<f64>::default();
        Self { epochs: n.epochs, train_ms: n.train_ms, tau: n.tau, synaptic_gain: n.synaptic_gain }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PairingName {
    #[default]
    Nearest,
    Restricted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StdpSection {
    pub a: f64,
    pub b: f64,
    pub tau_plus: f64,
    pub tau_minus: f64,
    pub pairing: PairingName,
}

impl Default for StdpSection {
    fn default() -> Self {
        let s = StdpConfig::<f64>::default();
        Self { a: s.a, b: s.b, tau_plus: s.tau_plus, tau_minus: s.tau_minus, pairing: PairingName::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SignatureSection {
    pub frame_ms: f64,
    pub drive_gain: f64,
}

impl Default for SignatureSection {
    fn default() -> Self {
        let s = SignatureConfig::<f64>::default();
        Self { frame_ms: s.frame_ms, drive_gain: s.drive_gain }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutName {
    #[default]
    Joint,
    PerUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmSection {
    pub c: f64,
    pub iterations: usize,
    pub standardize: bool,
    pub layout: LayoutName,
}

impl Default for SvmSection {
    fn default() -> Self {
        let s = SvmConfig::<f64>::default();
        Self { c: s.c, iterations: s.iterations, standardize: s.standardize, layout: LayoutName::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VpSection {
    pub q: f64,
}

impl Default for VpSection {
    fn default() -> Self {
        Self { q: VpConfig::<f64>::default().q }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    /// SHA-256 of the canonical TOML form, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn corpus(&self) -> CorpusConfig {
        let c = &self.corpus;
        CorpusConfig {
            per_class: c.per_class,
            duration_ms: (c.min_ms, c.max_ms),
            snr_db: c.snr_db,
            synth: SynthConfig { level_step_db: c.level_step_db, floor_db: c.floor_db, ..SynthConfig::default() },
        }
    }

    pub fn experiment(&self) -> ExperimentConfig<f64> {
        let n = &self.neuron;
        let neuron = IzhikevichParams {
            capacitance: n.capacitance,
            k: n.k,
            v_rest: n.v_rest,
            v_threshold: n.v_threshold,
            v_peak: n.v_peak,
            a: n.a,
            b: n.b,
            c: n.c,
            d: n.d,
            u0: n.u0,
            dt: n.dt,
        };
        let network = NetworkConfig {
            n_frames: self.framing.n_frames,
            n_bands: self.bands.n_bands,
            epochs: self.network.epochs,
            seed: self.seed,
            train_ms: self.network.train_ms,
            tau: self.network.tau,
            synaptic_gain: self.network.synaptic_gain,
            neuron,
            ..NetworkConfig::default()
        };
        let s = &self.stdp;
        let pairing = match s.pairing {
            PairingName::Nearest => Pairing::Nearest,
            PairingName::Restricted => Pairing::Restricted,
        };
        ExperimentConfig {
            seed: self.seed,
            framing: Framing { n_frames: self.framing.n_frames, overlap: self.framing.overlap },
            range_hz: self.bands.range_hz,
            i_min: self.scaler.i_min,
            i_max: self.scaler.i_max,
            network,
            stdp: StdpConfig { a: s.a, b: s.b, tau_plus: s.tau_plus, tau_minus: s.tau_minus, pairing },
            signature: SignatureConfig { frame_ms: self.signature.frame_ms, drive_gain: self.signature.drive_gain },
            svm: SvmConfig { c: self.svm.c, iterations: self.svm.iterations, standardize: self.svm.standardize },
            layout: match self.svm.layout {
                LayoutName::Joint => SvmLayout::Joint,
                LayoutName::PerUnit => SvmLayout::PerUnit,
            },
            vp: VpConfig { q: self.vp.q },
        }
    }

    /// Checks every section; any failure is a configuration error.
    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |e: spikesig::Error| CliError::Config(e.to_string());
        let x = self.experiment();
        x.framing.validate().map_err(cfg)?;
        x.bands().map_err(cfg)?;
        x.network.validate().map_err(cfg)?;
        x.stdp.validate().map_err(cfg)?;
        x.signature.validate().map_err(cfg)?;
        x.vp.validate().map_err(cfg)?;
        if x.network.n_frames as f64 * x.signature.frame_ms <= 0.0 || !x.signature.frame_ms.is_finite() {
            return Err(CliError::Config("signature.frame_ms must be positive".into()));
        }
        if !(x.svm.c > 0.0) || x.svm.iterations == 0 {
            return Err(CliError::Config("svm.c must be positive and svm.iterations at least 1".into()));
        }
        if !(self.scaler.i_max > self.scaler.i_min) {
            return Err(CliError::Config("scaler.i_max must exceed scaler.i_min".into()));
        }
        let c = &self.corpus;
        if c.per_class == 0 || !(c.min_ms > 0.0 && c.min_ms <= c.max_ms) || c.snr_db.is_nan() {
            return Err(CliError::Config("corpus needs per_class >= 1, 0 < min_ms <= max_ms and a numeric snr_db".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn example_file_matches_defaults() {
        let text = include_str!("../../../configs/default.toml");
        assert_eq!(RunConfig::parse(text).unwrap(), RunConfig::default());
    }

    #[test]
    fn round_trips_through_toml() {
        let mut c = RunConfig::default();
        c.network.epochs = 7;
        c.stdp.pairing = PairingName::Restricted;
        c.svm.layout = LayoutName::PerUnit;
        let back = RunConfig::parse(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_ne!(c.hash(), RunConfig::default().hash());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("sed = 3").is_err());
        assert!(RunConfig::parse("[network]\nepoch = 3").is_err());
        assert!(RunConfig::parse("[stdp]\npairing = \"all\"").is_err());
    }

    #[test]
    fn partial_sections_keep_defaults() {
        let c = RunConfig::parse("seed = 9\n[network]\nepochs = 3\n").unwrap();
        assert_eq!((c.seed, c.network.epochs), (9, 3));
        assert_eq!(c.network.tau, NetworkSection::default().tau);
        let x = c.experiment();
        assert_eq!((x.seed, x.network.seed, x.network.epochs), (9, 9, 3));
    }

    #[test]
    fn invalid_values_rejected() {
        for text in ["[stdp]\na = -1.0", "[framing]\noverlap = 1.0", "[scaler]\ni_max = -5.0", "[svm]\nc = 0.0", "[vp]\nq = -1.0"] {
            let c = RunConfig::parse(text).unwrap();
            assert!(matches!(c.validate(), Err(CliError::Config(_))), "{text}");
        }
    }
}
