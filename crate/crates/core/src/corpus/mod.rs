//! Labeled audio clips: WAV I/O, a deterministic synthetic digit corpus, and
//! additive noise at a target SNR.

mod manifest;
mod noise;
mod synth;
mod wav;

pub use manifest::{CorpusManifest, ManifestEntry, Split};
pub use noise::{add_noise, signal_power};
pub use synth::{class_peak_bands, synth_clip, synth_corpus, synth_corpus_with, SynthConfig, SYNTH_SAMPLE_RATE};
pub use wav::{load_wav, write_wav};

use crate::{Error, Result, Scalar};

/// Number of digit classes.
pub const N_CLASSES: usize = 10;

/// Longest clip accepted, in seconds.
pub const MAX_DURATION_S: f64 = 10.0;

/// A mono audio clip with an optional digit label.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip<T> {
    pub samples: Vec<T>,
    pub sample_rate: u32,
    pub label: Option<u8>,
    pub id: String,
}

impl<T: Scalar> AudioClip<T> {
    pub fn new(samples: Vec<T>, sample_rate: u32, label: Option<u8>, id: impl Into<String>) -> Result<Self> {
        let clip = Self { samples, sample_rate, label, id: id.into() };
        clip.validate()?;
        Ok(clip)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_rate == 0 {
            return Err(Error::Input(format!("clip {}: sample rate must be positive", self.id)));
        }
        let d = self.duration_s();
        if !(d > 0.0 && d <= MAX_DURATION_S) {
            return Err(Error::Input(format!("clip {}: duration {d} s outside (0, 10]", self.id)));
        }
        if let Some(l) = self.label {
            if l as usize >= N_CLASSES {
                return Err(Error::Input(format!("clip {}: label {l} outside 0..=9", self.id)));
            }
        }
        if let Some(i) = self.samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!("clip {}: sample {i} is not finite", self.id)));
        }
        Ok(())
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn duration_ms(&self) -> f64 {
        1000.0 * self.duration_s()
    }

    /// Same clip with the sample order reversed.
    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self { samples, sample_rate: self.sample_rate, label: self.label, id: format!("{}_rev", self.id) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_clips() {
        assert!(AudioClip::<f64>::new(vec![], 8000, None, "empty").is_err());
        assert!(AudioClip::new(vec![0.0f64; 10], 0, None, "rate").is_err());
        assert!(AudioClip::new(vec![0.0f64; 10], 8000, Some(10), "label").is_err());
        assert!(AudioClip::new(vec![0.0f64; 80_001], 8000, None, "long").is_err());
        assert!(AudioClip::new(vec![f64::NAN], 8000, None, "nan").is_err());
        let ok = AudioClip::new(vec![0.0f64; 4000], 8000, Some(3), "ok").unwrap();
        assert_eq!(ok.duration_ms(), 500.0);
    }
}
