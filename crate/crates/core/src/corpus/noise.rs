use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::AudioClip;
use crate::{Error, Result, Scalar};

/// Mean squared amplitude.
pub fn signal_power<T: Scalar>(samples: &[T]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s.as_f64() * s.as_f64()).sum::<f64>() / samples.len() as f64
}

/// Adds zero-mean white Gaussian noise with power `P_signal / 10^(snr_db / 10)`.
///
/// `snr_db = +inf` returns the clip unchanged. Samples are not clipped, so
/// the requested SNR is preserved exactly in expectation.
pub fn add_noise<T: Scalar>(clip: &AudioClip<T>, snr_db: f64, seed: u64) -> Result<AudioClip<T>> {
    if snr_db.is_nan() {
        return Err(Error::Input("SNR is NaN".into()));
    }
    if snr_db == f64::INFINITY {
        return Ok(clip.clone());
    }
    let p_signal = signal_power(&clip.samples);
    if p_signal <= 0.0 {
        return Err(Error::Degenerate(format!("clip {} is silent; SNR undefined", clip.id)));
    }
    let p_noise = p_signal / 10f64.powf(snr_db / 10.0);
    let normal = Normal::new(0.0, p_noise.sqrt()).map_err(|e| Error::Numeric(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = clip.samples.iter().map(|&s| s + T::of(normal.sample(&mut rng))).collect();
    Ok(AudioClip { samples, sample_rate: clip.sample_rate, label: clip.label, id: format!("{}_snr{snr_db}", clip.id) })
}
