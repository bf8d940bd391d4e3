//! Speech-frame features: duration-adaptive Hamming framing, log-power
//! spectra, and Fibonacci-width band energies, plus the affine map from
//! feature values to injected currents.

mod bands;
pub(crate) mod export;
mod matrix;
mod scaler;
mod spectrum;

pub use bands::{band_energies, fibonacci, BandSpec};
pub use export::{read_features_csv, write_features_csv, write_spectrogram_pgm};
pub use matrix::FeatureMatrix;
pub use scaler::CurrentScaler;
pub use spectrum::{frame_spectrum, power_spectrum, SpectrumAnalyzer, SPECTRAL_FLOOR};

use crate::corpus::AudioClip;
use crate::{Error, Result, Scalar};

/// Frame count and overlap shared by every clip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Framing<T> {
    pub n_frames: usize,
    pub overlap: T,
}

impl<T: Scalar> Default for Framing<T> {
    fn default() -> Self {
        Self { n_frames: 40, overlap: T::of(0.5) }
    }
}

impl<T: Scalar> Framing<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_frames < 2 {
            return Err(Error::Config(format!("n_frames = {} must be at least 2", self.n_frames)));
        }
        if !(self.overlap >= T::zero() && self.overlap < T::one()) {
            return Err(Error::Config(format!("overlap = {} must lie in [0, 1)", self.overlap)));
        }
        Ok(())
    }

    /// Frame layout for a clip of the given duration.
    pub fn for_duration(&self, clip_ms: T) -> Result<FrameSpec<T>> {
        self.validate()?;
        Ok(FrameSpec {
            n_frames: self.n_frames,
            overlap: self.overlap,
            clip_ms,
            window_ms: window_size(clip_ms, self.n_frames, self.overlap),
        })
    }
}

/// Frame layout of one clip: `N` frames of `window_ms` with overlap `γ`,
/// sized so the frames exactly tile the clip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec<T> {
    pub n_frames: usize,
    pub overlap: T,
    pub clip_ms: T,
    pub window_ms: T,
}

impl<T: Scalar> FrameSpec<T> {
    /// Window and hop lengths in samples.
    ///
    /// The window is `round(window_ms * rate / 1000)` and the hop is
    /// `round(window * (1 - γ))`, both rounding half away from zero.
    pub fn samples(&self, sample_rate: u32) -> (usize, usize) {
        let w = (self.window_ms * T::of(sample_rate as f64) / T::of(1000.0)).round();
        let w = w.to_usize().unwrap_or(0);
        let hop = (T::of_usize(w) * (T::one() - self.overlap)).round().to_usize().unwrap_or(0);
        (w, hop)
    }
}

/// Window length (ms) that splits a clip of `clip_ms` into `n_frames` frames
/// with fractional overlap `overlap`: `L / (N(1-γ) + γ)`.
pub fn window_size<T: Scalar>(clip_ms: T, n_frames: usize, overlap: T) -> T {
    clip_ms / (T::of_usize(n_frames) * (T::one() - overlap) + overlap)
}

/// Symmetric Hamming window `0.54 - 0.46 cos(2πn / (W-1))`.
pub fn hamming<T: Scalar>(len: usize) -> Vec<T> {
    if len == 1 {
        return vec![T::one()];
    }
    let denom = T::of_usize(len - 1);
    (0..len)
        .map(|n| T::of(0.54) - T::of(0.46) * (T::TAU() * T::of_usize(n) / denom).cos())
        .collect()
}

/// Cuts a clip into exactly `spec.n_frames` Hamming-windowed frames.
/// Frame `i` starts at sample `i * hop`; a frame running past the end of
/// the clip is zero-padded.
pub fn frame_clip<T: Scalar>(clip: &AudioClip<T>, spec: &FrameSpec<T>) -> Result<Vec<Vec<T>>> {
    if clip.duration_ms() < 1.0 {
        return Err(Error::Degenerate(format!("clip {} shorter than 1 ms", clip.id)));
    }
    let (w, hop) = spec.samples(clip.sample_rate);
    if w < 1 {
        return Err(Error::Degenerate(format!(
            "clip {}: window of {} ms is shorter than one sample",
            clip.id, spec.window_ms
        )));
    }
    let window = hamming::<T>(w);
    Ok((0..spec.n_frames)
        .map(|i| {
            let start = i * hop;
            window
                .iter()
                .enumerate()
                .map(|(n, &h)| clip.samples.get(start + n).map_or(T::zero(), |&s| s * h))
                .collect()
        })
        .collect())
}

/// Feature matrix of a clip: one row of band energies per frame, in
/// temporal order.
pub fn features<T: Scalar>(clip: &AudioClip<T>, framing: &Framing<T>, bands: &BandSpec<T>) -> Result<FeatureMatrix<T>> {
    SpectrumAnalyzer::new().features(clip, framing, bands)
}
