use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{frame_clip, BandSpec, FeatureMatrix, Framing};
use crate::corpus::AudioClip;
use crate::{Error, Result, Scalar};

/// Added to the power spectrum before the log so silent bins stay finite.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

/// FFT front end that caches plans across frames.
pub struct SpectrumAnalyzer<T: Scalar> {
    planner: FftPlanner<T>,
    cached: Option<(usize, Arc<dyn Fft<T>>)>,
}

impl<T: Scalar> Default for SpectrumAnalyzer<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> SpectrumAnalyzer<T> {
    pub fn new() -> Self {
        Self { planner: FftPlanner::new(), cached: None }
    }

    fn plan(&mut self, n: usize) -> Arc<dyn Fft<T>> {
        match &self.cached {
            Some((len, fft)) if *len == n => fft.clone(),
            _ => {
                let fft = self.planner.plan_fft_forward(n);
                self.cached = Some((n, fft.clone()));
                fft
            }
        }
    }

    /// `|DFT|²` of the frame zero-padded to the next power of two, bins
    /// `0..=n/2`.
    pub fn power_spectrum(&mut self, frame: &[T]) -> Result<Vec<T>> {
        if frame.is_empty() {
            return Err(Error::Input("empty frame".into()));
        }
        let n = frame.len().next_power_of_two().max(2);
        let mut buf: Vec<Complex<T>> = frame.iter().map(|&x| Complex::new(x, T::zero())).collect();
        buf.resize(n, Complex::new(T::zero(), T::zero()));
        self.plan(n).process(&mut buf);
        Ok(buf[..=n / 2].iter().map(|c| c.norm_sqr()).collect())
    }

    /// `log(|DFT|² + ε)` over the non-negative frequencies.
    pub fn log_spectrum(&mut self, frame: &[T]) -> Result<Vec<T>> {
        let eps = T::of(SPECTRAL_FLOOR);
        Ok(self.power_spectrum(frame)?.into_iter().map(|p| (p + eps).ln()).collect())
    }

    pub fn features(&mut self, clip: &AudioClip<T>, framing: &Framing<T>, bands: &BandSpec<T>) -> Result<FeatureMatrix<T>> {
        let spec = framing.for_duration(T::of(clip.duration_ms()))?;
        let frames = frame_clip(clip, &spec)?;
        let mut values = Vec::with_capacity(frames.len() * bands.n_bands());
        for f in &frames {
            let s = self.log_spectrum(f)?;
            values.extend(super::band_energies(&s, bands, clip.sample_rate));
        }
        FeatureMatrix::new(values, frames.len(), bands.n_bands(), clip.id.clone(), clip.label)
    }
}

/// See [`SpectrumAnalyzer::power_spectrum`].
pub fn power_spectrum<T: Scalar>(frame: &[T]) -> Result<Vec<T>> {
    SpectrumAnalyzer::new().power_spectrum(frame)
}

/// See [`SpectrumAnalyzer::log_spectrum`].
pub fn frame_spectrum<T: Scalar>(frame: &[T]) -> Result<Vec<T>> {
    SpectrumAnalyzer::new().log_spectrum(frame)
}
