use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{AudioClip, N_CLASSES};
use crate::features::BandSpec;
use crate::{Error, Result, Scalar};

pub const SYNTH_SAMPLE_RATE: u32 = 8000;

const N_SEGMENTS: usize = 4;

/// Peak band (0..5) of each class in each of the four temporal segments.
/// Rows differ pairwise in at least three segments.
const PEAK_BANDS: [[usize; N_SEGMENTS]; N_CLASSES] = [
    [0, 1, 2, 3],
    [0, 0, 0, 1],
    [0, 2, 3, 0],
    [0, 3, 4, 4],
    [0, 4, 1, 2],
    [1, 0, 4, 2],
    [1, 2, 0, 4],
    [2, 0, 2, 0],
    [2, 3, 3, 2],
    [3, 0, 1, 3],
];

pub fn class_peak_bands(class: usize) -> [usize; N_SEGMENTS] {
    PEAK_BANDS[class]
}

/// Knobs of the synthetic digit generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Spectral density drop per band of distance from the segment's peak band.
    pub level_step_db: f64,
    /// Background spectral floor relative to the peak band.
    pub floor_db: f64,
    /// Uniform jitter of every (segment, band) level.
    pub amplitude_jitter_db: f64,
    /// Relative jitter of all frequencies (speaker pitch).
    pub pitch_jitter: f64,
    /// Relative jitter of the interior segment boundaries.
    pub segment_jitter: f64,
    /// Crossfade between segments.
    pub crossfade_ms: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            level_step_db: 7.0,
            floor_db: -20.0,
            amplitude_jitter_db: 3.0,
            pitch_jitter: 0.05,
            segment_jitter: 0.15,
            crossfade_ms: 10.0,
        }
    }
}

/// Generates `per_class` clips for each of the ten classes, class-major.
///
/// Each clip is reproducible from `(seed, class, index)` alone, so the
/// corpus is identical regardless of thread count.
pub fn synth_corpus<T: Scalar>(seed: u64, per_class: usize, duration_range_ms: (f64, f64)) -> Result<Vec<AudioClip<T>>> {
    synth_corpus_with(seed, per_class, duration_range_ms, &SynthConfig::default())
}

pub fn synth_corpus_with<T: Scalar>(
    seed: u64,
    per_class: usize,
    duration_range_ms: (f64, f64),
    cfg: &SynthConfig,
) -> Result<Vec<AudioClip<T>>> {
    if per_class == 0 {
        return Err(Error::Input("per_class must be at least 1".into()));
    }
    let (lo, hi) = duration_range_ms;
    if !(500.0..=1000.0).contains(&lo) || !(500.0..=1000.0).contains(&hi) || lo > hi {
        return Err(Error::Input(format!("duration range [{lo}, {hi}] ms must lie within [500, 1000]")));
    }
    (0..N_CLASSES * per_class)
        .into_par_iter()
        .map(|i| synth_clip(seed, (i / per_class) as u8, i % per_class, duration_range_ms, cfg))
        .collect()
}

/// One synthetic clip: four segments of band-shaped random-phase noise whose
/// band levels follow the class's peak-band trajectory.
pub fn synth_clip<T: Scalar>(
    seed: u64,
    class: u8,
    index: usize,
    duration_range_ms: (f64, f64),
    cfg: &SynthConfig,
) -> Result<AudioClip<T>> {
    let class_idx = class as usize;
    if class_idx >= N_CLASSES {
        return Err(Error::Input(format!("class {class} outside 0..=9")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((class_idx as u64) << 40) | index as u64);

    let rate = SYNTH_SAMPLE_RATE as f64;
    let (lo, hi) = duration_range_ms;
    let dur_ms = if hi > lo { rng.random_range(lo..hi) } else { lo };
    let n = (dur_ms * rate / 1000.0).round() as usize;
    let pitch = 1.0 + rng.random_range(-cfg.pitch_jitter..=cfg.pitch_jitter);

    let mut bounds = [0usize; N_SEGMENTS + 1];
    let nominal = n as f64 / N_SEGMENTS as f64;
    for (s, b) in bounds.iter_mut().enumerate().take(N_SEGMENTS).skip(1) {
        let j = rng.random_range(-cfg.segment_jitter..=cfg.segment_jitter);
        *b = ((s as f64 + j) * nominal).round() as usize;
    }
    bounds[N_SEGMENTS] = n;

    let bands = BandSpec::<f64>::new(4000.0, 5)?;
    let edges: Vec<f64> = bands.edges().iter().map(|e| e * pitch).collect();
    let half = ((cfg.crossfade_ms * rate / 1000.0) / 2.0).round() as usize;
    let floor = 10f64.powf(cfg.floor_db / 20.0);

    let mut out = vec![0.0f64; n];
    let mut planner = FftPlanner::<f64>::new();
    for s in 0..N_SEGMENTS {
        let peak = PEAK_BANDS[class_idx][s];
        let amps: Vec<f64> = (0..bands.n_bands())
            .map(|b| {
                let db = -cfg.level_step_db * (b as f64 - peak as f64).abs()
                    + rng.random_range(-cfg.amplitude_jitter_db..=cfg.amplitude_jitter_db);
                10f64.powf(db / 20.0)
            })
            .collect();
        let start = bounds[s].saturating_sub(if s > 0 { half } else { 0 });
        let end = (bounds[s + 1] + if s + 1 < N_SEGMENTS { half } else { 0 }).min(n);
        let len = end - start;
        let nfft = len.next_power_of_two().max(2);
        let mut spec = vec![Complex::new(0.0, 0.0); nfft];
        for k in 1..nfft / 2 {
            let f = k as f64 * rate / nfft as f64;
            let band = (0..bands.n_bands()).find(|&b| f >= edges[b] && f < edges[b + 1]);
            let a = band.map_or(0.0, |b| amps[b]) + floor;
            let phase = rng.random_range(0.0..2.0 * PI);
            spec[k] = Complex::from_polar(a, phase);
            spec[nfft - k] = spec[k].conj();
        }
        planner.plan_fft_inverse(nfft).process(&mut spec);
        for (t, out_t) in out.iter_mut().enumerate().take(end).skip(start) {
            let mut w = 1.0;
            if s > 0 && t < bounds[s] + half {
                let x = (t - start) as f64 / (2 * half).max(1) as f64;
                w *= (0.5 * PI * x).sin().powi(2);
            }
            if s + 1 < N_SEGMENTS && t + half >= bounds[s + 1] {
                let x = (t + half - bounds[s + 1]) as f64 / (2 * half).max(1) as f64;
                w *= (0.5 * PI * x).cos().powi(2);
            }
            *out_t += w * spec[t - start].re;
        }
    }

    let peak_abs = out.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let target = rng.random_range(0.3..0.8);
    let g = if peak_abs > 0.0 { target / peak_abs } else { 0.0 };
    let samples = out.into_iter().map(|x| T::of(x * g)).collect();
    AudioClip::new(samples, SYNTH_SAMPLE_RATE, Some(class), format!("synth_c{class}_{index:04}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_and_uniform_labels() {
        let clips = synth_corpus::<f64>(7, 50, (500.0, 1000.0)).unwrap();
        assert_eq!(clips.len(), 500);
        let mut hist = [0usize; 10];
        for c in &clips {
            hist[c.label.unwrap() as usize] += 1;
            let d = c.duration_ms();
            assert!((499.9..=1000.1).contains(&d), "duration {d}");
            assert!(c.samples.iter().all(|s| s.abs() <= 1.0));
        }
        assert_eq!(hist, [50; 10]);
    }

    #[test]
    fn deterministic() {
        let a = synth_corpus::<f64>(3, 2, (500.0, 1000.0)).unwrap();
        let b = synth_corpus::<f64>(3, 2, (500.0, 1000.0)).unwrap();
        assert_eq!(a, b);
        let c = synth_corpus::<f64>(4, 2, (500.0, 1000.0)).unwrap();
        assert_ne!(a[0].samples, c[0].samples);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(synth_corpus::<f64>(1, 0, (500.0, 1000.0)).is_err());
        assert!(synth_corpus::<f64>(1, 1, (400.0, 1000.0)).is_err());
        assert!(synth_corpus::<f64>(1, 1, (900.0, 600.0)).is_err());
    }

    #[test]
    fn table_rows_well_separated() {
        for a in 0..N_CLASSES {
            for b in a + 1..N_CLASSES {
                let diff = (0..N_SEGMENTS).filter(|&s| PEAK_BANDS[a][s] != PEAK_BANDS[b][s]).count();
                assert!(diff >= 3, "classes {a} {b}");
            }
        }
    }
}
