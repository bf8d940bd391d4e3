use super::SPECTRAL_FLOOR;
use crate::{Error, Result, Scalar};

/// `fib(1..=m)` = 1, 1, 2, 3, 5, ...
pub fn fibonacci(m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..m {
        out.push(a);
        (a, b) = (b, a + b);
    }
    out
}

/// `M` bands over `[0, R]` Hz with widths `fib(i) * x`, `x = R / Σ fib(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSpec<T> {
    range_hz: T,
    unit_hz: T,
    edges: Vec<T>,
}

impl<T: Scalar> Default for BandSpec<T> {
    fn default() -> Self {
        Self::new(T::of(4000.0), 5).expect("default band layout is valid")
    }
}

impl<T: Scalar> BandSpec<T> {
    pub fn new(range_hz: T, n_bands: usize) -> Result<Self> {
        if n_bands == 0 {
            return Err(Error::Config("band count must be positive".into()));
        }
        if !(range_hz > T::zero()) || !range_hz.is_finite() {
            return Err(Error::Config(format!("band range {range_hz} Hz must be positive")));
        }
        let fib = fibonacci(n_bands);
        let unit_hz = range_hz / T::of(fib.iter().sum::<u64>() as f64);
        let mut edges = Vec::with_capacity(n_bands + 1);
        edges.push(T::zero());
        let mut acc = 0u64;
        for (i, f) in fib.iter().enumerate() {
            acc += f;
            // pin the last edge to R so the bands partition [0, R] exactly
            edges.push(if i + 1 == n_bands { range_hz } else { unit_hz * T::of(acc as f64) });
        }
        Ok(Self { range_hz, unit_hz, edges })
    }

    pub fn range_hz(&self) -> T {
        self.range_hz
    }

    /// Width of the first band, `x`.
    pub fn unit_hz(&self) -> T {
        self.unit_hz
    }

    pub fn n_bands(&self) -> usize {
        self.edges.len() - 1
    }

    /// `M + 1` strictly increasing edges from 0 to R.
    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn widths(&self) -> Vec<T> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Band holding frequency `f`, using half-open `[lo, hi)` intervals.
    pub fn band_of(&self, f: T) -> Option<usize> {
        if f < T::zero() || f >= self.range_hz {
            return None;
        }
        Some(self.edges.partition_point(|&e| e <= f) - 1)
    }
}

/// Mean log-power of the bins whose centre frequency falls in each band.
///
/// `spectrum` holds bins `0..=n/2` of an `n`-point DFT. Bands above Nyquist
/// are clipped; a band with no bins gets `log(ε)`.
pub fn band_energies<T: Scalar>(spectrum: &[T], bands: &BandSpec<T>, sample_rate: u32) -> Vec<T> {
    let m = bands.n_bands();
    let mut sums = vec![T::zero(); m];
    let mut counts = vec![0usize; m];
    if spectrum.len() >= 2 {
        let nfft = 2 * (spectrum.len() - 1);
        let bin_hz = T::of(sample_rate as f64) / T::of_usize(nfft);
        for (k, &v) in spectrum.iter().enumerate() {
            if let Some(b) = bands.band_of(bin_hz * T::of_usize(k)) {
                sums[b] += v;
                counts[b] += 1;
            }
        }
    }
    let empty = T::of(SPECTRAL_FLOOR).ln();
    sums.into_iter()
        .zip(counts)
        .map(|(s, c)| if c == 0 { empty } else { s / T::of_usize(c) })
        .collect()
}
