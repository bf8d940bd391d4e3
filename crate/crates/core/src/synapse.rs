//! Alpha-function conductance synapses.
//!
//! A spike arriving at `t_f` contributes `K (t - t_f) exp(-(t - t_f) / τ)`
//! to its synapse's conductance; contributions add linearly across spikes
//! and synapses, and the current is `Σ E_k G_k - V Σ G_k`.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result, Scalar};

/// Default kernel peak time, ms.
pub const DEFAULT_TAU_MS: f64 = 2.0;

/// `K t exp(-t/τ)`; zero for `t <= 0`.
#[inline]
pub fn alpha_kernel<T: Scalar>(t: T, k_syn: T, tau: T) -> T {
    if t <= T::zero() {
        T::zero()
    } else {
        k_syn * t * (-t / tau).exp()
    }
}

/// Total conductance at `t` of synapses with amplitudes `k` and per-synapse
/// arrival times `arrivals`, summed directly over every spike.
pub fn total_conductance<T: Scalar>(arrivals: &[Vec<T>], k: &[T], tau: T, t: T) -> T {
    arrivals
        .iter()
        .zip(k)
        .map(|(times, &ks)| times.iter().filter(|&&tf| tf <= t).map(|&tf| alpha_kernel(t - tf, ks, tau)).sum::<T>())
        .sum()
}

/// `Σ E_k G_k - V Σ G_k`.
pub fn synaptic_current<T: Scalar>(conductances: &[T], reversal: &[T], v: T) -> T {
    let driven: T = conductances.iter().zip(reversal).map(|(&g, &e)| e * g).sum();
    driven - v * conductances.iter().copied().sum::<T>()
}

/// `-V Σ G_k`, the current with every reversal potential at 0 mV.
#[inline]
pub fn synaptic_current_zero_reversal<T: Scalar>(total_g: T, v: T) -> T {
    -v * total_g
}

/// One synapse holding its pending arrivals explicitly.
///
/// Arrivals older than `horizon_taus * τ` are dropped on [`prune`](Self::prune).
#[derive(Debug, Clone, PartialEq)]
pub struct SynapseState<T> {
    pub k_syn: T,
    pub tau: T,
    arrivals: Vec<T>,
    horizon_taus: T,
}

impl<T: Scalar> SynapseState<T> {
    /// Kernel at 40τ is below 1e-15 of its peak.
    pub const DEFAULT_HORIZON_TAUS: f64 = 40.0;

    pub fn new(k_syn: T, tau: T) -> Result<Self> {
        if !(k_syn >= T::zero()) || !(tau > T::zero()) {
            return Err(Error::Input(format!("need K >= 0 and tau > 0, got K={k_syn}, tau={tau}")));
        }
        Ok(Self { k_syn, tau, arrivals: Vec::new(), horizon_taus: T::of(Self::DEFAULT_HORIZON_TAUS) })
    }

    pub fn with_horizon(mut self, horizon_taus: T) -> Self {
        self.horizon_taus = horizon_taus;
        self
    }

    /// Records an arrival; times must be non-decreasing.
    pub fn receive(&mut self, t: T) -> Result<()> {
        if self.arrivals.last().is_some_and(|&last| t < last) {
            return Err(Error::Input(format!("arrival {t} precedes the previous arrival")));
        }
        self.arrivals.push(t);
        Ok(())
    }

    pub fn prune(&mut self, now: T) {
        let cutoff = now - self.horizon_taus * self.tau;
        let keep_from = self.arrivals.partition_point(|&t| t < cutoff);
        self.arrivals.drain(..keep_from);
    }

    pub fn arrivals(&self) -> &[T] {
        &self.arrivals
    }

    pub fn conductance(&self, now: T) -> T {
        self.arrivals
            .iter()
            .filter(|&&tf| tf <= now)
            .map(|&tf| alpha_kernel(now - tf, self.k_syn, self.tau))
            .sum()
    }
}

/// Recursive form of a superposition of alpha kernels with unit amplitude.
///
/// Keeps `x = Σ exp(-s/τ)` and `g = Σ s exp(-s/τ)` over the ages `s` of past
/// arrivals; advancing by `dt` maps `g <- e (g + dt x)`, `x <- e x` with
/// `e = exp(-dt/τ)`, which is exact for any number of arrivals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTrace<T> {
    pub x: T,
    pub g: T,
}

impl<T: Scalar> Default for AlphaTrace<T> {
    fn default() -> Self {
        Self { x: T::zero(), g: T::zero() }
    }
}

impl<T: Scalar> AlphaTrace<T> {
    #[inline]
    pub fn advance(&mut self, dt: T, decay: T) {
        self.g = decay * (self.g + dt * self.x);
        self.x = decay * self.x;
    }

    /// Adds an arrival of weight `w` that happened `age` ago.
    #[inline]
    pub fn add(&mut self, w: T, age: T, decay_of_age: T) {
        self.x += w * decay_of_age;
        self.g += w * age * decay_of_age;
    }

    /// Conductance (kernel sum with `K = 1` per unit weight).
    #[inline]
    pub fn value(&self) -> T {
        self.g
    }
}

/// Conductance amplitudes of every input→output synapse, `rows` inputs by
/// `cols` outputs, stored column-major so each output's afferents are
/// contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct SynapseMatrix<T> {
    rows: usize,
    cols: usize,
    tau: T,
    data: Vec<T>,
}

impl<T: Scalar> SynapseMatrix<T> {
    pub fn from_columns(columns: Vec<Vec<T>>, tau: T) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Input("columns of unequal length".into()));
        }
        let data: Vec<T> = columns.into_iter().flatten().collect();
        Self::from_column_major(rows, cols, tau, data)
    }

    fn from_column_major(rows: usize, cols: usize, tau: T, data: Vec<T>) -> Result<Self> {
        if !(tau > T::zero()) {
            return Err(Error::Input(format!("tau {tau} must be positive")));
        }
        if let Some(v) = data.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
            return Err(Error::Input(format!("conductance amplitude {v} must be finite and >= 0")));
        }
        Ok(Self { rows, cols, tau, data })
    }

    pub fn filled(rows: usize, cols: usize, tau: T, value: T) -> Self {
        Self { rows, cols, tau, data: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn get(&self, input: usize, output: usize) -> T {
        self.data[output * self.rows + input]
    }

    pub fn set(&mut self, input: usize, output: usize, v: T) {
        self.data[output * self.rows + input] = v;
    }

    pub fn column(&self, output: usize) -> &[T] {
        &self.data[output * self.rows..(output + 1) * self.rows]
    }

    pub fn column_mut(&mut self, output: usize) -> &mut [T] {
        &mut self.data[output * self.rows..(output + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.rows.max(1))
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn column_l1(&self, output: usize) -> T {
        self.column(output).iter().map(|v| v.abs()).sum()
    }

    /// Text form: a `rows cols tau` header, then one line per input row.
    /// Numbers use the shortest representation that parses back exactly.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.tau);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().ok_or_else(|| Error::Format("empty weights file".into()))?.split_whitespace().collect();
        if header.len() != 3 {
            return Err(Error::Format("weights header must be 'rows cols tau'".into()));
        }
        let rows: usize = header[0].parse().map_err(|_| Error::Format("bad row count".into()))?;
        let cols: usize = header[1].parse().map_err(|_| Error::Format("bad column count".into()))?;
        let tau: T = header[2].parse().map_err(|_| Error::Format("bad tau".into()))?;
        let mut data = vec![T::zero(); rows * cols];
        let mut seen = 0;
        for (r, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            if r >= rows {
                return Err(Error::Format(format!("more than {rows} weight rows")));
            }
            let vals: Vec<&str> = line.split_whitespace().collect();
            if vals.len() != cols {
                return Err(Error::Format(format!("row {r}: {} values, expected {cols}", vals.len())));
            }
            for (c, v) in vals.iter().enumerate() {
                data[c * rows + r] = v.parse().map_err(|_| Error::Format(format!("row {r}: bad value '{v}'")))?;
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::Format(format!("{seen} weight rows, expected {rows}")));
        }
        Self::from_column_major(rows, cols, tau, data)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}
