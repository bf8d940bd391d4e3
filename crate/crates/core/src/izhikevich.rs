//! Izhikevich regular-spiking neuron integrated with forward Euler.
//!
//! ```text
//! C dV/dt = k (V - V_rest)(V - V_th) - U + I
//!   dU/dt = a [b (V - V_rest) - U]
//! if V > V_peak: V <- c, U <- U + d
//! ```

use std::io::{BufWriter, Write};
use std::path::Path;

use crate::scalar::finite;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IzhikevichParams<T> {
    pub capacitance: T,
    pub k: T,
    pub v_rest: T,
    pub v_threshold: T,
    pub v_peak: T,
    pub a: T,
    pub b: T,
    /// Reset potential.
    pub c: T,
    /// Recovery increment at reset.
    pub d: T,
    pub u0: T,
    /// Integration step, ms.
    pub dt: T,
}

impl<T: Scalar> Default for IzhikevichParams<T> {
    /// Regular-spiking parameters shared by input and output units.
    fn default() -> Self {
        Self {
            capacitance: T::of(100.0),
            k: T::of(0.7),
            v_rest: T::of(-60.0),
            v_threshold: T::of(-40.0),
            v_peak: T::of(35.0),
            a: T::of(0.03),
            b: T::of(-2.0),
            c: T::of(-50.0),
            d: T::of(100.0),
            u0: T::zero(),
            dt: T::of(0.1),
        }
    }
}

impl<T: Scalar> IzhikevichParams<T> {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.capacitance,
            self.k,
            self.v_rest,
            self.v_threshold,
            self.v_peak,
            self.a,
            self.b,
            self.c,
            self.d,
            self.u0,
            self.dt,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("neuron parameters must be finite".into()));
        }
        if !(self.v_rest < self.v_threshold && self.v_threshold < self.v_peak) {
            return Err(Error::Config("need v_rest < v_threshold < v_peak".into()));
        }
        if !(self.dt > T::zero()) || !(self.capacitance > T::zero()) {
            return Err(Error::Config("dt and capacitance must be positive".into()));
        }
        Ok(())
    }

    pub fn resting_state(&self) -> NeuronState<T> {
        NeuronState { v: self.v_rest, u: self.u0, last_spike: None }
    }

    /// One Euler step without input validation; returns whether the neuron
    /// spiked. Both derivatives use the pre-step `(V, U)`.
    #[inline]
    pub fn advance(&self, s: &mut NeuronState<T>, i_tot: T) -> bool {
        let dv = (self.dt / self.capacitance)
            * (self.k * (s.v - self.v_rest) * (s.v - self.v_threshold) - s.u + i_tot);
        let du = self.dt * self.a * (self.b * (s.v - self.v_rest) - s.u);
        s.v += dv;
        s.u += du;
        if s.v > self.v_peak {
            s.v = self.c;
            s.u += self.d;
            true
        } else {
            false
        }
    }

    /// One Euler step at simulation time `t`, recording the spike time.
    pub fn step(&self, s: &mut NeuronState<T>, i_tot: T, t: T) -> Result<bool> {
        finite(i_tot, "input current")?;
        finite(s.v, "membrane potential")?;
        finite(s.u, "recovery variable")?;
        let spiked = self.advance(s, i_tot);
        if spiked {
            s.last_spike = Some(t);
        }
        finite(s.v, "membrane potential")?;
        finite(s.u, "recovery variable")?;
        Ok(spiked)
    }

    pub fn n_steps(&self, duration_ms: T) -> Result<usize> {
        let n = (duration_ms / self.dt).round();
        if !(duration_ms > T::zero()) || ((n * self.dt - duration_ms).abs() > T::of(1e-6) * duration_ms) {
            return Err(Error::Config(format!("duration {duration_ms} ms is not a positive multiple of dt {}", self.dt)));
        }
        Ok(n.to_usize().unwrap_or(0))
    }

    /// Simulates from rest for `duration_ms`, with `current(step)` as input.
    /// Returns the spike train and the membrane potential after each step.
    pub fn run(&self, current: impl Fn(usize) -> T, duration_ms: T) -> Result<(SpikeTrain<T>, Vec<T>)> {
        self.validate()?;
        let n = self.n_steps(duration_ms)?;
        let mut s = self.resting_state();
        let mut times = Vec::new();
        let mut trace = Vec::with_capacity(n);
        for step in 0..n {
            let t = T::of_usize(step) * self.dt;
            if self.step(&mut s, current(step), t)? {
                times.push(t);
            }
            trace.push(s.v);
        }
        Ok((SpikeTrain::new(times, duration_ms)?, trace))
    }

    /// Spike steps of a neuron held at a constant current, without
    /// allocation of a potential trace.
    pub fn constant_current_spike_steps(&self, i_inj: T, n_steps: usize) -> Vec<u32> {
        let mut s = self.resting_state();
        (0..n_steps).filter(|_| self.advance(&mut s, i_inj)).map(|i| i as u32).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronState<T> {
    pub v: T,
    pub u: T,
    pub last_spike: Option<T>,
}

/// Strictly increasing spike times (ms) within `[0, duration)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain<T> {
    times: Vec<T>,
    duration: T,
}

impl<T: Scalar> SpikeTrain<T> {
    pub fn new(times: Vec<T>, duration: T) -> Result<Self> {
        if !(duration > T::zero()) {
            return Err(Error::Input(format!("spike train duration {duration} must be positive")));
        }
        if times.iter().any(|&t| !(t >= T::zero() && t < duration)) {
            return Err(Error::Input(format!("spike time outside [0, {duration})")));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Input("spike times must be strictly increasing".into()));
        }
        Ok(Self { times, duration })
    }

    pub fn empty(duration: T) -> Self {
        Self { times: Vec::new(), duration }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn inter_spike_intervals(&self) -> Vec<T> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Writes `t_ms,v_mv` rows for a potential trace.
pub fn write_voltage_csv<T: Scalar>(path: impl AsRef<Path>, dt: T, trace: &[T]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "t_ms,v_mv")?;
    for (i, v) in trace.iter().enumerate() {
        writeln!(w, "{},{}", (T::of_usize(i) * dt).as_f64(), v.as_f64())?;
    }
    w.flush()?;
    Ok(())
}
