//! Spike signatures: the trained network's response when the frames of a
//! clip are presented one after another, 5 ms each, in one continuous run.

use std::fmt::Write as _;
use std::path::Path;

use crate::features::{CurrentScaler, FeatureMatrix};
use crate::izhikevich::SpikeTrain;
use crate::snn::{simulate_outputs, steps_to_times, NetworkConfig};
use crate::synapse::SynapseMatrix;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignatureConfig<T> {
    /// Presentation time of one frame, ms.
    pub frame_ms: T,
    /// Multiplies the scaled feature currents while a frame is presented.
    pub drive_gain: T,
}

impl<T: Scalar> Default for SignatureConfig<T> {
    fn default() -> Self {
        Self { frame_ms: T::of(5.0), drive_gain: T::of(20.0) }
    }
}

impl<T: Scalar> SignatureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.drive_gain >= T::zero()) || !self.drive_gain.is_finite() {
            return Err(Error::Config(format!("drive_gain = {} must be finite and >= 0", self.drive_gain)));
        }
        Ok(())
    }
}

/// Output spike trains over `n_frames * frame_ms`, plus the net input of
/// every output unit at every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature<T> {
    pub id: String,
    pub label: Option<u8>,
    pub trains: Vec<SpikeTrain<T>>,
    pub net_input: Vec<Vec<T>>,
    pub dt: T,
}

impl<T: Scalar> Signature<T> {
    pub fn duration(&self) -> T {
        self.trains.first().map_or(T::zero(), SpikeTrain::duration)
    }

    pub fn total_spikes(&self) -> usize {
        self.trains.iter().map(SpikeTrain::len).sum()
    }

    pub fn n_units(&self) -> usize {
        self.trains.len()
    }
}

/// Generates the signature of one feature matrix.
///
/// During frame `f` only the `n_bands` input units of that frame receive
/// current (`drive_gain` times the scaled feature); all units keep their
/// state across frame boundaries.
pub fn signature<T: Scalar>(
    features: &FeatureMatrix<T>,
    weights: &SynapseMatrix<T>,
    scaler: &CurrentScaler<T>,
    config: &NetworkConfig<T>,
    sig: &SignatureConfig<T>,
) -> Result<Signature<T>> {
    config.validate()?;
    sig.validate()?;
    let (n_frames, n_bands) = features.shape();
    if (n_frames, n_bands) != (config.n_frames, config.n_bands) || weights.rows() != n_frames * n_bands {
        return Err(Error::Input(format!(
            "feature shape {:?} does not match a {}x{} network with {} synapse rows",
            features.shape(),
            config.n_frames,
            config.n_bands,
            weights.rows()
        )));
    }
    let neuron = &config.neuron;
    let frame_steps = neuron.n_steps(sig.frame_ms)?;
    let total = n_frames * frame_steps;
    let duration = T::of_usize(n_frames) * sig.frame_ms;
    let currents = scaler.scale_to_current(features);

    let pre_steps: Vec<Vec<u32>> = currents
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let start = (k / n_bands) * frame_steps;
            let drive = i * sig.drive_gain;
            let mut st = neuron.resting_state();
            (start..total)
                .filter(|&step| neuron.advance(&mut st, if step < start + frame_steps { drive } else { T::zero() }))
                .map(|s| s as u32)
                .collect()
        })
        .collect();

    let run = simulate_outputs(weights, &pre_steps, total, config, true)?;
    let trains = run
        .post_steps
        .iter()
        .map(|s| steps_to_times(s, neuron.dt, duration))
        .collect::<Result<Vec<_>>>()?;
    Ok(Signature {
        id: features.id.clone(),
        label: features.label,
        trains,
        net_input: run.net_input.unwrap_or_default(),
        dt: neuron.dt,
    })
}

/// One prototype signature per class.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeSet<T> {
    pub prototypes: Vec<Signature<T>>,
}

impl<T: Scalar> PrototypeSet<T> {
    pub fn get(&self, class: usize) -> &Signature<T> {
        &self.prototypes[class]
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }

    pub fn total_spikes(&self) -> usize {
        self.prototypes.iter().map(Signature::total_spikes).sum()
    }

    /// Writes `proto_<class>.spikes` files into `dir`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        std::fs::create_dir_all(dir.as_ref())?;
        for (c, p) in self.prototypes.iter().enumerate() {
            std::fs::write(dir.as_ref().join(format!("proto_{c}.spikes")), spikes_to_text(&p.trains))?;
        }
        Ok(())
    }
}

/// Signature of the element-wise mean feature matrix of each class.
pub fn prototypes<T: Scalar>(
    train_set: &[FeatureMatrix<T>],
    weights: &SynapseMatrix<T>,
    scaler: &CurrentScaler<T>,
    config: &NetworkConfig<T>,
    sig: &SignatureConfig<T>,
) -> Result<PrototypeSet<T>> {
    let prototypes = (0..config.n_outputs)
        .map(|c| {
            let members: Vec<&FeatureMatrix<T>> = train_set.iter().filter(|f| f.label == Some(c as u8)).collect();
            if members.is_empty() {
                return Err(Error::Input(format!("no training samples for class {c}")));
            }
            let mut mean = FeatureMatrix::mean(members)?;
            mean.id = format!("proto_{c}");
            mean.label = Some(c as u8);
            signature(&mean, weights, scaler, config, sig)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PrototypeSet { prototypes })
}

/// One line per unit, spike times in ms with four decimals.
pub fn spikes_to_text<T: Scalar>(trains: &[SpikeTrain<T>]) -> String {
    let mut s = String::new();
    for t in trains {
        let line: Vec<String> = t.times().iter().map(|x| format!("{:.4}", x.as_f64())).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn spikes_from_text<T: Scalar>(text: &str, duration: T) -> Result<Vec<SpikeTrain<T>>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let times = line
                .split_whitespace()
                .map(|v| v.parse::<f64>().map(T::of).map_err(|_| Error::Format(format!("line {}: bad time '{v}'", i + 1))))
                .collect::<Result<Vec<T>>>()?;
            SpikeTrain::new(times, duration)
        })
        .collect()
}

/// SVG raster: one row per unit (unit 0 on top), time on the x axis, one
/// `class="spike"` tick per spike.
pub fn raster_svg<T: Scalar>(trains: &[SpikeTrain<T>], title: &str) -> String {
    let duration = trains.first().map_or(1.0, |t| t.duration().as_f64());
    let (left, top, width, row_h) = (40.0, 24.0, 600.0, 18.0);
    let height = top + row_h * trains.len() as f64 + 24.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height}" font-family="sans-serif" font-size="11">"#,
        left + width + 10.0
    );
    let _ = writeln!(s, r#"<text x="{left}" y="14">{}</text>"#, escape(title));
    for (u, t) in trains.iter().enumerate() {
        let y = top + row_h * u as f64;
        let _ = writeln!(s, r#"<text x="4" y="{}">{u}</text>"#, y + row_h * 0.7);
        let _ = writeln!(s, r##"<line x1="{left}" y1="{0}" x2="{1}" y2="{0}" stroke="#ddd"/>"##, y + row_h, left + width);
        for &x in t.times() {
            let px = left + width * x.as_f64() / duration;
            let _ = writeln!(
                s,
                r#"<line class="spike" x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
                y + 2.0,
                y + row_h - 2.0
            );
        }
    }
    let axis_y = top + row_h * trains.len() as f64 + 16.0;
    let _ = writeln!(s, r#"<text x="{left}" y="{axis_y}">0 ms</text>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{axis_y}" text-anchor="end">{duration} ms</text>"#, left + width);
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `<stem>.spikes` and `<stem>.svg` next to each other.
pub fn export_raster<T: Scalar>(trains: &[SpikeTrain<T>], stem: impl AsRef<Path>, title: &str) -> Result<()> {
    let stem = stem.as_ref();
    std::fs::write(stem.with_extension("spikes"), spikes_to_text(trains))?;
    std::fs::write(stem.with_extension("svg"), raster_svg(trains, title))?;
    Ok(())
}
