use std::io::{BufWriter, Write};
use std::path::Path;

use super::TrainingLog;
use crate::features::export::write_pgm;
use crate::synapse::SynapseMatrix;
use crate::{Error, Result, Scalar};

/// CSV `epoch,mean_abs_dK,spikes_target,spikes_nontarget`.
pub fn write_training_log_csv<T: Scalar>(path: impl AsRef<Path>, log: &TrainingLog<T>) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "epoch,mean_abs_dK,spikes_target,spikes_nontarget")?;
    for e in &log.epochs {
        writeln!(w, "{},{},{},{}", e.epoch, e.mean_abs_dk, e.spikes_target, e.spikes_nontarget)?;
    }
    w.flush()?;
    Ok(())
}

/// Weight image of one output unit as a PGM: frames left to right, bands
/// bottom (lowest frequency) to top, each cell `scale` pixels square.
pub fn write_weight_image<T: Scalar>(
    path: impl AsRef<Path>,
    weights: &SynapseMatrix<T>,
    output: usize,
    n_frames: usize,
    n_bands: usize,
    scale: usize,
) -> Result<()> {
    if n_frames * n_bands != weights.rows() || output >= weights.cols() || scale == 0 {
        return Err(Error::Input("weight image layout does not match the synapse matrix".into()));
    }
    let col = weights.column(output);
    let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.as_f64()), hi.max(v.as_f64())));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (w, h) = (n_frames * scale, n_bands * scale);
    let mut px = Vec::with_capacity(w * h);
    for y in 0..h {
        let band = n_bands - 1 - y / scale;
        for x in 0..w {
            let v = col[(x / scale) * n_bands + band].as_f64();
            px.push(((v - lo) / span * 255.0).round() as u8);
        }
    }
    write_pgm(path, w, h, &px)
}
