use std::io::{BufWriter, Write};
use std::path::Path;

use super::{frame_clip, FeatureMatrix, Framing, SpectrumAnalyzer};
use crate::corpus::AudioClip;
use crate::{Error, Result, Scalar};

/// Writes one row per frame, comma-separated, 9 significant digits.
pub fn write_features_csv<T: Scalar>(path: impl AsRef<Path>, f: &FeatureMatrix<T>) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for r in 0..f.rows() {
        let line: Vec<String> = f.row(r).iter().map(|v| format!("{:.8e}", v.as_f64())).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features_csv<T: Scalar>(path: impl AsRef<Path>, id: String, label: Option<u8>) -> Result<FeatureMatrix<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let row: Vec<T> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>().map(T::of))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(Error::Format(format!("{}: ragged rows", path.display())));
        }
        values.extend(row);
        rows += 1;
    }
    FeatureMatrix::new(values, rows, cols.unwrap_or(0), id, label)
}

/// Binary PGM of the framed log-power spectrogram: one column per frame,
/// frequency increasing upwards, intensities min-max scaled to 0..=255.
pub fn write_spectrogram_pgm<T: Scalar>(path: impl AsRef<Path>, clip: &AudioClip<T>, framing: &Framing<T>) -> Result<()> {
    let spec = framing.for_duration(T::of(clip.duration_ms()))?;
    let frames = frame_clip(clip, &spec)?;
    let mut analyzer = SpectrumAnalyzer::new();
    let spectra = frames.iter().map(|f| analyzer.log_spectrum(f)).collect::<Result<Vec<_>>>()?;
    let height = spectra[0].len();
    let (lo, hi) = spectra
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.as_f64()), hi.max(v.as_f64())));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut pixels = Vec::with_capacity(height * spectra.len());
    for row in (0..height).rev() {
        for s in &spectra {
            pixels.push(((s[row].as_f64() - lo) / span * 255.0).round() as u8);
        }
    }
    write_pgm(path, spectra.len(), height, &pixels)
}

pub(crate) fn write_pgm(path: impl AsRef<Path>, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(pixels)?;
    w.flush()?;
    Ok(())
}
