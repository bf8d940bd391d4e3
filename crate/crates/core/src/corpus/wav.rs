use std::io::ErrorKind;
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::AudioClip;
use crate::{Error, Result, Scalar};

fn map_hound(path: &Path, e: hound::Error) -> Error {
    match e {
        // Truncated headers surface as short reads.
        hound::Error::IoError(io) if matches!(io.kind(), ErrorKind::UnexpectedEof | ErrorKind::Other) => {
            Error::Format(format!("{}: {io}", path.display()))
        }
        hound::Error::IoError(io) => Error::Io(io),
        hound::Error::Unsupported => Error::Unsupported(format!("{}: unsupported WAV encoding", path.display())),
        other => Error::Format(format!("{}: {other}", path.display())),
    }
}

/// Reads a mono 8- or 16-bit PCM WAV file, scaling samples to [-1, 1).
///
/// 16-bit values are divided by 32768, 8-bit values (stored unsigned) are
/// re-centred and divided by 128. The clip id is the file stem.
pub fn load_wav<T: Scalar>(path: impl AsRef<Path>, label: Option<u8>) -> Result<AudioClip<T>> {
    let path = path.as_ref();
    let reader = WavReader::open(path).map_err(|e| map_hound(path, e))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::Unsupported(format!("{}: {} channels, expected mono", path.display(), spec.channels)));
    }
    if spec.sample_format != SampleFormat::Int {
        return Err(Error::Unsupported(format!("{}: float samples, expected PCM", path.display())));
    }
    let scale = match spec.bits_per_sample {
        8 => 128.0,
        16 => 32768.0,
        b => return Err(Error::Unsupported(format!("{}: {b} bits per sample", path.display()))),
    };
    let samples = reader
        .into_samples::<i32>()
        .map(|s| s.map(|v| T::of(v as f64 / scale)))
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| map_hound(path, e))?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    AudioClip::new(samples, spec.sample_rate, label, id)
}

/// Writes a clip as 16-bit mono PCM. Samples are clamped to the PCM range.
pub fn write_wav<T: Scalar>(path: impl AsRef<Path>, clip: &AudioClip<T>) -> Result<()> {
    let path = path.as_ref();
    let spec = WavSpec { channels: 1, sample_rate: clip.sample_rate, bits_per_sample: 16, sample_format: SampleFormat::Int };
    let mut w = WavWriter::create(path, spec).map_err(|e| map_hound(path, e))?;
    for &s in &clip.samples {
        let q = (s.as_f64() * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_sample(q).map_err(|e| map_hound(path, e))?;
    }
    w.finalize().map_err(|e| map_hound(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_raw(path: &Path, channels: u16, bits: u16, data: &[i16]) {
        let spec = WavSpec { channels, sample_rate: 8000, bits_per_sample: bits, sample_format: SampleFormat::Int };
        let mut w = WavWriter::create(path, spec).unwrap();
        for &d in data {
            w.write_sample(d).unwrap();
        }
        w.finalize().unwrap();
    }

    #[test]
    fn pcm16_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.wav");
        write_raw(&p, 1, 16, &[32767, 0, -32768]);
        let c: AudioClip<f64> = load_wav(&p, Some(1)).unwrap();
        assert_eq!(c.samples, vec![32767.0 / 32768.0, 0.0, -1.0]);
        assert_eq!(c.sample_rate, 8000);
        assert_eq!(c.id, "x");
    }

    #[test]
    fn pcm8_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x8.wav");
        write_raw(&p, 1, 8, &[0, 64, -128]);
        let c: AudioClip<f64> = load_wav(&p, None).unwrap();
        assert_eq!(c.samples, vec![0.0, 0.5, -1.0]);
    }

    #[test]
    fn sine_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sine.wav");
        let samples: Vec<f64> = (0..4000).map(|n| 0.8 * (2.0 * std::f64::consts::PI * 440.0 * n as f64 / 8000.0).sin()).collect();
        let clip = AudioClip::new(samples, 8000, Some(4), "sine").unwrap();
        write_wav(&p, &clip).unwrap();
        let back: AudioClip<f64> = load_wav(&p, Some(4)).unwrap();
        assert_eq!(back.samples.len(), 4000);
        for (a, b) in clip.samples.iter().zip(&back.samples) {
            assert!((a - b).abs() <= 1.0 / 32768.0);
        }
    }

    #[test]
    fn rejects_stereo() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("st.wav");
        write_raw(&p, 2, 16, &[1, 2, 3, 4]);
        assert!(matches!(load_wav::<f64>(&p, None), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_malformed_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.wav");
        std::fs::File::create(&p).unwrap().write_all(b"RIFF\x10\x00\x00\x00WAVEjunkjunk").unwrap();
        assert!(matches!(load_wav::<f64>(&p, None), Err(Error::Format(_))));
    }

    #[test]
    fn rejects_compressed_codec() {
        // Minimal RIFF with a fmt chunk declaring format tag 2 (MS ADPCM).
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"RIFF");
        bytes.extend_from_slice(&36u32.to_le_bytes());
        bytes.extend_from_slice(b"WAVEfmt ");
        bytes.extend_from_slice(&16u32.to_le_bytes());
        bytes.extend_from_slice(&2u16.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&8000u32.to_le_bytes());
        bytes.extend_from_slice(&8000u32.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&8u16.to_le_bytes());
        bytes.extend_from_slice(b"data");
        bytes.extend_from_slice(&0u32.to_le_bytes());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("adpcm.wav");
        std::fs::write(&p, bytes).unwrap();
        assert!(matches!(load_wav::<f64>(&p, None), Err(Error::Unsupported(_))));
    }
}
