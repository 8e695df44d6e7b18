//! Shared text and file helpers: number formatting, CSV field parsing,
//! atomic file writes and 16-bit WAV output.

use std::io::{self, Write};
use std::path::Path;

/// Shortest decimal that parses back to the same `f64`; infinities as `inf` / `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

/// Parses a decimal or `inf`/`-inf`.
pub fn parse_f64(field: &str) -> Option<f64> {
    match field.trim() {
        "inf" | "+inf" | "Inf" => Some(f64::INFINITY),
        "-inf" | "-Inf" => Some(f64::NEG_INFINITY),
        t => t.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place,
/// so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Encodes mono 16-bit PCM little-endian WAV. With `normalize`, the peak is
/// scaled to 0.9 of full scale; otherwise samples are clipped to [-1, 1].
pub fn encode_wav(samples: &[f64], sample_rate: u32, normalize: bool) -> Result<Vec<u8>, hound::Error> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gain = if normalize && peak > 0.0 { 0.9 / peak } else { 1.0 };
    let mut cursor = io::Cursor::new(Vec::new());
    {
        let mut w = hound::WavWriter::new(&mut cursor, spec)?;
        for &s in samples {
            let v = (s * gain).clamp(-1.0, 1.0);
            w.write_sample((v * f64::from(i16::MAX)).round() as i16)?;
        }
        w.finalize()?;
    }
    Ok(cursor.into_inner())
}
