//! Time-delay embedding of a scalar series into a point cloud.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::formats::{data_lines, fmt_f64, parse_f64};
use crate::persistence::{PersistenceError, PointCloud};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("need more than {needed} samples for this dimension and delay, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sample {0} is not finite")]
    NonFinite(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Cloud(#[from] PersistenceError),
}

/// Uniformly sampled real signal.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>) -> Result<Self, EmbeddingError> {
        Self::with_rate(samples, 1.0)
    }

    pub fn with_rate(samples: Vec<f64>, sample_rate: f64) -> Result<Self, EmbeddingError> {
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(EmbeddingError::NonFinite(i));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(EmbeddingError::InvalidParameter(format!("sample rate {sample_rate}")));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// `amplitude * sin(2π k / period)` for `k = 0..len`.
    pub fn sine(len: usize, period: f64, amplitude: f64) -> Self {
        let samples = (0..len)
            .map(|k| amplitude * (std::f64::consts::TAU * k as f64 / period).sin())
            .collect();
        Self { samples, sample_rate: 1.0 }
    }
}

/// Reads a series from CSV: either one value per line or `index,value`
/// rows. A non-numeric first line is skipped as a header.
pub fn parse_time_series_csv(text: &str) -> Result<TimeSeries, EmbeddingError> {
    let mut samples = Vec::new();
    let mut columns = None;
    for (k, (line, content)) in data_lines(text).enumerate() {
        let fields: Vec<&str> = content.split(',').collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| parse_f64(f)).collect();
        let Some(values) = parsed else {
            if k == 0 {
                continue;
            }
            return Err(EmbeddingError::Parse { line, message: format!("cannot parse '{content}'") });
        };
        let width = *columns.get_or_insert(values.len());
        if values.len() != width || !(1..=2).contains(&width) {
            return Err(EmbeddingError::Parse {
                line,
                message: format!("expected 1 or 2 columns consistently, found {}", values.len()),
            });
        }
        let v = values[width - 1];
        if !v.is_finite() {
            return Err(EmbeddingError::Parse { line, message: "non-finite sample".into() });
        }
        samples.push(v);
    }
    TimeSeries::new(samples)
}

/// Single-column CSV, one sample per line.
pub fn time_series_to_csv(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 20);
    for &v in samples {
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    out
}

/// Point `i` is `(s[i], s[i+d], ..., s[i+(n-1)d])`.
pub fn delay_embed(ts: &TimeSeries, dim: usize, delay: usize) -> Result<PointCloud, EmbeddingError> {
    if dim < 2 {
        return Err(EmbeddingError::InvalidParameter(format!("embedding dimension must be at least 2, got {dim}")));
    }
    if delay < 1 {
        return Err(EmbeddingError::InvalidParameter("delay must be at least 1 sample".into()));
    }
    let span = (dim - 1) * delay;
    if ts.len() <= span {
        return Err(EmbeddingError::InsufficientSamples { needed: span, got: ts.len() });
    }
    let s = ts.samples();
    let count = ts.len() - span;
    let mut coords = Vec::with_capacity(count * dim);
    for i in 0..count {
        coords.extend((0..dim).map(|k| s[i + k * delay]));
    }
    Ok(PointCloud::from_flat(dim, coords)?)
}

/// Smallest over largest singular value of the mean-centred coordinates.
/// Close to 0 when the cloud has collapsed onto a lower-dimensional set.
pub fn degeneracy_score(pc: &PointCloud) -> Result<f64, EmbeddingError> {
    if pc.len() < 2 {
        return Err(EmbeddingError::InvalidParameter("need at least 2 points".into()));
    }
    let (n, d) = (pc.len(), pc.dim());
    let mut mean = vec![0.0; d];
    for p in pc.points() {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centred = DMatrix::from_fn(n, d, |i, j| pc.point(i)[j] - mean[j]);
    let sv = centred.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return Ok(0.0);
    }
    Ok(sv.min() / max)
}
