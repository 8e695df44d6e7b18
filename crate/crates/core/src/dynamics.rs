//! Circle-map oscillators.
//!
//! Phases live on `[0, 1)` and every update is reduced mod 1, so any finite
//! update rule keeps the state on the circle no matter how many steps are
//! taken. An unconstrained recursion such as the logistic map
//! `x -> r x (1 - x)` escapes to infinity for `r > 4`; the wrapped version
//! cannot.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::embedding::TimeSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("phase update produced a non-finite value")]
    NonFinitePhase,
    #[error("phase {0} is outside [0, 1)")]
    OutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// `v mod 1` in `[0, 1)`. A result that rounds up to exactly 1.0 becomes 0.0.
pub fn wrap_unit(v: f64) -> f64 {
    let w = v - v.floor();
    if w >= 1.0 { 0.0 } else { w }
}

/// `sin(2π t)` with `t` in turns. Quarter turns are exact: 0, 1, 0, -1.
pub fn sin_turns(t: f64) -> f64 {
    let t = wrap_unit(t);
    if t < 0.25 {
        (TAU * t).sin()
    } else if t < 0.5 {
        (TAU * (0.5 - t)).sin()
    } else if t < 0.75 {
        -(TAU * (t - 0.5)).sin()
    } else {
        -(TAU * (1.0 - t)).sin()
    }
}

/// A point on the flat circle `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    pub fn new(x: f64) -> Result<Self, PhaseError> {
        if (0.0..1.0).contains(&x) {
            Ok(Self(x))
        } else {
            Err(PhaseError::OutOfRange(x))
        }
    }

    /// Reduces any finite real mod 1.
    pub fn wrap(v: f64) -> Result<Self, PhaseError> {
        if v.is_finite() {
            Ok(Self(wrap_unit(v)))
        } else {
            Err(PhaseError::NonFinitePhase)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Shortest distance around the circle.
    pub fn circle_distance(self, other: Phase) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(1.0 - d)
    }
}

/// Update rule for the phase before reduction mod 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseFunctionSpec {
    /// `x + omega`
    ConstantIncrement { omega: f64 },
    /// `gain * x + offset + sine_amount * sin(2π * harmonic * x)`
    Custom { gain: f64, offset: f64, sine_amount: f64, harmonic: f64 },
}

impl PhaseFunctionSpec {
    pub fn constant(omega: f64) -> Self {
        Self::ConstantIncrement { omega }
    }

    /// The unreduced value `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::ConstantIncrement { omega } => x + omega,
            Self::Custom { gain, offset, sine_amount, harmonic } => {
                gain * x + offset + sine_amount * (TAU * harmonic * x).sin()
            }
        }
    }
}

/// `f(x) + input`, before wrapping. The integer part counts windings.
pub fn lift_step(f: &PhaseFunctionSpec, x: Phase, input: f64) -> f64 {
    f.eval(x.0) + input
}

/// `f(x) + input mod 1`.
pub fn step_phase(f: &PhaseFunctionSpec, x: Phase, input: f64) -> Result<Phase, PhaseError> {
    Phase::wrap(lift_step(f, x, input))
}

/// Maps a phase to an amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectionSpec {
    /// `amplitude * sin(2π x + phase_offset)`
    Sine { amplitude: f64, phase_offset: f64 },
    /// The phase itself.
    Sawtooth,
    /// Triangle fold, see [`fold_project`].
    Fold,
}

impl ProjectionSpec {
    pub fn sine() -> Self {
        Self::Sine { amplitude: 1.0, phase_offset: 0.0 }
    }

    pub fn project(&self, x: Phase) -> f64 {
        match *self {
            Self::Sine { amplitude, phase_offset } => sine_projection(x.0, amplitude, phase_offset),
            Self::Sawtooth => x.0,
            Self::Fold => fold_project(x),
        }
    }
}

/// `amplitude * sin(2π x + offset)`, evaluated in turns so that quarter
/// phases map to exact values when `offset` is zero.
pub fn sine_projection(x: f64, amplitude: f64, offset: f64) -> f64 {
    amplitude * sin_turns(x + offset / TAU)
}

/// Folded circle: `2x` on `[0, 1/2]`, `2(1 - x)` on `(1/2, 1)`. The two
/// extrema sit at `x = 0` and `x = 1/2`; every other value has two preimages.
pub fn fold_project(x: Phase) -> f64 {
    let x = x.0;
    if x <= 0.5 { 2.0 * x } else { 2.0 * (1.0 - x) }
}

/// `count` samples `p(x_n)` of the orbit `x_0, x_1 = f(x_0) mod 1, ...`.
pub fn oscillate(
    f: &PhaseFunctionSpec,
    p: &ProjectionSpec,
    x0: Phase,
    count: usize,
) -> Result<TimeSeries, PhaseError> {
    if count == 0 {
        return Err(PhaseError::InvalidParameter("count must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut x = x0;
    for n in 0..count {
        out.push(p.project(x));
        if n + 1 < count {
            x = step_phase(f, x, 0.0)?;
        }
    }
    TimeSeries::new(out).map_err(|_| PhaseError::NonFinitePhase)
}
