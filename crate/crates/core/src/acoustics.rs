//! Acoustic demonstrators built from covering spaces.
//!
//! * A lossless two-rail waveguide whose ends reflect with `-1` (Dirichlet)
//!   or `+1` (Neumann). Its recurrence time shows the double cover: mixed ends
//!   need two trips around before the state repeats.
//! * Image sources of a rectangular room, i.e. the room unfolded into a tiling
//!   of the plane.
//! * Winding paths on a torus and the chord-length series they produce.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::embedding::TimeSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcousticsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("winding numbers ({p}, {q}) share a factor {gcd}; the closed path is not simple")]
    NotSimpleLoop { p: i64, q: i64, gcd: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Fixed end, reflection −1.
    Dirichlet,
    /// Free end, reflection +1.
    Neumann,
}

impl BoundaryCondition {
    pub fn reflection(self) -> f64 {
        match self {
            Self::Dirichlet => -1.0,
            Self::Neumann => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Dirichlet => "dirichlet",
            Self::Neumann => "neumann",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "neumann" => Ok(Self::Neumann),
            other => Err(format!("unknown boundary condition '{other}'")),
        }
    }
}

/// Right- and left-travelling rails of `L` cells each.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveguideState {
    pub right_rail: Vec<f64>,
    pub left_rail: Vec<f64>,
}

impl WaveguideState {
    /// Unit impulse entering the right-going rail at the left end.
    pub fn impulse(len: usize) -> Self {
        let mut right_rail = vec![0.0; len];
        right_rail[0] = 1.0;
        Self { right_rail, left_rail: vec![0.0; len] }
    }

    /// One time step: rails shift in opposite directions, and cells leaving an
    /// end cross to the other rail scaled by that end's reflection.
    pub fn step(&mut self, left: BoundaryCondition, right: BoundaryCondition) {
        let l = self.right_rail.len();
        let out_right = self.right_rail[l - 1];
        let out_left = self.left_rail[0];
        self.right_rail.rotate_right(1);
        self.left_rail.rotate_left(1);
        self.right_rail[0] = left.reflection() * out_left;
        self.left_rail[l - 1] = right.reflection() * out_right;
    }

    pub fn energy(&self) -> f64 {
        self.right_rail.iter().chain(&self.left_rail).map(|v| v * v).sum()
    }
}

/// Smallest `t > 0` at which the impulse state recurs exactly.
pub fn waveguide_recurrence_period(
    len: usize,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<usize, AcousticsError> {
    if len < 2 {
        return Err(AcousticsError::InvalidParameter(format!("waveguide needs at least 2 cells, got {len}")));
    }
    let start = WaveguideState::impulse(len);
    let mut state = start.clone();
    // An impulse visits 2L positions with two possible signs.
    for t in 1..=4 * len {
        state.step(left, right);
        if state == start {
            return Ok(t);
        }
    }
    unreachable!("a signed impulse on 2L positions recurs within 4L steps")
}

/// Rectangle `[0, width] x [0, height]` with a point source and a listener inside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Room2D {
    pub width: f64,
    pub height: f64,
    pub source: (f64, f64),
    pub listener: (f64, f64),
}

impl Room2D {
    pub fn new(width: f64, height: f64, source: (f64, f64), listener: (f64, f64)) -> Result<Self, AcousticsError> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(AcousticsError::InvalidParameter(format!("room size {width} x {height}")));
        }
        let inside = |(x, y): (f64, f64)| x > 0.0 && x < width && y > 0.0 && y < height;
        if !inside(source) {
            return Err(AcousticsError::InvalidParameter(format!("source {source:?} is not strictly inside the room")));
        }
        if !inside(listener) {
            return Err(AcousticsError::InvalidParameter(format!("listener {listener:?} is not strictly inside the room")));
        }
        Ok(Self { width, height, source, listener })
    }

    /// Source and listener swapped.
    pub fn reciprocal(&self) -> Self {
        Self { source: self.listener, listener: self.source, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImageSource {
    pub position: (f64, f64),
    /// Number of wall reflections on the unfolded path.
    pub order: usize,
    pub distance: f64,
}

/// Mirror image of coordinate `s` in tile `u` of a side of length `len`.
fn tile_coordinate(u: i64, s: f64, len: f64) -> f64 {
    let base = u as f64 * len;
    if u.rem_euclid(2) == 0 { base + s } else { base + len - s }
}

/// All image sources with at most `max_order` reflections, sorted by distance
/// to the listener and then by position.
pub fn image_sources(room: &Room2D, max_order: usize) -> Vec<ImageSource> {
    let k = max_order as i64;
    let (lx, ly) = room.listener;
    let mut out = Vec::new();
    for u in -k..=k {
        let rest = k - u.abs();
        for v in -rest..=rest {
            let x = tile_coordinate(u, room.source.0, room.width);
            let y = tile_coordinate(v, room.source.1, room.height);
            out.push(ImageSource {
                position: (x, y),
                order: (u.abs() + v.abs()) as usize,
                distance: (x - lx).hypot(y - ly),
            });
        }
    }
    out.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(position_order(&a.position, &b.position)));
    out
}

/// Closed path winding `p` times around the major circle and `q` times
/// around the minor circle, sampled at `n` points.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPath {
    pub p: i64,
    pub q: i64,
    pub major_radius: f64,
    pub minor_radius: f64,
    pub points: Vec<[f64; 3]>,
    /// True when `gcd(p, q) = 1`, i.e. the closed path does not retrace itself.
    pub simple: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Point of the standard torus embedding at angles given in turns.
pub fn torus_point(major: f64, minor: f64, theta_turns: f64, phi_turns: f64) -> [f64; 3] {
    let (st, ct) = (TAU * theta_turns).sin_cos();
    let (sp, cp) = (TAU * phi_turns).sin_cos();
    let ring = major + minor * cp;
    [ring * ct, ring * st, minor * sp]
}

/// Samples the `(p, q)` winding path. With `require_simple`, winding numbers
/// sharing a factor are rejected; otherwise they give a closed path that
/// runs over itself `gcd(p, q)` times.
pub fn torus_winding_path(
    p: i64,
    q: i64,
    n: usize,
    major_radius: f64,
    minor_radius: f64,
    require_simple: bool,
) -> Result<TorusPath, AcousticsError> {
    if n < 3 {
        return Err(AcousticsError::InvalidParameter(format!("need at least 3 samples, got {n}")));
    }
    if !(major_radius > minor_radius && minor_radius > 0.0 && major_radius.is_finite()) {
        return Err(AcousticsError::InvalidParameter(format!(
            "radii must satisfy R > r > 0, got R={major_radius}, r={minor_radius}"
        )));
    }
    if p == 0 && q == 0 {
        return Err(AcousticsError::InvalidParameter("(p, q) = (0, 0) does not wind".into()));
    }
    let g = gcd(p, q);
    if require_simple && g != 1 {
        return Err(AcousticsError::NotSimpleLoop { p, q, gcd: g });
    }
    let n_i = n as i64;
    // Angles reduced exactly in integers, so sample k and k + n coincide.
    let turns = |w: i64, k: i64| (w * k).rem_euclid(n_i) as f64 / n as f64;
    let points = (0..n_i)
        .map(|k| torus_point(major_radius, minor_radius, turns(p, k), turns(q, k)))
        .collect();
    Ok(TorusPath { p, q, major_radius, minor_radius, points, simple: g == 1 })
}

impl TorusPath {
    /// Sample `k`, with indices taken mod `n`.
    pub fn point(&self, k: usize) -> [f64; 3] {
        self.points[k % self.points.len()]
    }

    /// Position after `k` steps computed straight from the angles, without
    /// reducing `k` first.
    pub fn point_unreduced(&self, k: usize) -> [f64; 3] {
        let n = self.points.len() as f64;
        torus_point(
            self.major_radius,
            self.minor_radius,
            self.p as f64 * k as f64 / n,
            self.q as f64 * k as f64 / n,
        )
    }
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Chord length from each sample to the next, wrapping the last back to the first.
pub fn path_distance_series(tp: &TorusPath) -> TimeSeries {
    let n = tp.points.len();
    let d = (0..n).map(|k| dist3(tp.points[k], tp.points[(k + 1) % n])).collect();
    TimeSeries::new(d).expect("chord lengths are finite")
}

/// Zero-mean, unit-peak version of a series. Variation below `1e-12`
/// relative to the series scale is treated as none and yields zeros.
pub fn normalize_series(ts: &TimeSeries) -> TimeSeries {
    let s = ts.samples();
    if s.is_empty() {
        return ts.clone();
    }
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let peak = s.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let scale = s.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let out = if peak <= 1e-12 * scale {
        vec![0.0; s.len()]
    } else {
        s.iter().map(|v| (v - mean) / peak).collect()
    };
    TimeSeries::with_rate(out, ts.sample_rate()).expect("finite")
}

/// Lexicographic order for image positions.
pub fn position_order(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}
