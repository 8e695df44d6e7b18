//! Vietoris–Rips filtrations and persistence barcodes.
//!
//! The scale of a simplex is the largest pairwise Euclidean distance among
//! its vertices, so two points are joined once `scale >= distance`. Ties are
//! ordered by dimension and then lexicographically, which makes the pairing
//! independent of the order the points were given in.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::formats::{data_lines, fmt_f64, parse_f64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PersistenceError {
    #[error("point cloud is empty")]
    EmptyInput,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Points of a common dimension, Euclidean metric.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, PersistenceError> {
        let dim = points.first().map(Vec::len).ok_or(PersistenceError::EmptyInput)?;
        if dim == 0 {
            return Err(PersistenceError::InvalidParameter("points need at least one coordinate".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(PersistenceError::DimensionMismatch { index: i, expected: dim, got: p.len() });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(PersistenceError::NonFinite(i));
            }
            coords.extend(p);
        }
        Ok(Self { dim, coords })
    }

    /// From a flat row-major buffer of `len * dim` coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self, PersistenceError> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(PersistenceError::InvalidParameter(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.is_empty() {
            return Err(PersistenceError::EmptyInput);
        }
        if let Some(i) = coords.iter().position(|v| !v.is_finite()) {
            return Err(PersistenceError::NonFinite(i / dim));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Dense symmetric distance matrix, rows computed in parallel.
    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .into_par_iter()
            .map(|i| (0..self.len()).map(|j| self.distance(i, j)).collect())
            .collect()
    }
}

/// Parses comma-separated coordinates, one point per line. A first line that
/// does not parse as numbers is treated as a header.
pub fn parse_point_cloud_csv(text: &str) -> Result<PointCloud, PersistenceError> {
    let mut points = Vec::new();
    for (k, (line, content)) in data_lines(text).enumerate() {
        let fields: Option<Vec<f64>> = content.split(',').map(parse_f64).collect();
        match fields {
            Some(p) => {
                if let Some(first) = points.first().map(Vec::len) {
                    if first != p.len() {
                        return Err(PersistenceError::Parse {
                            line,
                            message: format!("expected {first} coordinates, found {}", p.len()),
                        });
                    }
                }
                if p.iter().any(|v| !v.is_finite()) {
                    return Err(PersistenceError::Parse { line, message: "non-finite coordinate".into() });
                }
                points.push(p);
            }
            None if k == 0 => continue,
            None => {
                return Err(PersistenceError::Parse { line, message: format!("cannot parse '{content}'") })
            }
        }
    }
    PointCloud::new(points)
}

pub fn point_cloud_to_csv(pc: &PointCloud) -> String {
    let mut out = String::new();
    for p in pc.points() {
        let row: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationEntry {
    pub simplex: Simplex,
    pub value: f64,
}

fn canonical_order(a: &FiltrationEntry, b: &FiltrationEntry) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.simplex.dim().cmp(&b.simplex.dim()))
        .then_with(|| a.simplex.cmp(&b.simplex))
}

/// Simplices in insertion order with their scale values.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    entries: Vec<FiltrationEntry>,
    max_dim: usize,
    max_scale: f64,
}

impl Filtration {
    /// Takes entries already in insertion order and checks that values never
    /// decrease and that every face precedes its cofaces.
    pub fn new(entries: Vec<FiltrationEntry>, max_dim: usize, max_scale: f64) -> Result<Self, PersistenceError> {
        let f = Self { entries, max_dim, max_scale };
        f.index()?;
        Ok(f)
    }

    /// Sorts entries into the canonical (value, dimension, lexicographic) order first.
    pub fn from_unsorted(mut entries: Vec<FiltrationEntry>, max_dim: usize, max_scale: f64) -> Result<Self, PersistenceError> {
        entries.sort_by(canonical_order);
        Self::new(entries, max_dim, max_scale)
    }

    pub fn entries(&self) -> &[FiltrationEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn max_scale(&self) -> f64 {
        self.max_scale
    }

    /// Entry ordinal per simplex, validating the order along the way.
    fn index(&self) -> Result<HashMap<&Simplex, usize>, PersistenceError> {
        let mut idx: HashMap<&Simplex, usize> = HashMap::with_capacity(self.entries.len());
        let mut prev = f64::NEG_INFINITY;
        for (j, e) in self.entries.iter().enumerate() {
            if e.value.is_nan() || e.value < prev {
                return Err(PersistenceError::InvalidFiltration(format!(
                    "value at entry {j} is below its predecessor"
                )));
            }
            prev = e.value;
            for f in e.simplex.faces() {
                match idx.get(&f) {
                    Some(&k) if self.entries[k].value <= e.value => {}
                    _ => {
                        return Err(PersistenceError::InvalidFiltration(format!(
                            "face {f:?} of entry {j} does not appear earlier"
                        )))
                    }
                }
            }
            if idx.insert(&e.simplex, j).is_some() {
                return Err(PersistenceError::InvalidFiltration(format!("entry {j} repeats {:?}", e.simplex)));
            }
        }
        Ok(idx)
    }

    /// Subcomplex of all simplices with value `<= t`.
    pub fn sublevel(&self, t: f64) -> SimplicialComplex {
        SimplicialComplex::from_closed(
            self.entries.iter().filter(|e| e.value <= t).map(|e| e.simplex.clone()),
        )
    }

    /// Distinct values in increasing order.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.value).collect();
        v.dedup();
        v
    }
}

/// Vietoris–Rips filtration up to `max_dim`-simplices and scale `max_scale`.
pub fn vietoris_rips(pc: &PointCloud, max_dim: usize, max_scale: f64) -> Result<Filtration, PersistenceError> {
    if pc.is_empty() {
        return Err(PersistenceError::EmptyInput);
    }
    if !(max_scale > 0.0) {
        return Err(PersistenceError::InvalidParameter(format!("max_scale must be positive, got {max_scale}")));
    }
    let n = pc.len();
    let dist = pc.distance_matrix();
    // neighbors[i] = higher-indexed vertices within max_scale of i
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| dist[i][j] <= max_scale).collect())
        .collect();

    let mut entries = Vec::new();
    let mut stack: Vec<(Vec<usize>, f64, Vec<usize>)> = (0..n)
        .rev()
        .map(|i| (vec![i], 0.0, neighbors[i].clone()))
        .collect();
    while let Some((clique, value, candidates)) = stack.pop() {
        if clique.len() <= max_dim {
            for (k, &v) in candidates.iter().enumerate().rev() {
                let grown = clique.iter().fold(value, |m, &u| m.max(dist[u][v]));
                let next: Vec<usize> = candidates[k + 1..]
                    .iter()
                    .copied()
                    .filter(|&w| dist[v][w] <= max_scale)
                    .collect();
                let mut c = clique.clone();
                c.push(v);
                stack.push((c, grown, next));
            }
        }
        entries.push(FiltrationEntry {
            simplex: Simplex::from_sorted(clique.into_iter().map(|v| v as VertexId).collect()),
            value,
        });
    }
    entries.par_sort_unstable_by(canonical_order);
    Ok(Filtration { entries, max_dim, max_scale })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for a class that never dies.
    pub death: f64,
}

impl Bar {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn alive_at(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }
}

fn bar_order(a: &Bar, b: &Bar) -> Ordering {
    a.dim
        .cmp(&b.dim)
        .then(a.birth.total_cmp(&b.birth))
        .then(a.death.total_cmp(&b.death))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Barcode {
    bars: Vec<Bar>,
    pub max_dim: usize,
    pub max_scale: f64,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>, max_dim: usize, max_scale: f64) -> Self {
        bars.sort_by(bar_order);
        Self { bars, max_dim, max_scale }
    }

    /// All bars sorted by (dim, birth, death).
    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn in_dim(&self, n: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == n)
    }

    pub fn count(&self, n: usize) -> usize {
        self.in_dim(n).count()
    }

    /// Persistence values of dimension `n`, longest first.
    pub fn lengths(&self, n: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.in_dim(n).map(Bar::persistence).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Size of the leading group of dimension-`n` bars separated from the
    /// rest by a persistence gap of at least `ratio`: the smallest `k` such
    /// that the `k`-th longest bar is `ratio` times longer than the next one
    /// (a missing next bar counts as length zero).
    pub fn dominant_count(&self, n: usize, ratio: f64) -> usize {
        let lengths = self.lengths(n);
        (1..=lengths.len())
            .find(|&k| lengths[k - 1] >= ratio * lengths.get(k).copied().unwrap_or(0.0))
            .unwrap_or(0)
    }
}

/// Bars of dimension `n` alive at scale `t` (`birth <= t < death`).
pub fn alive_at(b: &Barcode, n: usize, t: f64) -> usize {
    b.in_dim(n).filter(|bar| bar.alive_at(t)).count()
}

/// Symmetric difference of two sorted index lists.
fn xor_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Persistence pairs by left-to-right column reduction over GF(2).
///
/// Dimensions are reduced from the top down; a column whose index already
/// appeared as a pivot is known to reduce to zero and is skipped. Bars are
/// reported for dimensions below `max_dim` (only dimension 0 when
/// `max_dim == 0`), since top-dimensional cycles never get filled.
pub fn persistence_pairs(f: &Filtration) -> Result<Barcode, PersistenceError> {
    let idx = f.index()?;
    let entries = f.entries();
    let m = entries.len();
    let top = entries.iter().map(|e| e.simplex.dim()).max().unwrap_or(0);

    let mut columns: Vec<Vec<u32>> = entries
        .iter()
        .map(|e| {
            let mut c: Vec<u32> = e.simplex.faces().map(|s| idx[&s] as u32).collect();
            c.sort_unstable();
            c
        })
        .collect();

    let mut pivot_col: Vec<Option<u32>> = vec![None; m];
    let mut cleared = vec![false; m];
    let mut scratch = Vec::new();
    for d in (1..=top).rev() {
        for j in 0..m {
            if entries[j].simplex.dim() != d {
                continue;
            }
            if cleared[j] {
                columns[j].clear();
                continue;
            }
            let mut col = std::mem::take(&mut columns[j]);
            while let Some(&low) = col.last() {
                match pivot_col[low as usize] {
                    Some(k) => {
                        xor_sorted(&col, &columns[k as usize], &mut scratch);
                        std::mem::swap(&mut col, &mut scratch);
                    }
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivot_col[low as usize] = Some(j as u32);
                cleared[low as usize] = true;
            }
            columns[j] = col;
        }
    }

    let report_below = f.max_dim().max(1);
    let mut bars = Vec::new();
    for j in 0..m {
        let dim = entries[j].simplex.dim();
        if dim >= report_below {
            continue;
        }
        let birth = entries[j].value;
        if let Some(k) = pivot_col[j] {
            let death = entries[k as usize].value;
            if death > birth {
                bars.push(Bar { dim, birth, death });
            }
        } else if columns[j].is_empty() {
            bars.push(Bar { dim, birth, death: f64::INFINITY });
        }
    }
    Ok(Barcode::new(bars, f.max_dim(), f.max_scale()))
}

/// Renders the `.bars` CSV: header `dim,birth,death`, rows sorted.
pub fn barcode_to_csv(b: &Barcode) -> String {
    let mut out = String::from("dim,birth,death\n");
    for bar in b.bars() {
        let _ = writeln!(out, "{},{},{}", bar.dim, fmt_f64(bar.birth), fmt_f64(bar.death));
    }
    out
}

pub fn parse_bars_csv(text: &str) -> Result<Vec<Bar>, PersistenceError> {
    let mut bars = Vec::new();
    for (line, content) in data_lines(text) {
        if content == "dim,birth,death" {
            continue;
        }
        let err = || PersistenceError::Parse { line, message: format!("cannot parse bar '{content}'") };
        let f: Vec<&str> = content.split(',').collect();
        if f.len() != 3 {
            return Err(err());
        }
        let dim = f[0].trim().parse::<usize>().map_err(|_| err())?;
        let birth = parse_f64(f[1]).filter(|v| v.is_finite()).ok_or_else(err)?;
        let death = parse_f64(f[2]).ok_or_else(err)?;
        if death < birth {
            return Err(err());
        }
        bars.push(Bar { dim, birth, death });
    }
    Ok(bars)
}

fn check_demo_params(n_points: usize, min: usize, radius: f64, noise: f64) -> Result<(), PersistenceError> {
    if n_points < min {
        return Err(PersistenceError::InvalidParameter(format!("need at least {min} points, got {n_points}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(PersistenceError::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(PersistenceError::InvalidParameter(format!("noise must be non-negative, got {noise}")));
    }
    Ok(())
}

fn noisy_ring(rng: &mut ChaCha8Rng, n: usize, center: (f64, f64), radius: f64, noise: f64, out: &mut Vec<Vec<f64>>) {
    for k in 0..n {
        let (dr, dt) = if noise > 0.0 {
            (rng.gen_range(-noise..=noise), rng.gen_range(-noise..=noise))
        } else {
            (0.0, 0.0)
        };
        let theta = std::f64::consts::TAU * k as f64 / n as f64 + dt / radius;
        let r = radius + dr;
        out.push(vec![center.0 + r * theta.cos(), center.1 + r * theta.sin()]);
    }
}

/// Evenly spaced points on a circle with uniform radial and tangential
/// jitter of at most `noise` (length units), from a seeded ChaCha8 stream.
pub fn noisy_circle(n_points: usize, radius: f64, noise: f64, seed: u64) -> Result<PointCloud, PersistenceError> {
    check_demo_params(n_points, 8, radius, noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n_points);
    noisy_ring(&mut rng, n_points, (0.0, 0.0), radius, noise, &mut pts);
    PointCloud::new(pts)
}

/// Two noisy circles of equal radius touching at the origin.
pub fn figure_eight(points_per_loop: usize, radius: f64, noise: f64, seed: u64) -> Result<PointCloud, PersistenceError> {
    check_demo_params(points_per_loop, 8, radius, noise)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(2 * points_per_loop);
    noisy_ring(&mut rng, points_per_loop, (-radius, 0.0), radius, noise, &mut pts);
    noisy_ring(&mut rng, points_per_loop, (radius, 0.0), radius, noise, &mut pts);
    PointCloud::new(pts)
}
