//! Abstract simplicial complexes.
//!
//! A [`Simplex`] is a sorted set of vertex ids. A [`SimplicialComplex`] is a
//! face-closed set of simplices, bucketed by dimension, where each bucket is
//! ordered lexicographically so that boundary matrices are independent of the
//! order in which simplices were supplied.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::binlinalg::{BitMatrix, IntMatrix};

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(VertexId),
    #[error("a 0-simplex has no faces")]
    NoFaces,
    #[error("face position {index} out of range for a {dim}-simplex")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("complex contains a {0}-simplex, a graph allows dimension at most 1")]
    NotAGraph(usize),
    #[error("edge ({0}, {1}) references a vertex outside the graph")]
    UnknownVertex(VertexId, VertexId),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("complex is empty")]
    Empty,
}

/// An oriented-by-sorting simplex: strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new<I: IntoIterator<Item = VertexId>>(ids: I) -> Result<Self, ComplexError> {
        let mut v: Vec<VertexId> = ids.into_iter().collect();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(w[0]));
        }
        Ok(Self(v))
    }

    /// Builds from ids already known to be strictly increasing.
    pub(crate) fn from_sorted(v: Vec<VertexId>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Self(v)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face opposite the `i`-th vertex.
    pub fn face(&self, i: usize) -> Result<Simplex, ComplexError> {
        if self.dim() == 0 {
            return Err(ComplexError::NoFaces);
        }
        if i > self.dim() {
            return Err(ComplexError::IndexOutOfRange { index: i, dim: self.dim() });
        }
        let mut v = self.0.clone();
        v.remove(i);
        Ok(Self(v))
    }

    /// All codimension-1 faces, in deletion order (face `i` drops vertex `i`).
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.dim() == 0 { 0 } else { self.0.len() };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Self(v)
        })
    }

    /// Every nonempty subset of the vertex set, including the simplex itself.
    pub fn closure(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = self.0.len();
        assert!(k < 32, "simplex with {k} vertices is too large to close");
        (1u32..(1u32 << k)).map(move |mask| {
            Self(
                (0..k)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| self.0[b])
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Canonicalizing constructor for a simplex from arbitrary ids.
pub fn make_simplex(ids: &[VertexId]) -> Result<Simplex, ComplexError> {
    Simplex::new(ids.iter().copied())
}

/// A finite face-closed set of simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    ordinals: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    fn from_sets(sets: Vec<BTreeSet<Simplex>>) -> Self {
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let ordinals = by_dim
            .iter()
            .map(|d| d.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        Self { by_dim, ordinals }
    }

    /// Builds a complex from a set that the caller guarantees is already face-closed.
    pub(crate) fn from_closed<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in simplices {
            let d = s.dim();
            if sets.len() <= d {
                sets.resize_with(d + 1, BTreeSet::new);
            }
            sets[d].insert(s);
        }
        let c = Self::from_sets(sets);
        debug_assert!(c.is_closed());
        c
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Simplices of one dimension, in ordinal order.
    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn ordinal(&self, s: &Simplex) -> Option<usize> {
        self.ordinals.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.ordinal(s).is_some()
    }

    fn is_closed(&self) -> bool {
        self.iter().all(|s| s.faces().all(|f| self.contains(&f)))
    }

    /// Euler characteristic from simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    /// Applies a vertex relabeling; the result is re-closed and re-ordered.
    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Result<Self, ComplexError> {
        let simplices = self
            .iter()
            .map(|s| Simplex::new(s.vertices().iter().map(|&v| map(v))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(close_complex(simplices))
    }

    /// Subcomplex of simplices accepted by `keep`. `keep` must be face-monotone.
    pub fn filter(&self, mut keep: impl FnMut(&Simplex) -> bool) -> Self {
        Self::from_closed(self.iter().filter(|s| keep(s)).cloned())
    }
}

/// The smallest simplicial complex containing every generator.
pub fn close_complex<I: IntoIterator<Item = Simplex>>(generators: I) -> SimplicialComplex {
    let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
    for g in generators {
        if sets.len() <= g.dim() {
            sets.resize_with(g.dim() + 1, BTreeSet::new);
        }
        if sets[g.dim()].contains(&g) {
            continue;
        }
        for s in g.closure() {
            sets[s.dim()].insert(s);
        }
    }
    SimplicialComplex::from_sets(sets)
}

/// A complex of dimension at most one, with an explicit edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGraph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl VertexGraph {
    /// The 1-skeleton view of a complex. Vertices and edges keep the complex's ordinals.
    pub fn from_complex(c: &SimplicialComplex) -> Result<Self, ComplexError> {
        if let Some(d) = c.max_dim().filter(|&d| d > 1) {
            return Err(ComplexError::NotAGraph(d));
        }
        Ok(Self {
            vertices: c.simplices(0).iter().map(|s| s.vertices()[0]).collect(),
            edges: c.simplices(1).iter().map(|s| (s.vertices()[0], s.vertices()[1])).collect(),
        })
    }

    /// A graph on vertices `0..vertex_count` with edges labeled in the given
    /// order. Each pair is read as a directed edge `base -> tip`; only
    /// [`oriented_incidence_matrix`](Self::oriented_incidence_matrix) looks at
    /// the direction.
    pub fn from_edges(vertex_count: u32, edges: &[(VertexId, VertexId)]) -> Result<Self, ComplexError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(ComplexError::UnknownVertex(a, b));
            }
            let s = Simplex::new([a, b])?;
            if seen.insert(s) {
                out.push((a, b));
            }
        }
        Ok(Self { vertices: (0..vertex_count).collect(), edges: out })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    fn vertex_index(&self) -> HashMap<VertexId, usize> {
        self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// `|V| x |V|` symmetric 0/1 matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> BitMatrix {
        let idx = self.vertex_index();
        let mut m = BitMatrix::zeros(self.vertices.len(), self.vertices.len());
        for &(a, b) in &self.edges {
            m.set(idx[&a], idx[&b], true);
            m.set(idx[&b], idx[&a], true);
        }
        m
    }

    /// `|V| x |E|`; rows are vertices, columns are edges.
    pub fn incidence_matrix(&self) -> BitMatrix {
        let idx = self.vertex_index();
        let mut m = BitMatrix::zeros(self.vertices.len(), self.edges.len());
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            m.set(idx[&a], e, true);
            m.set(idx[&b], e, true);
        }
        m
    }

    /// Incidence with integer signs: `+1` at the base of each edge arrow, `−1` at its tip.
    pub fn oriented_incidence_matrix(&self) -> IntMatrix {
        let idx = self.vertex_index();
        let mut m = IntMatrix::zeros(self.vertices.len(), self.edges.len());
        for (e, &(base, tip)) in self.edges.iter().enumerate() {
            m.set(idx[&base], e, 1);
            m.set(idx[&tip], e, -1);
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Gf2,
    Oriented,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryMatrix {
    Gf2(BitMatrix),
    Oriented(IntMatrix),
}

impl BoundaryMatrix {
    pub fn rows(&self) -> usize {
        match self {
            Self::Gf2(m) => m.rows(),
            Self::Oriented(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Self::Gf2(m) => m.cols(),
            Self::Oriented(m) => m.cols(),
        }
    }
}

/// ∂ₙ over GF(2): rows are (n−1)-simplices, columns n-simplices.
/// ∂₀ has zero rows.
pub fn boundary_matrix_gf2(c: &SimplicialComplex, n: usize) -> BitMatrix {
    let cols = c.simplices(n);
    if n == 0 {
        return BitMatrix::zeros(0, cols.len());
    }
    let mut m = BitMatrix::zeros(c.count(n - 1), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for f in s.faces() {
            let row = c.ordinal(&f).expect("complex is face-closed");
            m.set(row, j, true);
        }
    }
    m
}

/// ∂ₙ with integer coefficients: deleting vertex `i` contributes `(−1)^i`.
///
/// For an edge `{a, b}` with `a < b` this puts `+1` on `b` and `−1` on `a`,
/// i.e. the arrow runs from `b` to `a`: base `+1`, tip `−1`.
pub fn boundary_matrix_oriented(c: &SimplicialComplex, n: usize) -> IntMatrix {
    let cols = c.simplices(n);
    if n == 0 {
        return IntMatrix::zeros(0, cols.len());
    }
    let mut m = IntMatrix::zeros(c.count(n - 1), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for (i, f) in s.faces().enumerate() {
            let row = c.ordinal(&f).expect("complex is face-closed");
            m.set(row, j, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

pub fn boundary_matrix(c: &SimplicialComplex, n: usize, mode: Coefficients) -> BoundaryMatrix {
    match mode {
        Coefficients::Gf2 => BoundaryMatrix::Gf2(boundary_matrix_gf2(c, n)),
        Coefficients::Oriented => BoundaryMatrix::Oriented(boundary_matrix_oriented(c, n)),
    }
}

/// Parses the `.cplx` text format: one simplex per line, vertex labels
/// separated by spaces, `#` starts a comment line. Labels are mapped to
/// ids in order of first appearance. The result is face-closed.
pub fn parse_cplx(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut labels: HashMap<&str, VertexId> = HashMap::new();
    let mut generators = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut ids = Vec::new();
        for tok in line.split_whitespace() {
            let next = labels.len() as VertexId;
            ids.push(*labels.entry(tok).or_insert(next));
        }
        let s = Simplex::new(ids).map_err(|e| ComplexError::Parse {
            line: lineno + 1,
            message: match e {
                ComplexError::DuplicateVertex(_) => "vertex repeated within a simplex".to_string(),
                other => other.to_string(),
            },
        })?;
        generators.push(s);
    }
    if generators.is_empty() {
        return Err(ComplexError::Empty);
    }
    Ok(close_complex(generators))
}
