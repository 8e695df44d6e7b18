//! Betti numbers over GF(2) from ranks of adjacent boundary matrices.

use std::fmt;
use std::str::FromStr;

use crate::binlinalg::{gf2_nullity, gf2_rank};
use crate::complex::{
    boundary_matrix_gf2, boundary_matrix_oriented, close_complex, Coefficients, Simplex,
    SimplicialComplex, VertexId,
};

/// `b[n]` for `n = 0..=max_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn get(&self, n: usize) -> usize {
        self.0.get(n).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Alternating sum of Betti numbers.
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Free part of a homology group, `Z^free_rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomologyGroupDescription {
    pub dimension: usize,
    pub free_rank: usize,
}

impl fmt::Display for HomologyGroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.free_rank == 0 {
            write!(f, "H_{} = 0", self.dimension)
        } else {
            write!(f, "H_{} = Z^{}", self.dimension, self.free_rank)
        }
    }
}

/// `b_n = nullity(∂_n) − rank(∂_{n+1})`; zero above the top dimension.
pub fn betti(c: &SimplicialComplex, n: usize) -> usize {
    if c.count(n) == 0 {
        return 0;
    }
    gf2_nullity(&boundary_matrix_gf2(c, n)) - gf2_rank(&boundary_matrix_gf2(c, n + 1))
}

/// All Betti numbers up to the top dimension, computing each rank once.
pub fn betti_all(c: &SimplicialComplex) -> BettiVector {
    let Some(top) = c.max_dim() else {
        return BettiVector(Vec::new());
    };
    // ranks[n] = rank ∂_n for n = 0..=top+1; ∂_0 and ∂_{top+1} have rank 0
    let mut ranks = vec![0usize; top + 2];
    for (n, r) in ranks.iter_mut().enumerate().take(top + 1).skip(1) {
        *r = gf2_rank(&boundary_matrix_gf2(c, n));
    }
    BettiVector((0..=top).map(|n| c.count(n) - ranks[n] - ranks[n + 1]).collect())
}

pub fn homology_group(c: &SimplicialComplex, n: usize) -> HomologyGroupDescription {
    HomologyGroupDescription { dimension: n, free_rank: betti(c, n) }
}

/// Whether `∂_n ∂_{n+1}` vanishes in the given coefficients. For `n = 0`
/// this holds trivially since `∂_0` has no rows.
pub fn check_fundamental_lemma(c: &SimplicialComplex, n: usize, mode: Coefficients) -> bool {
    match mode {
        Coefficients::Gf2 => boundary_matrix_gf2(c, n).mul(&boundary_matrix_gf2(c, n + 1)).is_zero(),
        Coefficients::Oriented => boundary_matrix_oriented(c, n)
            .mul(&boundary_matrix_oriented(c, n + 1))
            .is_zero(),
    }
}

/// Reference complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemoComplex {
    /// Three edges, no filling.
    Triangle,
    TriangleFilled,
    /// The solid 3-simplex (a ball).
    Tetra,
    /// Boundary of the 3-simplex.
    TetraHollow,
    /// Seven-vertex triangulation of the torus.
    Torus,
    /// Same triangulation as [`DemoComplex::TetraHollow`].
    Sphere,
}

impl DemoComplex {
    pub const ALL: [DemoComplex; 6] = [
        Self::Triangle,
        Self::TriangleFilled,
        Self::Tetra,
        Self::TetraHollow,
        Self::Torus,
        Self::Sphere,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Triangle => "triangle",
            Self::TriangleFilled => "triangle-filled",
            Self::Tetra => "tetra",
            Self::TetraHollow => "tetra-hollow",
            Self::Torus => "torus",
            Self::Sphere => "sphere",
        }
    }

    pub fn build(self) -> SimplicialComplex {
        let sx = |v: &[VertexId]| Simplex::new(v.iter().copied()).expect("distinct ids");
        match self {
            Self::Triangle => close_complex([sx(&[0, 1]), sx(&[1, 2]), sx(&[0, 2])]),
            Self::TriangleFilled => close_complex([sx(&[0, 1, 2])]),
            Self::Tetra => close_complex([sx(&[0, 1, 2, 3])]),
            Self::TetraHollow | Self::Sphere => close_complex(
                [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].iter().map(|t| sx(t)),
            ),
            Self::Torus => torus7(),
        }
    }
}

impl FromStr for DemoComplex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown complex demo '{s}'"))
    }
}

/// Möbius–Kantor style 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
fn torus7() -> SimplicialComplex {
    let mut gens = Vec::with_capacity(14);
    for i in 0..7u32 {
        for (a, b) in [(1, 3), (2, 3)] {
            gens.push(Simplex::new([i, (i + a) % 7, (i + b) % 7]).expect("distinct mod 7"));
        }
    }
    close_complex(gens)
}
