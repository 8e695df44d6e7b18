//! Reference implementations used as oracles by the integration tests.
//! They favour directness over speed and share no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use topodsp::complex::{close_complex, make_simplex, SimplicialComplex, VertexId};

/// Random face-closed complex on at most `max_vertices` vertices with
/// generators of dimension at most `max_dim`.
pub fn random_complex(rng: &mut ChaCha8Rng, max_vertices: u32, max_dim: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices);
    let generators = rng.gen_range(1..=12);
    let mut gens = Vec::new();
    for _ in 0..generators {
        let size = rng.gen_range(1..=(max_dim + 1).min(n as usize));
        let mut vs = BTreeSet::new();
        while vs.len() < size {
            vs.insert(rng.gen_range(0..n));
        }
        gens.push(make_simplex(&vs.into_iter().collect::<Vec<_>>()).unwrap());
    }
    close_complex(gens)
}

/// Rank over GF(2) by plain Gaussian elimination on rows of bools.
pub fn dense_gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers of an explicit list of simplices (sorted vertex lists,
/// closed under faces), computed from dense boundary matrices.
pub fn oracle_betti(simplices: &[Vec<u32>], n: usize) -> usize {
    let by_dim = |d: usize| -> Vec<&Vec<u32>> { simplices.iter().filter(|s| s.len() == d + 1).collect() };
    let rank_of = |d: usize| -> usize {
        if d == 0 {
            return 0;
        }
        let cols = by_dim(d);
        let rows = by_dim(d - 1);
        if cols.is_empty() || rows.is_empty() {
            return 0;
        }
        let m: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| cols.iter().map(|c| r.iter().all(|v| c.contains(v))).collect())
            .collect();
        dense_gf2_rank(m)
    };
    by_dim(n).len() - rank_of(n) - rank_of(n + 1)
}

/// All cliques of at most `max_dim + 1` points whose pairwise distances are
/// at most `t`.
pub fn rips_complex_at(points: &[Vec<f64>], max_dim: usize, t: f64) -> Vec<Vec<u32>> {
    let d = |i: usize, j: usize| -> f64 {
        points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };
    let n = points.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if vs.len() > max_dim + 1 {
            continue;
        }
        let ok = vs.iter().enumerate().all(|(a, &i)| vs[a + 1..].iter().all(|&j| d(i, j) <= t));
        if ok {
            out.push(vs.into_iter().map(|v| v as u32).collect());
        }
    }
    out
}

/// Connected components by union-find over the 1-skeleton.
pub fn union_find_components(c: &SimplicialComplex) -> usize {
    let verts: Vec<VertexId> = c.simplices(0).iter().map(|s| s.vertices()[0]).collect();
    let index: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in c.simplices(1) {
        let a = find(&mut parent, index[&e.vertices()[0]]);
        let b = find(&mut parent, index[&e.vertices()[1]]);
        parent[a] = b;
    }
    (0..verts.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Direct-form-I difference equation
/// `y[n] = sum b_i x[n-i] - sum a_j y[n-j]`.
pub fn difference_equation(a: &[f64], b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = Vec::with_capacity(x.len());
    for n in 0..x.len() {
        let mut acc = 0.0;
        for (i, bi) in b.iter().enumerate() {
            if n >= i {
                acc += bi * x[n - i];
            }
        }
        for (j, aj) in a.iter().enumerate() {
            if n > j {
                acc -= aj * y[n - 1 - j];
            }
        }
        y.push(acc);
    }
    y
}

/// Feedback coefficients `a_1..a_N` of a filter whose poles all have
/// modulus at most `max_radius`, built from real poles and conjugate pairs.
pub fn random_stable_feedback(rng: &mut ChaCha8Rng, order: usize, max_radius: f64) -> Vec<f64> {
    // polynomial 1 + a_1 z^-1 + ... as coefficients of increasing delay
    let mut poly = vec![1.0];
    let mut remaining = order;
    while remaining > 0 {
        let r = rng.gen_range(0.0..max_radius);
        if remaining >= 2 && rng.gen_bool(0.5) {
            let theta = rng.gen_range(0.0..std::f64::consts::PI);
            poly = poly_mul(&poly, &[1.0, -2.0 * r * theta.cos(), r * r]);
            remaining -= 2;
        } else {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            poly = poly_mul(&poly, &[1.0, -sign * r]);
            remaining -= 1;
        }
    }
    poly[1..].to_vec()
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Image sources by reflecting the room itself across its walls, `depth`
/// times, keeping the smallest depth at which each image appears.
/// Returns `(x, y, order)` sorted by bits for multiset comparison.
pub fn mirrored_images(width: f64, height: f64, source: (f64, f64), depth: usize) -> Vec<(f64, f64, usize)> {
    #[derive(Clone, Copy)]
    struct Room {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        sx: f64,
        sy: f64,
    }
    let start = Room { x0: 0.0, x1: width, y0: 0.0, y1: height, sx: source.0, sy: source.1 };
    let key = |r: &Room| (r.sx.to_bits(), r.sy.to_bits());
    let mut seen: HashMap<(u64, u64), (f64, f64, usize)> = HashMap::new();
    seen.insert(key(&start), (start.sx, start.sy, 0));
    let mut frontier = vec![start];
    for level in 1..=depth {
        let mut next = Vec::new();
        for r in &frontier {
            let w = r.x1 - r.x0;
            let h = r.y1 - r.y0;
            let mirrored = [
                Room { x0: r.x1, x1: r.x1 + w, sx: 2.0 * r.x1 - r.sx, ..*r },
                Room { x0: r.x0 - w, x1: r.x0, sx: 2.0 * r.x0 - r.sx, ..*r },
                Room { y0: r.y1, y1: r.y1 + h, sy: 2.0 * r.y1 - r.sy, ..*r },
                Room { y0: r.y0 - h, y1: r.y0, sy: 2.0 * r.y0 - r.sy, ..*r },
            ];
            for m in mirrored {
                if !seen.contains_key(&key(&m)) {
                    seen.insert(key(&m), (m.sx, m.sy, level));
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<_> = seen.into_values().collect();
    sort_images(&mut out);
    out
}

pub fn sort_images(v: &mut [(f64, f64, usize)]) {
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
}

/// Random value on a grid of `1/8` steps strictly inside `(0, len)`.
pub fn grid_inside(rng: &mut ChaCha8Rng, len: f64) -> f64 {
    let steps = (len * 8.0) as u32;
    rng.gen_range(1..steps) as f64 / 8.0
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Every single-cell corruption of a section: each scalar in every vertex,
/// edge and boundary cell, moved by `bump`.
pub fn single_cell_corruptions(
    sec: &topodsp::sheaf_filter::Section,
    bump: impl Fn(f64) -> f64,
) -> Vec<topodsp::sheaf_filter::Section> {
    let mut out = Vec::new();
    for k in 0..sec.vertices.len() {
        let mut c = sec.clone();
        c.vertices[k].input = bump(c.vertices[k].input);
        out.push(c);
        let mut c = sec.clone();
        c.vertices[k].output = bump(c.vertices[k].output);
        out.push(c);
        for j in 0..sec.vertices[k].state.len() {
            let mut c = sec.clone();
            c.vertices[k].state[j] = bump(c.vertices[k].state[j]);
            out.push(c);
        }
    }
    for k in 0..sec.edges.len() {
        for j in 0..sec.edges[k].len() {
            let mut c = sec.clone();
            c.edges[k][j] = bump(c.edges[k][j]);
            out.push(c);
        }
    }
    for j in 0..sec.incoming.len() {
        let mut c = sec.clone();
        c.incoming[j] = bump(c.incoming[j]);
        out.push(c);
        let mut c = sec.clone();
        c.outgoing[j] = bump(c.outgoing[j]);
        out.push(c);
    }
    out
}
