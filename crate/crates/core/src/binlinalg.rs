//! Dense linear algebra over GF(2), plus exact rank for small integer matrices.
//!
//! [`BitMatrix`] stores each column as a packed run of 64-bit words. Column
//! storage is the natural layout here: boundary matrices are reduced column
//! by column, and adding one column to another is a word-wise xor.

use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_col: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_col = words_for(rows);
        Self {
            rows,
            cols,
            words_per_col,
            bits: vec![0; words_per_col * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn col_words(&self, col: usize) -> &[u64] {
        let start = col * self.words_per_col;
        &self.bits[start..start + self.words_per_col]
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of bounds");
        let w = self.col_words(col)[row / WORD_BITS];
        (w >> (row % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of bounds");
        let idx = col * self.words_per_col + row / WORD_BITS;
        let mask = 1u64 << (row % WORD_BITS);
        if value {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    pub fn flip(&mut self, row: usize, col: usize) {
        let v = self.get(row, col);
        self.set(row, col, !v);
    }

    /// Row indices of the set bits in a column, ascending.
    pub fn column_support(&self, col: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.col_words(col).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn column_is_zero(&self, col: usize) -> bool {
        self.col_words(col).iter().all(|&w| w == 0)
    }

    /// Largest row index with a set bit in `col`, the column's "low".
    pub fn column_low(&self, col: usize) -> Option<usize> {
        let words = self.col_words(col);
        words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    /// `col[target] ^= col[source]`.
    pub fn add_column(&mut self, source: usize, target: usize) {
        assert_ne!(source, target);
        let wpc = self.words_per_col;
        let (s, t) = (source * wpc, target * wpc);
        for k in 0..wpc {
            let v = self.bits[s + k];
            self.bits[t + k] ^= v;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            for r in self.column_support(c) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    ///
    /// # Panics
    ///
    /// Panics if the inner dimensions differ.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        let wpc = out.words_per_col;
        for j in 0..rhs.cols {
            for k in rhs.column_support(j) {
                let src = k * self.words_per_col;
                let dst = j * wpc;
                for w in 0..wpc {
                    out.bits[dst + w] ^= self.bits[src + w];
                }
            }
        }
        out
    }

    /// Entries as rows of 0/1, row-major.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| u8::from(self.get(r, c))).collect())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|c| self.col_words(c).iter().map(|w| w.count_ones() as usize).sum())
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Rank over GF(2). The input is not modified.
pub fn gf2_rank(m: &BitMatrix) -> usize {
    gf2_column_reduce(m).pivots.iter().filter(|p| p.is_some()).count()
}

/// `cols - rank`, the dimension of the kernel.
pub fn gf2_nullity(m: &BitMatrix) -> usize {
    m.cols() - gf2_rank(m)
}

/// Outcome of a left-to-right column reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnReduction {
    pub reduced: BitMatrix,
    /// `pivots[j]` is the low row of reduced column `j`, or `None` if it reduced to zero.
    pub pivots: Vec<Option<usize>>,
}

impl ColumnReduction {
    pub fn zero_columns(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_none()).count()
    }
}

/// Standard persistence-style column reduction: while a column shares its
/// low with an earlier column, add that earlier column to it. Afterwards the
/// nonzero columns have pairwise distinct lows.
pub fn gf2_column_reduce(m: &BitMatrix) -> ColumnReduction {
    let mut reduced = m.clone();
    // owner_of_low[row] = column whose low is `row`
    let mut owner_of_low: Vec<Option<usize>> = vec![None; m.rows()];
    let mut pivots = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut low = reduced.column_low(j);
        while let Some(l) = low {
            match owner_of_low[l] {
                Some(k) => {
                    reduced.add_column(k, j);
                    low = reduced.column_low(j);
                }
                None => break,
            }
        }
        if let Some(l) = low {
            owner_of_low[l] = Some(j);
        }
        pivots.push(low);
    }
    ColumnReduction { reduced, pivots }
}

/// A small dense matrix with exact integer entries (oriented boundary maps).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col] = value;
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.entries[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn column_sum(&self) -> Vec<i64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).sum())
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
///
/// Intermediate values are exact in `i128`; boundary matrices have entries in
/// {-1, 0, 1} and stay far from overflow at desk scale.
pub fn int_rank(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<i128>> = (0..rows)
        .map(|r| (0..cols).map(|c| i128::from(m.get(r, c))).collect())
        .collect();
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col];
        for r in rank + 1..rows {
            let factor = a[r][col];
            for c in col..cols {
                let v = pivot * a[r][c] - factor * a[rank][c];
                a[r][c] = v / prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}
