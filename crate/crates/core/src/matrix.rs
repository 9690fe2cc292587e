//! Dense square matrices: integer counts and their real-valued products.

use std::fmt;

/// Square matrix of nonnegative integer counts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![0; dim * dim] }
    }

    /// Panics if the rows are ragged or not square.
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            entries.extend_from_slice(row);
        }
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub(crate) fn add_at(&mut self, i: usize, j: usize, amount: u64) {
        self.entries[i * self.dim + j] += amount;
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.entries[i * self.dim..(i + 1) * self.dim].iter().sum()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn to_real(&self) -> RealMatrix {
        RealMatrix { dim: self.dim, entries: self.entries.iter().map(|&e| e as f64).collect() }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// Square matrix with nonnegative real entries.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        RealMatrix { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            entries.extend_from_slice(row);
        }
        RealMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &RealMatrix) -> RealMatrix {
        let mut out = RealMatrix::zeros(self.dim);
        self.mul_into(rhs, &mut out);
        out
    }

    /// `out = self * rhs`; `out` must already have the right dimension.
    pub(crate) fn mul_into(&self, rhs: &RealMatrix, out: &mut RealMatrix) {
        let d = self.dim;
        debug_assert_eq!(rhs.dim, d);
        out.entries.iter_mut().for_each(|e| *e = 0.0);
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.entries[k * d..(k + 1) * d];
                let dst = &mut out.entries[i * d..(i + 1) * d];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
    }

    /// `out = self * v`.
    pub(crate) fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        let d = self.dim;
        for (i, o) in out.iter_mut().enumerate().take(d) {
            *o = self.entries[i * d..(i + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    /// Induced infinity norm (maximum row sum).
    pub fn max_row_sum(&self) -> f64 {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0.0)
    }

    /// Adjacency lists of the positive entries.
    pub(crate) fn support(&self) -> Vec<Vec<usize>> {
        (0..self.dim).map(|i| (0..self.dim).filter(|&j| self.entries[i * self.dim + j] > 0.0).collect()).collect()
    }

    pub(crate) fn submatrix(&self, idx: &[usize]) -> RealMatrix {
        let d = idx.len();
        let mut out = RealMatrix::zeros(d);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.entries[a * d + b] = self.get(i, j);
            }
        }
        out
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = self.entries.chunks(self.dim.max(1)).take(self.dim).collect();
        write!(f, "{rows:?}")
    }
}
