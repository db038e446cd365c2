//! Dense matrices over F_p with exact row reduction.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Row-major dense matrix over a prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "DenseMatrix {}x{} over F_{}",
            self.rows,
            self.cols,
            self.field.p()
        )?;
        for i in 0..self.rows.min(12) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(16)])?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from raw residues; entries are reduced mod p.
    pub fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let p = field.p();
        Ok(DenseMatrix {
            field,
            rows,
            cols,
            data: data.into_iter().map(|x| x % p).collect(),
        })
    }

    /// Convenience for small literal matrices with signed entries.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.from_i64(v)).collect();
        Ok(DenseMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        DenseMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.get(i, j) as i64)
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Appends the rows of `other` below `self`.
    pub fn stack(&mut self, other: &DenseMatrix) -> Result<()> {
        if self.rows > 0 && other.cols != self.cols {
            return Err(Error::DimensionMismatch("stacking different widths".into()));
        }
        if self.rows == 0 {
            self.cols = other.cols;
        }
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
        Ok(())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.mul_add(*d, a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect())
    }

    /// Forward elimination with first-nonzero pivoting; returns the rank.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelon(false).len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of `{v : M v = 0}` read off the reduced row-echelon form; one
    /// vector per free column, with a 1 in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut work = self.clone();
        let pivots = work.echelon(true);
        let f = self.field;
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(work.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// In-place reduction to (reduced, if `full`) row-echelon form.
    /// Returns the pivot column of each nonzero row, in order.
    pub fn echelon(&mut self, full: bool) -> Vec<usize> {
        let f = self.field;
        let p = f.p();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in c..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
            }
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (pivot_row, below) = tail.split_at_mut(cols);
            let pivot_row = &pivot_row[c..];
            let reduce = |row: &mut [u64]| {
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                let neg = p - factor;
                for (x, &y) in row[c..].iter_mut().zip(pivot_row) {
                    *x = (*x + neg * y) % p;
                }
            };
            for row in below.chunks_mut(cols) {
                reduce(row);
            }
            if full {
                for row in head.chunks_mut(cols) {
                    reduce(row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.echelon(true);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::ZeroInverse);
        }
        let mut inv = Self::zeros(self.field, n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&aug.row(i)[n..]);
        }
        Ok(inv)
    }
}

/// Rank over F_p; see [`DenseMatrix::rank`].
pub fn matrix_rank(m: &DenseMatrix) -> usize {
    m.rank()
}

pub fn matrix_kernel_dim(m: &DenseMatrix) -> usize {
    m.kernel_dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = f7();
        assert_eq!(matrix_rank(&DenseMatrix::identity(f, 4)), 4);
        let m = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(matrix_rank(&m), 1);
        assert_eq!(matrix_rank(&DenseMatrix::zeros(f, 0, 5)), 0);
    }

    #[test]
    fn kernel_examples() {
        let f = f7();
        assert_eq!(matrix_kernel_dim(&DenseMatrix::identity(f, 4)), 0);
        assert_eq!(matrix_kernel_dim(&DenseMatrix::zeros(f, 1, 3)), 3);
        let m = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(matrix_kernel_dim(&m), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..16));
            // force dependencies by duplicating a row combination
            let mut m = DenseMatrix::random(f, r, c, &mut rng);
            if r > 1 {
                let combo: Vec<u64> = (0..c)
                    .map(|j| f.add(m.get(0, j), f.mul(3, m.get(1 % r, j))))
                    .collect();
                m.row_mut(r - 1).copy_from_slice(&combo);
            }
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), m.kernel_dim());
            for v in basis {
                assert!(m.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = DenseMatrix::random(f, 6, 6, &mut rng);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), DenseMatrix::identity(f, 6));
        let singular = DenseMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(singular.inverse().is_err());
    }
}
