use crate::{Error, Exec, Result};

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrixCsr {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrixCsr {
    /// Sums duplicate `(row, col)` entries in input order; the result is
    /// therefore independent of how the triplets were produced as long as
    /// their order is fixed. Entries with magnitude below `1e-300` are dropped.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].0, triplets[k].1));
        let mut row_offsets = vec![0; n + 1];
        let mut col_indices = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for k in order {
            let (i, j, v) = triplets[k];
            assert!(
                i < n && j < n,
                "triplet ({i}, {j}) outside a {n}x{n} matrix"
            );
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_indices.push(j);
                values.push(v);
                row_offsets[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        let mut m = SparseMatrixCsr {
            n,
            row_offsets,
            col_indices,
            values,
        };
        m.drop_tiny(1e-300);
        m
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrixCsr {
            n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Dense row-major input, zeros skipped.
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let triplets: Vec<_> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(move |(j, &v)| (i, j, v))
            })
            .collect();
        Self::from_triplets(n, &triplets)
    }

    fn drop_tiny(&mut self, threshold: f64) {
        if self.values.iter().all(|v| v.abs() >= threshold) {
            return;
        }
        let mut offsets = vec![0; self.n + 1];
        let mut cols = Vec::with_capacity(self.col_indices.len());
        let mut vals = Vec::with_capacity(self.values.len());
        for i in 0..self.n {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                if self.values[k].abs() >= threshold {
                    cols.push(self.col_indices[k]);
                    vals.push(self.values[k]);
                }
            }
            offsets[i + 1] = cols.len();
        }
        self.row_offsets = offsets;
        self.col_indices = cols;
        self.values = vals;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Entrywise sum `self + other` (same order).
    pub fn add(&self, other: &SparseMatrixCsr) -> SparseMatrixCsr {
        assert_eq!(self.n, other.n);
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for m in [self, other] {
            for i in 0..m.n {
                triplets.extend(m.row(i).map(|(j, v)| (i, j, v)));
            }
        }
        Self::from_triplets(self.n, &triplets)
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.spmv_with(x, Exec::default())
    }

    /// `A x`, summing each row left to right. Rows are distributed over
    /// threads under [`Exec::Parallel`]; the result does not depend on the policy.
    pub fn spmv_with(&self, x: &[f64], exec: Exec) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.spmv_into(x, &mut y, exec)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[f64], y: &mut [f64], exec: Exec) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let row = |i: usize| {
            let mut s = 0.0;
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                s += self.values[k] * x[self.col_indices[k]];
            }
            s
        };
        // small systems are not worth the scheduling overhead
        let exec = if self.n < 4096 {
            Exec::Sequential
        } else {
            exec
        };
        exec.fill(y, row);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_product() {
        let x = vec![1.0, -2.0, 3.5];
        assert_eq!(SparseMatrixCsr::identity(3).spmv(&x).unwrap(), x);
    }

    #[test]
    fn duplicates_summed_and_sorted() {
        let m = SparseMatrixCsr::from_triplets(
            2,
            &[(1, 1, 2.0), (0, 1, 1.0), (1, 1, 3.0), (0, 0, 4.0)],
        );
        assert_eq!(m.row_offsets(), &[0, 2, 3]);
        assert_eq!(m.col_indices(), &[0, 1, 1]);
        assert_eq!(m.values(), &[4.0, 1.0, 5.0]);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn tiny_entries_dropped() {
        let m = SparseMatrixCsr::from_triplets(2, &[(0, 0, 1.0), (0, 1, 1e-320), (1, 1, 1.0)]);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let m = SparseMatrixCsr::identity(3);
        assert!(matches!(
            m.spmv(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 1
            })
        ));
    }

    proptest! {
        #[test]
        fn symmetric_products_commute(
            entries in prop::collection::vec((0usize..12, 0usize..12, -5.0f64..5.0), 1..60),
            x in prop::collection::vec(-1.0f64..1.0, 12),
            y in prop::collection::vec(-1.0f64..1.0, 12),
        ) {
            let mut t = Vec::new();
            for (i, j, v) in entries {
                t.push((i, j, v));
                t.push((j, i, v));
            }
            let a = SparseMatrixCsr::from_triplets(12, &t);
            prop_assert!(a.asymmetry() == 0.0);
            let ay = a.spmv(&y).unwrap();
            let ax = a.spmv(&x).unwrap();
            let lhs = super::super::dot(&x, &ay);
            let rhs = super::super::dot(&y, &ax);
            prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
        }
    }
}
