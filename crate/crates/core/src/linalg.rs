//! Dense exact linear algebra over a field.

use std::ops::{Index, IndexMut};

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Append `other`'s columns to the right.
    pub fn augment(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Reduce to reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self[(r, c)].inv();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let sub = f.clone() * self[(r, j)].clone();
                    self[(i, j)] = self[(i, j)].clone() - sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : A v = 0}`, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of `{w : w^T A = 0}`.
    pub fn left_null_space(&self) -> Vec<Vec<T>> {
        self.transpose().null_space()
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let col = Matrix { rows: self.rows, cols: 1, data: b.to_vec() };
        let mut aug = self.augment(&col);
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Determinant by elimination. Panics on non-square input.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let sub = f.clone() * m[(c, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - sub;
                }
            }
        }
        det
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use crate::Rational;
    use num_rational::Ratio;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn rank_and_nullity() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullity(), 1);
        for v in m.null_space() {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = mat(&[&[0, 1], &[0, 0], &[0, 1], &[1, 0]]);
        assert!(m.solve(&[qi(-2), qi(0), qi(0), qi(0)]).is_none());
        let x = m.solve(&[qi(-2), qi(0), qi(-2), qi(5)]).unwrap();
        assert_eq!(x, vec![qi(5), qi(-2)]);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(mat(&[&[2, 1], &[7, 4]]).determinant(), qi(1));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).determinant(), qi(-1));
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).determinant(), qi(0));
    }

    proptest! {
        #[test]
        fn null_space_is_annihilated_and_complete(
            entries in proptest::collection::vec(-3i64..4, 12)
        ) {
            let m: Matrix<Ratio<i64>> = Matrix::from_rows(
                entries.chunks(4).map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect(),
            );
            let ns = m.null_space();
            prop_assert_eq!(ns.len() + m.rank(), 4);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
        }
    }
}
