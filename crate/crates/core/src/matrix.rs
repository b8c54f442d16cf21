// SPDX-License-Identifier: Apache-2.0

//! Dense row-major matrices over exact rings.
//!
//! Linear maps act on row vectors from the right: a matrix `M` sends `x` to
//! `x * M`, so the rows of `M` are the images of the source basis vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Int, Rat, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows; `cols` is only used when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let cols = rows.first().map_or(cols, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_iter().map(<[T]>::to_vec).collect()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for i in idx {
            data.extend_from_slice(self.row(i));
            rows += 1;
        }
        Self {
            rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        self.asymmetry().is_none()
    }

    /// First position `(i, j)` with `i < j` where the matrix fails symmetry.
    pub fn asymmetry(&self) -> Option<(usize, usize)>
    where
        T: PartialEq,
    {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: core::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    let slot = &mut out[(i, j)];
                    *slot = core::mem::replace(slot, T::zero()) + prod;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![T::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let prod = a * &self[(k, j)];
                *slot = core::mem::replace(slot, T::zero()) + prod;
            }
        }
        Ok(out)
    }

    /// `self * other * self^T`, the Gram matrix transported by `self`.
    pub fn congruence(&self, gram: &Self) -> Result<Self> {
        self.mul(gram)?.mul(&self.transpose())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x * c)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Int> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&x| Int::from(x))
            })
            .collect();
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rat::from_integer(x.clone()))
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(Int::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn rank(&self) -> usize {
        self.to_rational().rank()
    }

    /// Exact inverse over the integers; fails unless `det = +-1`.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular(d));
        }
        let inv = self.to_rational().inverse()?;
        Ok(inv.map(|x| x.to_integer()))
    }

    pub fn max_abs(&self) -> Int {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

impl RatMatrix {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in 0..a.cols {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..a.cols {
                        let v = &a[(r, j)] * &f;
                        a[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    /// Solves `x * self = v` for a row vector `x`, if a solution exists.
    /// When the rows are dependent the solution with zero free coordinates
    /// is returned.
    pub fn solve_left(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if v.len() != self.cols {
            return None;
        }
        // x * A = v  <=>  A^T x^T = v^T
        let at = self.transpose();
        let mut aug = Self::zeros(at.rows, at.cols + 1);
        for i in 0..at.rows {
            for j in 0..at.cols {
                aug[(i, j)] = at[(i, j)].clone();
            }
            aug[(i, at.cols)] = v[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&at.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); at.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r[(row, at.cols)].clone();
        }
        Some(x)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator_lcm(&self) -> Int {
        self.data
            .iter()
            .fold(Int::one(), |acc, x| acc.lcm(x.denom()))
    }
}

pub(crate) fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub(crate) fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(m.det().unwrap(), Int::from(4));
        let z = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(z.det().unwrap(), Int::from(-1));
        let s = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(s.det().unwrap().is_zero());
    }

    #[test]
    fn inverse_and_solve() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(2));
        let r = m.to_rational();
        let x = r.solve_left(&to_rat_vec(&int_vec(&[5, 3]))).unwrap();
        assert_eq!(x, to_rat_vec(&int_vec(&[2, 1])));
        assert!(IntMatrix::from_i64(&[&[2, 0], &[0, 1]])
            .unimodular_inverse()
            .is_err());
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = alloc::vec![int_vec(&[1, 2]), int_vec(&[3])];
        assert!(IntMatrix::from_rows(rows, 2).is_err());
    }
}
