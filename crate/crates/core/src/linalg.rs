//! Small dense linear algebra.
//!
//! Matrices here are at most a dozen rows wide, so everything is a plain
//! row-major `Vec` with naive kernels.

use std::ops::{Index, IndexMut, Mul};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::scalar::Scalar;

/// Dense row-major matrix. Matrices act on coordinate columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * k).collect() }
    }

    /// Sup-norm distance between two matrices of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    pub fn distance_to_identity(&self) -> T {
        assert!(self.is_square());
        self.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.transpose()) <= tol
    }

    /// `x^T self y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        dot(x, &self.mul_vec(y))
    }

    pub fn pow(&self, n: u32) -> Self {
        assert!(self.is_square());
        (0..n).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Maps each entry through `f`, changing the scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    /// Reduced row echelon form with partial pivoting. Returns the reduced
    /// matrix and the pivot columns. Entries below `pivot` in magnitude are
    /// treated as zero.
    pub fn rref(&self, pivot: T) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let (best, best_abs) = (r..m.rows)
                .map(|i| (i, m[(i, c)].abs()))
                .fold((r, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best_abs <= pivot {
                for i in r..m.rows {
                    m[(i, c)] = T::zero();
                }
                continue;
            }
            m.swap_rows(r, best);
            let p = m[(r, c)];
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)] / p;
            }
            for i in 0..m.rows {
                if i != r {
                    let f = m[(i, c)];
                    if f != T::zero() {
                        for j in 0..m.cols {
                            let v = m[(r, j)];
                            m[(i, j)] = m[(i, j)] - f * v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, pivot: T) -> usize {
        self.rref(pivot).1.len()
    }

    /// Basis of the right kernel, one vector per free column, read off the
    /// reduced row echelon form. Each vector has a 1 in its free column.
    pub fn nullspace(&self, pivot: T) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref(pivot);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b` for square `self` by Gaussian elimination with
    /// partial pivoting. `None` if a pivot falls below `pivot`.
    pub fn solve(&self, b: &[T], pivot: T) -> Option<Vec<T>> {
        assert!(self.is_square());
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut aug = Self::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n)] = b[i];
        }
        let (r, pivots) = aug.rref(pivot);
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some((0..n).map(|i| r[(i, n)]).collect())
    }

    /// Inverse of a square matrix, `None` if singular at the given threshold.
    pub fn inverse(&self, pivot: T) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            cols.push(self.solve(&e, pivot)?);
        }
        Some(Self::from_columns(n, &cols))
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let off: T = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .fold(T::zero(), |acc, (i, j)| acc + a[(i, j)] * a[(i, j)]);
            let diag: T = (0..n).fold(T::zero(), |acc, i| acc + a[(i, i)] * a[(i, i)]);
            if off <= eps * eps * (diag + T::min_positive_value()) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let two = T::one() + T::one();
                    let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        ev
    }

    /// All eigenvalues strictly above `tol`. The empty matrix counts as
    /// positive definite.
    pub fn is_positive_definite(&self, tol: T) -> bool {
        self.symmetric_eigenvalues().into_iter().all(|e| e > tol)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
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

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Scalar> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn euclidean_norm<T: Scalar>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

pub fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
}
