//! Exact dense linear algebra over `Scalar`.
//!
//! Rank, determinant, and square solves use fraction-free (Bareiss style)
//! elimination: each step divides by the previous pivot, which keeps the
//! intermediate entries from ballooning the way naive cross-multiplication
//! does. Canonical row-space forms use reduced row echelon form, which is
//! unique per row space and therefore usable as a dedup key.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::fmt;
use std::ops::Index;

/// Dense exact vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Vector { coords }
    }

    pub fn zeros(n: usize) -> Self {
        Vector {
            coords: vec![Scalar::zero(); n],
        }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Vector::zeros(n);
        v.coords[i] = Scalar::one();
        v
    }

    pub fn from_ints(vals: &[i64]) -> Self {
        Vector {
            coords: vals.iter().map(|&v| Scalar::from_int(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Result<Scalar> {
        inner_product(self, other)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// Divide by the first nonzero coordinate; canonical representative of
    /// the spanned line. Zero vectors stay zero.
    pub fn direction_normalized(&self) -> Vector {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(lead) => {
                let inv = lead.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

/// Exact `sum_i u_i v_i`.
pub fn inner_product(u: &Vector, v: &Vector) -> Result<Scalar> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    let mut acc = Scalar::zero();
    for (a, b) in u.iter().zip(v.iter()) {
        acc += &(a * b);
    }
    Ok(acc)
}

/// Dense exact matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vector::len);
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flat_map(|v| v.coords).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix product {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc += &(self.get(i, k) * other.get(k, j));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(Vector::new(
            (0..self.rows)
                .map(|i| {
                    let mut acc = Scalar::zero();
                    for k in 0..self.cols {
                        acc += &(self.get(i, k) * &v[k]);
                    }
                    acc
                })
                .collect(),
        ))
    }

    /// Scale row `i` by `lambda[i]`.
    pub fn scale_rows(&self, lambdas: &[Scalar]) -> Matrix {
        assert_eq!(lambdas.len(), self.rows);
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * &lambdas[i])
    }

    /// Rank by fraction-free elimination with row pivoting.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = Scalar::one();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in r + 1..m.rows {
                for c2 in c + 1..m.cols {
                    let v = &(m.get(r, c) * m.get(i, c2)) - &(m.get(i, c) * m.get(r, c2));
                    m.set(i, c2, &v / &prev);
                }
                m.set(i, c, Scalar::zero());
            }
            prev = m.get(r, c).clone();
            r += 1;
        }
        r
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut m = self.clone();
        let mut prev = Scalar::one();
        let mut sign = 1i32;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != k {
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(m.get(k, k) * m.get(i, j)) - &(m.get(i, k) * m.get(k, j));
                    m.set(i, j, &v / &prev);
                }
                m.set(i, k, Scalar::zero());
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Solve `self * x = b` for square `self`. `Ok(None)` flags a singular
    /// matrix; that is a value, not a failure.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: matrix {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        // Augmented fraction-free elimination.
        let mut m = Matrix::from_fn(n, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let mut prev = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(None);
            };
            m.swap_rows(k, p);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = &(m.get(k, k) * m.get(i, j)) - &(m.get(i, k) * m.get(k, j));
                    m.set(i, j, &v / &prev);
                }
                m.set(i, k, Scalar::zero());
            }
            prev = m.get(k, k).clone();
        }
        // Back substitution on the upper-triangular system.
        let mut x = vec![Scalar::zero(); n];
        for i in (0..n).rev() {
            let mut acc = m.get(i, n).clone();
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                acc -= &(m.get(i, j) * xj);
            }
            x[i] = &acc / m.get(i, i);
        }
        Ok(Some(Vector::new(x)))
    }

    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            match self.solve(&Vector::unit(n, j))? {
                Some(col) => cols.push(col),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_fn(n, n, |i, j| cols[j][i].clone())))
    }

    /// Reduced row echelon form and its pivot columns. Unique per row space.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &(&f * m.get(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Canonical basis of the row space: nonzero rows of the RREF.
    pub fn row_space_basis(&self) -> Matrix {
        let (rr, pivots) = self.rref();
        Matrix::from_fn(pivots.len(), self.cols, |i, j| rr.get(i, j).clone())
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (rr, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        for (free, &is_pivot) in pivot_set.iter().enumerate() {
            if is_pivot {
                continue;
            }
            let mut v = Vector::zeros(self.cols);
            v.coords[free] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v.coords[pc] = -rr.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// True when `v` lies in the row space. `self` must already be an RREF
    /// basis for the test to be cheap; any matrix works.
    pub fn row_space_contains(&self, v: &Vector) -> bool {
        assert_eq!(v.len(), self.cols);
        let (rr, pivots) = self.rref();
        let mut rem = v.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            if !rem[pc].is_zero() {
                let f = rem[pc].clone();
                rem = rem.sub(&rr.row(r).scale(&f));
            }
        }
        rem.is_zero()
    }

    /// Any exact solution of `self · x = b` for a matrix of any shape, or
    /// `None` when the system is inconsistent. When the columns are
    /// independent the solution is unique.
    pub fn solve_any(&self, b: &Vector) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, right-hand side has {}",
                self.rows,
                b.len()
            )));
        }
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (rr, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = Vector::zeros(self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            x.coords[pc] = rr.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64()).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}  ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Solve `m x = b`; `Ok(None)` means singular.
pub fn solve_linear(m: &Matrix, b: &Vector) -> Result<Option<Vector>> {
    m.solve(b)
}

/// Rank of a set of row vectors.
pub fn rank(m: &Matrix) -> usize {
    m.rank()
}
