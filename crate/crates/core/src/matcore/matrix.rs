use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::scalar::{modulus, Real};
use crate::error::{Error, Result};

/// Dense row-major complex matrix.
///
/// Zero-sized dimensions are allowed; empty blocks of the core-EP and
/// weighted decompositions are `t×0`, `0×0` and so on.
#[derive(Clone, PartialEq)]
pub struct Matrix<R: Real = f64> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

/// The universal value type: a double-precision complex matrix.
pub type ComplexMatrix = Matrix<f64>;

impl<R: Real> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row-major complex entries, rejecting a wrong
    /// entry count or non-finite values.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::EntryCount { rows, cols, len: data.len() });
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: pos / cols.max(1), col: pos % cols.max(1) });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows<Row: AsRef<[f64]>>(rows: &[Row]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_fn(nrows, ncols, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), ncols, "ragged row {i}");
            Complex::new(R::from_f64(row[j]), R::zero())
        })
    }

    /// Column vector from real entries.
    pub fn column_vector(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| Complex::new(R::from_f64(entries[i]), R::zero()))
    }

    /// `j`-th standard basis column of length `n`.
    pub fn unit_vector(n: usize, j: usize) -> Self {
        let mut v = Self::zeros(n, 1);
        v[(j, 0)] = Complex::one();
        v
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn entries(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex<R>) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// Largest entry modulus; 0 for an empty matrix.
    pub fn max_norm(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, &z| acc.max(modulus(z)))
    }

    pub fn frobenius_norm(&self) -> R {
        let big = self.max_norm();
        if big == R::zero() {
            return big;
        }
        let mut acc = R::zero();
        for &z in &self.data {
            let w = z.unscale(big);
            acc += w.norm_sqr();
        }
        big * acc.sqrt()
    }

    pub fn trace(&self) -> Complex<R> {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// `A^ℓ` by repeated multiplication; `A^0 = I`.
    pub fn pow(&self, exp: usize) -> Self {
        assert!(self.is_square(), "power of a non-square {}x{} matrix", self.rows, self.cols);
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Copy of the `nrows×ncols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        assert!(r0 + nrows <= self.rows && c0 + ncols <= self.cols, "block out of range");
        Self::from_fn(nrows, ncols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn columns(&self, c0: usize, ncols: usize) -> Self {
        self.block(0, c0, self.rows, ncols)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                other[(i - self.rows, j)]
            }
        })
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    /// Converts between precisions.
    pub fn cast<S: Real>(&self) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(S::from_f64(z.re.to_f64()), S::from_f64(z.im.to_f64())))
                .collect(),
        }
    }

    pub fn to_f64(&self) -> ComplexMatrix {
        self.cast()
    }

    /// Entries as `f64` pairs `(re, im)`, row-major.
    pub fn to_f64_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let z = self[(i, j)];
                        [z.re.to_f64(), z.im.to_f64()]
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "cannot multiply {}x{} by {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<R>, Complex<R>) -> Complex<R>) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl<R: Real> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = Complex<R>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, R: Real> Mul<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.matmul(rhs)
    }
}

impl<R: Real> Mul for Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Matrix<R>) -> Matrix<R> {
        self.matmul(&rhs)
    }
}

impl<'a, R: Real> Mul<&'a Matrix<R>> for Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.matmul(rhs)
    }
}

impl<R: Real> Mul<Matrix<R>> for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Matrix<R>) -> Matrix<R> {
        self.matmul(&rhs)
    }
}

macro_rules! elementwise {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a, R: Real> $tr<&'a Matrix<R>> for &'a Matrix<R> {
            type Output = Matrix<R>;
            fn $method(self, rhs: &'a Matrix<R>) -> Matrix<R> {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl<R: Real> $tr for Matrix<R> {
            type Output = Matrix<R>;
            fn $method(self, rhs: Matrix<R>) -> Matrix<R> {
                self.zip_with(&rhs, |a, b| a $op b)
            }
        }
        impl<'a, R: Real> $tr<&'a Matrix<R>> for Matrix<R> {
            type Output = Matrix<R>;
            fn $method(self, rhs: &'a Matrix<R>) -> Matrix<R> {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl<'a, R: Real> $tr<Matrix<R>> for &'a Matrix<R> {
            type Output = Matrix<R>;
            fn $method(self, rhs: Matrix<R>) -> Matrix<R> {
                self.zip_with(&rhs, |a, b| a $op b)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl<R: Real> Neg for Matrix<R> {
    type Output = Matrix<R>;
    fn neg(mut self) -> Matrix<R> {
        for z in &mut self.data {
            *z = -*z;
        }
        self
    }
}

impl<R: Real> Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        -self.clone()
    }
}

impl<R: Real> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                let (re, im) = (z.re.to_f64(), z.im.to_f64());
                if im == 0.0 {
                    write!(f, "{re:>12.6} ")?;
                } else {
                    write!(f, "{re:>10.4}{im:+.4}i ")?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
