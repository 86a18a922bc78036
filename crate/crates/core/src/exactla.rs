//! Dense linear algebra over arbitrary-precision rationals.
//!
//! Everything downstream (graded operators, Lie closures, quotient rings)
//! reduces to the handful of primitives here: reduced row-echelon form,
//! kernels, linear solves, and the inertia of a symmetric matrix. There is no
//! floating point anywhere; `BigRational` keeps every entry in lowest terms
//! with a positive denominator.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LlvError, Result};

pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// The fraction `n / d`, reduced.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| rat(v)).collect()
}

pub fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `dst += c * src`, skipping zeros.
pub fn axpy(dst: &mut [Rational], c: &Rational, src: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

pub fn scale_vec(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * c).collect()
}

/// Row-major dense matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Output of [`RationalMatrix::solve`]: one particular solution plus the
/// dimension of the homogeneous solution space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub kernel_dim: usize,
}

/// Inertia triple of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: zero_vec(rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_ints(rows: usize, cols: usize, values: &[i64]) -> Self {
        Self::from_vec(rows, cols, rat_vec(values))
    }

    /// Builds a matrix from equal-length rows; `cols` is needed for the empty case.
    pub fn from_rows(rows: &[Vec<Rational>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Rational> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
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

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                axpy(out_row, a, other.row(k));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: scale_vec(&self.data, c),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// `[self; other]`, stacking rows.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form and pivot columns.
    ///
    /// Pivots are taken in the first column that has a nonzero entry at or
    /// below the current row, and each leading entry is normalized to one.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for x in &mut m.data[r * m.cols..(r + 1) * m.cols] {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = -m[(i, c)].clone();
                let cols = m.cols;
                axpy(&mut m.data[i * cols..(i + 1) * cols], &factor, &pivot_row);
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
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
        self.rref().1.len()
    }

    /// Canonical basis of the null space.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors = (0..self.cols).filter(|&j| !is_pivot[j]).map(|free| {
            let mut v = zero_vec(self.cols);
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            v
        });
        Subspace::from_vectors(self.cols, vectors)
    }

    /// One solution of `self * x = b` and the kernel dimension.
    pub fn solve(&self, b: &[Rational]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(LlvError::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(LlvError::Inconsistent);
        }
        let mut x = zero_vec(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Solution {
            x,
            kernel_dim: self.cols - pivots.len(),
        })
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(LlvError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            let pivot_row = m.row(c).to_vec();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = -(&m[(i, c)] / &pivot);
                axpy(&mut m.data[i * n..(i + 1) * n], &factor, &pivot_row);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(LlvError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LlvError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Inertia of a symmetric matrix by symmetric Gaussian elimination
    /// (simultaneous row and column operations, i.e. congruence).
    pub fn signature(&self) -> Result<Inertia> {
        if !self.is_symmetric() {
            return Err(LlvError::NotSymmetric);
        }
        let n = self.rows;
        let mut m = self.clone();
        let (mut pos, mut neg) = (0, 0);
        for i in 0..n {
            if m[(i, i)].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                    m.swap_rows(i, j);
                    m.swap_cols(i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !m[(i, j)].is_zero()) {
                    // All remaining diagonal entries vanish, so adding row/column j
                    // to i leaves 2 m[i][j] on the diagonal.
                    m.add_row_col(i, j);
                } else {
                    continue;
                }
            }
            let pivot = m[(i, i)].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for j in i + 1..n {
                if m[(j, i)].is_zero() {
                    continue;
                }
                let factor = -(&m[(j, i)] / &pivot);
                let row_i = m.row(i).to_vec();
                axpy(&mut m.data[j * n..(j + 1) * n], &factor, &row_i);
                for k in 0..n {
                    let v = &m[(k, i)] * &factor;
                    if !v.is_zero() {
                        m[(k, j)] += v;
                    }
                }
            }
        }
        Ok(Inertia::new(pos, neg, n - pos - neg))
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_row_col(&mut self, target: usize, source: usize) {
        let n = self.cols;
        let src = self.row(source).to_vec();
        axpy(&mut self.data[target * n..(target + 1) * n], &Rational::one(), &src);
        for k in 0..self.rows {
            let v = self[(k, source)].clone();
            if !v.is_zero() {
                self[(k, target)] += v;
            }
        }
    }
}

/// A linear subspace of `Q^n` held by its reduced row-echelon basis.
///
/// The basis is canonical: two subspaces are equal as sets iff their
/// `Subspace` values compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_vectors(ambient_dim, (0..ambient_dim).map(|i| unit_vec(ambient_dim, i)))
    }

    pub fn from_vectors<I>(ambient_dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let mut s = Self::zero(ambient_dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The part of `v` left after eliminating every pivot coordinate.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        assert_eq!(
            v.len(),
            self.ambient_dim,
            "vector length differs from ambient dimension"
        );
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -v[p].clone();
                axpy(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vec(&self.reduce(v.to_vec()))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adjoins `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut().filter(|x| !x.is_zero()) {
            *x *= &inv;
        }
        for row in &mut self.basis {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, v);
        true
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v.clone());
        }
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient_dim);
        }
        let residues: Vec<Vec<Rational>> = self.basis.iter().map(|v| other.reduce(v.clone())).collect();
        let relations = RationalMatrix::from_columns(&residues, self.ambient_dim).kernel();
        let vectors = relations.basis.iter().map(|coeffs| {
            let mut v = zero_vec(self.ambient_dim);
            for (c, row) in coeffs.iter().zip(&self.basis) {
                axpy(&mut v, c, row);
            }
            v
        });
        Self::from_vectors(self.ambient_dim, vectors)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(&self.basis, self.ambient_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, v: &[i64]) -> RationalMatrix {
        RationalMatrix::from_ints(rows, cols, v)
    }

    #[test]
    fn rref_of_proportional_rows() {
        let (r, p) = m(2, 2, &[2, 4, 1, 2]).rref();
        assert_eq!(r, m(2, 2, &[1, 2, 0, 0]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = RationalMatrix::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let z = RationalMatrix::zeros(2, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m(1, 2, &[1, 0]).kernel(), Subspace::from_vectors(2, [rat_vec(&[0, 1])]));
        assert!(m(2, 2, &[1, 2, 3, 4]).kernel().is_zero());
        let k = m(2, 2, &[1, 1, 2, 2]).kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&rat_vec(&[1, -1])));
    }

    #[test]
    fn solve_examples() {
        let s = RationalMatrix::identity(2).solve(&rat_vec(&[3, 5])).unwrap();
        assert_eq!(
            s,
            Solution {
                x: rat_vec(&[3, 5]),
                kernel_dim: 0
            }
        );
        let s = m(1, 2, &[1, 1]).solve(&rat_vec(&[2])).unwrap();
        assert_eq!(s.kernel_dim, 1);
        assert_eq!(m(1, 2, &[1, 1]).mul_vec(&s.x), rat_vec(&[2]));
        assert_eq!(m(2, 1, &[1, 0]).solve(&rat_vec(&[0, 1])), Err(LlvError::Inconsistent));
    }

    #[test]
    fn signature_examples() {
        let d = RationalMatrix::diagonal(&rat_vec(&[1, 1, 1, 1, -1]));
        assert_eq!(d.signature().unwrap(), Inertia::new(4, 1, 0));
        assert_eq!(m(2, 2, &[0, 1, 1, 0]).signature().unwrap(), Inertia::new(1, 1, 0));
        assert_eq!(RationalMatrix::zeros(2, 2).signature().unwrap(), Inertia::new(0, 0, 2));
        assert_eq!(m(2, 2, &[0, 1, 2, 0]).signature(), Err(LlvError::NotSymmetric));
    }

    #[test]
    fn signature_with_zero_diagonal_block() {
        // U ⊕ U ⊕ <-1>: only off-diagonal pivots available at the start.
        let u = m(2, 2, &[0, 1, 1, 0]);
        let g = u.direct_sum(&u).direct_sum(&m(1, 1, &[-1]));
        assert_eq!(g.signature().unwrap(), Inertia::new(2, 3, 0));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(2, 2, &[2, 1, 1, 1]);
        assert_eq!(a.determinant().unwrap(), rat(1));
        assert_eq!(a.mul(&a.inverse().unwrap()), RationalMatrix::identity(2));
        assert_eq!(m(2, 2, &[1, 2, 2, 4]).inverse(), Err(LlvError::Singular));
    }

    #[test]
    fn subspace_canonical_regardless_of_order() {
        let a = Subspace::from_vectors(3, [rat_vec(&[1, 2, 3]), rat_vec(&[0, 1, 1])]);
        let b = Subspace::from_vectors(3, [rat_vec(&[1, 3, 4]), rat_vec(&[2, 4, 6])]);
        assert_eq!(a, b);
        assert_eq!(a.coordinates(&rat_vec(&[1, 3, 4])), Some(rat_vec(&[1, 3])));
    }

    #[test]
    fn subspace_intersection() {
        let a = Subspace::from_vectors(3, [rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 0])]);
        let b = Subspace::from_vectors(3, [rat_vec(&[0, 1, 0]), rat_vec(&[0, 0, 1])]);
        assert_eq!(a.intersection(&b), Subspace::from_vectors(3, [rat_vec(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| RationalMatrix::from_ints(r, c, &v))
        })
    }

    fn symmetric_and_change_of_basis() -> impl Strategy<Value = (RationalMatrix, RationalMatrix)> {
        (1usize..5).prop_flat_map(|n| {
            (
                proptest::collection::vec(-3i64..=3, n * n),
                proptest::collection::vec(-3i64..=3, n * n),
            )
                .prop_map(move |(s, p)| {
                    let a = RationalMatrix::from_ints(n, n, &s);
                    (a.add(&a.transpose()), RationalMatrix::from_ints(n, n, &p))
                })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in small_matrix()) {
            let (r, p) = a.rref();
            prop_assert_eq!(r.rref(), (r.clone(), p));
        }

        #[test]
        fn rank_nullity(a in small_matrix()) {
            prop_assert_eq!(a.rank() + a.kernel().dim(), a.cols());
            for v in a.kernel().basis() {
                prop_assert!(is_zero_vec(&a.mul_vec(v)));
            }
        }

        #[test]
        fn signature_is_congruence_invariant((s, p) in symmetric_and_change_of_basis()) {
            prop_assume!(!p.determinant().unwrap().is_zero());
            let moved = p.transpose().mul(&s).mul(&p);
            prop_assert_eq!(moved.signature().unwrap(), s.signature().unwrap());
        }
    }
}
