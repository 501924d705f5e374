//! Exact dense linear algebra over the rationals.
//!
//! Everything in the crate is built on [`Q`] (arbitrary precision rationals)
//! and the row-major [`Matrix`] below. Equality tests are exact; there is no
//! tolerance anywhere.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics on `d == 0`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

/// `e_i` in dimension `n`.
pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

/// `acc += c * v`, skipping work when `c` is zero.
pub fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_q).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Counts of a diagonalized symmetric form.
///
/// The negative count comes first: a form of signature `(p, q)` has a
/// maximal negative definite subspace of dimension `p` (the index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub negative: usize,
    pub positive: usize,
    pub nullity: usize,
}

impl Signature {
    pub fn new(negative: usize, positive: usize, nullity: usize) -> Self {
        Signature { negative, positive, nullity }
    }

    /// `min(p, q)`, the index up to an overall sign change of the form.
    pub fn index(&self) -> usize {
        self.negative.min(self.positive)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.nullity == 0
    }
}

/// A particular solution of `M x = b` together with a basis of `ker M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Q>,
    pub kernel: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::dim(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(cols: &[Vec<Q>], rows: usize) -> Result<Self> {
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::dim(format!("column {j} has length {}, expected {rows}", c.len())));
            }
        }
        Ok(Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
    }

    /// Integer matrix literal, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), cols, |i, j| q(rows[i][j]))
    }

    pub fn diag(entries: &[Q]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
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

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// `[self; other]`, stacking rows.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `[self, other]`, joining columns.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
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

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
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
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &f * &m[(r, j)];
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Reduced row echelon form (zero rows kept at the bottom).
    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    /// The nonzero rows of the rref: the canonical basis of the row space.
    pub fn row_space(&self) -> Matrix {
        let (r, pivots) = self.rref_with_pivots();
        Matrix::from_fn(pivots.len(), r.cols, |i, j| r[(i, j)].clone())
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{v : M v = 0}`, one vector per free column of the rref.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = zero_vec(self.cols);
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `M x = b`. Returns `None` when `b` is outside the column span.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::dim(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_cols(&[b.to_vec()], self.rows)?);
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Ok(Some(Solution { particular: x, kernel: self.nullspace() }))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref_with_pivots();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let v = &f * &m[(c, j)];
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Signature of a symmetric matrix by congruence diagonalization.
    ///
    /// Zero diagonals are handled by the hyperbolic pivot `e_i -> e_i + e_j`,
    /// which turns an off-diagonal entry `g_ij` into the diagonal `2 g_ij`.
    pub fn signature(&self) -> Result<Signature> {
        if !self.is_symmetric() {
            return Err(Error::input("signature requires a symmetric matrix"));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sig = Signature::new(0, 0, 0);
        for k in 0..n {
            if let Some(p) = (k..n).find(|&i| !m[(i, i)].is_zero()) {
                m.swap_sym(p, k);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m[(i, j)].is_zero())
            {
                m.add_sym(i, j);
                m.swap_sym(i, k);
            } else {
                sig.nullity += n - k;
                break;
            }
            let pivot = m[(k, k)].clone();
            for r in k + 1..n {
                if m[(r, k)].is_zero() {
                    continue;
                }
                let f = &m[(r, k)] / &pivot;
                for j in k..n {
                    let v = &f * &m[(k, j)];
                    m[(r, j)] -= v;
                }
                for i in k..n {
                    let v = &f * &m[(i, k)];
                    m[(i, r)] -= v;
                }
            }
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
        }
        Ok(sig)
    }

    /// Simultaneous row and column swap.
    fn swap_sym(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.swap_rows(a, b);
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Simultaneous `row_i += row_j`, `col_i += col_j`.
    fn add_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let v = self[(j, c)].clone();
            self[(i, c)] += v;
        }
        for r in 0..self.rows {
            let v = self[(r, j)].clone();
            self[(r, i)] += v;
        }
    }

    /// Bilinear form `x^T M y`.
    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        dot(x, &self.mul_vec(y))
    }

    /// Lexicographic comparison of entries in row-major order, shape first.
    pub fn cmp_entries(&self, other: &Matrix) -> std::cmp::Ordering {
        (self.rows, self.cols)
            .cmp(&(other.rows, other.cols))
            .then_with(|| self.data.cmp(&other.data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_examples() {
        assert!(Matrix::identity(3).nullspace().is_empty());
        assert_eq!(Matrix::zeros(2, 2).nullspace().len(), 2);
        let ns = Matrix::from_i64(&[&[1, 1], &[2, 2]]).nullspace();
        assert_eq!(ns, vec![vec![q(-1), q(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(4), qf(-1, 2), q(0)];
        let s = Matrix::identity(3).solve(&b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());

        assert!(Matrix::zeros(2, 2).solve(&[q(1), q(0)]).unwrap().is_none());

        let s = Matrix::from_i64(&[&[2]]).solve(&[q(3)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![qf(3, 2)]);
        assert!(s.kernel.is_empty());

        assert!(matches!(Matrix::identity(2).solve(&[q(1)]), Err(Error::Dimension(_))));
    }

    #[test]
    fn signature_examples() {
        let d = Matrix::diag(&[q(-1), q(1), q(1)]);
        assert_eq!(d.signature().unwrap(), Signature::new(1, 2, 0));
        let h = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(h.signature().unwrap(), Signature::new(1, 1, 0));
        assert_eq!(Matrix::zeros(2, 2).signature().unwrap(), Signature::new(0, 0, 2));
        let ns = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(matches!(ns.signature(), Err(Error::Input(_))));
    }

    #[test]
    fn signature_mixed_zero_diagonal() {
        // hyperbolic plane plus a degenerate direction and a negative square
        let g = Matrix::from_i64(&[&[0, 2, 0, 0], &[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -3]]);
        assert_eq!(g.signature().unwrap(), Signature::new(2, 1, 1));
    }

    #[test]
    fn rref_examples() {
        assert_eq!(Matrix::from_i64(&[&[2, 4]]).rref(), Matrix::from_i64(&[&[1, 2]]));
        assert_eq!(Matrix::identity(2).rref(), Matrix::identity(2));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).rref(), Matrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), q(1));
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Matrix::from_i64(&[&[0, 1], &[1, 0]]).det(), q(-1));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_q(&qf(6, -4)), "-3/2");
        assert_eq!(fmt_q(&q(7)), "7");
        assert_eq!(parse_q(" -3/2 ").unwrap(), qf(-3, 2));
        assert_eq!(parse_q("4/2").unwrap(), q(2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }
}
