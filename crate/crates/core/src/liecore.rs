//! Metric Lie algebras given by structure constants and a Gram matrix.

use std::collections::HashSet;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{from_rats, matrix_from_json, matrix_to_json, to_rats, Rat};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, Signature, Q};

/// A finite-dimensional real Lie algebra with a symmetric bilinear form,
/// both written in a fixed basis `e_0, ..., e_{n-1}`.
///
/// The bracket is stored as a full `n x n` table of vectors so that
/// user-supplied constants which are not antisymmetric can still be
/// represented and reported by [`MetricLieAlgebra::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricLieAlgebra {
    n: usize,
    table: Vec<Vec<Q>>,
    gram: Matrix,
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Check {
    Pass,
    /// `at` holds the first failing basis indices (a pair or a triple).
    Fail { at: Vec<usize> },
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }

    fn from_first(first: Option<Vec<usize>>) -> Check {
        match first {
            None => Check::Pass,
            Some(at) => Check::Fail { at },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub antisymmetry: Check,
    pub jacobi: Check,
    pub invariance: Check,
    pub nondegeneracy: Check,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry.passed() && self.jacobi.passed() && self.invariance.passed() && self.nondegeneracy.passed()
    }
}

/// A linear subspace of `Q^n`, stored by the rref of a spanning set.
///
/// Two subspaces are equal iff their canonical bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let rows = Matrix::from_rows(vectors.to_vec(), ambient).expect("vectors of ambient length");
        Subspace { ambient, basis: rows.row_space() }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis vectors (rows of the rref).
    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.basis.to_rows()
    }

    /// The canonical basis as a `dim x ambient` matrix.
    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        let stacked = self.basis.vstack(&Matrix::from_rows(vec![v.to_vec()], self.ambient).expect("ambient length"));
        stacked.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis();
        v.extend(other.basis());
        Subspace::span(self.ambient, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let (a, b) = (self.basis(), other.basis());
        if a.is_empty() || b.is_empty() {
            return Subspace::zero(self.ambient);
        }
        // x in ker [A^T | -B^T]  gives  A^T x_a = B^T x_b
        let cols: Vec<Vec<Q>> =
            a.iter().cloned().chain(b.iter().map(|v| v.iter().map(|x| -x.clone()).collect())).collect();
        let m = Matrix::from_cols(&cols, self.ambient).expect("ambient length");
        let vecs: Vec<Vec<Q>> = m
            .nullspace()
            .into_iter()
            .map(|x| {
                let mut w = zero_vec(self.ambient);
                for (c, v) in x.iter().zip(&a) {
                    axpy(&mut w, c, v);
                }
                w
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }
}

impl MetricLieAlgebra {
    /// Builds an algebra from brackets `[e_i, e_j] = v` for `i < j`,
    /// extended antisymmetrically; unlisted pairs bracket to zero.
    pub fn new(gram: Matrix, brackets: impl IntoIterator<Item = (usize, usize, Vec<Q>)>) -> Result<Self> {
        let n = gram.rows();
        if !gram.is_square() {
            return Err(Error::dim("Gram matrix must be square"));
        }
        let mut table = vec![zero_vec(n); n * n];
        for (i, j, v) in brackets {
            if i >= j || j >= n {
                return Err(Error::input(format!("bracket index pair ({i}, {j}) must satisfy i < j < {n}")));
            }
            if v.len() != n {
                return Err(Error::dim(format!("bracket [{i},{j}] has length {}, expected {n}", v.len())));
            }
            table[j * n + i] = v.iter().map(|x| -x.clone()).collect();
            table[i * n + j] = v;
        }
        Ok(MetricLieAlgebra { n, table, gram })
    }

    /// Builds an algebra from raw bracket entries, which may list both
    /// `(i, j)` and `(j, i)`. Missing partners are filled antisymmetrically;
    /// explicit entries are kept verbatim so that `verify` can judge them.
    pub fn from_entries(gram: Matrix, entries: impl IntoIterator<Item = (usize, usize, Vec<Q>)>) -> Result<Self> {
        let n = gram.rows();
        if !gram.is_square() {
            return Err(Error::dim("Gram matrix must be square"));
        }
        let mut table = vec![zero_vec(n); n * n];
        let mut listed = HashSet::new();
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::input(format!("bracket index pair ({i}, {j}) out of range for dimension {n}")));
            }
            if v.len() != n {
                return Err(Error::dim(format!("bracket [{i},{j}] has length {}, expected {n}", v.len())));
            }
            if !listed.insert((i, j)) {
                return Err(Error::input(format!("bracket [{i},{j}] listed twice")));
            }
            table[i * n + j] = v;
        }
        for &(i, j) in &listed {
            if !listed.contains(&(j, i)) && i != j {
                table[j * n + i] = table[i * n + j].iter().map(|x| -x.clone()).collect();
            }
        }
        Ok(MetricLieAlgebra { n, table, gram })
    }

    pub fn abelian(gram: Matrix) -> Result<Self> {
        MetricLieAlgebra::new(gram, std::iter::empty())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Q] {
        &self.table[i * self.n + j]
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = zero_vec(self.n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi * yj), self.bracket_basis(i, j));
            }
        }
        out
    }

    /// `[x, e_j]` for a vector `x`.
    fn bracket_with_basis(&self, x: &[Q], j: usize) -> Vec<Q> {
        let mut out = zero_vec(self.n);
        for (i, xi) in x.iter().enumerate() {
            axpy(&mut out, xi, self.bracket_basis(i, j));
        }
        out
    }

    /// Matrix of `ad(x) = [x, .]`.
    pub fn ad(&self, x: &[Q]) -> Matrix {
        let cols: Vec<Vec<Q>> = (0..self.n)
            .map(|j| {
                let mut out = zero_vec(self.n);
                for (i, xi) in x.iter().enumerate() {
                    axpy(&mut out, xi, self.bracket_basis(i, j));
                }
                out
            })
            .collect();
        Matrix::from_cols(&cols, self.n).expect("square")
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        self.gram.form(x, y)
    }

    pub fn signature(&self) -> Result<Signature> {
        self.gram.signature()
    }

    /// Exact check of antisymmetry, Jacobi, invariance and nondegeneracy.
    pub fn verify(&self) -> VerifyReport {
        let n = self.n;
        let antisymmetry = Check::from_first((0..n).flat_map(|i| (i..n).map(move |j| (i, j))).find_map(|(i, j)| {
            let ok = self.bracket_basis(i, j).iter().zip(self.bracket_basis(j, i)).all(|(a, b)| (a + b).is_zero());
            (!ok).then(|| vec![i, j])
        }));

        let jacobi = Check::from_first(
            (0..n)
                .into_par_iter()
                .filter_map(|i| {
                    for j in i + 1..n {
                        let cij = self.bracket_basis(i, j);
                        for k in j + 1..n {
                            let mut s = self.bracket_with_basis(cij, k);
                            let t = self.bracket_with_basis(self.bracket_basis(j, k), i);
                            let u = self.bracket_with_basis(self.bracket_basis(k, i), j);
                            for ((a, b), c) in s.iter_mut().zip(&t).zip(&u) {
                                *a += b + c;
                            }
                            if !is_zero_vec(&s) {
                                return Some(vec![i, j, k]);
                            }
                        }
                    }
                    None
                })
                .min(),
        );

        // b[i][j][k] = <[e_i, e_j], e_k>
        let lowered: Vec<Vec<Q>> = self.table.iter().map(|v| self.gram.mul_vec(v)).collect();
        let invariance = Check::from_first(
            (0..n)
                .into_par_iter()
                .filter_map(|i| {
                    for j in 0..n {
                        for k in j..n {
                            if !(&lowered[i * n + j][k] + &lowered[i * n + k][j]).is_zero() {
                                return Some(vec![i, j, k]);
                            }
                        }
                    }
                    None
                })
                .min(),
        );

        let nondegeneracy = if !self.gram.is_symmetric() {
            let at = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| self.gram[(i, j)] != self.gram[(j, i)])
                .map(|(i, j)| vec![i, j])
                .unwrap_or_default();
            Check::Fail { at }
        } else if self.gram.rank() < n {
            Check::Fail { at: vec![] }
        } else {
            Check::Pass
        };

        VerifyReport { antisymmetry, jacobi, invariance, nondegeneracy }
    }

    /// `{x : [x, y] = 0 for all y}`.
    pub fn centre(&self) -> Subspace {
        let n = self.n;
        let mut stacked = Matrix::zeros(n * n, n);
        for j in 0..n {
            for i in 0..n {
                for (r, v) in self.bracket_basis(i, j).iter().enumerate() {
                    stacked[(j * n + r, i)] = v.clone();
                }
            }
        }
        Subspace::span(n, &stacked.nullspace())
    }

    /// `[g, g]`.
    pub fn derived(&self) -> Subspace {
        self.bracket_of(&Subspace::full(self.n), &Subspace::full(self.n))
    }

    /// `[U, W]` for subspaces `U`, `W`.
    pub fn bracket_of(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in u.basis() {
            for y in w.basis() {
                let v = self.bracket(&x, &y);
                if !is_zero_vec(&v) {
                    vecs.push(v);
                }
            }
        }
        Subspace::span(self.n, &vecs)
    }

    /// `g = D^0 ⊇ D^1 ⊇ ...` up to and including the first repeated term.
    pub fn derived_series(&self) -> Vec<Subspace> {
        self.series(|s| self.bracket_of(s, s))
    }

    /// `g = C^0 ⊇ C^1 = [g, C^0] ⊇ ...` up to and including the first repeated term.
    pub fn lower_central(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.n);
        self.series(|s| self.bracket_of(&full, s))
    }

    fn series(&self, next: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
        let mut out = vec![Subspace::full(self.n)];
        loop {
            let s = next(out.last().expect("nonempty"));
            let stop = s.dim() == out.last().expect("nonempty").dim();
            out.push(s);
            if stop {
                return out;
            }
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|v| is_zero_vec(v))
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.dim() == 0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central().last().is_some_and(|s| s.dim() == 0)
    }

    /// `S^⊥` with respect to the Gram matrix.
    pub fn orthogonal_complement(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::full(self.n);
        }
        Subspace::span(self.n, &s.basis_matrix().mul(&self.gram).nullspace())
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        s.basis().iter().all(|v| (0..self.n).all(|j| s.contains(&self.bracket_with_basis(v, j))))
    }

    /// The form restricted to `S` is nondegenerate.
    pub fn is_nondegenerate(&self, s: &Subspace) -> bool {
        let b = s.basis_matrix();
        b.mul(&self.gram).mul(&b.transpose()).rank() == s.dim()
    }

    pub fn is_nondegenerate_ideal(&self, s: &Subspace) -> bool {
        self.is_ideal(s) && self.is_nondegenerate(s)
    }

    /// Orthogonal direct sum, basis of `self` first.
    pub fn direct_sum(&self, other: &MetricLieAlgebra) -> MetricLieAlgebra {
        let (n1, n2) = (self.n, other.n);
        let n = n1 + n2;
        let mut table = vec![zero_vec(n); n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                table[i * n + j][..n1].clone_from_slice(self.bracket_basis(i, j));
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                table[(n1 + i) * n + n1 + j][n1..].clone_from_slice(other.bracket_basis(i, j));
            }
        }
        MetricLieAlgebra { n, table, gram: self.gram.block_diag(&other.gram) }
    }

    /// Checks that `f` (columns = images of the basis of `self`) is an
    /// isometric Lie algebra isomorphism `self -> other`.
    pub fn check_isomorphism(&self, other: &MetricLieAlgebra, f: &Matrix) -> std::result::Result<(), String> {
        let n = self.n;
        if other.n != n || f.rows() != n || f.cols() != n {
            return Err("dimensions differ".into());
        }
        if f.det().is_zero() {
            return Err("map is not invertible".into());
        }
        if f.transpose().mul(&other.gram).mul(f) != self.gram {
            return Err("map is not an isometry".into());
        }
        let images = f.to_cols();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = f.mul_vec(self.bracket_basis(i, j));
                let rhs = other.bracket(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(format!("bracket of basis vectors {i}, {j} is not preserved"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.n;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.bracket_basis(i, j);
                if !is_zero_vec(v) {
                    brackets.push(BracketJson { i, j, v: to_rats(v) });
                }
            }
        }
        AlgebraJson { dim: n, gram: matrix_to_json(&self.gram), brackets }
    }

    pub fn from_json(j: AlgebraJson) -> Result<Self> {
        let gram = matrix_from_json(j.gram, j.dim, j.dim, "gram")?;
        MetricLieAlgebra::from_entries(gram, j.brackets.into_iter().map(|b| (b.i, b.j, from_rats(b.v))))
    }
}

/// Wire form of a [`MetricLieAlgebra`], indices 0-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    pub gram: Vec<Vec<Rat>>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub v: Vec<Rat>,
}

/// The vector `e_i` of the algebra's basis.
pub fn basis_vector(g: &MetricLieAlgebra, i: usize) -> Vec<Q> {
    unit_vec(g.dim(), i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    /// sl2 with [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    fn sl2(gram: Matrix) -> MetricLieAlgebra {
        MetricLieAlgebra::new(gram, [(0, 1, v(&[0, 2, 0])), (0, 2, v(&[0, 0, -2])), (1, 2, v(&[1, 0, 0]))]).unwrap()
    }

    /// Four-dimensional oscillator: basis (Z, X, Y, L), [X,Y] = Z, [L,X] = Y, [L,Y] = -X.
    fn osc() -> MetricLieAlgebra {
        let gram = Matrix::from_i64(&[&[0, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 0]]);
        MetricLieAlgebra::new(gram, [(1, 2, v(&[1, 0, 0, 0])), (1, 3, v(&[0, 0, -1, 0])), (2, 3, v(&[0, 1, 0, 0]))])
            .unwrap()
    }

    #[test]
    fn abelian_plane_verifies() {
        let g = MetricLieAlgebra::abelian(Matrix::identity(2)).unwrap();
        assert!(g.verify().passed());
        assert_eq!(g.centre(), Subspace::full(2));
        assert_eq!(g.derived().dim(), 0);
        assert!(g.is_nilpotent() && g.is_abelian());
    }

    #[test]
    fn sl2_with_identity_form_is_not_invariant() {
        let g = sl2(Matrix::identity(3));
        let r = g.verify();
        assert!(r.jacobi.passed() && r.antisymmetry.passed() && r.nondegeneracy.passed());
        assert!(!r.invariance.passed());
        // the Killing form (up to scale) is invariant
        let k = sl2(Matrix::from_i64(&[&[2, 0, 0], &[0, 0, 1], &[0, 1, 0]]));
        assert!(k.verify().passed());
        assert_eq!(k.centre().dim(), 0);
        assert!(!k.is_solvable());
    }

    #[test]
    fn oscillator_structure() {
        let g = osc();
        assert!(g.verify().passed());
        let z = g.centre();
        assert_eq!(z.basis(), vec![v(&[1, 0, 0, 0])]);
        assert_eq!(g.orthogonal_complement(&z), g.derived());
        assert!(g.is_solvable());
        assert!(!g.is_nilpotent());
        assert!(g.is_ideal(&z));
        assert!(!g.is_nondegenerate_ideal(&z));
        assert_eq!(g.signature().unwrap(), Signature::new(1, 3, 0));
    }

    #[test]
    fn heisenberg_like_is_nilpotent() {
        // [X,Y] = Z with Z central; the form is degenerate but nilpotency does not care
        let g = MetricLieAlgebra::new(Matrix::identity(3), [(0, 1, v(&[0, 0, 1]))]).unwrap();
        assert!(g.is_nilpotent());
        assert_eq!(g.lower_central().len(), 4);
    }

    #[test]
    fn explicit_non_antisymmetric_entries_are_reported() {
        let g = MetricLieAlgebra::from_entries(Matrix::identity(2), [(0, 1, v(&[1, 0])), (1, 0, v(&[1, 0]))]).unwrap();
        assert_eq!(g.verify().antisymmetry, Check::Fail { at: vec![0, 1] });
        let h = MetricLieAlgebra::from_entries(Matrix::identity(2), [(0, 1, v(&[0, 0]))]).unwrap();
        assert!(h.verify().passed());
    }

    #[test]
    fn degenerate_gram_is_reported() {
        let g = MetricLieAlgebra::abelian(Matrix::diag(&[q(1), q(0)])).unwrap();
        assert_eq!(g.verify().nondegeneracy, Check::Fail { at: vec![] });
    }

    #[test]
    fn direct_sum_of_lines() {
        let a = MetricLieAlgebra::abelian(Matrix::identity(1)).unwrap();
        let s = a.direct_sum(&a);
        assert_eq!(s, MetricLieAlgebra::abelian(Matrix::identity(2)).unwrap());
        let t = osc().direct_sum(&a);
        assert!(t.verify().passed());
        let ideal = Subspace::span(5, &[unit_vec(5, 4)]);
        assert!(t.is_nondegenerate_ideal(&ideal));
    }

    #[test]
    fn subspace_operations() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert!(a.contains(&v(&[2, 3, 0])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn isomorphism_check() {
        let g = osc();
        assert!(g.check_isomorphism(&g, &Matrix::identity(4)).is_ok());
        // Y -> -Y, L -> -L is an automorphism: [X,-Y] = -Z needs Z -> -Z and then <Z,L> = 1 is kept
        let f = Matrix::diag(&[q(-1), q(1), q(-1), q(-1)]);
        assert!(g.check_isomorphism(&g, &f).is_ok());
        let bad = Matrix::diag(&[q(1), q(1), q(-1), q(1)]);
        assert!(g.check_isomorphism(&g, &bad).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = osc();
        let s = serde_json::to_string(&g.to_json()).unwrap();
        let back = MetricLieAlgebra::from_json(serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
