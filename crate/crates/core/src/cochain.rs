//! The complex `C^p(l, a) = Hom(Λ^p l, a)` of an abelian Lie algebra `l`
//! acting orthogonally on `(a, <.,.>_a)`, with the pairing `<x ∧ y>_a`,
//! the quadratic condition on 2-cocycles and the right action of `C^1`
//! on pairs `(α, γ)`.
//!
//! Cochains are stored densely by their values on strictly increasing
//! index tuples, in lexicographic order. Degrees above `l` are allowed and
//! give the zero space, which keeps `d` total.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{from_rats, matrix_from_json, matrix_to_json, to_rats, Rat};
use crate::linalg::{add_vec, axpy, dot, is_zero_vec, qf, scale_vec, sub_vec, zero_vec, Matrix, Q};

/// `n choose k`.
pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing `p`-tuples from `0..l`, in lexicographic order.
pub fn increasing_tuples(l: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, l: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..l {
            cur.push(i);
            rec(i + 1, l, p, cur, out);
            cur.pop();
        }
    }
    rec(0, l, p, &mut cur, &mut out);
    out
}

/// Lexicographic rank of a strictly increasing tuple among `increasing_tuples(l, p)`.
pub fn tuple_rank(l: usize, idx: &[usize]) -> usize {
    let p = idx.len();
    let mut rank = 0;
    let mut next = 0;
    for (t, &c) in idx.iter().enumerate() {
        for v in next..c {
            rank += binom(l - 1 - v, p - 1 - t);
        }
        next = c + 1;
    }
    rank
}

/// Sorts an index tuple, returning the sorted tuple and whether the
/// permutation was odd; `None` if an index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// An orthogonal representation of the abelian Lie algebra `R^l` on `(Q^a, gram_a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    l: usize,
    a: usize,
    gram_a: Matrix,
    rho: Vec<Matrix>,
}

impl Rep {
    /// Validates shapes, symmetry of the Gram matrix, `ρ_j^T G + G ρ_j = 0`
    /// and `ρ_i ρ_j = ρ_j ρ_i`. The Gram matrix may be degenerate only if
    /// the caller checks nondegeneracy separately; `build` does.
    pub fn new(gram_a: Matrix, rho: Vec<Matrix>) -> Result<Self> {
        let a = gram_a.rows();
        if !gram_a.is_square() {
            return Err(Error::dim("gramA must be square"));
        }
        if !gram_a.is_symmetric() {
            return Err(Error::input("gramA must be symmetric"));
        }
        for (j, r) in rho.iter().enumerate() {
            if r.rows() != a || r.cols() != a {
                return Err(Error::dim(format!("rho[{j}] must be {a}x{a}")));
            }
            if !r.transpose().mul(&gram_a).add(&gram_a.mul(r)).is_zero() {
                return Err(Error::Violated(format!("rho[{j}] is not antisymmetric with respect to gramA")));
            }
        }
        for i in 0..rho.len() {
            for j in i + 1..rho.len() {
                if rho[i].mul(&rho[j]) != rho[j].mul(&rho[i]) {
                    return Err(Error::Violated(format!("rho[{i}] and rho[{j}] do not commute")));
                }
            }
        }
        Ok(Rep { l: rho.len(), a, gram_a, rho })
    }

    /// `ρ = 0` on `Q^a` for an `l`-dimensional `l`.
    pub fn trivial(l: usize, gram_a: Matrix) -> Result<Self> {
        let a = gram_a.rows();
        Rep::new(gram_a, vec![Matrix::zeros(a, a); l])
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn gram_a(&self) -> &Matrix {
        &self.gram_a
    }

    pub fn rho(&self) -> &[Matrix] {
        &self.rho
    }

    /// `ρ(L)` for `L = Σ c_k L_k`.
    pub fn rho_of(&self, c: &[Q]) -> Matrix {
        let mut m = Matrix::zeros(self.a, self.a);
        for (ck, r) in c.iter().zip(&self.rho) {
            if !ck.is_zero() {
                m = m.add(&r.scale(ck));
            }
        }
        m
    }

    pub fn inner(&self, x: &[Q], y: &[Q]) -> Q {
        self.gram_a.form(x, y)
    }

    /// `∩_j ker ρ_j`.
    pub fn invariants(&self) -> Vec<Vec<Q>> {
        if self.l == 0 {
            return Matrix::identity(self.a).to_rows();
        }
        let stacked = self.rho.iter().skip(1).fold(self.rho[0].clone(), |acc, r| acc.vstack(r));
        Matrix::from_rows(stacked.nullspace(), self.a).expect("length a").row_space().to_rows()
    }

    pub fn to_json(&self) -> (Vec<Vec<Rat>>, Vec<Vec<Vec<Rat>>>) {
        (matrix_to_json(&self.gram_a), self.rho.iter().map(matrix_to_json).collect())
    }

    pub fn from_json(l: usize, a: usize, gram: Vec<Vec<Rat>>, rho: Vec<Vec<Vec<Rat>>>) -> Result<Self> {
        let gram_a = matrix_from_json(gram, a, a, "gramA")?;
        if rho.len() != l {
            return Err(Error::dim(format!("rho: expected {l} matrices, found {}", rho.len())));
        }
        let rho = rho
            .into_iter()
            .enumerate()
            .map(|(j, m)| matrix_from_json(m, a, a, &format!("rho[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        Rep::new(gram_a, rho)
    }
}

/// An `a`-valued alternating `p`-form on `R^l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    deg: usize,
    l: usize,
    a: usize,
    values: Vec<Vec<Q>>,
}

impl Cochain {
    pub fn zero(deg: usize, l: usize, a: usize) -> Self {
        Cochain { deg, l, a, values: vec![zero_vec(a); binom(l, deg)] }
    }

    /// Builds a cochain from its values on the increasing tuples.
    pub fn from_fn(deg: usize, l: usize, a: usize, mut f: impl FnMut(&[usize]) -> Vec<Q>) -> Self {
        let values = increasing_tuples(l, deg).iter().map(|t| f(t)).collect::<Vec<_>>();
        assert!(values.iter().all(|v| v.len() == a), "cochain values must have length a");
        Cochain { deg, l, a, values }
    }

    /// The 1-cochain `L_k ↦ column k of T` for an `a x l` matrix `T`.
    pub fn from_matrix(t: &Matrix) -> Self {
        Cochain { deg: 1, l: t.cols(), a: t.rows(), values: t.to_cols() }
    }

    /// The `a x l` matrix of a 1-cochain.
    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.deg, 1, "to_matrix needs a 1-cochain");
        Matrix::from_cols(&self.values, self.a).expect("length a")
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn a(&self) -> usize {
        self.a
    }

    /// Values on the increasing tuples, in lexicographic order.
    pub fn values(&self) -> &[Vec<Q>] {
        &self.values
    }

    /// Value on an arbitrary index tuple (alternating extension).
    pub fn eval(&self, idx: &[usize]) -> Vec<Q> {
        assert_eq!(idx.len(), self.deg);
        match sort_with_sign(idx) {
            None => zero_vec(self.a),
            Some((s, odd)) => {
                let v = &self.values[tuple_rank(self.l, &s)];
                if odd {
                    v.iter().map(|x| -x.clone()).collect()
                } else {
                    v.clone()
                }
            }
        }
    }

    /// Value on `(x_1, ..., x_p)` for arbitrary vectors `x_i ∈ R^l`.
    pub fn eval_vectors(&self, xs: &[Vec<Q>]) -> Vec<Q> {
        let mut out = zero_vec(self.a);
        for (t, v) in increasing_tuples(self.l, self.deg).iter().zip(&self.values) {
            let minor = Matrix::from_fn(self.deg, self.deg, |r, c| xs[c][t[r]].clone());
            axpy(&mut out, &minor.det(), v);
        }
        out
    }

    /// Sets the value on `idx` (and implicitly on its permutations).
    pub fn set(&mut self, idx: &[usize], v: Vec<Q>) -> Result<()> {
        if idx.len() != self.deg {
            return Err(Error::dim(format!("index tuple {idx:?} has wrong length for degree {}", self.deg)));
        }
        if v.len() != self.a {
            return Err(Error::dim(format!("value at {idx:?} has length {}, expected {}", v.len(), self.a)));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.l) {
            return Err(Error::input(format!("index {bad} out of range for l = {}", self.l)));
        }
        let (s, odd) = sort_with_sign(idx).ok_or_else(|| Error::input(format!("repeated index in {idx:?}")))?;
        self.values[tuple_rank(self.l, &s)] = if odd { v.iter().map(|x| -x.clone()).collect() } else { v };
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vec(v))
    }

    fn same_space(&self, o: &Cochain) {
        assert_eq!((self.deg, self.l, self.a), (o.deg, o.l, o.a), "cochains live in different spaces");
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        self.same_space(o);
        let values = self.values.iter().zip(&o.values).map(|(x, y)| add_vec(x, y)).collect();
        self.with_values(values)
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        self.same_space(o);
        let values = self.values.iter().zip(&o.values).map(|(x, y)| sub_vec(x, y)).collect();
        self.with_values(values)
    }

    pub fn scale(&self, c: &Q) -> Cochain {
        let values = self.values.iter().map(|x| scale_vec(c, x)).collect();
        self.with_values(values)
    }

    fn with_values(&self, values: Vec<Vec<Q>>) -> Cochain {
        Cochain { deg: self.deg, l: self.l, a: self.a, values }
    }

    /// Composes every value with the `a' x a` matrix `m`.
    pub fn map_values(&self, m: &Matrix) -> Cochain {
        assert_eq!(m.cols(), self.a);
        Cochain { deg: self.deg, l: self.l, a: m.rows(), values: self.values.iter().map(|v| m.mul_vec(v)).collect() }
    }

    /// `(S^*c)(L_1, ..., L_p) = c(S L_1, ..., S L_p)` for an `l x l'` matrix `S`.
    pub fn pullback(&self, s: &Matrix) -> Cochain {
        assert_eq!(s.rows(), self.l);
        let new_l = s.cols();
        let tuples = increasing_tuples(self.l, self.deg);
        Cochain::from_fn(self.deg, new_l, self.a, |i| {
            let mut out = zero_vec(self.a);
            for (j, v) in tuples.iter().zip(&self.values) {
                axpy(&mut out, &s.submatrix(j, i).det(), v);
            }
            out
        })
    }

    /// Coordinates in the basis `(tuple, a-index)`, tuple-major.
    pub fn to_flat(&self) -> Vec<Q> {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn from_flat(deg: usize, l: usize, a: usize, flat: &[Q]) -> Cochain {
        assert_eq!(flat.len(), binom(l, deg) * a);
        let values = if a == 0 { vec![Vec::new(); binom(l, deg)] } else { flat.chunks(a).map(<[Q]>::to_vec).collect() };
        Cochain { deg, l, a, values }
    }

    pub fn to_json(&self) -> CochainJson {
        let entries = increasing_tuples(self.l, self.deg)
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| !is_zero_vec(v))
            .map(|(idx, v)| EntryJson { idx, v: EntryValue::Vector(to_rats(v)) })
            .collect();
        CochainJson { deg: self.deg, entries }
    }

    pub fn from_json(j: CochainJson, l: usize, a: usize, what: &str) -> Result<Cochain> {
        let mut c = Cochain::zero(j.deg, l, a);
        for (n, e) in j.entries.into_iter().enumerate() {
            let v = match e.v {
                EntryValue::Vector(v) => from_rats(v),
                EntryValue::Scalar(_) => {
                    return Err(Error::input(format!("{what}.entries[{n}]: expected a vector value")));
                }
            };
            c.set(&e.idx, v).map_err(|err| Error::input(format!("{what}.entries[{n}]: {err}")))?;
        }
        Ok(c)
    }
}

/// A scalar alternating `p`-form on `R^l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarForm {
    deg: usize,
    l: usize,
    values: Vec<Q>,
}

impl ScalarForm {
    pub fn zero(deg: usize, l: usize) -> Self {
        ScalarForm { deg, l, values: vec![Q::zero(); binom(l, deg)] }
    }

    pub fn from_fn(deg: usize, l: usize, mut f: impl FnMut(&[usize]) -> Q) -> Self {
        ScalarForm { deg, l, values: increasing_tuples(l, deg).iter().map(|t| f(t)).collect() }
    }

    /// `Z_0 ∧ ... ∧ Z_{l-1}` style monomial `Z_{i_1} ∧ ... ∧ Z_{i_p}`.
    pub fn monomial(l: usize, idx: &[usize]) -> Self {
        let mut f = ScalarForm::zero(idx.len(), l);
        f.set(idx, Q::one()).expect("valid monomial");
        f
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn eval(&self, idx: &[usize]) -> Q {
        match sort_with_sign(idx) {
            None => Q::zero(),
            Some((s, odd)) => {
                let v = self.values[tuple_rank(self.l, &s)].clone();
                if odd {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn eval_vectors(&self, xs: &[Vec<Q>]) -> Q {
        let mut out = Q::zero();
        for (t, v) in increasing_tuples(self.l, self.deg).iter().zip(&self.values) {
            if !v.is_zero() {
                let minor = Matrix::from_fn(self.deg, self.deg, |r, c| xs[c][t[r]].clone());
                out += minor.det() * v;
            }
        }
        out
    }

    pub fn set(&mut self, idx: &[usize], v: Q) -> Result<()> {
        if idx.len() != self.deg {
            return Err(Error::dim(format!("index tuple {idx:?} has wrong length for degree {}", self.deg)));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.l) {
            return Err(Error::input(format!("index {bad} out of range for l = {}", self.l)));
        }
        let (s, odd) = sort_with_sign(idx).ok_or_else(|| Error::input(format!("repeated index in {idx:?}")))?;
        self.values[tuple_rank(self.l, &s)] = if odd { -v } else { v };
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &ScalarForm) -> ScalarForm {
        assert_eq!((self.deg, self.l), (o.deg, o.l));
        ScalarForm { deg: self.deg, l: self.l, values: add_vec(&self.values, &o.values) }
    }

    pub fn sub(&self, o: &ScalarForm) -> ScalarForm {
        assert_eq!((self.deg, self.l), (o.deg, o.l));
        ScalarForm { deg: self.deg, l: self.l, values: sub_vec(&self.values, &o.values) }
    }

    pub fn scale(&self, c: &Q) -> ScalarForm {
        ScalarForm { deg: self.deg, l: self.l, values: scale_vec(c, &self.values) }
    }

    /// `(S^*f)(L_1, ..., L_p) = f(S L_1, ..., S L_p)`.
    pub fn pullback(&self, s: &Matrix) -> ScalarForm {
        assert_eq!(s.rows(), self.l);
        let tuples = increasing_tuples(self.l, self.deg);
        ScalarForm::from_fn(self.deg, s.cols(), |i| {
            let mut acc = Q::zero();
            for (j, v) in tuples.iter().zip(&self.values) {
                if !v.is_zero() {
                    acc += s.submatrix(j, i).det() * v;
                }
            }
            acc
        })
    }

    pub fn to_json(&self) -> CochainJson {
        let entries = increasing_tuples(self.l, self.deg)
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(idx, v)| EntryJson { idx, v: EntryValue::Scalar(Rat(v.clone())) })
            .collect();
        CochainJson { deg: self.deg, entries }
    }

    pub fn from_json(j: CochainJson, l: usize, what: &str) -> Result<ScalarForm> {
        let mut f = ScalarForm::zero(j.deg, l);
        for (n, e) in j.entries.into_iter().enumerate() {
            let v = match e.v {
                EntryValue::Scalar(v) => v.0,
                EntryValue::Vector(mut v) if v.len() == 1 => v.pop().expect("one entry").0,
                EntryValue::Vector(_) => {
                    return Err(Error::input(format!("{what}.entries[{n}]: expected a scalar value")));
                }
            };
            f.set(&e.idx, v).map_err(|err| Error::input(format!("{what}.entries[{n}]: {err}")))?;
        }
        Ok(f)
    }
}

/// Wire form of cochains and scalar forms; indices are 0-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainJson {
    pub deg: usize,
    #[serde(default)]
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub idx: Vec<usize>,
    pub v: EntryValue,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryValue {
    Vector(Vec<Rat>),
    Scalar(Rat),
}

fn check_rep(rep: &Rep, c: &Cochain) -> Result<()> {
    if c.l != rep.l || c.a != rep.a {
        return Err(Error::dim(format!(
            "cochain on (l={}, a={}) does not match representation (l={}, a={})",
            c.l, c.a, rep.l, rep.a
        )));
    }
    Ok(())
}

/// `dτ(L_1, ..., L_{p+1}) = Σ_i (-1)^{i-1} ρ(L_i) τ(..., L̂_i, ...)`.
pub fn differential(rep: &Rep, c: &Cochain) -> Result<Cochain> {
    check_rep(rep, c)?;
    let p = c.deg;
    Ok(Cochain::from_fn(p + 1, rep.l, rep.a, |idx| {
        let mut out = zero_vec(rep.a);
        let mut rest = Vec::with_capacity(p);
        for i in 0..=p {
            rest.clear();
            rest.extend(idx.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &x)| x));
            let v = rep.rho[idx[i]].mul_vec(&c.values[tuple_rank(rep.l, &rest)]);
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            axpy(&mut out, &sign, &v);
        }
        out
    }))
}

/// Matrix of `d: C^p -> C^{p+1}` in the flat coordinates of [`Cochain::to_flat`].
pub fn differential_matrix(rep: &Rep, p: usize) -> Matrix {
    let n_in = binom(rep.l, p) * rep.a;
    let n_out = binom(rep.l, p + 1) * rep.a;
    let cols: Vec<Vec<Q>> = (0..n_in)
        .map(|k| {
            let mut flat = zero_vec(n_in);
            flat[k] = Q::one();
            let c = Cochain::from_flat(p, rep.l, rep.a, &flat);
            differential(rep, &c).expect("matching shapes").to_flat()
        })
        .collect();
    Matrix::from_cols(&cols, n_out).expect("consistent shapes")
}

/// `<x ∧ y>_a`: the wedge product followed by the inner product of `a`.
///
/// On increasing `L_{i_1}, ..., L_{i_{p+q}}` this is the signed sum over
/// `(p, q)`-shuffles `σ` of `<x(L_σ(1..p)), y(L_σ(p+1..))>_a`.
pub fn wedge_inner(rep: &Rep, x: &Cochain, y: &Cochain) -> Result<ScalarForm> {
    check_rep(rep, x)?;
    check_rep(rep, y)?;
    let (p, q) = (x.deg, y.deg);
    let shuffles: Vec<(Vec<usize>, Vec<usize>, bool)> = increasing_tuples(p + q, p)
        .into_iter()
        .map(|s| {
            let rest: Vec<usize> = (0..p + q).filter(|i| !s.contains(i)).collect();
            let odd = s.iter().enumerate().map(|(i, &si)| si - i).sum::<usize>() % 2 == 1;
            (s, rest, odd)
        })
        .collect();
    // y values lowered once by the Gram matrix
    let y_low: Vec<Vec<Q>> = y.values.iter().map(|v| rep.gram_a.mul_vec(v)).collect();
    Ok(ScalarForm::from_fn(p + q, rep.l, |idx| {
        let mut acc = Q::zero();
        for (s, rest, odd) in &shuffles {
            let xi: Vec<usize> = s.iter().map(|&t| idx[t]).collect();
            let yi: Vec<usize> = rest.iter().map(|&t| idx[t]).collect();
            let term = dot(&x.values[tuple_rank(rep.l, &xi)], &y_low[tuple_rank(rep.l, &yi)]);
            if *odd {
                acc -= term;
            } else {
                acc += term;
            }
        }
        acc
    }))
}

/// `dα = 0`.
pub fn check_cocycle(rep: &Rep, alpha: &Cochain) -> Result<bool> {
    Ok(differential(rep, alpha)?.is_zero())
}

/// The quadratic condition, evaluated literally on every increasing 4-tuple:
/// `<α(1,2),α(3,4)> + <α(2,3),α(1,4)> + <α(3,1),α(2,4)> = 0`.
pub fn check_ek(rep: &Rep, alpha: &Cochain) -> Result<bool> {
    check_rep(rep, alpha)?;
    if alpha.deg != 2 {
        return Err(Error::input("the quadratic condition applies to 2-cochains"));
    }
    let ip = |a: [usize; 2], b: [usize; 2]| rep.inner(&alpha.eval(&a), &alpha.eval(&b));
    Ok(increasing_tuples(rep.l, 4).iter().all(|t| {
        let (l1, l2, l3, l4) = (t[0], t[1], t[2], t[3]);
        (ip([l1, l2], [l3, l4]) + ip([l2, l3], [l1, l4]) + ip([l3, l1], [l2, l4])).is_zero()
    }))
}

/// `½ <α ∧ α>_a = 0`.
pub fn cup_selfcheck(rep: &Rep, alpha: &Cochain) -> Result<bool> {
    Ok(wedge_inner(rep, alpha, alpha)?.scale(&qf(1, 2)).is_zero())
}

/// The right action `(α, γ)τ = (α + dτ, γ + <(α + ½dτ) ∧ τ>_a)`.
pub fn act(rep: &Rep, alpha: &Cochain, gamma: &ScalarForm, tau: &Cochain) -> Result<(Cochain, ScalarForm)> {
    if alpha.deg != 2 || gamma.deg != 3 || tau.deg != 1 {
        return Err(Error::input("act expects (2-cochain, 3-form, 1-cochain)"));
    }
    if gamma.l != rep.l {
        return Err(Error::dim("3-form does not match l"));
    }
    let dtau = differential(rep, tau)?;
    let half = alpha.add(&dtau.scale(&qf(1, 2)));
    let shift = wedge_inner(rep, &half, tau)?;
    Ok((alpha.add(&dtau), gamma.add(&shift)))
}

/// The invariants `a^l = ∩ ker ρ_j` and their orthogonal complement.
///
/// Only Euclidean `a` is supported: there the nil-subspace of the action
/// is exactly the space of invariants.
pub fn nil_split(rep: &Rep) -> Result<(Vec<Vec<Q>>, Vec<Vec<Q>>)> {
    if !rep.gram_a.signature()?.is_positive_definite() {
        return Err(Error::unsupported("nil_split requires a positive definite gramA"));
    }
    let inv = rep.invariants();
    let comp = if inv.is_empty() {
        Matrix::identity(rep.a).to_rows()
    } else {
        let b = Matrix::from_rows(inv.clone(), rep.a)?;
        Matrix::from_rows(b.mul(&rep.gram_a).nullspace(), rep.a)?.row_space().to_rows()
    };
    Ok((inv, comp))
}

/// The span `W = <α ∧ C^1(l, a^l)>_a ⊆ Λ^3 l^*`, as the rows of an rref matrix
/// in the coordinates of [`ScalarForm::values`].
pub fn wedge_span_invariant(rep: &Rep, alpha: &Cochain) -> Result<Matrix> {
    check_rep(rep, alpha)?;
    let inv = rep.invariants();
    let n3 = binom(rep.l, 3);
    let mut rows = Vec::new();
    for b in &inv {
        for i in 0..rep.l {
            let mut tau = Cochain::zero(1, rep.l, rep.a);
            tau.set(&[i], b.clone())?;
            rows.push(wedge_inner(rep, alpha, &tau)?.values);
        }
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, n3));
    }
    Ok(Matrix::from_rows(rows, n3)?.row_space())
}

/// Canonical representative of `γ` modulo `<α ∧ C^1(l, a^l)>_a`.
///
/// `γ` is reduced against the rref of that span, which zeroes its pivot
/// coordinates (lexicographic order of the basis forms `Z_i ∧ Z_j ∧ Z_k`).
pub fn gamma_orbit_reduce(rep: &Rep, alpha: &Cochain, gamma: &ScalarForm) -> Result<ScalarForm> {
    if gamma.deg != 3 || gamma.l != rep.l {
        return Err(Error::dim("gamma must be a 3-form on l"));
    }
    let inv = rep.invariants();
    let inv_space = if inv.is_empty() { None } else { Some(Matrix::from_rows(inv.clone(), rep.a)?) };
    for v in alpha.values() {
        let inside = match &inv_space {
            _ if is_zero_vec(v) => true,
            None => false,
            Some(b) => b.vstack(&Matrix::from_rows(vec![v.clone()], rep.a)?).rank() == inv.len(),
        };
        if !inside {
            return Err(Error::input("alpha is not valued in the invariants of rho"));
        }
    }
    let w = wedge_span_invariant(rep, alpha)?;
    let (_, pivots) = w.rref_with_pivots();
    let mut g = gamma.values.clone();
    for (r, &p) in pivots.iter().enumerate() {
        let c = g[p].clone();
        if !c.is_zero() {
            axpy(&mut g, &(-c), w.row(r));
        }
    }
    Ok(ScalarForm { deg: 3, l: rep.l, values: g })
}
