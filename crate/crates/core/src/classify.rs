//! The weight families `d_{α,γ}(m, k, l, λ)`, their orbit invariants and
//! the classifiers for maximal isotropic centre (`l ≤ 3`) and index two.
//!
//! `ρ(L)` acts on `a = R^{2m} ⊕ R^k` with basis `X_1..X_m, Y_1..Y_m, A_1..A_k` by
//! `X_j ↦ λ^j(L) Y_j`, `Y_j ↦ -λ^j(L) X_j`, and trivially on the `A_i`.
//! The weight matrix stores `λ^j(L_i)` in row `j`, column `i`.
//!
//! Invariants are canonicalized under signed permutations of `R^m`. Every
//! invariant is encoded as a list of signed entries (projectors onto the
//! relevant subspaces, Plücker coordinates, scalars); for each permutation
//! the signs are chosen greedily over GF(2) to make the list
//! lexicographically largest, and the largest list over all permutations
//! fixes the representative.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cochain::{increasing_tuples, sort_with_sign, tuple_rank, Cochain, Rep, ScalarForm};
use crate::decomp::lambda_admissible;
use crate::error::{Error, Result};
use crate::json::{matrix_from_json, matrix_to_json, to_rats, Rat};
use crate::liecore::Subspace;
use crate::linalg::{dot, is_zero_vec, q, unit_vec, Matrix, Q};
use crate::twofold::{extension_equivalent, transport, witness_isomorphism, TwofoldData, WitnessOutcome};

pub const DEFAULT_ORBIT_BOUND: usize = 8;

/// `m x l` matrix of weights; row `j` is `λ^j`, column `i` is `λ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    lambda: Matrix,
}

impl WeightMatrix {
    pub fn new(lambda: Matrix) -> Result<Self> {
        Ok(WeightMatrix { lambda })
    }

    pub fn empty(l: usize) -> Self {
        WeightMatrix { lambda: Matrix::zeros(0, l) }
    }

    /// From the columns `λ_1, ..., λ_l ∈ R^m`.
    pub fn from_columns(cols: &[Vec<Q>], m: usize) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::dim("at least one column is needed"));
        }
        Ok(WeightMatrix { lambda: Matrix::from_cols(cols, m)? })
    }

    pub fn m(&self) -> usize {
        self.lambda.rows()
    }

    pub fn l(&self) -> usize {
        self.lambda.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.lambda
    }

    /// The weights `λ^j` (rows).
    pub fn weights(&self) -> Vec<Vec<Q>> {
        self.lambda.to_rows()
    }

    /// The columns `λ_i ∈ R^m`.
    pub fn columns(&self) -> Vec<Vec<Q>> {
        self.lambda.to_cols()
    }

    pub fn has_zero_weight(&self) -> bool {
        (0..self.m()).any(|j| is_zero_vec(self.lambda.row(j)))
    }

    /// `P λ S` for an `m x m` matrix `P` and an `l x l` matrix `S`.
    pub fn transform(&self, p: &Matrix, s: &Matrix) -> WeightMatrix {
        WeightMatrix { lambda: p.mul(&self.lambda).mul(s) }
    }
}

/// The rows of the classification table for `l = 2, 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Row {
    /// `l = 2, k = 0`, `α = γ = 0`.
    L2K0,
    /// `l = 2, k = 1`, `α = Z_1 ∧ Z_2 ⊗ A_1`.
    L2K1,
    /// `l = 3, k = 0`, `α = γ = 0`.
    L3K0Gamma0,
    /// `l = 3, k = 0`, `γ = Z_1 ∧ Z_2 ∧ Z_3`.
    L3K0Gamma1,
    /// `l = 3, k = 1`, `α = Z_1 ∧ Z_2 ⊗ A_1`.
    L3K1,
    /// `l = 3, k = 2`, `α = Z_1 ∧ Z_2 ⊗ A_1 + Z_1 ∧ Z_3 ⊗ A_2`.
    L3K2,
    /// `l = 3, k = 3`, `α = Z_1 ∧ Z_2 ⊗ A_1 + Z_1 ∧ Z_3 ⊗ A_2 + Z_2 ∧ Z_3 ⊗ A_3`.
    L3K3,
}

impl Row {
    pub const ALL: [Row; 7] = [Row::L2K0, Row::L2K1, Row::L3K0Gamma0, Row::L3K0Gamma1, Row::L3K1, Row::L3K2, Row::L3K3];

    pub fn id(self) -> &'static str {
        match self {
            Row::L2K0 => "l2k0",
            Row::L2K1 => "l2k1",
            Row::L3K0Gamma0 => "l3k0g0",
            Row::L3K0Gamma1 => "l3k0g1",
            Row::L3K1 => "l3k1",
            Row::L3K2 => "l3k2",
            Row::L3K3 => "l3k3",
        }
    }

    pub fn l(self) -> usize {
        match self {
            Row::L2K0 | Row::L2K1 => 2,
            _ => 3,
        }
    }

    pub fn k(self) -> usize {
        match self {
            Row::L2K0 | Row::L3K0Gamma0 | Row::L3K0Gamma1 => 0,
            Row::L2K1 | Row::L3K1 => 1,
            Row::L3K2 => 2,
            Row::L3K3 => 3,
        }
    }

    /// `(index pair, A-index)` terms of `α`.
    fn alpha_terms(self) -> &'static [([usize; 2], usize)] {
        match self {
            Row::L2K1 | Row::L3K1 => &[([0, 1], 0)],
            Row::L3K2 => &[([0, 1], 0), ([0, 2], 1)],
            Row::L3K3 => &[([0, 1], 0), ([0, 2], 1), ([1, 2], 2)],
            _ => &[],
        }
    }

    /// `α` with values in `R^{2m+k}`, the `A_i` placed after the planes.
    pub fn alpha(self, m: usize) -> Cochain {
        let a = 2 * m + self.k();
        let mut c = Cochain::zero(2, self.l(), a);
        for (idx, ai) in self.alpha_terms() {
            c.set(idx, unit_vec(a, 2 * m + ai)).expect("valid index");
        }
        c
    }

    pub fn gamma(self) -> ScalarForm {
        match self {
            Row::L3K0Gamma1 => ScalarForm::monomial(3, &[0, 1, 2]),
            _ => ScalarForm::zero(3, self.l()),
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Row {
    type Err = Error;
    fn from_str(s: &str) -> Result<Row> {
        Row::ALL.into_iter().find(|r| r.id() == s).ok_or_else(|| {
            let known: Vec<&str> = Row::ALL.iter().map(|r| r.id()).collect();
            Error::input(format!("unknown table row `{s}` (known: {})", known.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `osc(λ) = d_{0,0}(m, 0, l, λ)` for `l = 1, 2, 3`.
    Osc,
    /// `d(λ_1, λ_2)`: the row `l = 2, k = 1`.
    D,
    /// `d_A(R^{1, 2r+1}, R)` with `A = L_{2,λ}`; `λ` is `r x 1`.
    DA,
    Table(Row),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    family: Family,
    lambda: WeightMatrix,
}

/// Wire form: `{"family", "row", "m", "k", "l", "lambda"}`.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row: Option<String>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub l: Option<usize>,
    pub lambda: Vec<Vec<Rat>>,
}

impl FamilySpec {
    pub fn new(family: Family, lambda: WeightMatrix) -> Result<Self> {
        let l = lambda.l();
        let ok = match family {
            Family::Osc => (1..=3).contains(&l),
            Family::D => l == 2,
            Family::DA => l == 1,
            Family::Table(r) => l == r.l(),
        };
        if !ok {
            return Err(Error::dim(format!("weights on R^{l} do not fit family {}", family_name(family))));
        }
        Ok(FamilySpec { family, lambda })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn lambda(&self) -> &WeightMatrix {
        &self.lambda
    }

    /// The table row this spec belongs to, if any.
    pub fn row(&self) -> Option<Row> {
        match (self.family, self.l()) {
            (Family::Table(r), _) => Some(r),
            (Family::D, _) => Some(Row::L2K1),
            (Family::Osc, 2) => Some(Row::L2K0),
            (Family::Osc, 3) => Some(Row::L3K0Gamma0),
            _ => None,
        }
    }

    pub fn m(&self) -> usize {
        self.lambda.m()
    }

    pub fn l(&self) -> usize {
        self.lambda.l()
    }

    pub fn k(&self) -> usize {
        self.row().map_or(0, Row::k)
    }

    pub fn a(&self) -> usize {
        2 * self.m() + self.k() + if self.family == Family::DA { 2 } else { 0 }
    }

    /// The same family with weights `P λ S`.
    pub fn with_lambda(&self, lambda: WeightMatrix) -> Result<FamilySpec> {
        FamilySpec::new(self.family, lambda)
    }

    /// Membership in the indecomposability set of the family.
    pub fn admissible(&self) -> Result<bool> {
        match (self.row(), self.family) {
            (Some(r), _) => lambda_admissible(r, &self.lambda),
            (None, Family::Osc) => Ok(self.m() >= 1 && !self.lambda.has_zero_weight()),
            (None, _) => Ok(!self.lambda.has_zero_weight()),
        }
    }

    /// Coordinates of `X_1` and `Y_1` in `a`.
    fn plane_offsets(&self) -> (usize, usize) {
        let off = if self.family == Family::DA { 2 } else { 0 };
        (off, off + self.m())
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            family: family_name(self.family).into(),
            row: self.row().map(|r| r.id().to_string()),
            m: Some(self.m()),
            k: Some(self.k()),
            l: Some(self.l()),
            lambda: matrix_to_json(self.lambda.matrix()),
        }
    }

    pub fn from_json(j: FamilyJson) -> Result<Self> {
        let row = j.row.as_deref().map(Row::from_str).transpose()?;
        let family = match j.family.as_str() {
            "osc" => Family::Osc,
            "d" => Family::D,
            "dA" => Family::DA,
            "table" => Family::Table(row.ok_or_else(|| Error::input("family `table` needs a `row`"))?),
            other => return Err(Error::input(format!("unknown family `{other}` (known: osc, d, dA, table)"))),
        };
        let l = match (j.lambda.first(), j.l, family) {
            (Some(r), _, _) => r.len(),
            (None, Some(l), _) => l,
            (None, None, Family::Table(r)) => r.l(),
            (None, None, Family::D) => 2,
            (None, None, Family::DA) => 1,
            (None, None, Family::Osc) => return Err(Error::input("`l` is required when `lambda` is empty")),
        };
        let m = j.lambda.len();
        let lambda = WeightMatrix::new(matrix_from_json(j.lambda, m, l, "lambda")?)?;
        let spec = FamilySpec::new(family, lambda)?;
        if let (Some(r), Some(eff)) = (row, spec.row()) {
            if r != eff {
                return Err(Error::input(format!("row `{r}` does not match family `{}`", j.family)));
            }
        }
        for (name, given, actual) in [("m", j.m, spec.m()), ("k", j.k, spec.k()), ("l", j.l, spec.l())] {
            if let Some(g) = given {
                if g != actual {
                    return Err(Error::input(format!("`{name}` is {g} but the weights give {actual}")));
                }
            }
        }
        Ok(spec)
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Osc => "osc",
        Family::D => "d",
        Family::DA => "dA",
        Family::Table(_) => "table",
    }
}

/// The twofold data of a family member. Inadmissible weights are built
/// as well; check [`FamilySpec::admissible`] separately.
pub fn build_family(spec: &FamilySpec) -> Result<TwofoldData> {
    let (m, l, a) = (spec.m(), spec.l(), spec.a());
    let (xo, yo) = spec.plane_offsets();
    let mut gram = Matrix::identity(a);
    let mut rho = vec![Matrix::zeros(a, a); l];
    if spec.family == Family::DA {
        gram[(0, 0)] = q(-1);
        rho[0][(0, 1)] = q(1);
        rho[0][(1, 0)] = q(1);
    }
    for (i, r) in rho.iter_mut().enumerate() {
        for j in 0..m {
            let w = spec.lambda.matrix()[(j, i)].clone();
            r[(yo + j, xo + j)] = w.clone();
            r[(xo + j, yo + j)] = -w;
        }
    }
    let rep = Rep::new(gram, rho)?;
    match spec.row() {
        Some(row) => TwofoldData::new(rep, row.alpha(m), row.gamma()),
        None => Ok(TwofoldData::plain(rep)),
    }
}

/// `(g v)_i = ±v_{perm[i]}`, the sign negative where `negate[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub negate: Vec<bool>,
}

impl SignedPerm {
    pub fn identity(m: usize) -> Self {
        SignedPerm { perm: (0..m).collect(), negate: vec![false; m] }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.perm.iter().zip(&self.negate).map(|(&p, &n)| if n { -v[p].clone() } else { v[p].clone() }).collect()
    }

    /// The matrix with `P[i][perm[i]] = ±1`.
    pub fn matrix(&self) -> Matrix {
        let m = self.len();
        let mut p = Matrix::zeros(m, m);
        for (i, (&j, &n)) in self.perm.iter().zip(&self.negate).enumerate() {
            p[(i, j)] = if n { q(-1) } else { q(1) };
        }
        p
    }

    /// Reads a signed permutation matrix back.
    pub fn from_matrix(p: &Matrix) -> Option<Self> {
        let m = p.rows();
        let mut perm = Vec::with_capacity(m);
        let mut negate = Vec::with_capacity(m);
        for i in 0..m {
            let nz: Vec<usize> = (0..m).filter(|&j| !p[(i, j)].is_zero()).collect();
            if nz.len() != 1 || p[(i, nz[0])].abs() != Q::one() {
                return None;
            }
            perm.push(nz[0]);
            negate.push(p[(i, nz[0])].is_negative());
        }
        Some(SignedPerm { perm, negate })
    }

    /// `g M g^T`.
    pub fn conjugate(&self, mm: &Matrix) -> Matrix {
        Matrix::from_fn(self.len(), self.len(), |i, j| {
            let v = mm[(self.perm[i], self.perm[j])].clone();
            if self.negate[i] != self.negate[j] {
                -v
            } else {
                v
            }
        })
    }
}

/// The tagged canonical invariants; equality of values is equality of orbits.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InvariantValue {
    /// `span{λ_1, ..., λ_l} ⊆ R^m` as an rref basis.
    Grassmannian { span: Vec<Vec<Rat>> },
    /// `(E, ω)` with `ω = λ_1 ∧ ... ∧ λ_l` in Plücker coordinates; up to
    /// sign when `modulo_sign`.
    EOmega { span: Vec<Vec<Rat>>, omega: Vec<Rat>, modulo_sign: bool },
    /// `(E, F = Rλ_3, ±[λ_1 ∧ λ_2 mod F])`; the class is represented by
    /// the wedge of the projections of `λ_1, λ_2` orthogonal to `F`.
    EFOmega { span: Vec<Vec<Rat>>, line: Vec<Vec<Rat>>, omega: Vec<Rat> },
    /// `(B, v) mod R^*`, stored scale-free: `b = B / tr B` and
    /// `v_outer = tr B · v̂ v̂^T` with `v̂` the part of `λ_1` orthogonal to
    /// `im B` (for `B = 0`, the projector onto `R v̂`).
    BVModScale { b: Vec<Vec<Rat>>, v_outer: Vec<Vec<Rat>> },
    /// `(λ^i · λ^j)_{ij}`.
    Gram { gram: Vec<Vec<Rat>> },
    /// Absolute weights sorted ascending and scaled so the least is 1.
    Lorentz { lambda: Vec<Rat> },
    /// Absolute weights sorted ascending.
    SortedWeights { lambda: Vec<Rat> },
}

impl InvariantValue {
    pub fn tag(&self) -> &'static str {
        match self {
            InvariantValue::Grassmannian { .. } => "GRASSMANNIAN",
            InvariantValue::EOmega { .. } => "E_OMEGA",
            InvariantValue::EFOmega { .. } => "E_F_OMEGA",
            InvariantValue::BVModScale { .. } => "B_V_MOD_SCALE",
            InvariantValue::Gram { .. } => "GRAM",
            InvariantValue::Lorentz { .. } => "LORENTZ",
            InvariantValue::SortedWeights { .. } => "SORTED_WEIGHTS",
        }
    }
}

/// A canonical value together with the group element that produced it:
/// the value is computed from `perm · λ`; `scale` records the continuous
/// normalization where one was applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub value: InvariantValue,
    pub perm: SignedPerm,
    pub scale: Option<Q>,
}

#[derive(Serialize, Clone, Debug)]
pub struct CanonicalJson {
    pub invariant: InvariantValue,
    pub certificate: CertificateJson,
}

#[derive(Serialize, Clone, Debug)]
pub struct CertificateJson {
    pub perm: Vec<usize>,
    pub negate: Vec<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<Rat>,
}

impl Canonical {
    pub fn to_json(&self) -> CanonicalJson {
        CanonicalJson {
            invariant: self.value.clone(),
            certificate: CertificateJson {
                perm: self.perm.perm.clone(),
                negate: self.perm.negate.clone(),
                scale: self.scale.clone().map(Rat),
            },
        }
    }
}

/// Orthogonal projector onto `span(vs) ⊆ R^m`.
fn projector(vs: &[Vec<Q>], m: usize) -> Matrix {
    let basis = Subspace::span(m, vs);
    if basis.dim() == 0 {
        return Matrix::zeros(m, m);
    }
    let b = basis.basis_matrix();
    let inner = b.mul(&b.transpose()).inverse().expect("independent rows");
    b.transpose().mul(&inner).mul(b)
}

/// Plücker coordinates of `v_1 ∧ ... ∧ v_k` over increasing index tuples.
pub fn plucker(vs: &[Vec<Q>], m: usize) -> Vec<Q> {
    let k = vs.len();
    increasing_tuples(m, k).iter().map(|t| Matrix::from_fn(k, k, |r, c| vs[c][t[r]].clone()).det()).collect()
}

fn normalize_sign(v: Vec<Q>) -> Vec<Q> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Signed data to be canonicalized: symmetric matrices, scalars and
/// alternating tensors on `R^m`. Forms flagged `true` are only defined up
/// to a global sign.
struct KeySpec {
    m: usize,
    sym: Vec<Matrix>,
    scalars: Vec<Q>,
    forms: Vec<(usize, Vec<Q>, bool)>,
}

impl KeySpec {
    fn terms(&self, perm: &[usize]) -> Vec<(Q, u32)> {
        let m = self.m;
        let mut out = Vec::new();
        for s in &self.sym {
            for i in 0..m {
                for j in i..m {
                    let mask = if i == j { 0 } else { (1 << i) | (1 << j) };
                    out.push((s[(perm[i], perm[j])].clone(), mask));
                }
            }
        }
        for c in &self.scalars {
            out.push((c.clone(), 0));
        }
        for (deg, coords, eps) in &self.forms {
            for t in increasing_tuples(m, *deg) {
                let old: Vec<usize> = t.iter().map(|&i| perm[i]).collect();
                let (sorted, odd) = sort_with_sign(&old).expect("distinct indices");
                let v = coords[tuple_rank(m, &sorted)].clone();
                let mut mask: u32 = t.iter().fold(0, |acc, &i| acc ^ (1 << i));
                if *eps {
                    mask ^= 1 << m;
                }
                out.push((if odd { -v } else { v }, mask));
            }
        }
        out
    }
}

/// Chooses signs making the signed term list lexicographically largest.
/// Returns the list and the sign bits (bit `m` is the global sign).
fn best_signs(terms: Vec<(Q, u32)>) -> (Vec<Q>, u32) {
    let mut eqs: Vec<(u32, bool)> = Vec::new();
    let mut key = Vec::with_capacity(terms.len());
    for (v, mask) in terms {
        if v.is_zero() {
            key.push(v);
            continue;
        }
        let mut mm = mask;
        let mut par = false;
        for &(em, ev) in &eqs {
            if mm & (em & em.wrapping_neg()) != 0 {
                mm ^= em;
                par ^= ev;
            }
        }
        if mm == 0 {
            key.push(if par { -v } else { v });
        } else {
            let want = v.is_negative() ^ par;
            let pivot = mm & mm.wrapping_neg();
            for e in eqs.iter_mut() {
                if e.0 & pivot != 0 {
                    e.0 ^= mm;
                    e.1 ^= want;
                }
            }
            eqs.push((mm, want));
            key.push(v.abs());
        }
    }
    let bits = eqs.iter().filter(|e| e.1).fold(0u32, |acc, e| acc | (e.0 & e.0.wrapping_neg()));
    (key, bits)
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..m).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// The signed permutation maximizing the key, and the global sign.
fn canonical_element(spec: &KeySpec) -> (SignedPerm, bool) {
    let m = spec.m;
    let perms = permutations(m);
    let (best, _, bits) = perms
        .par_iter()
        .enumerate()
        .map(|(idx, p)| {
            let (key, bits) = best_signs(spec.terms(p));
            (idx, key, bits)
        })
        .reduce_with(|x, y| match x.1.cmp(&y.1) {
            std::cmp::Ordering::Less => y,
            std::cmp::Ordering::Greater => x,
            std::cmp::Ordering::Equal => {
                if x.0 <= y.0 {
                    x
                } else {
                    y
                }
            }
        })
        .expect("at least one permutation");
    let perm = perms[best].clone();
    let negate = (0..m).map(|i| bits >> i & 1 == 1).collect();
    (SignedPerm { perm, negate }, bits >> m & 1 == 1)
}

fn rows_json(vs: Vec<Vec<Q>>) -> Vec<Vec<Rat>> {
    vs.iter().map(|v| to_rats(v)).collect()
}

fn span_json(vs: &[Vec<Q>], m: usize) -> Vec<Vec<Rat>> {
    rows_json(Subspace::span(m, vs).basis())
}

fn row_invariant(row: Row, lambda: &WeightMatrix, bound: usize) -> Result<Canonical> {
    let m = lambda.m();
    if m > bound {
        return Err(Error::unsupported(format!("orbit search exceeded: m = {m} is above the bound {bound}")));
    }
    let cols = lambda.columns();
    let proj_e = projector(&cols, m);
    let mut scale = None;
    let spec = match row {
        Row::L2K0 | Row::L3K0Gamma0 => KeySpec { m, sym: vec![proj_e], scalars: vec![], forms: vec![] },
        Row::L2K1 => {
            let w = plucker(&cols, m);
            KeySpec { m, sym: vec![proj_e], scalars: vec![dot(&w, &w)], forms: vec![] }
        }
        Row::L3K0Gamma1 => KeySpec { m, sym: vec![proj_e], scalars: vec![], forms: vec![(3, plucker(&cols, m), false)] },
        Row::L3K1 => {
            let (mu, proj_f) = split_off_line(&cols);
            KeySpec { m, sym: vec![proj_e, proj_f], scalars: vec![], forms: vec![(2, plucker(&mu, m), true)] }
        }
        Row::L3K2 => {
            let (n, w, tr) = bv_parts(&cols, m);
            scale = Some(tr.clone());
            let flag = if tr.is_zero() { q(0) } else { q(1) };
            KeySpec { m, sym: vec![n, w], scalars: vec![flag], forms: vec![] }
        }
        Row::L3K3 => {
            let g = lambda.matrix().mul(&lambda.matrix().transpose());
            KeySpec { m, sym: vec![g], scalars: vec![], forms: vec![] }
        }
    };
    let (g, eps) = canonical_element(&spec);
    let moved: Vec<Vec<Q>> = cols.iter().map(|c| g.apply(c)).collect();
    let value = match row {
        Row::L2K0 | Row::L3K0Gamma0 => InvariantValue::Grassmannian { span: span_json(&moved, m) },
        Row::L2K1 => InvariantValue::EOmega {
            span: span_json(&moved, m),
            omega: to_rats(&normalize_sign(plucker(&moved, m))),
            modulo_sign: true,
        },
        Row::L3K0Gamma1 => {
            InvariantValue::EOmega { span: span_json(&moved, m), omega: to_rats(&plucker(&moved, m)), modulo_sign: false }
        }
        Row::L3K1 => {
            let (mu, _) = split_off_line(&moved);
            let mut omega = plucker(&mu, m);
            if eps {
                omega = omega.into_iter().map(|x| -x).collect();
            }
            let line = if is_zero_vec(&moved[2]) { vec![] } else { span_json(&moved[2..3], m) };
            InvariantValue::EFOmega { span: span_json(&moved, m), line, omega: to_rats(&omega) }
        }
        Row::L3K2 => InvariantValue::BVModScale {
            b: matrix_to_json(&g.conjugate(&spec.sym[0])),
            v_outer: matrix_to_json(&g.conjugate(&spec.sym[1])),
        },
        Row::L3K3 => InvariantValue::Gram { gram: matrix_to_json(&g.conjugate(&spec.sym[0])) },
    };
    Ok(Canonical { value, perm: g, scale })
}

/// Projections of `λ_1, λ_2` orthogonal to `λ_3`, and the projector onto `Rλ_3`.
fn split_off_line(cols: &[Vec<Q>]) -> (Vec<Vec<Q>>, Matrix) {
    let m = cols[2].len();
    let f = &cols[2];
    let ff = dot(f, f);
    if ff.is_zero() {
        return (cols[..2].to_vec(), Matrix::zeros(m, m));
    }
    let mu = cols[..2]
        .iter()
        .map(|c| {
            let t = dot(c, f) / &ff;
            c.iter().zip(f).map(|(x, y)| x - &t * y).collect()
        })
        .collect();
    (mu, projector(&cols[2..3], m))
}

/// `(B / tr B, tr B · v̂ v̂^T, tr B)` for the row `l = 3, k = 2`.
fn bv_parts(cols: &[Vec<Q>], m: usize) -> (Matrix, Matrix, Q) {
    let a = Matrix::from_cols(&cols[1..3], m).expect("two columns");
    let b = a.mul(&a.transpose());
    let tr: Q = (0..m).map(|i| b[(i, i)].clone()).sum();
    let p = projector(&cols[1..3], m);
    let vhat: Vec<Q> = cols[0].iter().zip(p.mul_vec(&cols[0])).map(|(x, y)| x - y).collect();
    let outer = Matrix::from_fn(m, m, |i, j| &vhat[i] * &vhat[j]);
    if tr.is_zero() {
        let nn = dot(&vhat, &vhat);
        let w = if nn.is_zero() { outer } else { outer.scale(&(Q::one() / nn)) };
        return (Matrix::zeros(m, m), w, tr);
    }
    (b.scale(&(Q::one() / &tr)), outer.scale(&tr), tr)
}

/// Sorts absolute weights ascending; `normalize` divides by the least.
fn sorted_weights(values: &[Q], normalize: bool) -> Result<Canonical> {
    if values.iter().any(Zero::is_zero) {
        return Err(Error::input("weights must be nonzero"));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].abs().cmp(&values[j].abs()).then(i.cmp(&j)));
    let negate = order.iter().map(|&i| values[i].is_negative()).collect();
    let least = order.first().map(|&i| values[i].abs()).unwrap_or_else(Q::one);
    let scale = if normalize { Q::one() / least } else { Q::one() };
    let lambda: Vec<Q> = order.iter().map(|&i| values[i].abs() * &scale).collect();
    let value = if normalize {
        InvariantValue::Lorentz { lambda: to_rats(&lambda) }
    } else {
        InvariantValue::SortedWeights { lambda: to_rats(&lambda) }
    };
    Ok(Canonical { value, perm: SignedPerm { perm: order, negate }, scale: normalize.then_some(scale) })
}

/// The canonical invariant of an admissible family member.
pub fn invariant(spec: &FamilySpec, bound: usize) -> Result<Canonical> {
    if !spec.admissible()? {
        return Err(Error::input("the weights are not admissible for this family (the algebra is decomposable)"));
    }
    match (spec.row(), spec.family) {
        (Some(r), _) => row_invariant(r, &spec.lambda, bound),
        (None, Family::DA) => sorted_weights(&spec.lambda.columns()[0], false),
        (None, _) => sorted_weights(&spec.lambda.columns()[0], true),
    }
}

/// Compares two canonical values; different tags are never equal.
pub fn orbits_equal(v1: &InvariantValue, v2: &InvariantValue) -> (bool, Option<String>) {
    if v1.tag() != v2.tag() {
        return (false, Some(format!("tag mismatch: {} vs {}", v1.tag(), v2.tag())));
    }
    (v1 == v2, None)
}

/// An explicit isomorphism `build(s_1) -> build(s_2)`.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub s: Matrix,
    pub u: Matrix,
    pub tau: Cochain,
    /// The verified isometric isomorphism (columns are images).
    pub f: Matrix,
}

#[derive(Clone, Debug)]
pub struct IsoOutcome {
    pub isomorphic: bool,
    pub reason: Option<String>,
    pub witness: Option<IsoWitness>,
}

fn family_class(spec: &FamilySpec) -> String {
    match (spec.row(), spec.family) {
        (Some(r), _) => format!("row {r}"),
        (None, Family::DA) => "dA".into(),
        _ => format!("osc (l = {})", spec.l()),
    }
}

/// Decides isomorphism of two admissible family members by comparing
/// canonical invariants; when they agree, tries to assemble `(S, U, τ)`
/// from the canonicalizing permutations and verifies it.
pub fn isomorphic_family(s1: &FamilySpec, s2: &FamilySpec, bound: usize) -> Result<IsoOutcome> {
    let no = |reason: String| Ok(IsoOutcome { isomorphic: false, reason: Some(reason), witness: None });
    if family_class(s1) != family_class(s2) {
        return no(format!("different families: {} vs {}", family_class(s1), family_class(s2)));
    }
    if (s1.m(), s1.k(), s1.l()) != (s2.m(), s2.k(), s2.l()) {
        return no(format!("different (m, k, l): {:?} vs {:?}", (s1.m(), s1.k(), s1.l()), (s2.m(), s2.k(), s2.l())));
    }
    let c1 = invariant(s1, bound)?;
    let c2 = invariant(s2, bound)?;
    let (equal, diag) = orbits_equal(&c1.value, &c2.value);
    if !equal {
        return no(diag.unwrap_or_else(|| "canonical invariants differ".into()));
    }
    let p = c2.perm.matrix().transpose().mul(&c1.perm.matrix());
    let witness = find_witness(s1, s2, &p)?;
    let reason = witness.is_none().then(|| "no explicit rational witness assembled".to_string());
    Ok(IsoOutcome { isomorphic: true, reason, witness })
}

/// Candidate `S` with `λ_2 S = P λ_1`, preferring the particular solution.
fn generic_candidates(lambda1: &Matrix, lambda2: &Matrix, p: &Matrix) -> Result<Vec<Matrix>> {
    let l = lambda1.cols();
    if lambda1.rows() == 0 {
        return Ok(vec![Matrix::identity(l)]);
    }
    let target = p.mul(lambda1);
    let mut cols = Vec::with_capacity(l);
    let mut kernel = Vec::new();
    for j in 0..l {
        match lambda2.solve(&target.col(j))? {
            Some(sol) => {
                kernel = sol.kernel;
                cols.push(sol.particular);
            }
            None => return Ok(vec![]),
        }
    }
    let x0 = Matrix::from_cols(&cols, l)?;
    let mut out = vec![x0.clone()];
    if !kernel.is_empty() {
        let n = Matrix::from_cols(&kernel, l)?;
        for t in 1..=6i64 {
            let y = Matrix::from_fn(kernel.len(), l, |i, j| q(((i as i64) * 7 + (j as i64) * 3 + t * 5) % 5 - 2));
            out.push(x0.add(&n.mul(&y)));
        }
    }
    Ok(out.into_iter().filter(|s| !s.det().is_zero()).collect())
}

/// Per column `j`, the affine space of `x` with `λ_2 x = target_j` and
/// `x_r = 0` for each `(r, j)` in `zeros`: a particular solution (as the
/// columns of `S_0`) and kernel vectors.
fn column_solutions(lambda2: &Matrix, target: &Matrix, zeros: &[(usize, usize)]) -> Result<Option<(Matrix, Vec<Vec<Vec<Q>>>)>> {
    let l = lambda2.cols();
    let mut cols = Vec::with_capacity(l);
    let mut kernels = Vec::with_capacity(l);
    for j in 0..l {
        let mut a = lambda2.clone();
        let mut b = target.col(j);
        for &(r, _) in zeros.iter().filter(|z| z.1 == j) {
            a = a.vstack(&Matrix::from_rows(vec![unit_vec(l, r)], l)?);
            b.push(Q::zero());
        }
        if a.rows() == 0 {
            cols.push(unit_vec(l, j));
            kernels.push((0..l).map(|i| unit_vec(l, i)).collect());
            continue;
        }
        match a.solve(&b)? {
            Some(sol) => {
                cols.push(sol.particular);
                kernels.push(sol.kernel);
            }
            None => return Ok(None),
        }
    }
    Ok(Some((Matrix::from_cols(&cols, l)?, kernels)))
}

/// Moves single columns of `S_0` along their kernels so that the minor on
/// `block` takes one of the `targets` (the minor is affine in each such
/// move). With no targets, only invertibility of `S` is sought.
fn tweak_minor(s0: &Matrix, kernels: &[Vec<Vec<Q>>], block: &[usize], targets: &[Q]) -> Vec<Matrix> {
    let minor = |s: &Matrix| s.submatrix(block, block).det();
    let with_col = |s: &Matrix, j: usize, v: &[Q]| {
        let mut t = s.clone();
        for (i, x) in v.iter().enumerate() {
            t[(i, j)] = x.clone();
        }
        t
    };
    let mut out = Vec::new();
    if targets.is_empty() {
        if !s0.det().is_zero() {
            out.push(s0.clone());
        }
        for (j, ker) in kernels.iter().enumerate() {
            for n in ker {
                for t in 1..=3 {
                    let col: Vec<Q> = s0.col(j).iter().zip(n).map(|(x, y)| x + y * q(t)).collect();
                    let s = with_col(s0, j, &col);
                    if !s.det().is_zero() {
                        out.push(s);
                        break;
                    }
                }
            }
        }
        return out;
    }
    let mut s0 = s0.clone();
    for (j, ker) in kernels.iter().enumerate() {
        let rank = s0.rank();
        'col: for n in ker {
            for t in 1..=3 {
                let col: Vec<Q> = s0.col(j).iter().zip(n).map(|(x, y)| x + y * q(t)).collect();
                let s = with_col(&s0, j, &col);
                if s.rank() > rank {
                    s0 = s;
                    break 'col;
                }
            }
        }
    }
    let s0 = &s0;
    let d0 = minor(s0);
    for target in targets {
        if &d0 == target {
            out.push(s0.clone());
            continue;
        }
        for &j in block {
            for n in &kernels[j] {
                let dn = minor(&with_col(s0, j, n));
                if dn.is_zero() {
                    continue;
                }
                let t = (target - &d0) / dn;
                let col: Vec<Q> = s0.col(j).iter().zip(n).map(|(x, y)| x + y * &t).collect();
                out.push(with_col(s0, j, &col));
            }
        }
    }
    out.retain(|s| !s.det().is_zero());
    out
}

/// A rational orthogonal `R` with `R src_j = dst_j` for all `j`, built from
/// reflections; `None` when no such isometry exists.
pub fn witt_extension(src: &[Vec<Q>], dst: &[Vec<Q>], n: usize) -> Option<Matrix> {
    let mut basis: Vec<(Vec<Q>, Vec<Q>)> = Vec::new();
    for (x, y) in src.iter().zip(dst) {
        let (mut e, mut f) = (x.clone(), y.clone());
        for (b, c) in &basis {
            let t = dot(&e, b) / dot(b, b);
            e = e.iter().zip(b).map(|(u, v)| u - &t * v).collect();
            f = f.iter().zip(c).map(|(u, v)| u - &t * v).collect();
        }
        if !is_zero_vec(&e) {
            basis.push((e, f));
        }
    }
    let mut r = Matrix::identity(n);
    for (e, f) in &basis {
        let u: Vec<Q> = r.mul_vec(e).iter().zip(f).map(|(x, y)| x - y).collect();
        let uu = dot(&u, &u);
        if uu.is_zero() {
            continue;
        }
        let h = Matrix::from_fn(n, n, |i, j| {
            let d = if i == j { Q::one() } else { Q::zero() };
            d - &u[i] * &u[j] * q(2) / &uu
        });
        r = h.mul(&r);
    }
    src.iter().zip(dst).all(|(x, y)| &r.mul_vec(x) == y).then_some(r)
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// `S = [[±1/c, 0], [s, c O]]` with `λ_2 S = target`; the scale comes from
/// `tr B` and `O` from a Witt extension.
fn l3k2_candidates(lambda2: &Matrix, target: &Matrix) -> Result<Vec<Matrix>> {
    let m = lambda2.rows();
    let a2 = lambda2.submatrix(&(0..m).collect::<Vec<_>>(), &[1, 2]);
    let a1 = target.submatrix(&(0..m).collect::<Vec<_>>(), &[1, 2]);
    let tr = |a: &Matrix| -> Q { (0..m).map(|i| dot(a.row(i), a.row(i))).sum() };
    let (t1, t2) = (tr(&a1), tr(&a2));
    if t2.is_zero() {
        // Only the first column carries weights: S = diag(r, 1/r, 1/r).
        let (v1, v2) = (target.col(0), lambda2.col(0));
        let Some(i) = v2.iter().position(|x| !x.is_zero()) else { return Ok(vec![]) };
        let r = &v1[i] / &v2[i];
        if !t1.is_zero() || r.is_zero() || v1.iter().zip(&v2).any(|(x, y)| x != &(y * &r)) {
            return Ok(vec![]);
        }
        let mut s = Matrix::identity(3).scale(&(Q::one() / &r));
        s[(0, 0)] = r;
        return Ok(vec![s]);
    }
    let Some(c) = rational_sqrt(&(t1 / t2)) else { return Ok(vec![]) };
    if c.is_zero() {
        return Ok(vec![]);
    }
    let dst: Vec<Vec<Q>> = a1.to_rows().iter().map(|r| r.iter().map(|x| x / &c).collect()).collect();
    let Some(r) = witt_extension(&a2.to_rows(), &dst, 2) else { return Ok(vec![]) };
    let block = r.transpose().scale(&c);
    let mut out = Vec::new();
    for sign in [1, -1] {
        let s00 = q(sign) / &c;
        let rhs: Vec<Q> = (0..m).map(|i| &target[(i, 0)] - &s00 * &lambda2[(i, 0)]).collect();
        let sol = if m == 0 { None } else { a2.solve(&rhs)? };
        let Some(sol) = sol else { continue };
        let mut s = Matrix::zeros(3, 3);
        s[(0, 0)] = s00;
        s[(1, 0)] = sol.particular[0].clone();
        s[(2, 0)] = sol.particular[1].clone();
        for i in 0..2 {
            for j in 0..2 {
                s[(1 + i, 1 + j)] = block[(i, j)].clone();
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Elements `S` of the stabilizer projection of the row (or of `GL(l)`)
/// with `λ_2 S = P λ_1`.
fn stabilizer_candidates(row: Option<Row>, lambda1: &Matrix, lambda2: &Matrix, p: &Matrix) -> Result<Vec<Matrix>> {
    let l = lambda1.cols();
    let target = p.mul(lambda1);
    let pm = |x: i64| vec![q(x), q(-x)];
    let (zeros, block, targets): (Vec<(usize, usize)>, Vec<usize>, Vec<Q>) = match row {
        Some(Row::L2K1) => (vec![], vec![0, 1], pm(1)),
        Some(Row::L3K0Gamma1) => (vec![], vec![0, 1, 2], vec![q(1)]),
        Some(Row::L3K1) => (vec![(0, 2), (1, 2)], vec![0, 1], pm(1)),
        Some(Row::L3K2) => return l3k2_candidates(lambda2, &target),
        Some(Row::L3K3) => {
            return Ok(witt_extension(&lambda2.to_rows(), &target.to_rows(), 3).map(|r| r.transpose()).into_iter().collect());
        }
        _ => (vec![], (0..l).collect(), vec![]),
    };
    Ok(match column_solutions(lambda2, &target, &zeros)? {
        Some((s0, kernels)) => tweak_minor(&s0, &kernels, &block, &targets),
        None => vec![],
    })
}

/// `U` sending plane `perm[i]` of the first algebra to plane `i` of the
/// second, and matching the `A`-blocks through `α`.
fn u_candidate(spec: &FamilySpec, d1: &TwofoldData, d2: &TwofoldData, g: &SignedPerm, s: &Matrix) -> Option<Matrix> {
    let (m, k, a) = (spec.m(), spec.k(), spec.a());
    let (xo, yo) = spec.plane_offsets();
    let mut u = Matrix::zeros(a, a);
    if spec.family == Family::DA {
        u[(0, 0)] = q(1);
        u[(1, 1)] = q(1);
    }
    for i in 0..m {
        let j = g.perm[i];
        u[(xo + i, xo + j)] = q(1);
        u[(yo + i, yo + j)] = if g.negate[i] { q(-1) } else { q(1) };
    }
    if k > 0 {
        let base = 2 * m;
        let pulled = d2.alpha().pullback(s);
        let m1 = Matrix::from_cols(&d1.alpha().values().iter().map(|v| v[base..].to_vec()).collect::<Vec<_>>(), k).ok()?;
        let m2 = Matrix::from_cols(&pulled.values().iter().map(|v| v[base..].to_vec()).collect::<Vec<_>>(), k).ok()?;
        let ua = m2.mul(&m1.transpose()).mul(&m1.mul(&m1.transpose()).inverse()?);
        for r in 0..k {
            for c in 0..k {
                u[(base + r, base + c)] = ua[(r, c)].clone();
            }
        }
    }
    Some(u)
}

fn find_witness(s1: &FamilySpec, s2: &FamilySpec, p: &Matrix) -> Result<Option<IsoWitness>> {
    let g = SignedPerm::from_matrix(p).expect("product of signed permutations");
    let d1 = build_family(s1)?;
    let d2 = build_family(s2)?;
    let mut candidates = stabilizer_candidates(s1.row(), s1.lambda.matrix(), s2.lambda.matrix(), p)?;
    candidates.extend(generic_candidates(s1.lambda.matrix(), s2.lambda.matrix(), p)?);
    for s in candidates {
        let Some(u) = u_candidate(s1, &d1, &d2, &g, &s) else { continue };
        let Ok(t) = transport(&d2, &s, &u) else { continue };
        if t.rep() != d1.rep() {
            continue;
        }
        let Some(tau) = extension_equivalent(&d1, &t)? else { continue };
        if let WitnessOutcome::Verified(f) = witness_isomorphism(&d1, &d2, &s, &u, &tau)? {
            return Ok(Some(IsoWitness { s, u, tau, f }));
        }
    }
    Ok(None)
}

/// Canonical descriptor for the index-two classes.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Index2Class {
    pub case: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Rat>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant: Option<InvariantValue>,
}

/// Classifies `d_{L_{2,λ}}` (case 1), `osc(λ_1, λ_2)` (case 2) and
/// `d(λ_1, λ_2)` (case 3). Inputs violating the conditions of their case
/// (which are decomposable) are rejected with the failing condition.
pub fn classify_index2(spec: &FamilySpec, bound: usize) -> Result<Index2Class> {
    let zero_weight = || spec.lambda.has_zero_weight();
    match (spec.family, spec.row()) {
        (Family::DA, _) => {
            if zero_weight() {
                return Err(Error::input("case 1 needs all weights of L_{2,λ} nonzero"));
            }
            let c = sorted_weights(&spec.lambda.columns()[0], false)?;
            let InvariantValue::SortedWeights { lambda } = c.value else { unreachable!() };
            Ok(Index2Class { case: 1, lambda: Some(lambda), invariant: None })
        }
        (_, Some(Row::L2K0)) => {
            if zero_weight() {
                return Err(Error::input("case 2: some index j has λ_1^j = λ_2^j = 0"));
            }
            if spec.m() < 3 {
                return Err(Error::input(format!("case 2 needs m >= 3, got m = {}", spec.m())));
            }
            if !lambda_admissible(Row::L2K0, &spec.lambda)? {
                return Err(Error::input("case 2: the weights lie in the union of two lines"));
            }
            Ok(Index2Class { case: 2, lambda: None, invariant: Some(row_invariant(Row::L2K0, &spec.lambda, bound)?.value) })
        }
        (_, Some(Row::L2K1)) => {
            if zero_weight() {
                return Err(Error::input("case 3: some index j has λ_1^j = λ_2^j = 0"));
            }
            Ok(Index2Class { case: 3, lambda: None, invariant: Some(row_invariant(Row::L2K1, &spec.lambda, bound)?.value) })
        }
        _ => Err(Error::input("not an index-two family: expected dA, osc with l = 2, or d")),
    }
}

/// Generators of the projection to `GL(l)` of the stabilizer of `(α, γ)`.
pub fn stabilizer_description(row: Row) -> &'static str {
    match row {
        Row::L2K0 | Row::L3K0Gamma0 => "GL(l)",
        Row::L2K1 => "S in GL(2) with det S = ±1",
        Row::L3K0Gamma1 => "S in GL(3) with det S = 1",
        Row::L3K1 => "S in GL(3) with S L3 = c L3 (c != 0) and det of the induced map on l/RL3 equal to ±1",
        Row::L3K2 => "S = [[±1/c, 0], [*, c O]] with O in O(2) acting on span{L2, L3}, c != 0",
        Row::L3K3 => "O(3)",
    }
}

/// A rational orthogonal matrix `(I - K)(I + K)^{-1}` for a random skew `K`,
/// followed by a random signed permutation.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut k = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = crate::fixtures::small_rational(rng);
            k[(i, j)] = x.clone();
            k[(j, i)] = -x;
        }
    }
    let id = Matrix::identity(n);
    let cayley = id.sub(&k).mul(&id.add(&k).inverse().expect("I + K is invertible for skew K"));
    crate::fixtures::signed_permutation(rng, n).mul(&cayley)
}

/// A random integer matrix of determinant `±1`.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut s = crate::fixtures::signed_permutation(rng, n);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            let mut e = Matrix::identity(n);
            e[(i, j)] = q(rng.gen_range(-2..=2));
            s = s.mul(&e);
        }
    }
    s
}

/// Samples `S` from the stabilizer projection of a row.
pub fn sample_stabilizer<R: Rng + ?Sized>(row: Row, rng: &mut R) -> Matrix {
    use crate::fixtures::{invertible, nonzero_rational, small_rational};
    match row {
        Row::L2K0 | Row::L3K0Gamma0 => invertible(rng, row.l()),
        Row::L2K1 => random_unimodular(rng, 2),
        Row::L3K0Gamma1 => {
            let mut s = random_unimodular(rng, 3);
            if s.det().is_negative() {
                for i in 0..3 {
                    s[(i, 0)] = -s[(i, 0)].clone();
                }
            }
            s
        }
        Row::L3K1 => {
            let b = random_unimodular(rng, 2);
            let mut s = Matrix::zeros(3, 3);
            for i in 0..2 {
                for j in 0..2 {
                    s[(i, j)] = b[(i, j)].clone();
                }
            }
            s[(2, 0)] = small_rational(rng);
            s[(2, 1)] = small_rational(rng);
            s[(2, 2)] = nonzero_rational(rng);
            s
        }
        Row::L3K2 => {
            let c = nonzero_rational(rng);
            let o = random_orthogonal(rng, 2).scale(&c);
            let mut s = Matrix::zeros(3, 3);
            s[(0, 0)] = if rng.gen_bool(0.5) { Q::one() / &c } else { -(Q::one() / &c) };
            s[(1, 0)] = small_rational(rng);
            s[(2, 0)] = small_rational(rng);
            for i in 0..2 {
                for j in 0..2 {
                    s[(1 + i, 1 + j)] = o[(i, j)].clone();
                }
            }
            s
        }
        Row::L3K3 => random_orthogonal(rng, 3),
    }
}

/// Random admissible weights for a row (rejection sampling).
pub fn random_admissible_lambda<R: Rng + ?Sized>(rng: &mut R, row: Row, m: usize) -> WeightMatrix {
    loop {
        let lambda = WeightMatrix { lambda: Matrix::from_fn(m, row.l(), |_, _| q(rng.gen_range(-3..=3))) };
        if lambda_admissible(row, &lambda).expect("matching l") {
            return lambda;
        }
    }
}

/// The smallest `m` for which a row admits weights.
pub fn min_m(row: Row) -> usize {
    match row {
        Row::L2K0 => 3,
        Row::L3K0Gamma0 => 4,
        Row::L3K1 => 2,
        _ => 0,
    }
}
