//! Decomposability of twofold extensions: verification of explicit
//! splittings and a decision procedure for Euclidean `a`.
//!
//! A witness consists of splittings `a = a_1 ⊕ a_2` (orthogonal) and
//! `l = l_1 ⊕ l_2` together with maps `T_1: l_1 -> a_2`, `T_2: l_2 -> a_1`
//! such that, with `L_i ∈ l_i`,
//!
//! * (i)   `ρ = ρ_1 ⊕ ρ_2`: `a_i` is invariant and `ρ(l_i)` kills `a_{3-i}`;
//! * (ii)  `α(l_i, l_i) ⊆ a_i`;
//! * (iii) `α(L_1, L_2) = L_1 T_2 L_2 - L_2 T_1 L_1` and
//!   `γ(L_1, L_1', L_2) = <α(L_1, L_1'), T_2 L_2> + <α(L_1', L_2), T_1 L_1>`,
//!   `γ(L_2, L_2', L_1) = <α(L_2, L_2'), T_1 L_1> + <α(L_2', L_1), T_2 L_2>`.
//!
//! Acting with `-(T_1 + T_2)` then makes `(α, γ)` block diagonal, and the
//! induced ideal `ann(l_2) ⊕ a_1 ⊕ l_1` is carried back by `Ψ_τ`.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{Row, WeightMatrix};
use crate::cochain::{differential_matrix, nil_split, Cochain};
use crate::error::{Error, Result};
use crate::json::{from_rats, matrix_from_json, matrix_to_json, to_rats, Rat};
use crate::liecore::Subspace;
use crate::linalg::{is_zero_vec, q, sub_vec, unit_vec, zero_vec, Matrix, Q};
use crate::twofold::{psi_matrix, regularity, TwofoldData};

/// Splittings of `a` and `l` plus the maps `T_1`, `T_2`.
///
/// `t1` is `dim a x dim l_1`; its column `j` is `T_1` of the `j`-th basis
/// vector of `l_1` (likewise for `t2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompWitness {
    pub a1: Vec<Vec<Q>>,
    pub a2: Vec<Vec<Q>>,
    pub l1: Vec<Vec<Q>>,
    pub l2: Vec<Vec<Q>>,
    pub t1: Matrix,
    pub t2: Matrix,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct DecompWitnessJson {
    pub a1: Vec<Vec<Rat>>,
    pub a2: Vec<Vec<Rat>>,
    pub l1: Vec<Vec<Rat>>,
    pub l2: Vec<Vec<Rat>>,
    /// Images `T_1(l_1[j])`, one row per basis vector of `l_1`.
    pub t1: Vec<Vec<Rat>>,
    pub t2: Vec<Vec<Rat>>,
}

impl DecompWitness {
    pub fn to_json(&self) -> DecompWitnessJson {
        let vecs = |v: &[Vec<Q>]| v.iter().map(|x| to_rats(x)).collect();
        DecompWitnessJson {
            a1: vecs(&self.a1),
            a2: vecs(&self.a2),
            l1: vecs(&self.l1),
            l2: vecs(&self.l2),
            t1: matrix_to_json(&self.t1.transpose()),
            t2: matrix_to_json(&self.t2.transpose()),
        }
    }

    pub fn from_json(j: DecompWitnessJson, l: usize, a: usize) -> Result<Self> {
        let vecs = |v: Vec<Vec<Rat>>, n: usize, what: &str| -> Result<Vec<Vec<Q>>> {
            v.into_iter()
                .map(|x| {
                    let x = from_rats(x);
                    if x.len() == n {
                        Ok(x)
                    } else {
                        Err(Error::dim(format!("{what}: expected vectors of length {n}, found {}", x.len())))
                    }
                })
                .collect()
        };
        let l1 = vecs(j.l1, l, "l1")?;
        let l2 = vecs(j.l2, l, "l2")?;
        let t1 = matrix_from_json(j.t1, l1.len(), a, "t1")?.transpose();
        let t2 = matrix_from_json(j.t2, l2.len(), a, "t2")?.transpose();
        Ok(DecompWitness { a1: vecs(j.a1, a, "a1")?, a2: vecs(j.a2, a, "a2")?, l1, l2, t1, t2 })
    }
}

/// Outcome of checking a witness; names the first condition that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessCheck {
    Holds,
    Fails { condition: &'static str, detail: String },
}

impl WitnessCheck {
    pub fn holds(&self) -> bool {
        matches!(self, WitnessCheck::Holds)
    }
}

fn fails(condition: &'static str, detail: impl Into<String>) -> Result<WitnessCheck> {
    Ok(WitnessCheck::Fails { condition, detail: detail.into() })
}

fn spans_complement(first: &[Vec<Q>], second: &[Vec<Q>], n: usize) -> bool {
    let all: Vec<Vec<Q>> = first.iter().chain(second).cloned().collect();
    all.len() == n && (n == 0 || Matrix::from_rows(all, n).map(|m| m.rank() == n).unwrap_or(false))
}

fn validate(data: &TwofoldData, w: &DecompWitness) -> Result<()> {
    let (l, a) = (data.l(), data.a());
    let g = data.rep().gram_a();
    for (name, vs, n) in [("a1", &w.a1, a), ("a2", &w.a2, a), ("l1", &w.l1, l), ("l2", &w.l2, l)] {
        if vs.iter().any(|v| v.len() != n) {
            return Err(Error::dim(format!("{name}: vectors must have length {n}")));
        }
    }
    if !spans_complement(&w.a1, &w.a2, a) {
        return Err(Error::input("a1 and a2 must be complementary bases of a"));
    }
    if !spans_complement(&w.l1, &w.l2, l) {
        return Err(Error::input("l1 and l2 must be complementary bases of l"));
    }
    if w.a1.iter().any(|x| w.a2.iter().any(|y| !g.form(x, y).is_zero())) {
        return Err(Error::input("a1 and a2 are not orthogonal"));
    }
    if (w.a1.is_empty() && w.l1.is_empty()) || (w.a2.is_empty() && w.l2.is_empty()) {
        return Err(Error::input("both summands l_i ⊕ a_i must be nonzero"));
    }
    if w.t1.rows() != a || w.t1.cols() != w.l1.len() || w.t2.rows() != a || w.t2.cols() != w.l2.len() {
        return Err(Error::dim("t1 must be dim a x dim l1 and t2 must be dim a x dim l2"));
    }
    let (s1, s2) = (Subspace::span(a, &w.a1), Subspace::span(a, &w.a2));
    if !w.t1.to_cols().iter().all(|v| s2.contains(v)) {
        return Err(Error::input("T1 must take values in a2"));
    }
    if !w.t2.to_cols().iter().all(|v| s1.contains(v)) {
        return Err(Error::input("T2 must take values in a1"));
    }
    Ok(())
}

/// Checks conditions (i)–(iii) exactly. A malformed witness is an error.
pub fn verify_witness(data: &TwofoldData, w: &DecompWitness) -> Result<WitnessCheck> {
    validate(data, w)?;
    let a = data.a();
    let rep = data.rep();
    let g = rep.gram_a();
    let alpha = data.alpha();
    let gamma = data.gamma();
    let (s1, s2) = (Subspace::span(a, &w.a1), Subspace::span(a, &w.a2));

    for (k, r) in rep.rho().iter().enumerate() {
        for (name, basis, space) in [("a1", &w.a1, &s1), ("a2", &w.a2, &s2)] {
            if let Some(v) = basis.iter().find(|v| !space.contains(&r.mul_vec(v))) {
                return fails("i", format!("{name} is not invariant under ρ(L{}) (vector {v:?})", k + 1));
            }
        }
    }
    for (name, ls, other) in [("l1", &w.l1, &w.a2), ("l2", &w.l2, &w.a1)] {
        for x in ls.iter() {
            let rx = rep.rho_of(x);
            if other.iter().any(|v| !is_zero_vec(&rx.mul_vec(v))) {
                return fails("i", format!("ρ({name}) does not vanish on the opposite summand of a"));
            }
        }
    }

    for (name, ls, space) in [("l1", &w.l1, &s1), ("l2", &w.l2, &s2)] {
        for (i, x) in ls.iter().enumerate() {
            for y in &ls[i + 1..] {
                if !space.contains(&alpha.eval_vectors(&[x.clone(), y.clone()])) {
                    return fails("ii", format!("α({name} × {name}) leaves the matching summand of a"));
                }
            }
        }
    }

    let t1 = w.t1.to_cols();
    let t2 = w.t2.to_cols();
    for (i, x) in w.l1.iter().enumerate() {
        for (j, y) in w.l2.iter().enumerate() {
            let lhs = alpha.eval_vectors(&[x.clone(), y.clone()]);
            let rhs = sub_vec(&rep.rho_of(x).mul_vec(&t2[j]), &rep.rho_of(y).mul_vec(&t1[i]));
            if lhs != rhs {
                return fails("iii", format!("mixed α identity fails on (l1[{i}], l2[{j}])"));
            }
        }
    }
    let ip = |u: &[Q], v: &[Q]| g.form(u, v);
    let ev = |x: &Vec<Q>, y: &Vec<Q>| alpha.eval_vectors(&[x.clone(), y.clone()]);
    for (first, second, tf, ts, name) in [(&w.l1, &w.l2, &t1, &t2, "(l1, l1, l2)"), (&w.l2, &w.l1, &t2, &t1, "(l2, l2, l1)")] {
        for (i, x) in first.iter().enumerate() {
            for (i2, x2) in first.iter().enumerate().skip(i + 1) {
                for (j, y) in second.iter().enumerate() {
                    let lhs = gamma.eval_vectors(&[x.clone(), x2.clone(), y.clone()]);
                    let rhs = ip(&ev(x, x2), &ts[j]) + ip(&ev(x2, y), &tf[i]);
                    if lhs != rhs {
                        return fails("iii", format!("γ identity fails on {name} at ({i}, {i2}, {j})"));
                    }
                }
            }
        }
    }
    Ok(WitnessCheck::Holds)
}

/// The map `τ = T_1 + T_2` as a cochain `l -> a`.
pub fn witness_tau(data: &TwofoldData, w: &DecompWitness) -> Result<Cochain> {
    let l = data.l();
    let basis: Vec<Vec<Q>> = w.l1.iter().chain(&w.l2).cloned().collect();
    if l == 0 {
        return Ok(Cochain::zero(1, 0, data.a()));
    }
    let b = Matrix::from_cols(&basis, l)?;
    let b_inv = b.inverse().ok_or_else(|| Error::input("l1 and l2 must be complementary bases of l"))?;
    Ok(Cochain::from_matrix(&w.t1.hstack(&w.t2).mul(&b_inv)))
}

/// The ideal of `build(data)` induced by a witness: `ann(l_2) ⊕ a_1 ⊕ l_1`
/// in the block-diagonal model, transported by `Ψ_τ` with `τ = T_1 + T_2`.
pub fn induced_ideal(data: &TwofoldData, w: &DecompWitness) -> Result<Subspace> {
    validate(data, w)?;
    let (l, a) = (data.l(), data.a());
    let n = 2 * l + a;
    let tau = witness_tau(data, w)?;
    let ann = if w.l2.is_empty() {
        Matrix::identity(l).to_rows()
    } else {
        Matrix::from_rows(w.l2.clone(), l)?.nullspace()
    };
    let embed = |v: &[Q], off: usize| {
        let mut out = zero_vec(n);
        out[off..off + v.len()].clone_from_slice(v);
        out
    };
    let mut vecs: Vec<Vec<Q>> = ann.iter().map(|z| embed(z, 0)).collect();
    vecs.extend(w.a1.iter().map(|v| embed(v, l)));
    vecs.extend(w.l1.iter().map(|v| embed(v, l + a)));
    let psi = psi_matrix(data.rep(), &tau);
    let image: Vec<Vec<Q>> = vecs.iter().map(|v| psi.mul_vec(v)).collect();
    Ok(Subspace::span(n, &image))
}

/// Whether the induced ideal is a proper nondegenerate ideal of `build(data)`.
pub fn witness_ideal_is_nondegenerate(data: &TwofoldData, w: &DecompWitness) -> Result<bool> {
    let ideal = induced_ideal(data, w)?;
    let g = data.build();
    Ok(ideal.dim() > 0 && ideal.dim() < g.dim() && g.is_nondegenerate_ideal(&ideal))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Decomposable(Option<DecompWitness>),
    Indecomposable,
    /// The procedure does not cover this input; the reason is attached.
    Undecided(String),
}

/// Orthogonal projection onto `span(basis)` with respect to `g`.
fn projector(basis: &[Vec<Q>], g: &Matrix, n: usize) -> Result<Matrix> {
    if basis.is_empty() {
        return Ok(Matrix::zeros(n, n));
    }
    let b = Matrix::from_rows(basis.to_vec(), n)?;
    let inner = b.mul(g).mul(&b.transpose()).inverse().ok_or_else(|| Error::input("degenerate subspace"))?;
    Ok(b.transpose().mul(&inner).mul(&b).mul(g))
}

/// Moves `α` into the invariants: returns `(reduced, σ)` with
/// `reduced.act(σ) = data` and `reduced.alpha` valued in `a^l`.
pub fn reduce_to_invariants(data: &TwofoldData) -> Result<(TwofoldData, Cochain)> {
    let rep = data.rep();
    let (l, a) = (data.l(), data.a());
    let (inv, _) = nil_split(rep)?;
    let pi = Matrix::identity(a).sub(&projector(&inv, rep.gram_a(), a)?);
    let moving = data.alpha().map_values(&pi);
    let sigma = if moving.is_zero() {
        Cochain::zero(1, l, a)
    } else {
        let sol = differential_matrix(rep, 1)
            .solve(&moving.to_flat())?
            .ok_or_else(|| Error::unsupported("alpha cannot be moved into the invariants of rho"))?;
        Cochain::from_flat(1, l, a, &sol.particular)
    };
    let reduced = data.act(&sigma.scale(&q(-1)))?;
    Ok((reduced, sigma))
}

/// Weight-plane structure of a representation given in aligned
/// coordinates: a diagonal Gram matrix and every `ρ_k` supported on
/// disjoint coordinate pairs.
struct Aligned {
    /// `(p, q, c)`: plane on coordinates `p < q` whose weight is
    /// proportional to `c = (ρ_k[q][p])_k`.
    planes: Vec<(usize, usize, Vec<Q>)>,
    fixed: Vec<usize>,
}

fn aligned(data: &TwofoldData) -> Option<Aligned> {
    let rep = data.rep();
    let a = rep.a();
    let g = rep.gram_a();
    if (0..a).any(|i| (0..a).any(|j| i != j && !g[(i, j)].is_zero())) {
        return None;
    }
    let mut partner: Vec<Option<usize>> = vec![None; a];
    for r in rep.rho() {
        for i in 0..a {
            for j in 0..a {
                if i != j && !r[(i, j)].is_zero() {
                    match partner[i] {
                        None => partner[i] = Some(j),
                        Some(p) if p == j => {}
                        Some(_) => return None,
                    }
                }
            }
            if !r[(i, i)].is_zero() {
                return None;
            }
        }
    }
    let mut planes = Vec::new();
    let mut fixed = Vec::new();
    for i in 0..a {
        match partner[i] {
            None => fixed.push(i),
            Some(j) if partner[j] != Some(i) => return None,
            Some(j) if i < j => planes.push((i, j, rep.rho().iter().map(|r| r[(j, i)].clone()).collect())),
            Some(_) => {}
        }
    }
    Some(Aligned { planes, fixed })
}

/// `{u : α(u, .) = 0}` in `l`.
fn alpha_kernel(data: &TwofoldData) -> Subspace {
    let (l, a) = (data.l(), data.a());
    let mut rows = Vec::new();
    for k in 0..l {
        let vals: Vec<Vec<Q>> = (0..l).map(|j| data.alpha().eval(&[j, k])).collect();
        for r in 0..a {
            rows.push((0..l).map(|j| vals[j][r].clone()).collect::<Vec<Q>>());
        }
    }
    if rows.is_empty() {
        return Subspace::full(l);
    }
    Subspace::span(l, &Matrix::from_rows(rows, l).expect("row length").nullspace())
}

/// Completes `vs` to a basis with standard vectors, returning the added ones.
fn standard_complement(vs: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut current: Vec<Vec<Q>> = vs.to_vec();
    let mut added = Vec::new();
    for i in 0..n {
        let e = unit_vec(n, i);
        let mut trial = current.clone();
        trial.push(e.clone());
        if Matrix::from_rows(trial.clone(), n).expect("length").rank() == trial.len() {
            current = trial;
            added.push(e);
        }
    }
    added
}

fn nonregular_witness(data: &TwofoldData, l0: &[Q], a0: &[Q]) -> Result<DecompWitness> {
    let (l, a) = (data.l(), data.a());
    let g = data.rep().gram_a();
    if is_zero_vec(l0) {
        let a2 = Matrix::from_rows(vec![g.mul_vec(a0)], a)?.nullspace();
        return Ok(DecompWitness {
            a1: vec![a0.to_vec()],
            a2,
            l1: vec![],
            l2: Matrix::identity(l).to_rows(),
            t1: Matrix::zeros(a, 0),
            t2: Matrix::zeros(a, l),
        });
    }
    let l2 = standard_complement(&[l0.to_vec()], l);
    let minus_a0: Vec<Q> = a0.iter().map(|x| -x.clone()).collect();
    Ok(DecompWitness {
        a1: vec![],
        a2: Matrix::identity(a).to_rows(),
        l1: vec![l0.to_vec()],
        t1: Matrix::from_cols(&[minus_a0], a)?,
        t2: Matrix::zeros(a, l2.len()),
        l2,
    })
}

/// Adds the components of `σ` that cross the splitting to `T_1`, `T_2`, so
/// that a witness for `reduced` becomes one for `reduced.act(σ)`.
fn lift_witness(reduced: &TwofoldData, w: DecompWitness, sigma: &Cochain) -> Result<DecompWitness> {
    let a = reduced.a();
    let g = reduced.rep().gram_a();
    let s = sigma.to_matrix();
    let p1 = projector(&w.a1, g, a)?;
    let p2 = projector(&w.a2, g, a)?;
    let shift = |ls: &[Vec<Q>], p: &Matrix| -> Result<Matrix> {
        let cols: Vec<Vec<Q>> = ls.iter().map(|x| p.mul_vec(&s.mul_vec(x))).collect();
        if cols.is_empty() {
            Ok(Matrix::zeros(a, 0))
        } else {
            Matrix::from_cols(&cols, a)
        }
    };
    let t1 = w.t1.add(&shift(&w.l1, &p2)?);
    let t2 = w.t2.add(&shift(&w.l2, &p1)?);
    Ok(DecompWitness { t1, t2, ..w })
}

/// Searches a splitting with one side of `l` a line `R u`, for data in
/// aligned coordinates with `α` valued in the invariants.
fn line_split(data: &TwofoldData, al: &Aligned, kernels: &[Subspace], groups: &[Vec<usize>], mask: usize, line_side: usize, ker_alpha: &Subspace) -> Option<DecompWitness> {
    let (l, a) = (data.l(), data.a());
    let side_of = |gi: usize| if mask >> gi & 1 == 1 { 1 } else { 2 };
    let k_of = |s: usize| {
        groups.iter().enumerate().filter(|(gi, _)| side_of(*gi) == s).fold(Subspace::full(l), |acc, (gi, _)| acc.intersect(&kernels[gi]))
    };
    let (k_line, k_other) = (k_of(line_side), k_of(3 - line_side));
    let v = k_other.intersect(ker_alpha);
    let (u, p) = if k_line.dim() == l {
        let u = v.basis().into_iter().next()?;
        let p = standard_complement(&[u.clone()], l);
        (u, p)
    } else if k_line.dim() + 1 == l {
        let u = v.basis().into_iter().find(|x| !k_line.contains(x))?;
        (u, k_line.basis())
    } else {
        return None;
    };
    let g = data.rep().gram_a();
    let mut x = zero_vec(a);
    if l == 3 {
        let val = data.alpha().eval_vectors(&[p[0].clone(), p[1].clone()]);
        let target = data.gamma().eval_vectors(&[p[0].clone(), p[1].clone(), u.clone()]);
        if is_zero_vec(&val) {
            if !target.is_zero() {
                return None;
            }
        } else {
            let t = target / g.form(&val, &val);
            x = val.iter().map(|c| c * &t).collect();
        }
    }
    let mut sides: [Vec<Vec<Q>>; 2] = [vec![], vec![]];
    for (gi, members) in groups.iter().enumerate() {
        for &pl in members {
            let (pc, qc, _) = &al.planes[pl];
            sides[side_of(gi) - 1].push(unit_vec(a, *pc));
            sides[side_of(gi) - 1].push(unit_vec(a, *qc));
        }
    }
    for &f in &al.fixed {
        sides[2 - line_side].push(unit_vec(a, f));
    }
    let t_line = Matrix::from_cols(&[x], a).ok()?;
    let t_plane = Matrix::zeros(a, p.len());
    let [a1, a2] = sides;
    Some(if line_side == 1 {
        DecompWitness { a1, a2, l1: vec![u], l2: p, t1: t_line, t2: t_plane }
    } else {
        DecompWitness { a1, a2, l1: p, l2: vec![u], t1: t_plane, t2: t_line }
    })
}

/// Decides decomposability for Euclidean `a`.
///
/// Non-regular data (of dimension above two) are decomposable with an
/// explicit witness built from a central element outside `l^*`. Regular
/// data are first moved so that `α` takes values in the invariants; for
/// `l ≤ 3` and a representation in aligned coordinates the splittings are
/// then enumerated exhaustively (each group of weight planes with a
/// common kernel goes to one side, and one side of `l` is a line). Larger
/// `l` and non-aligned coordinates are reported as undecided.
pub fn euclidean_decomposable(data: &TwofoldData) -> Result<Decision> {
    if !data.rep().gram_a().signature()?.is_positive_definite() && data.a() > 0 {
        return Err(Error::unsupported("the Euclidean criterion needs a positive definite gramA"));
    }
    let (l, dim) = (data.l(), data.dim());
    if dim <= 1 {
        return Ok(Decision::Indecomposable);
    }
    if dim == 2 && l == 1 {
        return Ok(Decision::Decomposable(None));
    }
    let reg = regularity(data);
    if let Some((l0, a0)) = reg.witnesses.first() {
        let w = nonregular_witness(data, l0, a0)?;
        return match verify_witness(data, &w)? {
            WitnessCheck::Holds => Ok(Decision::Decomposable(Some(w))),
            WitnessCheck::Fails { condition, detail } => {
                Err(Error::Violated(format!("central-element witness fails condition ({condition}): {detail}")))
            }
        };
    }
    if l <= 1 {
        return Ok(Decision::Indecomposable);
    }
    if l >= 4 {
        return Ok(Decision::Undecided(format!("splitting search is implemented for dim l <= 3, got {l}")));
    }
    let (reduced, sigma) = reduce_to_invariants(data)?;
    let Some(al) = aligned(&reduced) else {
        return Ok(Decision::Undecided("the representation is not given in weight-aligned coordinates".into()));
    };
    let mut kernels: Vec<Subspace> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pi, (_, _, c)) in al.planes.iter().enumerate() {
        let ker = Subspace::span(l, &Matrix::from_rows(vec![c.clone()], l)?.nullspace());
        match kernels.iter().position(|k| *k == ker) {
            Some(gi) => groups[gi].push(pi),
            None => {
                kernels.push(ker);
                groups.push(vec![pi]);
            }
        }
    }
    if groups.len() > 16 {
        return Ok(Decision::Undecided("too many distinct weight kernels".into()));
    }
    let ker_alpha = alpha_kernel(&reduced);
    let found = (0..(2usize << groups.len())).into_par_iter().find_map_first(|code| {
        let (mask, line_side) = (code >> 1, 1 + (code & 1));
        line_split(&reduced, &al, &kernels, &groups, mask, line_side, &ker_alpha)
    });
    let Some(w) = found else {
        return Ok(Decision::Indecomposable);
    };
    let w = lift_witness(&reduced, w, &sigma)?;
    match verify_witness(data, &w)? {
        WitnessCheck::Holds => Ok(Decision::Decomposable(Some(w))),
        WitnessCheck::Fails { condition, detail } => {
            Err(Error::Violated(format!("splitting witness fails condition ({condition}): {detail}")))
        }
    }
}

fn rank_of(vs: &[Vec<Q>], n: usize) -> usize {
    if vs.is_empty() {
        0
    } else {
        Matrix::from_rows(vs.to_vec(), n).expect("length").rank()
    }
}

/// Points contained in the union of a subspace of dimension `big` and a
/// line, where candidate lines are spanned by the points themselves.
fn in_subspace_and_line(points: &[Vec<Q>], n: usize, big: usize) -> bool {
    if rank_of(points, n) <= big {
        return true;
    }
    points.iter().any(|p| {
        let rest: Vec<Vec<Q>> = points.iter().filter(|x| rank_of(&[p.clone(), (*x).clone()], n) > 1).cloned().collect();
        rank_of(&rest, n) <= big
    })
}

/// Membership of `λ` in the indecomposability set `Λ` of a table row.
pub fn lambda_admissible(row: Row, lambda: &WeightMatrix) -> Result<bool> {
    if lambda.l() != row.l() {
        return Err(Error::dim(format!("row {} needs weights on R^{}, got R^{}", row.id(), row.l(), lambda.l())));
    }
    let weights = lambda.weights();
    if weights.iter().any(|w| is_zero_vec(w)) {
        return Ok(false);
    }
    let l = row.l();
    Ok(match row {
        Row::L2K0 => !in_subspace_and_line(&weights, l, 1),
        Row::L3K0Gamma0 => !in_subspace_and_line(&weights, l, 2),
        Row::L3K1 => {
            let moving: Vec<Vec<Q>> = weights.iter().filter(|w| !w[2].is_zero()).cloned().collect();
            rank_of(&moving, l) > 1
        }
        Row::L2K1 | Row::L3K0Gamma1 | Row::L3K2 | Row::L3K3 => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{build_family, Family, FamilySpec};
    use crate::cochain::{Rep, ScalarForm};
    use crate::linalg::q;

    fn wm(rows: &[&[i64]]) -> WeightMatrix {
        WeightMatrix::new(Matrix::from_i64(rows)).unwrap()
    }

    fn table(row: Row, rows: &[&[i64]]) -> TwofoldData {
        let lambda = if rows.is_empty() { WeightMatrix::empty(row.l()) } else { wm(rows) };
        build_family(&FamilySpec::new(Family::Table(row), lambda).unwrap()).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(lambda_admissible(Row::L2K0, &wm(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap());
        assert!(!lambda_admissible(Row::L2K0, &wm(&[&[1, 0], &[2, 0], &[0, 1]])).unwrap());
        assert!(lambda_admissible(Row::L3K2, &wm(&[&[1, 0, 0]])).unwrap());
        assert!(lambda_admissible(Row::L3K3, &wm(&[&[0, 0, 1]])).unwrap());
        assert!(!lambda_admissible(Row::L3K1, &wm(&[&[1, 0, 1], &[2, 0, 2], &[0, 1, 0]])).unwrap());
        assert!(lambda_admissible(Row::L3K1, &wm(&[&[1, 0, 1], &[0, 1, 1]])).unwrap());
        assert!(!lambda_admissible(Row::L3K0Gamma0, &wm(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]])).unwrap());
        assert!(lambda_admissible(Row::L3K0Gamma0, &wm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]])).unwrap());
    }

    #[test]
    fn two_dimensional_is_decomposable() {
        let d = TwofoldData::plain(Rep::trivial(1, Matrix::zeros(0, 0)).unwrap());
        assert_eq!(euclidean_decomposable(&d).unwrap(), Decision::Decomposable(None));
    }

    #[test]
    fn block_diagonal_data_with_zero_maps() {
        // osc(1) ⊕ osc(2) on l = R^2, a = R^4: plane 1 moved by L1 only, plane 2 by L2 only.
        let d = table(Row::L2K0, &[&[1, 0], &[0, 2]]);
        let w = DecompWitness {
            a1: vec![unit_vec(4, 0), unit_vec(4, 2)],
            a2: vec![unit_vec(4, 1), unit_vec(4, 3)],
            l1: vec![unit_vec(2, 0)],
            l2: vec![unit_vec(2, 1)],
            t1: Matrix::zeros(4, 1),
            t2: Matrix::zeros(4, 1),
        };
        assert!(verify_witness(&d, &w).unwrap().holds());
        assert!(witness_ideal_is_nondegenerate(&d, &w).unwrap());
    }

    #[test]
    fn wrong_witness_is_rejected() {
        let d = table(Row::L2K0, &[&[1, 0], &[0, 1], &[1, 1]]);
        let w = DecompWitness {
            a1: vec![unit_vec(6, 0), unit_vec(6, 3)],
            a2: vec![unit_vec(6, 1), unit_vec(6, 2), unit_vec(6, 4), unit_vec(6, 5)],
            l1: vec![unit_vec(2, 0)],
            l2: vec![unit_vec(2, 1)],
            t1: Matrix::zeros(6, 1),
            t2: Matrix::zeros(6, 1),
        };
        assert!(!verify_witness(&d, &w).unwrap().holds());
    }

    #[test]
    fn malformed_witness_is_an_error() {
        let d = table(Row::L2K0, &[&[1, 0], &[0, 1], &[1, 1]]);
        let w = DecompWitness {
            a1: vec![unit_vec(6, 0)],
            a2: vec![unit_vec(6, 0)],
            l1: vec![unit_vec(2, 0)],
            l2: vec![unit_vec(2, 1)],
            t1: Matrix::zeros(6, 1),
            t2: Matrix::zeros(6, 1),
        };
        assert!(verify_witness(&d, &w).is_err());
    }

    #[test]
    fn euclidean_table_rows() {
        assert_eq!(euclidean_decomposable(&table(Row::L2K1, &[&[1, 2], &[3, -1]])).unwrap(), Decision::Indecomposable);
        assert_eq!(euclidean_decomposable(&table(Row::L2K0, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap(), Decision::Indecomposable);
        for rows in [&[&[1i64, 0][..], &[2, 0], &[0, 1]][..], &[&[1, 1], &[2, 2], &[-1, -1]]] {
            let d = table(Row::L2K0, rows);
            let Decision::Decomposable(Some(w)) = euclidean_decomposable(&d).unwrap() else {
                panic!("expected a witness for {rows:?}");
            };
            assert!(verify_witness(&d, &w).unwrap().holds());
            assert!(witness_ideal_is_nondegenerate(&d, &w).unwrap());
        }
        assert_eq!(euclidean_decomposable(&table(Row::L3K0Gamma1, &[])).unwrap(), Decision::Indecomposable);
        assert_eq!(euclidean_decomposable(&table(Row::L3K2, &[&[0, 1, 0]])).unwrap(), Decision::Indecomposable);
        let d = table(Row::L3K1, &[&[1, 0, 1], &[2, 0, 2], &[0, 1, 0]]);
        let Decision::Decomposable(Some(w)) = euclidean_decomposable(&d).unwrap() else { panic!() };
        assert!(witness_ideal_is_nondegenerate(&d, &w).unwrap());
    }

    #[test]
    fn nonregular_shortcut() {
        // An invariant vector orthogonal to the image of α: L0 = 0.
        let d = table(Row::L2K1, &[&[1, 1]]);
        let rep = d.rep().clone();
        let gram = rep.gram_a().clone().block_diag(&Matrix::identity(1));
        let rho: Vec<Matrix> = rep.rho().iter().map(|r| r.block_diag(&Matrix::zeros(1, 1))).collect();
        let big = Rep::new(gram, rho).unwrap();
        let alpha = Cochain::from_fn(2, 2, 4, |t| {
            let mut v = d.alpha().eval(t);
            v.push(q(0));
            v
        });
        let d2 = TwofoldData::new(big, alpha, ScalarForm::zero(3, 2)).unwrap();
        let Decision::Decomposable(Some(w)) = euclidean_decomposable(&d2).unwrap() else { panic!() };
        assert!(verify_witness(&d2, &w).unwrap().holds());
        assert!(witness_ideal_is_nondegenerate(&d2, &w).unwrap());

        // A zero-weight direction of l: L0 ≠ 0.
        let d3 = table(Row::L2K0, &[&[1, 0], &[2, 0]]);
        let Decision::Decomposable(Some(w)) = euclidean_decomposable(&d3).unwrap() else { panic!() };
        assert!(!w.l1.is_empty());
        assert!(witness_ideal_is_nondegenerate(&d3, &w).unwrap());
    }

    #[test]
    fn witness_json_round_trip() {
        let d = table(Row::L2K0, &[&[1, 0], &[0, 2]]);
        let Decision::Decomposable(Some(w)) = euclidean_decomposable(&d).unwrap() else { panic!() };
        let back = DecompWitness::from_json(w.to_json(), 2, 4).unwrap();
        assert_eq!(back, w);
    }
}
