//! Twofold extensions `d_{α,γ}(a, l, ρ)`: construction, regularity,
//! extraction of twofold data from a concrete algebra, extension
//! equivalence and explicit isomorphisms.
//!
//! Basis order everywhere: `Z_1..Z_l` (the dual `l^*`), then `A_1..A_a`,
//! then `L_1..L_l`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cochain::{
    act, check_cocycle, check_ek, differential, differential_matrix, increasing_tuples, wedge_inner, Cochain,
    CochainJson, Rep, ScalarForm,
};
use crate::error::{Error, Result};
use crate::json::Rat;
use crate::liecore::{MetricLieAlgebra, Subspace};
use crate::linalg::{axpy, qf, unit_vec, zero_vec, Matrix, Signature, Q};

/// `(ρ, α, γ)` with `α` a cocycle satisfying the quadratic condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwofoldData {
    rep: Rep,
    alpha: Cochain,
    gamma: ScalarForm,
}

impl TwofoldData {
    pub fn new(rep: Rep, alpha: Cochain, gamma: ScalarForm) -> Result<Self> {
        let (l, a) = (rep.l(), rep.a());
        if alpha.deg() != 2 || alpha.l() != l || alpha.a() != a {
            return Err(Error::dim(format!("alpha must be a 2-cochain on l = {l} with values in dimension {a}")));
        }
        if gamma.deg() != 3 || gamma.l() != l {
            return Err(Error::dim(format!("gamma must be a 3-form on l = {l}")));
        }
        if rep.gram_a().rank() != a {
            return Err(Error::input("gramA is degenerate"));
        }
        if !check_cocycle(&rep, &alpha)? {
            return Err(Error::Violated("alpha is not a cocycle (d alpha != 0)".into()));
        }
        if !check_ek(&rep, &alpha)? {
            return Err(Error::Violated("alpha violates the quadratic condition (EK)".into()));
        }
        Ok(TwofoldData { rep, alpha, gamma })
    }

    /// `α = γ = 0`.
    pub fn plain(rep: Rep) -> Self {
        let (l, a) = (rep.l(), rep.a());
        TwofoldData { rep, alpha: Cochain::zero(2, l, a), gamma: ScalarForm::zero(3, l) }
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn alpha(&self) -> &Cochain {
        &self.alpha
    }

    pub fn gamma(&self) -> &ScalarForm {
        &self.gamma
    }

    pub fn l(&self) -> usize {
        self.rep.l()
    }

    pub fn a(&self) -> usize {
        self.rep.a()
    }

    pub fn dim(&self) -> usize {
        2 * self.l() + self.a()
    }

    /// Replaces `(α, γ)` by `(α, γ)τ`.
    pub fn act(&self, tau: &Cochain) -> Result<TwofoldData> {
        let (alpha, gamma) = act(&self.rep, &self.alpha, &self.gamma, tau)?;
        Ok(TwofoldData { rep: self.rep.clone(), alpha, gamma })
    }

    /// The metric Lie algebra `d_{α,γ}(a, l, ρ)`:
    ///
    /// * `l^*` is central,
    /// * `[A, A'] = <ρ(.)A, A'>`,
    /// * `[A, L] = <A, α(L, .)> - ρ(L)A`,
    /// * `[L, L'] = γ(L, L', .) + α(L, L')`,
    ///
    /// with `<Z, L> = Z(L)` and the Gram matrix of `a` on the middle block.
    pub fn build(&self) -> MetricLieAlgebra {
        let (l, a) = (self.l(), self.a());
        let n = 2 * l + a;
        let (za, aa, la) = (0, l, l + a);
        let g = self.rep.gram_a();
        let mut gram = Matrix::zeros(n, n);
        for k in 0..l {
            gram[(za + k, la + k)] = Q::one();
            gram[(la + k, za + k)] = Q::one();
        }
        for i in 0..a {
            for j in 0..a {
                gram[(aa + i, aa + j)] = g[(i, j)].clone();
            }
        }
        let rho = self.rep.rho();
        // ρ_k lowered: (G ρ_k)[j][i] = <A_j, ρ_k A_i>
        let rho_low: Vec<Matrix> = rho.iter().map(|r| g.mul(r)).collect();
        let alpha_low: Vec<Vec<Vec<Q>>> =
            (0..l).map(|p| (0..l).map(|q| g.mul_vec(&self.alpha.eval(&[p, q]))).collect()).collect();

        let mut brackets = Vec::new();
        for i in 0..a {
            for j in i + 1..a {
                let mut v = zero_vec(n);
                for k in 0..l {
                    v[za + k] = rho_low[k][(j, i)].clone();
                }
                brackets.push((aa + i, aa + j, v));
            }
            for m in 0..l {
                let mut v = zero_vec(n);
                for k in 0..l {
                    v[za + k] = alpha_low[m][k][i].clone();
                }
                for r in 0..a {
                    v[aa + r] = -rho[m][(r, i)].clone();
                }
                brackets.push((aa + i, la + m, v));
            }
        }
        for p in 0..l {
            for q in p + 1..l {
                let mut v = zero_vec(n);
                for k in 0..l {
                    v[za + k] = self.gamma.eval(&[p, q, k]);
                }
                for (r, x) in self.alpha.eval(&[p, q]).into_iter().enumerate() {
                    v[aa + r] = x;
                }
                brackets.push((la + p, la + q, v));
            }
        }
        MetricLieAlgebra::new(gram, brackets).expect("well-formed bracket table")
    }

    /// `(p_a + l, q_a + l)`.
    pub fn expected_signature(&self) -> Result<Signature> {
        let s = self.rep.gram_a().signature()?;
        Ok(Signature::new(s.negative + self.l(), s.positive + self.l(), 0))
    }

    pub fn to_json(&self) -> TwofoldJson {
        let (gram, rho) = self.rep.to_json();
        TwofoldJson {
            l: self.l(),
            a: self.a(),
            gram_a: gram,
            rho,
            alpha: self.alpha.to_json(),
            gamma: self.gamma.to_json(),
        }
    }

    pub fn from_json(j: TwofoldJson) -> Result<Self> {
        let rep = Rep::from_json(j.l, j.a, j.gram_a, j.rho)?;
        let alpha = Cochain::from_json(j.alpha, j.l, j.a, "alpha")?;
        let gamma = ScalarForm::from_json(j.gamma, j.l, "gamma")?;
        TwofoldData::new(rep, alpha, gamma)
    }
}

/// Wire form of [`TwofoldData`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwofoldJson {
    pub l: usize,
    pub a: usize,
    #[serde(rename = "gramA")]
    pub gram_a: Vec<Vec<Rat>>,
    pub rho: Vec<Vec<Vec<Rat>>>,
    pub alpha: CochainJson,
    pub gamma: CochainJson,
}

/// Solutions `(L_0, A_0)` of the linear system describing central
/// elements outside `l^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub witnesses: Vec<(Vec<Q>, Vec<Q>)>,
}

/// Decides whether the centre of `d_{α,γ}(a, l, ρ)` is exactly `l^*`.
///
/// `Z_0 + A_0 + L_0` is central iff
/// `ρ(L_0) = 0`, `ρ(L)A_0 = α(L_0, L)` and
/// `γ(L_0, L, L') + <A_0, α(L, L')> = 0` for all `L, L'`.
pub fn regularity(data: &TwofoldData) -> Regularity {
    let (l, a) = (data.l(), data.a());
    let rho = data.rep.rho();
    let g = data.rep.gram_a();
    let nv = l + a;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for r in 0..a {
        for c in 0..a {
            let mut row = zero_vec(nv);
            for k in 0..l {
                row[k] = rho[k][(r, c)].clone();
            }
            rows.push(row);
        }
    }
    for k in 0..l {
        for r in 0..a {
            let mut row = zero_vec(nv);
            for c in 0..a {
                row[l + c] = rho[k][(r, c)].clone();
            }
            for j in 0..l {
                row[j] = -data.alpha.eval(&[j, k])[r].clone();
            }
            rows.push(row);
        }
    }
    for t in increasing_tuples(l, 2) {
        let (p, q) = (t[0], t[1]);
        let mut row = zero_vec(nv);
        for j in 0..l {
            row[j] = data.gamma.eval(&[j, p, q]);
        }
        let low = g.mul_vec(&data.alpha.eval(&[p, q]));
        for c in 0..a {
            row[l + c] = low[c].clone();
        }
        rows.push(row);
    }
    let ns = if rows.is_empty() {
        Matrix::identity(nv).to_rows()
    } else {
        Matrix::from_rows(rows, nv).expect("row length").nullspace()
    };
    let witnesses: Vec<(Vec<Q>, Vec<Q>)> = ns.into_iter().map(|v| (v[..l].to_vec(), v[l..].to_vec())).collect();
    Regularity { regular: witnesses.is_empty(), witnesses }
}

/// The isometry `Ψ_τ` in the basis `(Z, A, L)`:
///
/// ```text
/// | I  τ*  -½τ*τ |
/// | 0  I   -τ    |
/// | 0  0   I     |
/// ```
///
/// where `τ* = τ^T G_a : a -> l^*` is the adjoint of `τ`.
pub fn psi_matrix(rep: &Rep, tau: &Cochain) -> Matrix {
    let (l, a) = (rep.l(), rep.a());
    let t = tau.to_matrix();
    let ts = t.transpose().mul(rep.gram_a());
    let tst = ts.mul(&t);
    let n = 2 * l + a;
    let mut m = Matrix::identity(n);
    for i in 0..l {
        for j in 0..a {
            m[(i, l + j)] = ts[(i, j)].clone();
        }
        for j in 0..l {
            m[(i, l + a + j)] = -(&tst[(i, j)] * qf(1, 2));
        }
    }
    for i in 0..a {
        for j in 0..l {
            m[(l + i, l + a + j)] = -t[(i, j)].clone();
        }
    }
    m
}

/// Finds `τ` with `(α_1, γ_1)τ = (α_2, γ_2)`, if one exists.
///
/// First `dτ_0 = α_2 - α_1` is solved; then, writing `τ = τ_0 + ζ` with
/// `ζ` a cocycle, the remaining condition is linear in `ζ`:
/// `<α_1 ∧ ζ> = γ_2 - γ_1 - <(α_1 + ½dτ_0) ∧ τ_0>`,
/// because `<dτ_0 ∧ ζ> = <τ_0 ∧ dζ> = 0`.
pub fn extension_equivalent(d1: &TwofoldData, d2: &TwofoldData) -> Result<Option<Cochain>> {
    if d1.rep != d2.rep {
        return Err(Error::input("extension equivalence needs both data on the same representation"));
    }
    let rep = &d1.rep;
    let (l, a) = (rep.l(), rep.a());
    let dmat = differential_matrix(rep, 1);
    let target = d2.alpha.sub(&d1.alpha).to_flat();
    let sol = if dmat.rows() == 0 {
        Some(crate::linalg::Solution { particular: zero_vec(dmat.cols()), kernel: Matrix::identity(dmat.cols()).to_rows() })
    } else {
        dmat.solve(&target)?
    };
    let Some(sol) = sol else {
        return Ok(None);
    };
    let tau0 = Cochain::from_flat(1, l, a, &sol.particular);
    let dtau0 = differential(rep, &tau0)?;
    let base = wedge_inner(rep, &d1.alpha.add(&dtau0.scale(&qf(1, 2))), &tau0)?;
    let rhs = d2.gamma.sub(&d1.gamma).sub(&base);
    let zetas: Vec<Cochain> = sol.kernel.iter().map(|z| Cochain::from_flat(1, l, a, z)).collect();
    let coeffs = if rhs.values().is_empty() {
        Some(vec![Q::zero(); zetas.len()])
    } else if zetas.is_empty() {
        rhs.is_zero().then(Vec::new)
    } else {
        let cols = zetas
            .iter()
            .map(|z| wedge_inner(rep, &d1.alpha, z).map(|w| w.values().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_cols(&cols, rhs.values().len())?.solve(rhs.values())?.map(|s| s.particular)
    };
    let Some(coeffs) = coeffs else {
        return Ok(None);
    };
    let mut tau = tau0;
    for (c, z) in coeffs.iter().zip(&zetas) {
        if !c.is_zero() {
            tau = tau.add(&z.scale(c));
        }
    }
    let replay = d1.act(&tau)?;
    if replay.alpha != d2.alpha || replay.gamma != d2.gamma {
        return Err(Error::Violated("replaying the computed cochain does not reach the target".into()));
    }
    Ok(Some(tau))
}

/// `(U^{-1} ρ_2(S .) U, U^{-1} S^* α_2, S^* γ_2)` on `(a_1, G_1 = U^T G_2 U)`.
pub fn transport(d2: &TwofoldData, s: &Matrix, u: &Matrix) -> Result<TwofoldData> {
    let (l, a) = (d2.l(), d2.a());
    if s.rows() != l || s.cols() != l || u.rows() != a || u.cols() != a {
        return Err(Error::dim("S must be l x l and U must be a x a"));
    }
    if s.det().is_zero() {
        return Err(Error::input("S is not invertible"));
    }
    let u_inv = u.inverse().ok_or_else(|| Error::input("U is not invertible"))?;
    let gram = u.transpose().mul(d2.rep.gram_a()).mul(u);
    let rho: Vec<Matrix> = (0..l).map(|k| u_inv.mul(&d2.rep.rho_of(&s.col(k))).mul(u)).collect();
    let rep = Rep::new(gram, rho)?;
    let alpha = d2.alpha.pullback(s).map_values(&u_inv);
    let gamma = d2.gamma.pullback(s);
    TwofoldData::new(rep, alpha, gamma)
}

/// Result of checking a candidate `(S, U, τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// The isometric isomorphism `build(d_1) -> build(d_2)` (columns are images).
    Verified(Matrix),
    /// The first equation that failed, by name.
    Failed { equation: &'static str, detail: String },
}

impl WitnessOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, WitnessOutcome::Verified(_))
    }

    fn fail(equation: &'static str, detail: impl Into<String>) -> Self {
        WitnessOutcome::Failed { equation, detail: detail.into() }
    }
}

/// Checks `U ρ_1(L) U^{-1} = ρ_2(SL)` (ae1), `U^{-1}α_2(S., S.) - α_1 = dτ` (E2)
/// and the six-term identity for `S^*γ_2 - γ_1` (E3); on success returns
/// `F = diag((S^{-1})^T, U, S) ∘ Ψ_τ`, verified as an isomorphism.
pub fn witness_isomorphism(
    d1: &TwofoldData,
    d2: &TwofoldData,
    s: &Matrix,
    u: &Matrix,
    tau: &Cochain,
) -> Result<WitnessOutcome> {
    let (l, a) = (d1.l(), d1.a());
    if d2.l() != l || d2.a() != a {
        return Err(Error::dim("the two data have different (l, a)"));
    }
    if s.rows() != l || s.cols() != l || u.rows() != a || u.cols() != a {
        return Err(Error::dim("S must be l x l and U must be a x a"));
    }
    if tau.deg() != 1 || tau.l() != l || tau.a() != a {
        return Err(Error::dim("tau must be a 1-cochain on the same (l, a)"));
    }
    let Some(s_inv) = s.inverse() else {
        return Ok(WitnessOutcome::fail("S", "S is not invertible"));
    };
    if u.transpose().mul(d2.rep.gram_a()).mul(u) != *d1.rep.gram_a() {
        return Ok(WitnessOutcome::fail("ae1", "U is not an isometry"));
    }
    let u_inv = u.inverse().expect("an isometry of nondegenerate forms is invertible");
    let rho1 = d1.rep.rho();
    for (k, r1) in rho1.iter().enumerate() {
        if u.mul(r1) != d2.rep.rho_of(&s.col(k)).mul(u) {
            return Ok(WitnessOutcome::fail("ae1", format!("U ρ1(L{}) U^-1 != ρ2(S L{})", k + 1, k + 1)));
        }
    }
    let dtau = differential(&d1.rep, tau)?;
    let pulled = d2.alpha.pullback(s).map_values(&u_inv);
    if pulled.sub(&d1.alpha) != dtau {
        return Ok(WitnessOutcome::fail("E2", "U^-1 S^*α2 - α1 != dτ"));
    }
    let g = d1.rep.gram_a();
    let t = |i: usize| tau.eval(&[i]);
    let ip = |x: &[Q], y: &[Q]| g.form(x, y);
    let lhs = d2.gamma.pullback(s).sub(&d1.gamma);
    for idx in increasing_tuples(l, 3) {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let al = |p: usize, q: usize| d1.alpha.eval(&[p, q]);
        let rhs = ip(&al(i, j), &t(k))
            + ip(&al(k, i), &t(j))
            + ip(&al(j, k), &t(i))
            + ip(&t(i), &rho1[j].mul_vec(&t(k)))
            + ip(&t(k), &rho1[i].mul_vec(&t(j)))
            + ip(&t(j), &rho1[k].mul_vec(&t(i)));
        if lhs.eval(&idx) != rhs {
            return Ok(WitnessOutcome::fail("E3", format!("fails on (L{}, L{}, L{})", i + 1, j + 1, k + 1)));
        }
    }
    let block = s_inv.transpose().block_diag(u).block_diag(s);
    let f = block.mul(&psi_matrix(&d1.rep, tau));
    match d1.build().check_isomorphism(&d2.build(), &f) {
        Ok(()) => Ok(WitnessOutcome::Verified(f)),
        Err(e) => Ok(WitnessOutcome::fail("isomorphism", e)),
    }
}

/// Twofold data read off a concrete algebra, with the frame that realises
/// the isomorphism.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub data: TwofoldData,
    /// Columns `(ẑ_1..ẑ_l, b_1..b_a, s_1..s_l)`: the images of the basis of
    /// `build(data)` in the coordinates of the input algebra.
    pub frame: Matrix,
}

/// Writes `g` as a twofold extension, with `l^* = z(g)`, `a ≅ g'/z(g)` and
/// `l ≅ g/g'`.
///
/// Requires `g` verified, non-abelian, with isotropic centre and abelian
/// `g'/z(g)`.
pub fn extract(g: &MetricLieAlgebra) -> Result<Extraction> {
    if !g.verify().passed() {
        return Err(Error::input("algebra does not verify as a metric Lie algebra"));
    }
    if g.is_abelian() {
        return Err(Error::input("algebra is abelian"));
    }
    let n = g.dim();
    let z = g.centre();
    let d = g.derived();
    let zb = z.basis_matrix();
    if !zb.mul(g.gram()).mul(&zb.transpose()).is_zero() {
        return Err(Error::input("the centre is not isotropic"));
    }
    if !g.bracket_of(&d, &d).is_subspace_of(&z) {
        return Err(Error::input("g'/z(g) is not abelian"));
    }
    let l = z.dim();
    let zs = z.basis();

    // vector space complement of g' from standard vectors
    let mut w: Vec<Vec<Q>> = Vec::new();
    let mut span = d.basis();
    for i in 0..n {
        if w.len() == l {
            break;
        }
        let e = unit_vec(n, i);
        let mut trial = span.clone();
        trial.push(e.clone());
        if Matrix::from_rows(trial.clone(), n)?.rank() == trial.len() {
            span = trial;
            w.push(e);
        }
    }
    let p = Matrix::from_fn(l, l, |j, m| g.form(&zs[j], &w[m]));
    let p_inv = p.inverse().ok_or_else(|| Error::Violated("centre is not paired with g/g'".into()))?;
    let wd: Vec<Vec<Q>> = (0..l)
        .map(|m| {
            let mut v = zero_vec(n);
            for t in 0..l {
                axpy(&mut v, &p_inv[(t, m)], &w[t]);
            }
            v
        })
        .collect();
    let s: Vec<Vec<Q>> = (0..l)
        .map(|k| {
            let mut v = wd[k].clone();
            for j in 0..l {
                let c = g.form(&wd[k], &wd[j]) * qf(-1, 2);
                axpy(&mut v, &c, &zs[j]);
            }
            v
        })
        .collect();

    let s_perp = g.orthogonal_complement(&Subspace::span(n, &s));
    let a_space = s_perp.intersect(&d);
    let b = a_space.basis();
    let a = b.len();
    let frame_cols: Vec<Vec<Q>> = zs.iter().chain(&b).chain(&s).cloned().collect();
    let frame = Matrix::from_cols(&frame_cols, n)?;
    let frame_inv = frame.inverse().ok_or_else(|| Error::Violated("extraction frame is singular".into()))?;
    let coords = |v: &[Q]| frame_inv.mul_vec(v);

    let gram_a = Matrix::from_fn(a, a, |i, j| g.form(&b[i], &b[j]));
    let rho: Vec<Matrix> = (0..l)
        .map(|k| {
            let cols: Vec<Vec<Q>> = (0..a).map(|i| coords(&g.bracket(&s[k], &b[i]))[l..l + a].to_vec()).collect();
            Matrix::from_cols(&cols, a).expect("length a")
        })
        .collect();
    let rep = Rep::new(gram_a, rho)?;
    let alpha = Cochain::from_fn(2, l, a, |t| coords(&g.bracket(&s[t[0]], &s[t[1]]))[l..l + a].to_vec());
    let gamma = ScalarForm::from_fn(3, l, |t| g.form(&g.bracket(&s[t[0]], &s[t[1]]), &s[t[2]]));
    let data = TwofoldData::new(rep, alpha, gamma)?;
    data.build()
        .check_isomorphism(g, &frame)
        .map_err(|e| Error::Violated(format!("extracted frame is not an isomorphism: {e}")))?;
    Ok(Extraction { data, frame })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn rot(a: i64) -> Matrix {
        Matrix::from_i64(&[&[0, -a], &[a, 0]])
    }

    fn osc_data(weights: &[i64]) -> TwofoldData {
        let m = weights.len();
        let mut rho = Matrix::zeros(2 * m, 2 * m);
        for (j, &w) in weights.iter().enumerate() {
            rho[(m + j, j)] = q(w);
            rho[(j, m + j)] = q(-w);
        }
        TwofoldData::plain(Rep::new(Matrix::identity(2 * m), vec![rho]).unwrap())
    }

    #[test]
    fn build_l0_is_abelian() {
        let d = TwofoldData::plain(Rep::trivial(0, Matrix::identity(2)).unwrap());
        let g = d.build();
        assert!(g.is_abelian());
        assert_eq!(g.dim(), 2);
    }

    #[test]
    fn build_oscillator() {
        let d = TwofoldData::plain(Rep::new(Matrix::identity(2), vec![rot(1)]).unwrap());
        let g = d.build();
        assert!(g.verify().passed());
        assert_eq!(g.dim(), 4);
        assert_eq!(g.signature().unwrap(), d.expected_signature().unwrap());
        assert!(regularity(&d).regular);
        assert_eq!(g.centre().dim(), 1);
    }

    #[test]
    fn build_pure_three_form() {
        let rep = Rep::trivial(3, Matrix::zeros(0, 0)).unwrap();
        let d = TwofoldData::new(rep, Cochain::zero(2, 3, 0), ScalarForm::monomial(3, &[0, 1, 2])).unwrap();
        let g = d.build();
        assert!(g.verify().passed());
        assert_eq!(g.signature().unwrap(), Signature::new(3, 3, 0));
        assert!(regularity(&d).regular);
    }

    #[test]
    fn trivial_data_is_not_regular() {
        let d = TwofoldData::plain(Rep::trivial(1, Matrix::identity(1)).unwrap());
        let r = regularity(&d);
        assert!(!r.regular);
        assert_eq!(d.build().centre().dim(), d.l() + r.witnesses.len());
    }

    #[test]
    fn psi_is_an_isometry_and_matches_action() {
        let rep = Rep::new(Matrix::identity(3), vec![rot(1).block_diag(&Matrix::zeros(1, 1)), rot(2).block_diag(&Matrix::zeros(1, 1))]).unwrap();
        let d1 = TwofoldData::plain(rep.clone());
        let t = Matrix::from_i64(&[&[1, 0], &[2, -1], &[0, 3]]);
        let tau = Cochain::from_matrix(&t);
        let d2 = d1.act(&tau).unwrap();
        let psi = psi_matrix(&rep, &tau);
        let g1 = d1.build();
        assert_eq!(psi.transpose().mul(g1.gram()).mul(&psi), *g1.gram());
        assert_eq!(g1.check_isomorphism(&d2.build(), &psi), Ok(()));
        let found = extension_equivalent(&d1, &d2).unwrap().unwrap();
        assert_eq!(d1.act(&found).unwrap(), d2);
    }

    #[test]
    fn three_form_rows_are_inequivalent() {
        let rep = Rep::trivial(3, Matrix::zeros(0, 0)).unwrap();
        let d0 = TwofoldData::plain(rep.clone());
        let d1 = TwofoldData::new(rep, Cochain::zero(2, 3, 0), ScalarForm::monomial(3, &[0, 1, 2])).unwrap();
        assert_eq!(extension_equivalent(&d0, &d1).unwrap(), None);
        assert!(extension_equivalent(&d0, &d0).unwrap().unwrap().is_zero());
    }

    #[test]
    fn oscillator_plane_swap_witness() {
        let d1 = osc_data(&[1, 2]);
        let d2 = osc_data(&[2, 1]);
        // U swaps the planes (X1,Y1) <-> (X2,Y2); basis order X1 X2 Y1 Y2
        let u = Matrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let s = Matrix::identity(1);
        let tau = Cochain::zero(1, 1, 4);
        assert!(witness_isomorphism(&d1, &d2, &s, &u, &tau).unwrap().is_verified());
        let bad = Matrix::identity(4).scale(&q(2));
        assert!(matches!(
            witness_isomorphism(&d1, &d2, &s, &bad, &tau).unwrap(),
            WitnessOutcome::Failed { equation: "ae1", .. }
        ));
        assert!(matches!(
            witness_isomorphism(&d1, &d2, &s, &Matrix::identity(4), &tau).unwrap(),
            WitnessOutcome::Failed { equation: "ae1", .. }
        ));
    }

    #[test]
    fn extract_oscillator() {
        let d = osc_data(&[1, 2]);
        let g = d.build();
        let ex = extract(&g).unwrap();
        assert_eq!((ex.data.l(), ex.data.a()), (1, 4));
        assert!(regularity(&ex.data).regular);
        assert!(ex.data.gamma().is_zero());
        assert!(matches!(extract(&MetricLieAlgebra::abelian(Matrix::identity(2)).unwrap()), Err(Error::Input(_))));
    }

    #[test]
    fn json_round_trip() {
        let d = osc_data(&[1, 3]);
        let s = serde_json::to_string(&d.to_json()).unwrap();
        let back = TwofoldData::from_json(serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, d);
    }
}
