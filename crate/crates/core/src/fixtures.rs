//! Random generators for property tests and benchmarks.
//!
//! Representations are produced in a weight normal form (rotation planes,
//! optionally one boost plane, fixed lines) and then conjugated by a random
//! rational change of basis, so that neither the Gram matrix nor `ρ` are
//! diagonal in the returned coordinates.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cochain::{differential, Cochain, Rep, ScalarForm};
use crate::linalg::{q, qf, Matrix, Q};
use crate::twofold::TwofoldData;

/// A rational in `[-3, 3]` with denominator 1, 2 or 3.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let d = rng.gen_range(1..=3i64);
    let n = rng.gen_range(-3 * d..=3 * d);
    qf(n, d)
}

/// A nonzero rational in `[-3, 3]`.
pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    loop {
        let x = small_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn small_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Q> {
    (0..n).map(|_| small_rational(rng)).collect()
}

/// An invertible matrix with small integer entries.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| q(rng.gen_range(-2..=2)));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A signed permutation matrix of size `n`.
pub fn signed_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        m[(p, i)] = if rng.gen_bool(0.5) { q(1) } else { q(-1) };
    }
    m
}

/// Shape of a random representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepShape {
    pub l: usize,
    /// Number of rotation planes.
    pub planes: usize,
    /// Number of fixed lines.
    pub lines: usize,
    /// Prepend one boost plane of signature `(1, 1)`.
    pub lorentz: bool,
}

impl RepShape {
    pub fn a(&self) -> usize {
        2 * self.planes + self.lines + if self.lorentz { 2 } else { 0 }
    }
}

/// A representation in weight normal form: boost plane (if any), then the
/// rotation planes `(x_j, y_j)` interleaved, then fixed lines.
/// Weights may vanish, so some planes can be fixed.
pub fn normal_form_rep<R: Rng + ?Sized>(rng: &mut R, shape: RepShape) -> Rep {
    let a = shape.a();
    let mut gram = Matrix::identity(a);
    let mut rho = vec![Matrix::zeros(a, a); shape.l];
    let mut off = 0;
    if shape.lorentz {
        gram[(0, 0)] = q(-1);
        for r in rho.iter_mut() {
            let b = small_rational(rng);
            r[(0, 1)] = b.clone();
            r[(1, 0)] = b;
        }
        off = 2;
    }
    for j in 0..shape.planes {
        let (x, y) = (off + 2 * j, off + 2 * j + 1);
        for r in rho.iter_mut() {
            let w = small_rational(rng);
            r[(y, x)] = w.clone();
            r[(x, y)] = -w;
        }
    }
    Rep::new(gram, rho).expect("normal form is orthogonal and commuting")
}

/// Conjugates a representation by `P`: `G' = P^T G P`, `ρ' = P^{-1} ρ P`.
pub fn conjugate_rep(rep: &Rep, p: &Matrix) -> Rep {
    let p_inv = p.inverse().expect("invertible change of basis");
    let gram = p.transpose().mul(rep.gram_a()).mul(p);
    let rho = rep.rho().iter().map(|r| p_inv.mul(r).mul(p)).collect();
    Rep::new(gram, rho).expect("conjugation preserves the axioms")
}

pub fn random_rep<R: Rng + ?Sized>(rng: &mut R, shape: RepShape) -> Rep {
    let base = normal_form_rep(rng, shape);
    let p = invertible(rng, shape.a());
    conjugate_rep(&base, &p)
}

pub fn random_cochain<R: Rng + ?Sized>(rng: &mut R, deg: usize, l: usize, a: usize) -> Cochain {
    Cochain::from_fn(deg, l, a, |_| small_vector(rng, a))
}

pub fn random_form<R: Rng + ?Sized>(rng: &mut R, deg: usize, l: usize) -> ScalarForm {
    ScalarForm::from_fn(deg, l, |_| small_rational(rng))
}

/// A scalar 2-form `x ∧ y`, which squares to zero.
pub fn decomposable_two_form<R: Rng + ?Sized>(rng: &mut R, l: usize) -> ScalarForm {
    let x = small_vector(rng, l);
    let y = small_vector(rng, l);
    ScalarForm::from_fn(2, l, |t| &x[t[0]] * &y[t[1]] - &x[t[1]] * &y[t[0]])
}

/// A 2-cocycle satisfying the quadratic condition: `ω ⊗ b + dτ` with
/// `b` invariant (or `Σ ω_i ⊗ b_i` with arbitrary `ω_i` when `l ≤ 3`).
pub fn random_admissible_alpha<R: Rng + ?Sized>(rng: &mut R, rep: &Rep) -> Cochain {
    let (l, a) = (rep.l(), rep.a());
    let inv = rep.invariants();
    let mut alpha = Cochain::zero(2, l, a);
    if !inv.is_empty() {
        let used: Vec<&Vec<Q>> = if l <= 3 { inv.iter().collect() } else { vec![inv.choose(rng).expect("nonempty")] };
        for b in used {
            let omega = if l <= 3 { random_form(rng, 2, l) } else { decomposable_two_form(rng, l) };
            let term = Cochain::from_fn(2, l, a, |t| {
                let c = omega.eval(t);
                b.iter().map(|x| x * &c).collect()
            });
            alpha = alpha.add(&term);
        }
    }
    let tau = random_cochain(rng, 1, l, a);
    alpha.add(&differential(rep, &tau).expect("matching shapes"))
}

/// Random valid twofold data on a random representation of the given shape.
pub fn random_data<R: Rng + ?Sized>(rng: &mut R, shape: RepShape) -> TwofoldData {
    let rep = random_rep(rng, shape);
    let alpha = random_admissible_alpha(rng, &rep);
    let gamma = random_form(rng, 3, shape.l);
    TwofoldData::new(rep, alpha, gamma).expect("generated data satisfy the axioms")
}

/// A random shape with `l <= max_l` and `dim a <= max_a`.
pub fn random_shape<R: Rng + ?Sized>(rng: &mut R, max_l: usize, max_a: usize, lorentz: bool) -> RepShape {
    let l = rng.gen_range(1..=max_l);
    let room = max_a - if lorentz { 2 } else { 0 };
    let planes = rng.gen_range(0..=room / 2);
    let lines = rng.gen_range(0..=room - 2 * planes);
    RepShape { l, planes, lines, lorentz }
}

/// A 2-cochain that satisfies the quadratic condition about half the time.
pub fn ek_mixed_alpha<R: Rng + ?Sized>(rng: &mut R, rep: &Rep) -> Cochain {
    if rng.gen_bool(0.5) {
        random_admissible_alpha(rng, rep)
    } else {
        random_cochain(rng, 2, rep.l(), rep.a())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{check_cocycle, check_ek};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_data_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for lorentz in [false, true] {
            for _ in 0..10 {
                let shape = random_shape(&mut rng, 3, 8, lorentz);
                let d = random_data(&mut rng, shape);
                assert!(check_cocycle(d.rep(), d.alpha()).unwrap());
                assert!(check_ek(d.rep(), d.alpha()).unwrap());
            }
        }
    }

    #[test]
    fn structured_alpha_in_dimension_four_satisfies_ek() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rep = Rep::trivial(4, Matrix::identity(2)).unwrap();
        for _ in 0..10 {
            assert!(check_ek(&rep, &random_admissible_alpha(&mut rng, &rep)).unwrap());
        }
    }
}
