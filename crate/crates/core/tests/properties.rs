//! Property tests for the module invariants. Structured inputs come from
//! proptest strategies where cheap; composite objects (representations,
//! twofold data, weight matrices) are drawn from the fixture generators
//! under a proptest-chosen seed.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use metlie::classify::{
    build_family, invariant, min_m, random_admissible_lambda, sample_stabilizer, Family, FamilySpec, Row, WeightMatrix,
};
use metlie::cochain::{check_ek, cup_selfcheck, differential, wedge_inner, Cochain};
use metlie::decomp::{euclidean_decomposable, induced_ideal, verify_witness, Decision};
use metlie::fixtures::{
    ek_mixed_alpha, invertible, random_cochain, random_data, random_rep, random_shape, signed_permutation, RepShape,
};
use metlie::linalg::{q, qf, unit_vec};
use metlie::twofold::{extension_equivalent, psi_matrix, regularity};
use metlie::{Matrix, Signature};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec((-4i64..=4, 1i64..=3), r * c)
            .prop_map(move |v| Matrix::from_fn(r, c, |i, j| qf(v[i * c + j].0, v[i * c + j].1)))
    })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = Matrix> {
    small_matrix(max_n, max_n).prop_map(|m| {
        let n = m.rows().min(m.cols());
        Matrix::from_fn(n, n, |i, j| if i <= j { m[(i, j)].clone() } else { m[(j, i)].clone() })
    })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn solve_kernel_directions(m in small_matrix(4, 5), x in prop::collection::vec(-3i64..=3, 5)) {
        let x: Vec<_> = x[..m.cols()].iter().map(|&v| q(v)).collect();
        let b = m.mul_vec(&x);
        let sol = m.solve(&b).unwrap().expect("b is in the image");
        for n in &sol.kernel {
            for t in [q(1), q(-2), qf(1, 3)] {
                let y: Vec<_> = sol.particular.iter().zip(n).map(|(p, k)| p + k * &t).collect();
                prop_assert_eq!(m.mul_vec(&y), b.clone());
            }
        }
    }

    #[test]
    fn signature_is_a_congruence_invariant(g in symmetric(5), seed in any::<u64>()) {
        let s = invertible(&mut rng(seed), g.rows());
        prop_assert_eq!(s.transpose().mul(&g).mul(&s).signature().unwrap(), g.signature().unwrap());
    }

    #[test]
    fn rref_is_idempotent(m in small_matrix(5, 5)) {
        let r = m.rref();
        prop_assert_eq!(r.rref(), r);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn built_algebras_verify_with_central_duals(seed in any::<u64>(), lorentz in any::<bool>()) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r, 3, 6, lorentz);
        let d = random_data(&mut r, shape);
        let g = d.build();
        prop_assert!(g.verify().passed());
        let z = g.centre();
        for i in 0..d.l() {
            prop_assert!(z.contains(&unit_vec(d.dim(), i)));
        }
        prop_assert_eq!(g.orthogonal_complement(&z), g.derived());
        prop_assert_eq!(regularity(&d).regular, z.dim() == d.l());
    }

    #[test]
    fn direct_sums(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s1 = random_shape(&mut r, 2, 4, true);
        let s2 = random_shape(&mut r, 2, 4, false);
        let g1 = random_data(&mut r, s1).build();
        let g2 = random_data(&mut r, s2).build();
        let sum = g1.direct_sum(&g2);
        prop_assert!(sum.verify().passed());
        let (a, b) = (g1.signature().unwrap(), g2.signature().unwrap());
        prop_assert_eq!(sum.signature().unwrap(), Signature::new(a.negative + b.negative, a.positive + b.positive, 0));
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>(), deg in 0usize..=3) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r, 4, 6, seed % 2 == 0);
        let rep = random_rep(&mut r, shape);
        let c = random_cochain(&mut r, deg, rep.l(), rep.a());
        prop_assert!(differential(&rep, &differential(&rep, &c).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn differential_is_adjoint_under_the_wedge(seed in any::<u64>(), pair in 0usize..3) {
        let (p, qd) = [(1, 1), (2, 1), (1, 2)][pair];
        let mut r = rng(seed);
        let planes = r.gen_range(0..=2);
        let rep = random_rep(&mut r, RepShape { l: 4, planes, lines: 1, lorentz: seed % 2 == 0 });
        let x = random_cochain(&mut r, p, 4, rep.a());
        let y = random_cochain(&mut r, qd, 4, rep.a());
        let lhs = wedge_inner(&rep, &differential(&rep, &x).unwrap(), &y).unwrap();
        let sign = if p % 2 == 0 { q(-1) } else { q(1) };
        prop_assert_eq!(lhs, wedge_inner(&rep, &x, &differential(&rep, &y).unwrap()).unwrap().scale(&sign));
    }

    #[test]
    fn ek_matches_the_cup_square(seed in any::<u64>(), l in 4usize..=5) {
        let mut r = rng(seed);
        let planes = r.gen_range(0..=2);
        let rep = random_rep(&mut r, RepShape { l, planes, lines: 2, lorentz: false });
        let alpha = ek_mixed_alpha(&mut r, &rep);
        prop_assert_eq!(check_ek(&rep, &alpha).unwrap(), cup_selfcheck(&rep, &alpha).unwrap());
    }

    #[test]
    fn act_is_a_group_action(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r, 3, 6, seed % 3 == 0);
        let d = random_data(&mut r, shape);
        let (l, a) = (d.l(), d.a());
        let (t1, t2) = (random_cochain(&mut r, 1, l, a), random_cochain(&mut r, 1, l, a));
        prop_assert_eq!(d.act(&Cochain::zero(1, l, a)).unwrap(), d.clone());
        prop_assert_eq!(d.act(&t1).unwrap().act(&t2).unwrap(), d.act(&t1.add(&t2)).unwrap());
        let sigma = random_cochain(&mut r, 0, l, a);
        prop_assert_eq!(d.act(&differential(d.rep(), &sigma).unwrap()).unwrap(), d);
    }

    #[test]
    fn extension_equivalence_is_an_equivalence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r, 3, 5, seed % 2 == 0);
        let d = random_data(&mut r, shape);
        let (l, a) = (d.l(), d.a());
        let e = d.act(&random_cochain(&mut r, 1, l, a)).unwrap();
        let f = e.act(&random_cochain(&mut r, 1, l, a)).unwrap();
        let refl = extension_equivalent(&d, &d).unwrap().expect("reflexive");
        prop_assert_eq!(d.act(&refl).unwrap(), d.clone());
        let de = extension_equivalent(&d, &e).unwrap().expect("forward");
        let ed = extension_equivalent(&e, &d).unwrap().expect("symmetric");
        prop_assert_eq!(e.act(&ed).unwrap(), d.clone());
        prop_assert_eq!(d.act(&de).unwrap().act(&ed).unwrap(), d.clone());
        let ef = extension_equivalent(&e, &f).unwrap().expect("forward");
        let df = extension_equivalent(&d, &f).unwrap().expect("transitive");
        prop_assert_eq!(d.act(&de.add(&ef)).unwrap(), f.clone());
        prop_assert_eq!(d.act(&df).unwrap(), f);
    }

    #[test]
    fn psi_is_an_isometry(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r, 3, 6, seed % 2 == 0);
        let d = random_data(&mut r, shape);
        let psi = psi_matrix(d.rep(), &random_cochain(&mut r, 1, d.l(), d.a()));
        let g = d.build();
        prop_assert_eq!(psi.transpose().mul(g.gram()).mul(&psi), g.gram().clone());
    }
}

fn row_strategy() -> impl Strategy<Value = Row> {
    prop::sample::select(Row::ALL.to_vec())
}

fn admissible_spec(row: Row, seed: u64, max_m: usize) -> FamilySpec {
    let mut r = rng(seed);
    let m = r.gen_range(min_m(row).max(1)..=max_m.max(min_m(row)));
    FamilySpec::new(Family::Table(row), random_admissible_lambda(&mut r, row, m)).unwrap()
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn invariants_are_constant_on_orbits(row in row_strategy(), seed in any::<u64>()) {
        let spec = admissible_spec(row, seed, 5);
        let mut r = rng(seed ^ 0xa5a5);
        let p = signed_permutation(&mut r, spec.m());
        let s = sample_stabilizer(row, &mut r);
        let moved = spec.with_lambda(spec.lambda().transform(&p, &s)).unwrap();
        prop_assert_eq!(invariant(&moved, 8).unwrap().value, invariant(&spec, 8).unwrap().value);
    }

    #[test]
    fn canonicalization_is_idempotent(row in row_strategy(), seed in any::<u64>()) {
        let spec = admissible_spec(row, seed, 5);
        let c = invariant(&spec, 8).unwrap();
        let again = spec.with_lambda(spec.lambda().transform(&c.perm.matrix(), &Matrix::identity(row.l()))).unwrap();
        prop_assert_eq!(invariant(&again, 8).unwrap().value, c.value);
    }

    #[test]
    fn admissible_families_are_regular_and_indecomposable(row in row_strategy(), seed in any::<u64>()) {
        let spec = admissible_spec(row, seed, 4);
        let d = build_family(&spec).unwrap();
        prop_assert!(regularity(&d).regular);
        prop_assert_eq!(euclidean_decomposable(&d).unwrap(), Decision::Indecomposable);
    }

    #[test]
    fn bv_scaling_law(seed in any::<u64>(), c in (1i64..=4, 1i64..=4, any::<bool>())) {
        let spec = admissible_spec(Row::L3K2, seed, 4);
        let c = if c.2 { qf(c.0, c.1) } else { -qf(c.0, c.1) };
        let mut s = Matrix::identity(3).scale(&c);
        s[(0, 0)] = q(1) / &c;
        let moved = spec.with_lambda(spec.lambda().transform(&Matrix::identity(spec.m()), &s)).unwrap();
        prop_assert_eq!(invariant(&moved, 8).unwrap().value, invariant(&spec, 8).unwrap().value);
    }

    #[test]
    fn zero_weights_split_off(row in row_strategy(), seed in any::<u64>()) {
        let spec = admissible_spec(row, seed, 3);
        let padded = spec.lambda().matrix().vstack(&Matrix::zeros(1, row.l()));
        let spec = spec.with_lambda(WeightMatrix::new(padded).unwrap()).unwrap();
        let d = build_family(&spec).unwrap();
        match euclidean_decomposable(&d).unwrap() {
            Decision::Decomposable(Some(w)) => {
                prop_assert!(verify_witness(&d, &w).unwrap().holds());
                let ideal = induced_ideal(&d, &w).unwrap();
                let g = d.build();
                prop_assert!(ideal.dim() > 0 && ideal.dim() < g.dim());
                prop_assert!(g.is_nondegenerate_ideal(&ideal));
            }
            other => prop_assert!(false, "expected a witness, got {:?}", other),
        }
        prop_assert!(spec.m() > 0 && !spec.admissible().unwrap());
    }
}
