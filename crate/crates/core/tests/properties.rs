//! Algebraic invariants checked on seeded and generated inputs.

use proptest::prelude::*;

use epw_core::chern::{roots_of_f, roots_of_omega3, verify_reduction_at_random_roots};
use epw_core::det::{det_linear_matrix, evaluate_matrix};
use epw_core::enumerate::projective_points;
use epw_core::epw::{
    corank_at, dpsi_compare, normalize_point, points_on_sextic, psi_at, sextic_equation, strata_scan, point_scalars,
    tangent_direction,
};
use epw_core::exterior::{unit, wedge_coords, wedge_of_vectors};
use epw_core::lagrangian::{
    chart, is_lagrangian, transversal, lg_certificates, perp, sample_lagrangian, CertificatePrimes, LagrangianSubspace,
};
use epw_core::mukai::{build_mukai_data, plucker_quadric_qw, W_DIM};
use epw_core::poly::var_names;
use epw_core::rng::SplitMix64;
use epw_core::symplectic::{fiber_f, is_decomposable_3vector, sigma_coords};
use epw_core::{ExactMatrix, Field, FieldScalar, MultiPoly, Space, WedgeVector};

fn f101() -> Field {
    Field::prime(101).unwrap()
}

fn random_poly(rng: &mut SplitMix64, field: Field, vars: &[String], terms: usize, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(field, vars);
    for _ in 0..terms {
        let e: Vec<u32> = (0..vars.len()).map(|_| (rng.next_u64() % (max_deg as u64 + 1)) as u32).collect();
        p.add_term(epw_core::Monomial(e), rng.scalar(field));
    }
    p
}

fn invertible(rng: &mut SplitMix64, field: Field) -> ExactMatrix {
    loop {
        let rows = (0..6).map(|_| rng.vector(field, 6)).collect();
        let g = ExactMatrix::from_rows(field, rows).unwrap();
        if g.rank() == 6 {
            return g;
        }
    }
}

fn certified_q_seed(from: u64) -> (u64, LagrangianSubspace) {
    (from..)
        .map(|s| (s, sample_lagrangian(s, Field::Rational)))
        .find(|(_, a)| lg_certificates(a, CertificatePrimes::default()).unwrap().certified())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sigma_is_antisymmetric(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let a = rng.vector(Field::Rational, 20);
        let b = rng.vector(Field::Rational, 20);
        prop_assert_eq!(sigma_coords(&a, &b), -&sigma_coords(&b, &a));
        prop_assert!(sigma_coords(&a, &a).is_zero());
    }

    #[test]
    fn wedge_is_alternating(seed in any::<u64>(), k in 1usize..3) {
        let f = f101();
        let mut rng = SplitMix64::new(seed);
        let a = rng.vector(f, epw_core::exterior::basis_len(k));
        let b = rng.vector(f, epw_core::exterior::basis_len(3 - k));
        let ab = wedge_coords(f, k, &a, 3 - k, &b);
        let ba = wedge_coords(f, 3 - k, &b, k, &a);
        let sign = if (k * (3 - k)) % 2 == 0 { f.one() } else { f.from_i64(-1) };
        prop_assert_eq!(ab, ba.iter().map(|x| x * &sign).collect::<Vec<_>>());
        let v = rng.vector(f, 6);
        prop_assert!(wedge_coords(f, 1, &v, 1, &v).iter().all(FieldScalar::is_zero));
    }

    #[test]
    fn fibers_are_lagrangian(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let v = rng.nonzero_vector(Field::Rational, 6);
        let fv = fiber_f(&v).unwrap();
        prop_assert_eq!(fv.rank(), 10);
        prop_assert!(is_lagrangian(&fv).unwrap());
    }

    #[test]
    fn exact_division_inverts_multiplication(seed in any::<u64>()) {
        let f = f101();
        let vars = var_names("x", 3);
        let mut rng = SplitMix64::new(seed);
        let a = random_poly(&mut rng, f, &vars, 6, 3);
        let b = random_poly(&mut rng, f, &vars, 4, 2);
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn rank_agrees_over_q_and_large_prime(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let r = 1 + (rng.next_u64() % 5) as usize;
        let left: Vec<Vec<FieldScalar>> = (0..7).map(|_| rng.vector(Field::Rational, r)).collect();
        let right: Vec<Vec<FieldScalar>> = (0..r).map(|_| rng.vector(Field::Rational, 9)).collect();
        let m = ExactMatrix::from_rows(Field::Rational, left).unwrap()
            .mul(&ExactMatrix::from_rows(Field::Rational, right).unwrap()).unwrap();
        let big = m.reduce_mod(1_000_003).unwrap();
        prop_assert!(m.rank() <= r);
        prop_assert_eq!(m.rank(), big.rank());
    }

    #[test]
    fn decomposability_is_invariant(seed in any::<u64>()) {
        let f = f101();
        let mut rng = SplitMix64::new(seed);
        let vs: Vec<Vec<FieldScalar>> = (0..3).map(|_| rng.vector(f, 6)).collect();
        let coords = wedge_of_vectors(f, &[&vs[0], &vs[1], &vs[2]]);
        prop_assume!(coords.iter().any(|x| !x.is_zero()));
        let w = WedgeVector::new(3, Space::V, coords).unwrap();
        prop_assert!(is_decomposable_3vector(&w).unwrap());
        let s = rng.nonzero_scalar(f);
        prop_assert!(is_decomposable_3vector(&w.scale(&s)).unwrap());
        let g = invertible(&mut rng, f);
        let moved = epw_core::lagrangian::wedge3_matrix(&g).unwrap().mul_vec(w.coords());
        prop_assert!(is_decomposable_3vector(&WedgeVector::new(3, Space::V, moved).unwrap()).unwrap());
    }
}

#[test]
fn generic_three_vector_is_not_decomposable() {
    let mut rng = SplitMix64::new(5);
    let w = WedgeVector::new(3, Space::V, rng.vector(f101(), 20)).unwrap();
    assert!(!is_decomposable_3vector(&w).unwrap());
    let e = WedgeVector::basis(Field::Rational, Space::V, &[0, 1, 2])
        .add(&WedgeVector::basis(Field::Rational, Space::V, &[3, 4, 5]))
        .unwrap();
    assert!(!is_decomposable_3vector(&e).unwrap());
}

#[test]
fn determinant_expansion_matches_evaluation() {
    let f = f101();
    let vars = var_names("x", 3);
    let mut rng = SplitMix64::new(9);
    let m: Vec<Vec<MultiPoly>> = (0..6)
        .map(|_| {
            (0..6)
                .map(|_| {
                    let c0 = rng.scalar(f);
                    MultiPoly::affine(f, &vars, c0, &rng.vector(f, 3))
                })
                .collect()
        })
        .collect();
    let d = det_linear_matrix(&m).unwrap();
    for _ in 0..100 {
        let x = rng.vector(f, 3);
        assert_eq!(d.eval(&x).unwrap(), evaluate_matrix(&m, &x).unwrap().det().unwrap());
    }
}

#[test]
fn sampled_lagrangians_are_lagrangian() {
    for seed in 0..100 {
        for field in [Field::Rational, f101()] {
            let a = sample_lagrangian(seed, field);
            assert_eq!(a.basis().rank(), 10);
            assert!(is_lagrangian(a.basis()).unwrap());
        }
    }
}

#[test]
fn perp_is_an_involution() {
    for seed in 0..20 {
        let a = sample_lagrangian(seed, f101());
        let p = perp(&a).unwrap();
        assert_eq!(p.space(), Space::VDual);
        let back = perp(&p).unwrap();
        assert_eq!(back.space(), Space::V);
        assert!(back.basis().same_row_space(a.basis()));
    }
}

#[test]
fn certificate_excludes_decomposables_in_a() {
    let (_, a) = certified_q_seed(0);
    let mut rng = SplitMix64::new(17);
    for _ in 0..1000 {
        let c: Vec<FieldScalar> = (0..10).map(|_| Field::Rational.from_i64((rng.next_u64() % 7) as i64 - 3)).collect();
        if c.iter().all(FieldScalar::is_zero) {
            continue;
        }
        let x: Vec<FieldScalar> = (0..20)
            .map(|j| (0..10).fold(Field::Rational.zero(), |acc, r| acc + &c[r] * &a.basis().row(r)[j]))
            .collect();
        assert!(!is_decomposable_3vector(&WedgeVector::new(3, Space::V, x).unwrap()).unwrap());
    }
}

#[test]
fn vanishing_locus_matches_corank_over_f5() {
    let (_, a) = certified_q_seed(0);
    let a5 = a.reduce_mod(5).unwrap();
    let sextic = sextic_equation(&a5).unwrap();
    let f = a5.field();
    let scan = strata_scan(&a5).unwrap();
    let mut zeros = 0;
    for p in projective_points(6, 5).unwrap() {
        let v = point_scalars(f, &p);
        let vanishes = sextic.eval(&v).unwrap().is_zero();
        assert_eq!(vanishes, corank_at(&a5, &v).unwrap() >= 1, "point {p:?}");
        zeros += vanishes as u64;
    }
    assert_eq!(zeros, scan.total - scan.count(0));
}

#[test]
fn corank_histogram_is_consistent() {
    let a = sample_lagrangian(3, Field::prime(5).unwrap());
    let f = a.field();
    let scan = strata_scan(&a).unwrap();
    assert_eq!(scan.total, 3906);
    let mut rng = SplitMix64::new(8);
    for _ in 0..50 {
        let v = normalize_point(&rng.nonzero_vector(f, 6));
        let c = corank_at(&a, &v).unwrap();
        let key: Vec<u64> = v.iter().map(|x| x.residue().unwrap()).collect();
        assert!(scan.count(c) > 0);
        assert_eq!(c >= 2, scan.points.iter().any(|p| p.point == key && p.corank == c));
    }
}

#[test]
fn sextic_restricts_to_degree_six_on_lines() {
    let a = sample_lagrangian(0, f101());
    let sextic = sextic_equation(&a).unwrap();
    assert!(sextic.f.is_homogeneous());
    assert_eq!(sextic.f.degree(), 6);
    let f = a.field();
    let t = var_names("t", 1);
    let mut rng = SplitMix64::new(12);
    for _ in 0..10 {
        let p = rng.vector(f, 6);
        let q = rng.vector(f, 6);
        let line: Vec<MultiPoly> = (0..6).map(|j| MultiPoly::affine(f, &t, p[j].clone(), &[q[j].clone()])).collect();
        let r = sextic.f.compose(&line).unwrap();
        assert_eq!(r.degree(), 6);
    }
}

#[test]
fn sextic_is_equivariant() {
    let f = f101();
    let a = sample_lagrangian(4, f);
    let mut rng = SplitMix64::new(21);
    let g = invertible(&mut rng, f);
    let ga = a.transform(&g).unwrap();
    let s = sextic_equation(&a).unwrap();
    let sg = sextic_equation(&ga).unwrap();
    let vars = var_names("x", 6);
    let images: Vec<MultiPoly> = (0..6)
        .map(|r| MultiPoly::affine(f, &vars, f.zero(), g.row(r)))
        .collect();
    // f_{gA}(g x) is proportional to f_A(x)
    assert!(sg.f.compose(&images).unwrap().is_proportional(&s.f));
    for _ in 0..10 {
        let v = rng.nonzero_vector(f, 6);
        assert_eq!(corank_at(&a, &v).unwrap(), corank_at(&ga, &g.mul_vec(&v)).unwrap());
    }
}

#[test]
fn psi_does_not_depend_on_the_complement() {
    let f = f101();
    let a = sample_lagrangian(0, f);
    let sextic = sextic_equation(&a).unwrap();
    let points = points_on_sextic(&sextic, 2, 5, 200).unwrap();
    assert_eq!(points.len(), 5);
    let mut rng = SplitMix64::new(3);
    for v in points {
        let c1 = chart(&a, &v, 1).unwrap().ldual;
        let fv = fiber_f(&v).unwrap();
        let c2 = (100..)
            .map(|s| sample_lagrangian(s, f))
            .find(|c| transversal(c.basis(), a.basis()) && transversal(c.basis(), &fv))
            .unwrap();
        assert_ne!(c1.basis(), c2.basis());
        let k1 = psi_at(&a, &c1, &v).unwrap().kernel;
        let k2 = psi_at(&a, &c2, &v).unwrap().kernel;
        assert_eq!(k1.len(), k2.len());
        assert!(ExactMatrix::from_rows(f, k1).unwrap().same_row_space(&ExactMatrix::from_rows(f, k2).unwrap()));
        let tau = tangent_direction(&mut rng, &v).unwrap();
        let d1 = dpsi_compare(&a, &c1, &v, &tau).unwrap();
        let d2 = dpsi_compare(&a, &c2, &v, &tau).unwrap();
        assert!(d1.holds() && d2.holds());
        assert_eq!(d1.formula, d2.formula);
    }
}

#[test]
fn chern_reductions_hold_at_random_roots() {
    assert!(verify_reduction_at_random_roots(&roots_of_f(), 1, 20).unwrap());
    assert!(verify_reduction_at_random_roots(&roots_of_omega3(), 2, 20).unwrap());
}

#[test]
fn plucker_quadrics_restrict_to_singular_quadrics() {
    let f = f101();
    for seed in 0..5 {
        let data = build_mukai_data(seed, f).unwrap();
        for q in &data.plucker {
            assert_eq!(q.ambient_dim(), 6);
            assert!(q.corank() >= 1);
        }
        assert_eq!(data.system.span_dim(), 6);
    }
    // w -> q_w is injective: the five coordinate quadrics are independent
    let full: Vec<_> = (0..W_DIM).map(|m| plucker_quadric_qw(&unit(f, m)[..5]).unwrap()).collect();
    for q in &full {
        assert_eq!(q.rank(), 6);
    }
    let rows: Vec<Vec<FieldScalar>> = full.iter().map(|q| q.gram.entries().to_vec()).collect();
    assert_eq!(ExactMatrix::from_rows(f, rows).unwrap().rank(), W_DIM);
}
