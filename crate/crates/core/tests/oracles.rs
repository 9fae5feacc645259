//! Independent reference computations checked against the library.

#![allow(clippy::needless_range_loop)]

use std::collections::HashSet;

use epw_core::det::{det_by_interpolation, det_linear_matrix, evaluate_matrix};
use epw_core::enumerate::{for_each_grassmannian_point, gaussian_binomial, projective_count, projective_points};
use epw_core::lagrangian::{perp, sample_lagrangian, LagrangianSubspace};
use epw_core::poly::var_names;
use epw_core::rng::SplitMix64;
use epw_core::symplectic::{symplectic_uniqueness, SymplecticForm};
use epw_core::{ExactMatrix, Field, FieldScalar, MultiPoly, Space, WedgeVector};

/// Rank by fraction-free elimination on residues: `row_j <- a_pp row_j - a_jp row_p`.
fn fraction_free_rank(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c].rem_euclid(p) != 0) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            let (a, b) = (m[rank][c], m[r][c]);
            for k in 0..cols {
                m[r][k] = (a * m[r][k] - b * m[rank][k]).rem_euclid(p);
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn rank_agrees_with_fraction_free_elimination() {
    let f5 = Field::prime(5).unwrap();
    let mut rng = SplitMix64::new(42);
    let rows: Vec<Vec<FieldScalar>> = (0..10).map(|_| rng.vector(f5, 20)).collect();
    let m = ExactMatrix::from_rows(f5, rows).unwrap();
    let ints: Vec<Vec<i64>> = (0..10)
        .map(|r| m.row(r).iter().map(|x| x.residue().unwrap() as i64).collect())
        .collect();
    assert_eq!(m.rank(), 10);
    assert_eq!(fraction_free_rank(ints, 5), 10);

    // rank-deficient cases too
    for seed in 0..20 {
        let mut rng = SplitMix64::new(seed);
        let base: Vec<Vec<FieldScalar>> = (0..4).map(|_| rng.vector(f5, 8)).collect();
        let mut rows = base.clone();
        for _ in 0..4 {
            let c = rng.vector(f5, 4);
            rows.push(
                (0..8)
                    .map(|j| (0..4).fold(f5.zero(), |acc, i| acc + &c[i] * &base[i][j]))
                    .collect(),
            );
        }
        let m = ExactMatrix::from_rows(f5, rows).unwrap();
        let ints: Vec<Vec<i64>> = (0..8)
            .map(|r| m.row(r).iter().map(|x| x.residue().unwrap() as i64).collect())
            .collect();
        assert_eq!(m.rank(), fraction_free_rank(ints, 5));
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank + kernel.len(), 8);
    }
}

fn seeded_affine_matrix(seed: u64, n: usize, nvars: usize, field: Field) -> Vec<Vec<MultiPoly>> {
    let vars = var_names("x", nvars);
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let c0 = rng.scalar(field);
                    let lin = rng.vector(field, nvars);
                    MultiPoly::affine(field, &vars, c0, &lin)
                })
                .collect()
        })
        .collect()
}

#[test]
fn determinant_matches_interpolation_on_3003_points() {
    let f = Field::prime(101).unwrap();
    let m = seeded_affine_matrix(7, 10, 5, f);
    let expanded = det_linear_matrix(&m).unwrap();
    let interpolated = det_by_interpolation(&m).unwrap();
    assert_eq!(expanded, interpolated);
    assert_eq!(expanded.degree(), 10);
}

#[test]
fn grassmannian_count_by_brute_force_over_f2() {
    // every 3x6 matrix over F_2, deduplicated by row space
    let mut spaces = HashSet::new();
    for code in 0u32..(1 << 18) {
        let rows: Vec<u32> = (0..3).map(|r| (code >> (6 * r)) & 0x3f).collect();
        let span: Vec<u32> = (0u32..8)
            .map(|c| (0..3).filter(|r| c >> r & 1 == 1).fold(0, |acc, r| acc ^ rows[r]))
            .collect();
        let distinct: HashSet<u32> = span.iter().copied().collect();
        if distinct.len() == 8 {
            let mut key: Vec<u32> = distinct.into_iter().collect();
            key.sort();
            spaces.insert(key);
        }
    }
    let mut enumerated = 0;
    for_each_grassmannian_point(3, 6, 2, |_| enumerated += 1).unwrap();
    assert_eq!(spaces.len(), 1395);
    assert_eq!(enumerated, 1395);
    assert_eq!(gaussian_binomial(6, 3, 2), 1395);
}

#[test]
fn grassmannian_count_over_f3_by_ordered_bases() {
    // ordered bases of 3-spaces in F_3^6 divided by |GL_3(F_3)|, both counted directly
    let p = 3u64;
    let gl3 = (0..3u64.pow(9))
        .filter(|&code| {
            let e: Vec<i64> = (0..9).map(|k| ((code / 3u64.pow(k)) % 3) as i64).collect();
            let d = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]);
            d.rem_euclid(3) != 0
        })
        .count() as u64;
    let bases: u64 = (0..3).map(|k| p.pow(6) - p.pow(k)).product();
    let mut enumerated = 0u64;
    for_each_grassmannian_point(3, 6, p, |_| enumerated += 1).unwrap();
    assert_eq!(gl3, 11232);
    assert_eq!(bases / gl3, 33880);
    assert_eq!(enumerated, 33880);
}

#[test]
fn projective_counts() {
    assert_eq!(projective_points(6, 5).unwrap().len() as u64, projective_count(5, 5));
    assert_eq!(projective_count(5, 5), (5u64.pow(6) - 1) / 4);
}

#[test]
fn perp_of_coordinate_by_brute_force() {
    // e_J-dual annihilates every e_I, 0 in I, exactly when 0 is not in J
    let q = Field::Rational;
    let a = LagrangianSubspace::coordinate(q);
    let p = perp(&a).unwrap();
    for j in 0..20 {
        let phi = WedgeVector::basis(q, Space::VDual, &epw_core::exterior::subset(3, j));
        let kills = (0..10).all(|r| a.basis().row(r)[j].is_zero());
        assert_eq!(p.contains(phi.coords()), kills);
    }
}

#[test]
fn uniqueness_single_line_kernel_by_rank() {
    let q = Field::Rational;
    let u = symplectic_uniqueness(&[epw_core::exterior::unit(q, 0)]).unwrap();
    assert_eq!(u.constraints, 45);
    assert_eq!(u.kernel_dim, 190 - 45);
    // the gram matrix itself is always a solution
    let g = SymplecticForm::new(q);
    assert!(g.gram().transpose() == g.gram().scale(&q.from_i64(-1)));
}

#[test]
fn evaluation_of_expanded_determinant_at_random_points() {
    let f = Field::prime(101).unwrap();
    let m = seeded_affine_matrix(11, 8, 4, f);
    let d = det_linear_matrix(&m).unwrap();
    let mut rng = SplitMix64::new(3);
    for _ in 0..100 {
        let x = rng.vector(f, 4);
        assert_eq!(d.eval(&x).unwrap(), evaluate_matrix(&m, &x).unwrap().det().unwrap());
    }
    let a = sample_lagrangian(1, f);
    assert_eq!(a.basis().rank(), 10);
}
