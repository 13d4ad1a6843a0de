//! Independent routes to the values the library computes.

mod common;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rosa::edgeword::{abelianize, billiard_prefix, candidate_edgeword, subrosa_edgeword, Edgeword};
use rosa::geometry::{compare_exact, plane_basis, rotate_lifted, slope_distance, AlgebraicReal};
use rosa::kenyon::{
    boundary_polygon, brute_force_tile, build_matching, check_matching, matching_from_tiling,
    tile_interior, tileability_criterion, BruteForceOutcome, CriterionOutcome, DEFAULT_NODE_LIMIT,
};
use rosa::multigrid::{cone_carries_word, dual_patch, type_set};
use rosa::planarity::{deviation_profile, explicit_deviation_profile};
use rosa::spectral::{expansion_matrix, spectrum};
use rosa::substitution::{
    apply, build_substitution, expansion_vector, is_primitive_order, iterate, select_planar_rosa,
    star, tile_types, DEFAULT_TILE_CAP,
};
use rosa::LiftedPoint;

use common::even_range;

fn word(n: usize, s: &str) -> Edgeword {
    Edgeword::parse(n, s).unwrap()
}

#[test]
fn subrosa_words_table() {
    let table = [
        (4, "020020"),
        (6, "024020020420"),
        (8, "02460204200240206420"),
        (10, "024680204206420024602402086420"),
    ];
    for (n, w) in table {
        assert_eq!(subrosa_edgeword(n).unwrap().to_string(), w, "n = {n}");
    }
    assert_eq!(abelianize(&subrosa_edgeword(4).unwrap()).counts, vec![4, 2]);
    assert_eq!(
        abelianize(&subrosa_edgeword(6).unwrap()).counts,
        vec![6, 4, 2]
    );
}

/// Eigenvalues of the dense symmetric expansion matrix, each plane giving a
/// double eigenvalue.
fn dense_eigenvalues(n: usize, u: &Edgeword) -> Vec<f64> {
    let m = expansion_matrix(n, u).unwrap().to_dense();
    let d = DMatrix::from_fn(n, n, |i, j| m[i][j] as f64);
    assert_eq!(d, d.transpose());
    let mut ev: Vec<f64> = d.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn doubled(lambdas: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = lambdas.iter().flat_map(|&l| [l, l]).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn spectrum_matches_dense_eigensolver() {
    let mut words: Vec<(usize, Edgeword)> = even_range(4, 12)
        .map(|n| (n, subrosa_edgeword(n).unwrap()))
        .collect();
    for n in [4, 6, 8] {
        for i in 1..=40 {
            words.push((n, candidate_edgeword(n, i).unwrap()));
        }
    }
    for (n, u) in words {
        let lib = doubled(&spectrum(n, &u).unwrap().lambdas);
        let dense = dense_eigenvalues(n, &u);
        for (a, b) in lib.iter().zip(&dense) {
            assert!(
                (a - b).abs() < 1e-8,
                "n = {n}, u = {u}: {lib:?} vs {dense:?}"
            );
        }
    }
}

#[test]
fn billiard_matches_float_crossings() {
    for n in even_range(4, 12) {
        let len = 3000;
        let mut events: Vec<(f64, u32)> = Vec::new();
        for i in 0..n / 2 {
            let c = (i as f64 * PI / n as f64).cos();
            for k in 0..len {
                events.push(((k as f64 + 0.5) / c, 2 * i as u32));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let expect: Vec<u32> = events[..len].iter().map(|e| e.1).collect();
        assert_eq!(
            billiard_prefix(n, len).unwrap().letters(),
            &expect[..],
            "n = {n}"
        );
    }
}

#[test]
fn candidate_examples() {
    assert_eq!(candidate_edgeword(4, 3).unwrap().to_string(), "020020");
    assert_eq!(
        candidate_edgeword(6, 6).unwrap(),
        subrosa_edgeword(6).unwrap()
    );
    assert_eq!(candidate_edgeword(4, 1).unwrap().to_string(), "00");
}

#[test]
fn exact_comparisons() {
    use std::cmp::Ordering;
    let half = AlgebraicReal::rational(1, 2);
    let t = half.div(&AlgebraicReal::cos_pi(1, 4));
    assert_eq!(compare_exact(&half, &t).unwrap(), Ordering::Less);
    let a = AlgebraicReal::rational(3, 2).mul(&AlgebraicReal::cos_pi(1, 6));
    let b = AlgebraicReal::rational(5, 2).mul(&AlgebraicReal::cos_pi(1, 3));
    assert_eq!(compare_exact(&a, &b).unwrap(), Ordering::Greater);
}

#[test]
fn slope_distance_matches_least_squares() {
    let cases: [(usize, usize, Vec<i64>); 4] = [
        (4, 0, vec![1, 0, 1, 0]),
        (4, 1, vec![2, -1, 0, 3]),
        (6, 0, vec![6, 4, 2, 0, -2, -4]),
        (8, 2, vec![1, 1, -1, 0, 2, 0, 0, 5]),
    ];
    for (n, k, p) in cases {
        let b = plane_basis(n, k).unwrap();
        let a = DMatrix::from_fn(
            n,
            2,
            |i, j| if j == 0 { b.cos_row[i] } else { b.sin_row[i] },
        );
        let y = DVector::from_iterator(n, p.iter().map(|&c| c as f64));
        let x = a.clone().svd(true, true).solve(&y, 1e-12).unwrap();
        let want = (y - a * x).norm();
        let got = slope_distance(&LiftedPoint::from_coords(p.clone()), &b).unwrap();
        assert!((got - want).abs() < 1e-9, "{p:?}: {got} vs {want}");
    }
}

#[test]
fn side_vectors_are_expansion_columns() {
    let p = boundary_polygon(4, &word(4, "020020"), 1).unwrap();
    assert_eq!(p.side_vectors[0].coords, vec![4, 2, 0, -2]);
    let total = p
        .side_vectors
        .iter()
        .fold(LiftedPoint::zero(4), |a, v| a.add(v));
    assert_eq!(total, LiftedPoint::zero(4));
    let u6 = subrosa_edgeword(6).unwrap();
    let p6 = boundary_polygon(6, &u6, 2).unwrap();
    assert_eq!(p6.side_vectors[0].coords, vec![6, 4, 2, 0, -2, -4]);
    assert_eq!(
        p6.side_vectors[0].coords,
        expansion_matrix(6, &u6).unwrap().first_column
    );
}

#[test]
fn criterion_agrees_with_brute_force_on_examples() {
    for (w, tileable) in [
        ("020020", true),
        ("002200", true),
        ("0220", false),
        ("2002", false),
    ] {
        let u = word(4, w);
        let c = tileability_criterion(4, &u).unwrap();
        assert_eq!(matches!(c, CriterionOutcome::Ok), tileable, "{w}");
        let brute = brute_force_tile(&boundary_polygon(4, &u, 1).unwrap(), DEFAULT_NODE_LIMIT);
        assert_eq!(
            matches!(brute, BruteForceOutcome::Tiled(_)),
            tileable,
            "{w}"
        );
    }
}

#[test]
fn brute_force_chains_give_valid_matchings() {
    for (n, w) in [(4, "020020"), (4, "0202002020"), (6, "024020020420")] {
        let u = word(n, w);
        for k in 1..=n / 2 {
            let p = boundary_polygon(n, &u, k).unwrap();
            let built = build_matching(&p).unwrap();
            assert_eq!(check_matching(&p, &built), None);
            assert_eq!(built.pairs().len() * 2, p.len());
            if n == 4 {
                let BruteForceOutcome::Tiled(t) = brute_force_tile(&p, DEFAULT_NODE_LIMIT) else {
                    panic!("{w} k = {k} not tiled");
                };
                let from_tiling = matching_from_tiling(&p, &t).unwrap();
                assert_eq!(check_matching(&p, &from_tiling), None);
                let peeled = tile_interior(&p, &built, true).unwrap();
                assert_eq!(peeled.tiles.len(), t.tiles.len());
            }
        }
    }
}

#[test]
fn tile_count_matches_area() {
    let rule = build_substitution(4, &subrosa_edgeword(4).unwrap()).unwrap();
    for m in &rule.metatiles {
        let area: f64 = m.interior.tiles.iter().map(|t| t.area()).sum();
        assert!((area - m.polygon.area()).abs() < 1e-9);
    }
}

#[test]
fn expansion_acts_on_basis() {
    let rule = build_substitution(4, &subrosa_edgeword(4).unwrap()).unwrap();
    assert_eq!(expansion_vector(&rule, 0).coords, vec![4, 2, 0, -2]);
    assert_eq!(expansion_vector(&rule, 1).coords, vec![2, 4, 2, 0]);
    for i in 0..4 {
        let e = LiftedPoint::unit(4, i);
        let image = rule.phi(&e).embed();
        let v = e.embed();
        let c = 4.0 + 2.0 * 2f64.sqrt();
        assert!((image[0] - c * v[0]).abs() < 1e-9 && (image[1] - c * v[1]).abs() < 1e-9);
        assert_eq!(
            rule.phi(&rotate_lifted(&e, 1)),
            rotate_lifted(&rule.phi(&e), 1)
        );
    }
}

#[test]
fn recursive_deviation_matches_explicit_patches() {
    let sub4 = build_substitution(4, &subrosa_edgeword(4).unwrap()).unwrap();
    let sub6 = build_substitution(6, &subrosa_edgeword(6).unwrap()).unwrap();
    let planar4 = select_planar_rosa(4, 100).unwrap().rule;
    for (rule, k) in [(&sub4, 3), (&sub6, 2), (&planar4, 2)] {
        let seed = star(rule.n).unwrap();
        let fast = deviation_profile(rule, &seed, k).unwrap();
        let slow = explicit_deviation_profile(rule, &seed, k, DEFAULT_TILE_CAP).unwrap();
        for (a, b) in fast.rows.iter().zip(&slow.rows) {
            assert!(
                (a.deviation - b.deviation).abs() < 1e-9,
                "n = {} k = {}",
                rule.n,
                a.iteration
            );
            assert!(a.upper + 1e-9 >= b.deviation);
        }
    }
}

#[test]
fn gluing_is_consistent() {
    for (n, k) in [(4, 3), (6, 2)] {
        let rule = build_substitution(n, &subrosa_edgeword(n).unwrap()).unwrap();
        let p = iterate(&rule, &star(n).unwrap(), k).unwrap();
        p.audit().unwrap();
        assert!(p.is_rotation_invariant());
        assert!(p.contains_patch(&star(n).unwrap()));
    }
}

#[test]
fn primitivity_is_monotone() {
    for n in [4, 6] {
        let rule = select_planar_rosa(n, 100).unwrap().rule;
        assert!(is_primitive_order(&rule, 2));
        assert!(is_primitive_order(&rule, 3));
    }
}

#[test]
fn single_tile_images_are_metatiles() {
    let rule = build_substitution(6, &subrosa_edgeword(6).unwrap()).unwrap();
    for ty in tile_types(6) {
        let t = rosa::Tile::new(LiftedPoint::zero(6), ty.0, ty.1).unwrap();
        let p = apply(&rule, &rosa::substitution::LiftedPatch::single(t)).unwrap();
        let k = ty.1 - ty.0;
        let m = &rule.metatiles[k.min(6 - k) - 1];
        assert_eq!(p.len(), m.interior.tiles.len() + m.half_tiles.len());
    }
}

#[test]
fn multigrid_dual_census() {
    for n in [4, 6, 8] {
        let p = dual_patch(n, 20.0).unwrap();
        assert_eq!(type_set(&p).len(), n * (n - 1) / 2, "n = {n}");
        assert!(p.is_rotation_invariant());
        p.audit().unwrap();
    }
}

#[test]
fn cone_sides_carry_billiard_word() {
    for n in [4, 6, 8, 10] {
        assert!(cone_carries_word(n, 100).unwrap(), "n = {n}");
    }
}
