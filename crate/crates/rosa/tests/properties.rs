use std::sync::OnceLock;

use proptest::prelude::*;

use rosa::edgeword::{
    abelianize, balance_constant, billiard_prefix, candidate_edgeword, counting, counting_inverse,
    CountBound, Edgeword,
};
use rosa::geometry::{plane_basis, rotate_lifted, slope_distance_f64};
use rosa::kenyon::{
    boundary_polygon, build_matching, check_matching, tile_interior, validate_tiling,
};
use rosa::multigrid::{dual_patch, halfline_word};
use rosa::planarity::deviation_profile;
use rosa::spectral::{elementary_matrix, expansion_matrix, spectrum, PseudoCirculant};
use rosa::substitution::{
    apply, apply_audited, build_substitution, LiftedPatch, PatchMeta, SubstitutionRule,
};
use rosa::{LiftedPoint, Tile};

fn even_n() -> impl Strategy<Value = usize> {
    (2usize..=6).prop_map(|h| 2 * h)
}

fn point(n: usize) -> impl Strategy<Value = LiftedPoint> {
    prop::collection::vec(-6i64..=6, n).prop_map(LiftedPoint::from_coords)
}

fn n_and_point() -> impl Strategy<Value = (usize, LiftedPoint)> {
    even_n().prop_flat_map(|n| (Just(n), point(n)))
}

fn n_and_word() -> impl Strategy<Value = (usize, Edgeword)> {
    even_n().prop_flat_map(|n| {
        let letters = prop::collection::vec((0..n as u32 / 2).prop_map(|a| 2 * a), 0..40);
        (Just(n), letters).prop_map(|(n, l)| (n, Edgeword::new(n, l).unwrap()))
    })
}

fn tile(n: usize) -> impl Strategy<Value = Tile> {
    (point(n), 0..n, 1..n).prop_map(move |(p, i, d)| {
        let j = (i + d) % n;
        Tile::new(p, i.min(j), i.max(j)).unwrap()
    })
}

fn subrosa4() -> &'static SubstitutionRule {
    static R: OnceLock<SubstitutionRule> = OnceLock::new();
    R.get_or_init(|| build_substitution(4, &Edgeword::parse(4, "020020").unwrap()).unwrap())
}

fn subrosa6() -> &'static SubstitutionRule {
    static R: OnceLock<SubstitutionRule> = OnceLock::new();
    R.get_or_init(|| build_substitution(6, &rosa::edgeword::subrosa_edgeword(6).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn planes_decompose_the_norm((n, p) in n_and_point()) {
        let x = p.as_f64();
        let total: f64 = (0..n / 2)
            .map(|k| {
                let [a, b] = plane_basis(n, k).unwrap().project(&x);
                a * a + b * b
            })
            .sum();
        prop_assert!((total - p.norm_sq() as f64).abs() < 1e-8);
        let b0 = plane_basis(n, 0).unwrap();
        let [a, b] = b0.project(&x);
        let d = slope_distance_f64(&x, &b0).unwrap();
        prop_assert!((a * a + b * b + d * d - p.norm_sq() as f64).abs() < 1e-8);
    }

    #[test]
    fn rotation_embeds_as_rotation((n, p) in n_and_point(), s in -20i64..20) {
        let q = rotate_lifted(&p, s).embed();
        let [x, y] = p.embed();
        let a = s as f64 * std::f64::consts::PI / n as f64;
        prop_assert!((q[0] - (a.cos() * x - a.sin() * y)).abs() < 1e-9);
        prop_assert!((q[1] - (a.sin() * x + a.cos() * y)).abs() < 1e-9);
        prop_assert_eq!(rotate_lifted(&p, 2 * n as i64), p.clone());
        prop_assert_eq!(rotate_lifted(&p, n as i64), p.neg());
    }

    #[test]
    fn abelianization_counts_letters((n, u) in n_and_word()) {
        let a = abelianize(&u);
        for (i, &c) in a.counts.iter().enumerate() {
            prop_assert_eq!(c as usize, counting(&u, 2 * i as u32, u.len()));
        }
        let m = expansion_matrix(n, &u).unwrap();
        let mut sum = PseudoCirculant::zero(n);
        for (i, &c) in a.counts.iter().enumerate() {
            sum = sum.add(&elementary_matrix(n, i).unwrap().scale(c as i64));
        }
        prop_assert_eq!(m, sum);
    }

    #[test]
    fn spectrum_is_an_eigenvalue_set((n, u) in n_and_word()) {
        prop_assume!(!u.is_empty());
        let m = expansion_matrix(n, &u).unwrap();
        let s = spectrum(n, &u).unwrap();
        for (k, l) in s.lambdas.iter().enumerate() {
            let (re, im) = m.symbol(k);
            prop_assert!((re - l).abs() < 1e-8 && im.abs() < 1e-8);
            prop_assert!(m.eigenvector_residual(k) < 1e-8);
        }
    }

    #[test]
    fn pseudo_circulants_commute_with_rotation(col in prop::collection::vec(-5i64..=5, 8), p in point(8)) {
        let m = PseudoCirculant::new(col);
        let lhs = m.apply(&rotate_lifted(&p, 1).coords);
        let rhs = rotate_lifted(&LiftedPoint::from_coords(m.apply(&p.coords)), 1);
        prop_assert_eq!(lhs, rhs.coords);
    }

    #[test]
    fn counting_inverse_is_adjoint((n, u) in n_and_word(), j in 0u32..3, x in 0usize..40) {
        let j = 2 * (j % (n as u32 / 2));
        let x = x.min(u.len());
        let y = counting(&u, j, x);
        match counting_inverse(&u, j, y) {
            CountBound::Finite(z) => {
                prop_assert!(z <= x);
                prop_assert_eq!(counting(&u, j, z), y);
            }
            CountBound::Infinite => prop_assert!(false, "count {} was reached", y),
        }
    }

    #[test]
    fn billiard_words_are_balanced_and_ordered(n in even_n(), len in 1usize..600) {
        let w = billiard_prefix(n, len).unwrap();
        prop_assert!(balance_constant(&w) <= 1);
        let c = abelianize(&w).counts;
        prop_assert!(c.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn candidates_are_billiard_palindromes(n in even_n(), i in 1usize..80) {
        let p = candidate_edgeword(n, i).unwrap();
        prop_assert!(p.is_palindrome());
        prop_assert_eq!(p.prefix(i), billiard_prefix(n, i).unwrap());
        prop_assert!(balance_constant(&p) <= 2);
    }

    #[test]
    fn halfline_reads_billiard(n in even_n(), len in 0usize..400) {
        prop_assert_eq!(halfline_word(n, len).unwrap(), billiard_prefix(n, len).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn metatile_tilings_are_valid(i in 1usize..16, k in 1usize..=2) {
        let u = candidate_edgeword(4, i).unwrap();
        let p = boundary_polygon(4, &u, k).unwrap();
        if let Ok(mt) = build_matching(&p) {
            prop_assert_eq!(check_matching(&p, &mt), None);
            if let Ok(t) = tile_interior(&p, &mt, false) {
                prop_assert!(validate_tiling(&p, &t).is_ok());
            }
        }
    }

    #[test]
    fn substitution_is_equivariant(t in tile(4), s in 0i64..8, shift in point(4)) {
        let rule = subrosa4();
        let single = LiftedPatch::single(t.clone());
        let image = apply(rule, &single).unwrap();
        prop_assert_eq!(apply(rule, &single.rotate(s)).unwrap(), image.rotate(s));
        prop_assert_eq!(
            apply(rule, &single.translate(&shift)).unwrap(),
            image.translate(&rule.phi(&shift))
        );
    }

    #[test]
    fn expansion_scales_directions(i in 0usize..6) {
        let rule = subrosa6();
        let e = LiftedPoint::unit(6, i);
        let img = rule.phi(&e).embed();
        let v = e.embed();
        let c = spectrum(6, &rule.edgeword).unwrap().lambdas[0];
        prop_assert!((img[0] - c * v[0]).abs() < 1e-9 && (img[1] - c * v[1]).abs() < 1e-9);
    }

    #[test]
    fn area_is_preserved(tiles in prop::collection::btree_set(tile(6), 1..4)) {
        let patch = LiftedPatch::from_tiles(6, tiles);
        prop_assume!(patch.audit().is_ok());
        if let Ok((_, audit)) = apply_audited(subrosa6(), &patch, usize::MAX) {
            prop_assert!(audit.holds(1e-9));
        }
    }

    #[test]
    fn deviation_is_rotation_invariant(t in tile(4), s in 1i64..8) {
        let rule = subrosa4();
        let seed = LiftedPatch::single(t);
        let a = deviation_profile(rule, &seed, 3).unwrap().deviations();
        let b = deviation_profile(rule, &seed.rotate(s), 3).unwrap().deviations();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn patch_files_round_trip(tiles in prop::collection::btree_set(tile(6), 0..20)) {
        let patch = LiftedPatch::from_tiles(6, tiles);
        let meta = PatchMeta { edgeword: "024020020420".into(), iterations: 0, seed: "tiles".into() };
        let json = serde_json::to_string(&patch.to_file(meta)).unwrap();
        let back = LiftedPatch::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, patch);
    }

    #[test]
    fn dual_patches_are_edge_to_edge(n in even_n(), r in 0.6f64..6.0) {
        let p = dual_patch(n, r).unwrap();
        prop_assert!(p.audit().is_ok());
        prop_assert!(p.is_rotation_invariant());
    }
}
