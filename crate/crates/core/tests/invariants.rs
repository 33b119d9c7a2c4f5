//! Cross-module invariants: action invariance of the point and flat
//! classifications, censuses at orders the unit suites skip, and algebraic
//! identities of the congruence action.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use conic_nets::classify::{classify_line, classify_plane};
use conic_nets::field::{Elt, Fq};
use conic_nets::geometry::{
    all_points, normalize_point, subspace_count, sym3_rank, SubspaceIter, Sym3,
};
use conic_nets::orbits::{audit_lines, audit_points, group_elements};
use conic_nets::veronese::{
    act_subspace_unchecked, act_unchecked, apply_point, classify_point, distribution, mat3_det,
    mat3_mul, veronese, Mat3,
};

fn fq(p: u32, e: u32) -> Fq {
    Fq::new(p, e).unwrap()
}

fn random_invertible(f: &Fq, rng: &mut ChaCha8Rng) -> Mat3 {
    loop {
        let mut a = [[0 as Elt; 3]; 3];
        for row in a.iter_mut() {
            for e in row.iter_mut() {
                *e = rng.random_range(0..f.order());
            }
        }
        if mat3_det(f, &a) != 0 {
            return a;
        }
    }
}

#[test]
fn point_classes_are_action_invariant_exhaustively_q3() {
    let f = fq(3, 1);
    let points = all_points::<6>(&f);
    for a in group_elements(&f) {
        for m in &points {
            assert_eq!(
                classify_point(&f, &act_unchecked(&f, a.matrix(), m)),
                classify_point(&f, m),
                "element {:?} moved {m:?} across classes",
                a.matrix()
            );
        }
    }
}

#[test]
fn point_classes_are_action_invariant_sampled_q7_q13() {
    for p in [7u32, 13] {
        let f = fq(p, 1);
        let q = f.order();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0097_1307 + p as u64);
        for _ in 0..1000 {
            let a = random_invertible(&f, &mut rng);
            let mut m: Sym3 = [0; 6];
            while m.iter().all(|&e| e == 0) {
                for e in m.iter_mut() {
                    *e = rng.random_range(0..q);
                }
            }
            normalize_point(&f, &mut m);
            assert_eq!(
                classify_point(&f, &act_unchecked(&f, &a, &m)),
                classify_point(&f, &m),
                "q = {q}"
            );
        }
    }
}

#[test]
fn flat_classification_is_action_invariant_sampled_q5() {
    let f = fq(5, 1);
    let q = f.order() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1A7_0005);
    let total_planes = subspace_count(6, 2, f.order());
    let total_lines = subspace_count(6, 1, f.order());
    for _ in 0..300 {
        let a = random_invertible(&f, &mut rng);

        let idx = rng.random_range(0..total_planes);
        let plane = SubspaceIter::<6>::with_range(&f, 2, idx, idx + 1)
            .next()
            .unwrap();
        let moved = act_subspace_unchecked(&f, &a, &plane);
        let dist = distribution(&f, &plane);
        assert_eq!(dist.total(), q * q + q + 1);
        assert_eq!(distribution(&f, &moved), dist);
        assert_eq!(
            classify_plane(&f, &moved).unwrap(),
            classify_plane(&f, &plane).unwrap()
        );

        let idx = rng.random_range(0..total_lines);
        let line = SubspaceIter::<6>::with_range(&f, 1, idx, idx + 1)
            .next()
            .unwrap();
        let moved = act_subspace_unchecked(&f, &a, &line);
        assert_eq!(distribution(&f, &moved), distribution(&f, &line));
        assert_eq!(
            classify_line(&f, &moved).unwrap(),
            classify_line(&f, &line).unwrap()
        );
    }
}

#[test]
fn line_census_matches_orbit_sizes_q5() {
    let f = fq(5, 1);
    let report = audit_lines(&f, 4).unwrap();
    report.ensure_consistent().unwrap();
    assert_eq!(report.total_scanned, 508_431);
    assert_eq!(report.rows.len(), 15);
}

#[test]
fn point_census_closed_forms_up_to_q13() {
    for (p, e) in [(7u32, 1u32), (3, 2), (11, 1), (13, 1)] {
        let f = fq(p, e);
        audit_points(&f).unwrap().ensure_consistent().unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn quadratic_embedding_is_equivariant_q5(
        a in prop::array::uniform3(prop::array::uniform3(0u16..5)),
        x in prop::array::uniform3(0u16..5),
    ) {
        let f = fq(5, 1);
        prop_assume!(mat3_det(&f, &a) != 0);
        prop_assume!(x.iter().any(|&e| e != 0));
        let mut xn = x;
        normalize_point(&f, &mut xn);
        let lhs = act_unchecked(&f, &a, &veronese(&f, &xn));
        let rhs = veronese(&f, &apply_point(&f, &a, &xn));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_is_congruence_invariant_q7(
        a in prop::array::uniform3(prop::array::uniform3(0u16..7)),
        m in prop::array::uniform6(0u16..7),
    ) {
        let f = fq(7, 1);
        prop_assume!(mat3_det(&f, &a) != 0);
        prop_assume!(m.iter().any(|&e| e != 0));
        prop_assert_eq!(sym3_rank(&f, &act_unchecked(&f, &a, &m)), sym3_rank(&f, &m));
    }

    #[test]
    fn composition_acts_as_the_product_q5(
        a in prop::array::uniform3(prop::array::uniform3(0u16..5)),
        b in prop::array::uniform3(prop::array::uniform3(0u16..5)),
        m in prop::array::uniform6(0u16..5),
    ) {
        let f = fq(5, 1);
        prop_assume!(mat3_det(&f, &a) != 0);
        prop_assume!(mat3_det(&f, &b) != 0);
        prop_assume!(m.iter().any(|&e| e != 0));
        let stepwise = act_unchecked(&f, &a, &act_unchecked(&f, &b, &m));
        let product = act_unchecked(&f, &mat3_mul(&f, &a, &b), &m);
        prop_assert_eq!(stepwise, product);
    }
}
