mod common;

use std::collections::BTreeSet;

use common::*;
use flagsum::complex::edge_key;
use flagsum::cyclotomic::CyclotomicSum;
use flagsum::fixtures::s3_join_fixture;
use flagsum::group::FiniteGroup;
use flagsum::parcel::from_group_spec;
use flagsum::statesum::{
    count_colorings, enumerate_colorings, twisted_invariant, untwisted_invariant, vertex_denominator,
};
use flagsum::walk::{random_moves, WalkConfig};
use flagsum::{Parcel, StratifiedTriangulation, Stratum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_parcels(rng: &mut impl Rng, count: usize) -> Vec<Parcel> {
    let groups = [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3), FiniteGroup::cyclic(4)];
    let mut out = vec![Parcel::trivial(), full_parcel(FiniteGroup::cyclic(2)), full_parcel(FiniteGroup::cyclic(3))];
    while out.len() < count {
        let g = &groups[rng.gen_range(0..groups.len())];
        let spec = random_spec(rng, g);
        let Ok(p) = from_group_spec(&spec) else { continue };
        let sizes = p.hom_sizes();
        if (0..3).all(|i| (i..3).all(|j| sizes.get(i, j) <= 3)) {
            out.push(p);
        }
    }
    out
}

fn enumerated_labels(t: &StratifiedTriangulation, p: &Parcel) -> BTreeSet<Vec<usize>> {
    enumerate_colorings(t, p)
        .unwrap()
        .map(|c| {
            let mut labels = vec![usize::MAX; t.edges().len()];
            for (e, a) in c.iter() {
                let i = t.edges().iter().position(|k| *k == edge_key(e.tail, e.head)).unwrap();
                labels[i] = a.idx;
            }
            labels
        })
        .collect()
}

#[test]
fn counts_match_brute_force_on_small_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let parcels = small_parcels(&mut rng, 12);
    for round in 0..40 {
        let t = random_small_complex(&mut rng);
        assert!(t.edges().len() <= 12);
        for p in &parcels {
            let brute = brute_force_colorings(&t, p);
            assert_eq!(count_colorings(&t, p).unwrap(), brute.len() as u64, "round {round}");
            if round % 4 == 0 {
                assert_eq!(enumerated_labels(&t, p), brute.into_iter().collect(), "round {round}");
            }
        }
    }
}

#[test]
fn gauge_fixed_value_matches_brute_force_on_small_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let parcels = small_parcels(&mut rng, 8);
    for _ in 0..30 {
        let t = random_small_complex(&mut rng);
        for p in &parcels {
            let expected =
                BigRational::new(BigInt::from(brute_force_colorings(&t, p).len()), vertex_denominator(&t, p));
            assert_eq!(untwisted_invariant(&t, p).unwrap(), expected);
        }
    }
}

#[test]
fn twisted_matches_brute_force_on_small_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 25 {
        let t = random_small_complex(&mut rng);
        if !t.tetrahedra().iter().all(|tet| tet.iter().any(|&v| t.dim(v) == Stratum::Bulk)) {
            continue;
        }
        for n in [2, 3] {
            let p = full_parcel(FiniteGroup::cyclic(n));
            let alpha = cyclic_twist(&p, n, 1);
            let counts = brute_force_exponent_counts(&t, &p, &alpha);
            let expected = CyclotomicSum::from_exponent_counts(n, &counts, vertex_denominator(&t, &p));
            assert_eq!(twisted_invariant(&t, &p, &alpha).unwrap(), expected);
        }
        checked += 1;
    }
}

#[test]
fn fixture_counts_match_brute_force() {
    let t = s3_join_fixture();
    for (n, count) in [(1, 1), (2, 32), (3, 243)] {
        let p = full_parcel(FiniteGroup::cyclic(n));
        assert_eq!(brute_force_colorings(&t, &p).len(), count);
        assert_eq!(count_colorings(&t, &p).unwrap(), count as u64);
    }
}

#[test]
fn fixture_twisted_matches_brute_force() {
    let t = s3_join_fixture();
    for n in [2, 3] {
        let p = full_parcel(FiniteGroup::cyclic(n));
        for k in 1..n as i64 {
            let alpha = cyclic_twist(&p, n, k);
            let counts = brute_force_exponent_counts(&t, &p, &alpha);
            let expected = CyclotomicSum::from_exponent_counts(n, &counts, vertex_denominator(&t, &p));
            assert_eq!(twisted_invariant(&t, &p, &alpha).unwrap(), expected);
        }
    }
}

#[test]
fn twisted_matches_brute_force_along_a_walk() {
    let t = s3_join_fixture();
    let p = full_parcel(FiniteGroup::cyclic(2));
    let alpha = cyclic_twist(&p, 2, 1);
    let cfg = WalkConfig { seed: 5, steps: 12, max_vertices: 7, ..WalkConfig::default() };
    for (_, u) in random_moves(&t, &cfg).unwrap() {
        if u.edges().len() > 18 {
            continue;
        }
        let counts = brute_force_exponent_counts(&u, &p, &alpha);
        let expected = CyclotomicSum::from_exponent_counts(2, &counts, vertex_denominator(&u, &p));
        assert_eq!(twisted_invariant(&u, &p, &alpha).unwrap(), expected);
    }
}
