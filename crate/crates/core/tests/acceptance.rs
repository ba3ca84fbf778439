//! Acceptance suite: every library-level criterion, exact arithmetic
//! throughout, one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

mod common;

use common::*;
use mrp_core::{
    approximability_check, check_intersection_bounds, check_nesting, check_splitting,
    cluster_measure, dyadic_decomposition, generate_subalgebra, int_bruteforce, int_exact,
    is_centered, is_n_linked, is_strictly_positive, kelley_build_measure, min_pieces,
    multiset_scan, pow2_inv, rat, rat_int, small_positive_subset, symdiff_metric, weighted_sum,
    Element, Family, Measure, PieceCriterion, Rational, SetAlgebra,
};
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn criterion_1_game_value_matches_multiset_oracle() {
    criterion(
        "criterion 1: LP duality vs multiset oracle on 500 random families",
        || {
            let mut rng = StdRng::seed_from_u64(0x4b454c4c4559);
            for case in 0..500 {
                let width = rng.random_range(3..=5);
                let members = rng.random_range(2..=5);
                let family = random_family(&mut rng, width, members);
                let certificate = int_exact(&family);
                let denominator = mrp_core::value_denominator(&certificate.value);
                let scan = multiset_scan(&family, denominator).unwrap();
                assert_eq!(
                    scan.value, certificate.value,
                    "case {case}: oracle at size {denominator} must close the gap"
                );
                let brute = int_bruteforce(&family, denominator).unwrap();
                assert!(brute.exact, "case {case}: exactness flag must be set");
            }
        },
    );
}

#[test]
fn criterion_2_fixture_values() {
    criterion("criterion 2: fixture intersection numbers", || {
        let fano = fano_lines();
        assert_eq!(int_exact(&fano).value, rat(3, 7));
        assert_eq!(multiset_scan(&fano, 7).unwrap().value, rat(3, 7));

        let triangle = triangle_family();
        assert_eq!(int_exact(&triangle).value, rat(2, 3));
        assert_eq!(multiset_scan(&triangle, 3).unwrap().value, rat(2, 3));

        let disjoint = two_disjoint();
        assert_eq!(int_exact(&disjoint).value, rat(1, 2));

        let centered = centered_family();
        assert_eq!(int_exact(&centered).value, rat_int(1));
    });
}

#[test]
fn criterion_3_dyadic_truncation() {
    criterion("criterion 3: dyadic decompositions, depths 1..=6", || {
        for depth in 1..=6usize {
            let dec = dyadic_decomposition(depth).unwrap();
            assert!(check_nesting(&dec).holds(), "depth {depth}: nesting");
            assert!(check_splitting(&dec).holds(), "depth {depth}: splitting");
            for bound in check_intersection_bounds(&dec) {
                assert!(bound.ok, "depth {depth}: bound at level {}", bound.level);
                assert_eq!(
                    bound.value,
                    pow2_inv(bound.level as u32),
                    "depth {depth}: level {} value must be exactly 2^-n",
                    bound.level
                );
            }

            let atoms = 1usize << depth;
            let cert = cluster_measure(&dec).unwrap();
            assert_eq!(cert.measure, Measure::uniform(atoms), "depth {depth}");
            for (n, family) in dec.levels().iter().enumerate() {
                let floor = pow2_inv(n as u32);
                for a in family.members() {
                    assert!(
                        direct_mass(&cert.measure, a) >= floor,
                        "depth {depth}: member of level {n} below 2^-n"
                    );
                }
            }

            // Positive subsets below every eps > 2^-depth.
            let one = Element::full(atoms);
            let mut epsilons: Vec<Rational> =
                (0..depth).map(|t| pow2_inv(t as u32)).collect();
            epsilons.push(pow2_inv(depth as u32) + pow2_inv(2 * depth as u32));
            for eps in &epsilons {
                assert!(*eps > pow2_inv(depth as u32));
                let subset =
                    small_positive_subset(&dec, &cert.measure, &one, 0, eps).unwrap();
                assert!(subset.mass.is_positive());
                assert!(subset.mass < *eps);
            }
        }
    });
}

#[test]
fn criterion_4_kelley_construction() {
    criterion(
        "criterion 4: strictly positive measures on 100 random algebras",
        || {
            let mut rng = StdRng::seed_from_u64(0x53545249435401);
            for case in 0..100 {
                let width = rng.random_range(2..=6);
                let generator_count = rng.random_range(0..=4);
                let generators: Vec<Element> = (0..generator_count)
                    .map(|_| random_nonzero_element(&mut rng, width))
                    .collect();
                let algebra = generate_subalgebra(width, &generators).unwrap();
                let nonzero = algebra.nonzero_elements().unwrap();

                // Scatter the nonzero elements into up to four pieces.
                let piece_count = rng.random_range(1..=4usize);
                let mut buckets: Vec<Vec<Element>> = vec![Vec::new(); piece_count];
                for e in nonzero {
                    let bucket = rng.random_range(0..piece_count);
                    buckets[bucket].push(e);
                }
                let pieces: Vec<Family> = buckets
                    .into_iter()
                    .filter(|b| !b.is_empty())
                    .map(|b| Family::new(width, b).unwrap())
                    .collect();

                let built = kelley_build_measure(&pieces).unwrap();
                assert!(
                    is_strictly_positive(&built.measure, &algebra).unwrap().holds(),
                    "case {case}: coverage must force strict positivity"
                );
                for (piece, bound) in pieces.iter().zip(&built.per_piece_lower_bounds) {
                    for member in piece.members() {
                        assert!(
                            direct_mass(&built.measure, member) >= *bound,
                            "case {case}: reported lower bound violated"
                        );
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_5_approximability_monotone() {
    criterion(
        "criterion 5: approximability threshold monotonicity and boundary",
        || {
            let mut rng = StdRng::seed_from_u64(0x4d41474e);
            let grid: Vec<Rational> = vec![
                rat(1, 10),
                rat(1, 4),
                rat(2, 5),
                rat(1, 2),
                rat(3, 4),
                rat(9, 10),
            ];
            for _ in 0..50 {
                let width = rng.random_range(3..=5);
                let piece_count = rng.random_range(1..=3usize);
                let pieces: Vec<Family> = (0..piece_count)
                    .map(|_| {
                        let members = rng.random_range(1..=4);
                        random_family(&mut rng, width, members)
                    })
                    .collect();
                let verdicts: Vec<bool> = grid
                    .iter()
                    .map(|eps| approximability_check(&pieces, eps).unwrap().ok)
                    .collect();
                for i in 0..verdicts.len() {
                    for j in i + 1..verdicts.len() {
                        assert!(
                            !verdicts[i] || verdicts[j],
                            "ok at eps must imply ok at larger eps"
                        );
                    }
                }
            }

            // Fano as a single piece accepts exactly at eps = 4/7.
            let fano = [fano_lines()];
            assert!(approximability_check(&fano, &rat(4, 7)).unwrap().ok);
            assert!(!approximability_check(&fano, &(rat(4, 7) - rat(1, 1000))).unwrap().ok);
        },
    );
}

#[test]
fn criterion_6_min_pieces_exactness() {
    criterion(
        "criterion 6: branch-and-bound vs exhaustive set partitions",
        || {
            let mut rng = StdRng::seed_from_u64(0x434f4c4f52);
            let beta = rat(3, 4);
            let criteria = [
                PieceCriterion::Centered,
                PieceCriterion::NLinked(2),
                PieceCriterion::IntAtLeast(beta),
            ];
            for case in 0..60 {
                let width = rng.random_range(3..=5);
                let members = rng.random_range(2..=8);
                let family = random_family(&mut rng, width, members);
                for criterion_kind in &criteria {
                    let searched = min_pieces(&family, criterion_kind).unwrap();
                    let expected = partition_min_oracle(family.len(), |piece| {
                        let sub = family.subfamily(piece).unwrap();
                        match criterion_kind {
                            PieceCriterion::Centered => is_centered(&sub).holds(),
                            PieceCriterion::NLinked(n) => {
                                is_n_linked(&sub, *n).unwrap().holds()
                            }
                            PieceCriterion::IntAtLeast(b) => int_exact(&sub).value >= *b,
                        }
                    });
                    assert_eq!(
                        searched.count, expected,
                        "case {case}: {criterion_kind:?} count must match the oracle"
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_7_measure_axioms() {
    criterion("criterion 7: measure axiom properties, 1000 cases each", || {
        let mut rng = StdRng::seed_from_u64(0x4d454153);

        // Additivity on disjoint pairs.
        for _ in 0..1000 {
            let width = rng.random_range(2..=8);
            let m = random_measure(&mut rng, width);
            let a = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let raw = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let b = raw.meet(&a.complement());
            assert_eq!(
                m.evaluate(&a.join(&b)).unwrap(),
                m.evaluate(&a).unwrap() + m.evaluate(&b).unwrap()
            );
        }

        // Monotonicity.
        for _ in 0..1000 {
            let width = rng.random_range(2..=8);
            let m = random_measure(&mut rng, width);
            let a = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let extra = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let b = a.join(&extra);
            assert!(m.evaluate(&a).unwrap() <= m.evaluate(&b).unwrap());
        }

        // Triangle inequality for the symmetric-difference metric.
        for _ in 0..1000 {
            let width = rng.random_range(2..=8);
            let m = random_measure(&mut rng, width);
            let a = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let b = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let c = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let ab = symdiff_metric(&m, &a, &b).unwrap();
            let bc = symdiff_metric(&m, &b, &c).unwrap();
            let ac = symdiff_metric(&m, &a, &c).unwrap();
            assert!(ac <= ab + bc);
        }

        // Weighted sums evaluate linearly.
        for _ in 0..1000 {
            let width = rng.random_range(2..=6);
            let count = rng.random_range(1..=3usize);
            let measures: Vec<Measure> =
                (0..count).map(|_| random_measure(&mut rng, width)).collect();
            let raw: Vec<i64> = (0..count).map(|_| rng.random_range(1..20)).collect();
            let total: i64 = raw.iter().sum();
            let weights: Vec<Rational> = raw
                .iter()
                .map(|&r| Rational::new(r.into(), total.into()))
                .collect();
            let combined = weighted_sum(&measures, &weights).unwrap();
            let a = element_from_mask(width, rng.random_range(0..(1u64 << width)));
            let expected: Rational = measures
                .iter()
                .zip(&weights)
                .map(|(mu, w)| w * mu.evaluate(&a).unwrap())
                .sum();
            assert_eq!(combined.evaluate(&a).unwrap(), expected);
        }
    });
}

/// Strict positivity needs full coverage; a missing atom shows up as a witness.
#[test]
fn uncovered_pieces_are_reported() {
    let width = 3;
    let algebra = SetAlgebra::power_set(width);
    let pieces = vec![Family::new(
        width,
        vec![
            Element::from_bitstring("110").unwrap(),
            Element::from_bitstring("100").unwrap(),
        ],
    )
    .unwrap()];
    let built = kelley_build_measure(&pieces).unwrap();
    let check = is_strictly_positive(&built.measure, &algebra).unwrap();
    assert!(!check.holds());
}
