//! Finite truncations of the nonatomic-measure characterization.
//!
//! A [`LeveledDecomposition`] is a finite chain of families
//! `B_0, ..., B_K` over one ambient algebra. The three conditions of
//! interest are nesting (`B_n ⊆ B_{n+1}`), the per-level intersection
//! bound (`int(B_n) >= 2^{-n}`), and splitting (every `a ∈ B_n` holds two
//! disjoint members of `B_{n+1}`). Together they yield, at depth `K`, a
//! measure giving every member of `B_n` mass at least `2^{-n}` and, down
//! the refinement tree, positive subsets of arbitrarily small mass.
//!
//! Construction operations gate eagerly on the conditions they rely on
//! and fail with the offending level and element; genuine atomlessness
//! only holds in the infinite limit, and reports say so rather than
//! pretend otherwise.

// Failure values carry the offending element and exact bounds; they are
// cold paths and worth the size.
#![allow(clippy::result_large_err)]

use std::collections::HashSet;

use num_traits::Signed;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Family, SetAlgebra};
use crate::intersection::int_exact;
use crate::measure::Measure;
use crate::rational::{pow2_inv, Rational};

/// Depth bound for [`dyadic_decomposition`]: the ambient universe has
/// `2^depth` atoms and the deepest level `2^{depth+1} - 1` members.
pub const DYADIC_DEPTH_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NonatomicError {
    #[error("decomposition needs at least one level")]
    EmptyDecomposition,
    #[error("level {level} ranges over {found} atoms, ambient has {ambient}")]
    WidthMismatch {
        ambient: usize,
        level: usize,
        found: usize,
    },
    #[error("level {level} is out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("refinement target level {to} is shallower than source level {from}")]
    BadLevelPair { from: usize, to: usize },
    #[error("element {element} is not a member of level {level}")]
    NotInLevel { level: usize, element: Element },
    #[error("nesting fails at level {level}: {element} is missing from the next level")]
    NestingViolated { level: usize, element: Element },
    #[error("no disjoint pair below {element} of level {level} exists in the next level")]
    SplitMissing { level: usize, element: Element },
    #[error("level {level} has intersection number {value}, below the required {required}")]
    BoundViolated {
        level: usize,
        value: Rational,
        required: Rational,
    },
    #[error("measure certificate fails at level {level} on {element}")]
    CertificateFailed { level: usize, element: Element },
    #[error("target mass needs refinement depth {needed}, decomposition stops at {available}")]
    DepthInsufficient { needed: usize, available: usize },
    #[error("refinement piece {element} has measure zero; the measure is not strictly positive")]
    PieceNotPositive { element: Element },
    #[error("epsilon must be positive, got {eps}")]
    EpsilonNotPositive { eps: Rational },
    #[error("dyadic depth {depth} exceeds the cap of {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A finite chain of families over one ambient algebra; level `n` stores
/// the family `B_n`. Levels keep whatever redundancy the caller supplied
/// and membership tests use exact element equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledDecomposition {
    ambient: SetAlgebra,
    levels: Vec<Family>,
}

impl LeveledDecomposition {
    pub fn new(ambient: SetAlgebra, levels: Vec<Family>) -> Result<Self, NonatomicError> {
        if levels.is_empty() {
            return Err(NonatomicError::EmptyDecomposition);
        }
        for (level, family) in levels.iter().enumerate() {
            if family.width() != ambient.atom_count() {
                return Err(NonatomicError::WidthMismatch {
                    ambient: ambient.atom_count(),
                    level,
                    found: family.width(),
                });
            }
        }
        Ok(LeveledDecomposition { ambient, levels })
    }

    /// `K`, the index of the deepest level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Family] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&Family, NonatomicError> {
        self.levels.get(n).ok_or(NonatomicError::LevelOutOfRange {
            level: n,
            depth: self.depth(),
        })
    }

    pub fn ambient(&self) -> &SetAlgebra {
        &self.ambient
    }

    fn level_contains(&self, n: usize, e: &Element) -> bool {
        self.levels[n].members().contains(e)
    }
}

/// Nesting check outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestingCheck {
    Nested,
    /// First member of level `n` missing from level `n+1`.
    Violation { level: usize, element: Element },
}

impl NestingCheck {
    pub fn holds(&self) -> bool {
        matches!(self, NestingCheck::Nested)
    }
}

/// Verifies `B_n ⊆ B_{n+1}` for every consecutive pair, by exact element
/// equality. Vacuously true at depth 0.
pub fn check_nesting(dec: &LeveledDecomposition) -> NestingCheck {
    for n in 0..dec.depth() {
        let next: HashSet<&Element> = dec.levels[n + 1].members().iter().collect();
        for member in dec.levels[n].members() {
            if !next.contains(member) {
                return NestingCheck::Violation {
                    level: n,
                    element: member.clone(),
                };
            }
        }
    }
    NestingCheck::Nested
}

/// One level's intersection number against its `2^{-n}` floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelBound {
    pub level: usize,
    pub value: Rational,
    pub required: Rational,
    pub ok: bool,
}

/// Exact per-level intersection numbers, each compared against `2^{-n}`.
pub fn check_intersection_bounds(dec: &LeveledDecomposition) -> Vec<LevelBound> {
    dec.levels
        .iter()
        .enumerate()
        .map(|(n, family)| {
            let value = int_exact(family).value;
            let required = pow2_inv(n as u32);
            let ok = value >= required;
            LevelBound {
                level: n,
                value,
                required,
                ok,
            }
        })
        .collect()
}

/// Splitting check outcome: per-level, per-member disjoint pairs, or the
/// first element with no disjoint pair below it in the next level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplittingCheck {
    Splittable {
        /// `witnesses[n][i]` splits member `i` of level `n`, for `n < K`.
        witnesses: Vec<Vec<(Element, Element)>>,
    },
    Violation { level: usize, element: Element },
}

impl SplittingCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SplittingCheck::Splittable { .. })
    }
}

/// For every `n < K` and every `a ∈ B_n`, finds disjoint `b, c ∈ B_{n+1}`
/// with `b ∪ c ⊆ a`. Vacuously true at depth 0.
pub fn check_splitting(dec: &LeveledDecomposition) -> SplittingCheck {
    let mut witnesses = Vec::new();
    for n in 0..dec.depth() {
        let mut level_witnesses = Vec::new();
        for a in dec.levels[n].members() {
            match find_split(&dec.levels[n + 1], a) {
                Some(pair) => level_witnesses.push(pair),
                None => {
                    return SplittingCheck::Violation {
                        level: n,
                        element: a.clone(),
                    }
                }
            }
        }
        witnesses.push(level_witnesses);
    }
    SplittingCheck::Splittable { witnesses }
}

/// First disjoint pair of next-level members below `a`, in member order.
fn find_split(next_level: &Family, a: &Element) -> Option<(Element, Element)> {
    let candidates: Vec<&Element> = next_level
        .members()
        .iter()
        .filter(|m| m.is_subset_of(a))
        .collect();
    for (i, b) in candidates.iter().enumerate() {
        for c in &candidates[i + 1..] {
            if b.is_disjoint_from(c) {
                return Some(((*b).clone(), (*c).clone()));
            }
        }
    }
    None
}

/// The proof's induction: splits `a ∈ B_n` via the next level and
/// recurses, producing exactly `2^{k-n}` pairwise disjoint members of
/// `B_k` contained in `a`. Fails with the level and element where a
/// splitting witness is missing.
pub fn disjoint_refinement(
    dec: &LeveledDecomposition,
    a: &Element,
    n: usize,
    k: usize,
) -> Result<Vec<Element>, NonatomicError> {
    if k > dec.depth() {
        return Err(NonatomicError::LevelOutOfRange {
            level: k,
            depth: dec.depth(),
        });
    }
    if k < n {
        return Err(NonatomicError::BadLevelPair { from: n, to: k });
    }
    if !dec.level_contains(n, a) {
        return Err(NonatomicError::NotInLevel {
            level: n,
            element: a.clone(),
        });
    }
    refine(dec, a, n, k)
}

fn refine(
    dec: &LeveledDecomposition,
    a: &Element,
    n: usize,
    k: usize,
) -> Result<Vec<Element>, NonatomicError> {
    if k == n {
        return Ok(vec![a.clone()]);
    }
    let (b, c) = find_split(&dec.levels[n + 1], a).ok_or(NonatomicError::SplitMissing {
        level: n,
        element: a.clone(),
    })?;
    let mut pieces = refine(dec, &b, n + 1, k)?;
    pieces.extend(refine(dec, &c, n + 1, k)?);
    debug_assert_eq!(pieces.len(), 1 << (k - n));
    Ok(pieces)
}

/// One optimal measure per level: `μ_n` gives every member of `B_n` mass
/// at least `2^{-n}`, verified by evaluation before returning. Fails
/// with the first level whose intersection number drops below its floor.
pub fn level_measures(dec: &LeveledDecomposition) -> Result<Vec<Measure>, NonatomicError> {
    let mut measures = Vec::with_capacity(dec.levels.len());
    for (n, family) in dec.levels.iter().enumerate() {
        let certificate = int_exact(family);
        let required = pow2_inv(n as u32);
        if certificate.value < required {
            return Err(NonatomicError::BoundViolated {
                level: n,
                value: certificate.value,
                required,
            });
        }
        for member in family.members() {
            let mass = certificate.measure.evaluate(member).expect("widths agree");
            if mass < required {
                return Err(NonatomicError::CertificateFailed {
                    level: n,
                    element: member.clone(),
                });
            }
        }
        measures.push(certificate.measure);
    }
    Ok(measures)
}

/// Per-level floor certified for the output of [`cluster_measure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCertificate {
    pub level: usize,
    /// Smallest measure of a member of this level under the cluster measure.
    pub min_mass: Rational,
    pub required: Rational,
}

/// The deepest-level measure with its verified per-level floors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterCertificate {
    pub measure: Measure,
    pub level_certificates: Vec<LevelCertificate>,
}

/// Stand-in for the cluster point of the level-measure sequence at a
/// finite truncation: the deepest measure `μ_K` already satisfies every
/// bound the limit argument certifies for `n <= K`, namely
/// `μ(a) >= 2^{-n}` for each `a ∈ B_n`. Conditions (nesting, bounds,
/// splitting) are verified first and each certificate is checked through
/// the counting route: `a` contains `2^{K-n}` disjoint members of `B_K`,
/// each of measure at least `2^{-K}`.
pub fn cluster_measure(
    dec: &LeveledDecomposition,
) -> Result<ClusterCertificate, NonatomicError> {
    if let NestingCheck::Violation { level, element } = check_nesting(dec) {
        return Err(NonatomicError::NestingViolated { level, element });
    }
    let measures = level_measures(dec)?;
    if let SplittingCheck::Violation { level, element } = check_splitting(dec) {
        return Err(NonatomicError::SplitMissing { level, element });
    }

    let depth = dec.depth();
    let measure = measures.last().expect("decomposition is nonempty").clone();
    let deep_floor = pow2_inv(depth as u32);
    let mut level_certificates = Vec::with_capacity(depth + 1);
    for (n, family) in dec.levels.iter().enumerate() {
        let required = pow2_inv(n as u32);
        let mut min_mass: Option<Rational> = None;
        for a in family.members() {
            let pieces = refine(dec, a, n, depth)?;
            for piece in &pieces {
                let piece_mass = measure.evaluate(piece).expect("widths agree");
                if piece_mass < deep_floor {
                    return Err(NonatomicError::CertificateFailed {
                        level: n,
                        element: a.clone(),
                    });
                }
            }
            let mass = measure.evaluate(a).expect("widths agree");
            if mass < required {
                return Err(NonatomicError::CertificateFailed {
                    level: n,
                    element: a.clone(),
                });
            }
            min_mass = Some(match min_mass {
                Some(current) => current.min(mass),
                None => mass,
            });
        }
        level_certificates.push(LevelCertificate {
            level: n,
            min_mass: min_mass.expect("families are nonempty"),
            required,
        });
    }

    Ok(ClusterCertificate {
        measure,
        level_certificates,
    })
}

/// A positive subset of small mass found down the refinement tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallSubset {
    pub element: Element,
    /// The level whose refinement produced the subset.
    pub refined_to_level: usize,
    pub mass: Rational,
}

/// Finds `b <= a` with `0 < μ(b) < eps`: refines `a` to the least level
/// `k` with `2^{n-k} < eps` and returns the minimum-mass piece, which the
/// pigeonhole bound keeps at or below `2^{n-k}`. Needs the measure to be
/// strictly positive on deep members and enough depth for the target.
pub fn small_positive_subset(
    dec: &LeveledDecomposition,
    measure: &Measure,
    a: &Element,
    n: usize,
    eps: &Rational,
) -> Result<SmallSubset, NonatomicError> {
    if !eps.is_positive() {
        return Err(NonatomicError::EpsilonNotPositive { eps: eps.clone() });
    }
    if n > dec.depth() {
        return Err(NonatomicError::LevelOutOfRange {
            level: n,
            depth: dec.depth(),
        });
    }
    if !dec.level_contains(n, a) {
        return Err(NonatomicError::NotInLevel {
            level: n,
            element: a.clone(),
        });
    }
    let mut steps = 0u32;
    while pow2_inv(steps) >= *eps {
        steps += 1;
    }
    let k = n + steps as usize;
    if k > dec.depth() {
        return Err(NonatomicError::DepthInsufficient {
            needed: k,
            available: dec.depth(),
        });
    }

    let pieces = disjoint_refinement(dec, a, n, k)?;
    let (element, mass) = pieces
        .into_iter()
        .map(|piece| {
            let mass = measure.evaluate(&piece).expect("widths agree");
            (piece, mass)
        })
        .min_by(|(_, m1), (_, m2)| m1.cmp(m2))
        .expect("refinements are nonempty");
    if !mass.is_positive() {
        return Err(NonatomicError::PieceNotPositive { element });
    }
    debug_assert!(mass <= pow2_inv(steps));
    debug_assert!(mass < *eps);
    Ok(SmallSubset {
        element,
        refined_to_level: k,
        mass,
    })
}

/// Canonical witness for the three conditions: the binary split of a
/// `2^depth`-atom universe. Level `n` holds every tree cell of depth at
/// most `n`, so lower levels sit inside higher ones, `int(B_n) = 2^{-n}`
/// exactly, and each cell splits into its two children.
pub fn dyadic_decomposition(depth: usize) -> Result<LeveledDecomposition, NonatomicError> {
    if depth > DYADIC_DEPTH_CAP {
        return Err(NonatomicError::DepthCapExceeded {
            depth,
            cap: DYADIC_DEPTH_CAP,
        });
    }
    let atom_count = 1usize << depth;
    let ambient = SetAlgebra::power_set(atom_count);
    let mut levels = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let mut members = Vec::new();
        for m in 0..=n {
            let cell_width = atom_count >> m;
            for cell in 0..(1usize << m) {
                let leaves: Vec<usize> = (cell * cell_width..(cell + 1) * cell_width).collect();
                members.push(Element::from_atoms(atom_count, &leaves)?);
            }
        }
        levels.push(Family::new(atom_count, members)?);
    }
    LeveledDecomposition::new(ambient, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn elem(bits: &str) -> Element {
        Element::from_bitstring(bits).unwrap()
    }

    fn dec(atoms: usize, levels: Vec<Vec<&str>>) -> LeveledDecomposition {
        let families = levels
            .into_iter()
            .map(|level| {
                Family::new(atoms, level.into_iter().map(elem).collect()).unwrap()
            })
            .collect();
        LeveledDecomposition::new(SetAlgebra::power_set(atoms), families).unwrap()
    }

    #[test]
    fn nesting_constant_levels() {
        let d = dec(2, vec![vec!["11", "10"], vec!["11", "10"]]);
        assert!(check_nesting(&d).holds());
    }

    #[test]
    fn nesting_violation_reports_first_pair() {
        let d = dec(2, vec![vec!["11"], vec!["10", "01"]]);
        assert_eq!(
            check_nesting(&d),
            NestingCheck::Violation {
                level: 0,
                element: elem("11"),
            }
        );
    }

    #[test]
    fn bounds_trivial_and_failing() {
        let d = dec(4, vec![vec!["1111"]]);
        let bounds = check_intersection_bounds(&d);
        assert_eq!(bounds.len(), 1);
        assert!(bounds[0].ok);
        assert_eq!(bounds[0].value, rat_int(1));

        // Level 1 with three pairwise disjoint sets: value 1/3 < 1/2.
        let d = dec(3, vec![vec!["111"], vec!["100", "010", "001"]]);
        let bounds = check_intersection_bounds(&d);
        assert!(bounds[0].ok);
        assert!(!bounds[1].ok);
        assert_eq!(bounds[1].value, rat(1, 3));
        assert_eq!(bounds[1].required, rat(1, 2));
    }

    #[test]
    fn splitting_fails_on_ambient_atoms() {
        let d = dec(2, vec![vec!["11", "10", "01"], vec!["11", "10", "01"]]);
        assert_eq!(
            check_splitting(&d),
            SplittingCheck::Violation {
                level: 0,
                element: elem("10"),
            }
        );
    }

    #[test]
    fn splitting_halves_witness() {
        let d = dec(2, vec![vec!["11"], vec!["10", "01", "11"]]);
        match check_splitting(&d) {
            SplittingCheck::Splittable { witnesses } => {
                assert_eq!(witnesses[0][0], (elem("10"), elem("01")));
            }
            other => panic!("expected splittable, got {other:?}"),
        }
    }

    #[test]
    fn dyadic_passes_all_three_checkers() {
        let d = dyadic_decomposition(3).unwrap();
        assert!(check_nesting(&d).holds());
        assert!(check_splitting(&d).holds());
        for bound in check_intersection_bounds(&d) {
            assert!(bound.ok);
            assert_eq!(bound.value, bound.required);
        }
    }

    #[test]
    fn dyadic_shapes() {
        let d0 = dyadic_decomposition(0).unwrap();
        assert_eq!(d0.depth(), 0);
        assert_eq!(d0.levels()[0].members(), &[Element::full(1)]);

        let d1 = dyadic_decomposition(1).unwrap();
        assert_eq!(d1.levels()[0].members(), &[elem("11")]);
        assert_eq!(d1.levels()[1].members(), &[elem("11"), elem("10"), elem("01")]);

        assert!(matches!(
            dyadic_decomposition(DYADIC_DEPTH_CAP + 1),
            Err(NonatomicError::DepthCapExceeded { .. })
        ));
    }

    #[test]
    fn refinement_base_and_recursive_cases() {
        let d = dyadic_decomposition(3).unwrap();
        let one = Element::full(8);
        assert_eq!(disjoint_refinement(&d, &one, 0, 0).unwrap(), vec![one.clone()]);

        let leaves = disjoint_refinement(&d, &one, 0, 3).unwrap();
        assert_eq!(leaves.len(), 8);
        let mut sorted = leaves.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        for leaf in &leaves {
            assert_eq!(leaf.count_atoms(), 1);
        }

        let left = Element::from_atoms(8, &[0, 1, 2, 3]).unwrap();
        let children = disjoint_refinement(&d, &left, 1, 2).unwrap();
        assert_eq!(
            children,
            vec![
                Element::from_atoms(8, &[0, 1]).unwrap(),
                Element::from_atoms(8, &[2, 3]).unwrap(),
            ]
        );
    }

    #[test]
    fn refinement_rejects_bad_inputs() {
        let d = dyadic_decomposition(2).unwrap();
        let one = Element::full(4);
        assert!(matches!(
            disjoint_refinement(&d, &one, 0, 5),
            Err(NonatomicError::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            disjoint_refinement(&d, &one, 1, 0),
            Err(NonatomicError::BadLevelPair { .. })
        ));
        let stranger = Element::from_atoms(4, &[0, 2]).unwrap();
        assert!(matches!(
            disjoint_refinement(&d, &stranger, 0, 1),
            Err(NonatomicError::NotInLevel { .. })
        ));
    }

    #[test]
    fn level_measures_respect_floors() {
        let d = dyadic_decomposition(3).unwrap();
        let measures = level_measures(&d).unwrap();
        assert_eq!(measures.len(), 4);
        for (n, (measure, family)) in measures.iter().zip(d.levels()).enumerate() {
            let floor = pow2_inv(n as u32);
            for member in family.members() {
                assert!(measure.evaluate(member).unwrap() >= floor);
            }
        }

        let bad = dec(3, vec![vec!["111"], vec!["100", "010", "001"]]);
        assert!(matches!(
            level_measures(&bad),
            Err(NonatomicError::BoundViolated { level: 1, .. })
        ));

        // A centered level concentrates near the common atom.
        let centered = dec(2, vec![vec!["11"], vec!["11", "10"]]);
        let measures = level_measures(&centered).unwrap();
        assert_eq!(measures[1], Measure::point_mass(2, 0));
    }

    #[test]
    fn cluster_measure_on_dyadic_is_uniform() {
        let d = dyadic_decomposition(3).unwrap();
        let cert = cluster_measure(&d).unwrap();
        assert_eq!(cert.measure, Measure::uniform(8));
        for (n, level_cert) in cert.level_certificates.iter().enumerate() {
            assert_eq!(level_cert.required, pow2_inv(n as u32));
            assert_eq!(level_cert.min_mass, level_cert.required);
        }
    }

    #[test]
    fn cluster_measure_gates_on_splitting() {
        let d = dec(
            2,
            vec![
                vec!["11"],
                vec!["10", "01", "11"],
                vec!["10", "01", "11"],
            ],
        );
        assert_eq!(
            cluster_measure(&d),
            Err(NonatomicError::SplitMissing {
                level: 1,
                element: elem("10"),
            })
        );
    }

    #[test]
    fn cluster_depth_zero_gives_any_probability() {
        let d = dec(2, vec![vec!["11"]]);
        let cert = cluster_measure(&d).unwrap();
        assert_eq!(cert.level_certificates[0].min_mass, rat_int(1));
    }

    #[test]
    fn small_subset_boundaries() {
        let d = dyadic_decomposition(6).unwrap();
        let measure = cluster_measure(&d).unwrap().measure;
        let one = Element::full(64);

        // eps = 1: one split suffices.
        let s = small_positive_subset(&d, &measure, &one, 0, &rat_int(1)).unwrap();
        assert_eq!(s.refined_to_level, 1);
        assert_eq!(s.mass, rat(1, 2));

        // Cell mass 2^{-5} is not < 1/32; the strict bound forces depth 6.
        let s = small_positive_subset(&d, &measure, &one, 0, &rat(1, 32)).unwrap();
        assert_eq!(s.refined_to_level, 6);
        assert_eq!(s.mass, rat(1, 64));

        // 2^{-(K+1)} is out of reach at truncation depth K.
        assert_eq!(
            small_positive_subset(&d, &measure, &one, 0, &rat(1, 128)),
            Err(NonatomicError::DepthInsufficient {
                needed: 8,
                available: 6,
            })
        );
    }

    #[test]
    fn small_subset_rejects_nonpositive_eps() {
        let d = dyadic_decomposition(1).unwrap();
        let measure = Measure::uniform(2);
        let one = Element::full(2);
        assert!(matches!(
            small_positive_subset(&d, &measure, &one, 0, &rat_int(0)),
            Err(NonatomicError::EpsilonNotPositive { .. })
        ));
    }
}
