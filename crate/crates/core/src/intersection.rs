//! Intersection numbers of set families.
//!
//! Two independent routes to the same quantity. [`multiset_scan`]
//! enumerates finite multisets of members straight from the definition:
//! the intersection number is the infimum over multisets `ā` of the
//! largest common-atom subfamily fraction, and the inner maximum equals
//! the best atom coverage of the multiset. [`int_exact`] solves the
//! atom-versus-member incidence game instead, whose value is the maximum
//! over probability measures of the worst member measure. The scan gives
//! an upper bound that meets the game value once the multiset size
//! reaches the value's denominator, which is how [`int_bruteforce`]
//! detects exactness.

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{Element, Family};
use crate::lp::solve_game;
use crate::measure::{weighted_sum, Measure};
use crate::rational::{pow2_inv, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("multiset size bound must be at least 1")]
    ZeroMultisetBound,
    #[error("piece list must be nonempty")]
    EmptyPieceList,
    #[error("pieces range over different universes: {first} vs {second} atoms")]
    MixedWidths { first: usize, second: usize },
    #[error("epsilon must lie in (0, 1), got {eps}")]
    EpsilonOutOfRange { eps: Rational },
    #[error("measure width {measure_width} does not match family width {family_width}")]
    WidthMismatch {
        measure_width: usize,
        family_width: usize,
    },
}

/// Best multiset bound found by pure enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetScan {
    /// Minimum over scanned multisets of best-coverage / size.
    pub value: Rational,
    /// A minimizing multiset, as member indices with repetition.
    pub witness: Vec<usize>,
}

/// Enumerates every multiset of members of size `1..=max_size` and
/// returns the minimizing common-atom fraction. Pure enumeration from
/// the definition; no linear programming anywhere on this path.
pub fn multiset_scan(
    family: &Family,
    max_size: usize,
) -> Result<MultisetScan, IntersectionError> {
    if max_size < 1 {
        return Err(IntersectionError::ZeroMultisetBound);
    }
    let width = family.width();
    let atom_sets: Vec<Vec<usize>> = family.members().iter().map(|m| m.atoms()).collect();

    struct Scan<'a> {
        atom_sets: &'a [Vec<usize>],
        coverage: Vec<u64>,
        stack: Vec<usize>,
        max_size: usize,
        best_num: u64,
        best_den: u64,
        witness: Vec<usize>,
    }

    impl Scan<'_> {
        fn visit(&mut self, from_member: usize, current_max: u64) {
            let size = self.stack.len() as u64;
            if size > 0 {
                // current_max / size < best_num / best_den ?
                if current_max * self.best_den < self.best_num * size {
                    self.best_num = current_max;
                    self.best_den = size;
                    self.witness = self.stack.clone();
                }
            }
            if self.stack.len() == self.max_size {
                return;
            }
            let remaining = (self.max_size - self.stack.len()) as u64;
            // Even if the max-covered atom never grows, the subtree cannot
            // get below current_max / (size + remaining).
            if size > 0 && current_max * self.best_den >= self.best_num * (size + remaining) {
                return;
            }
            for member in from_member..self.atom_sets.len() {
                let mut new_max = current_max;
                for &atom in &self.atom_sets[member] {
                    self.coverage[atom] += 1;
                    new_max = new_max.max(self.coverage[atom]);
                }
                self.stack.push(member);
                self.visit(member, new_max);
                self.stack.pop();
                for &atom in &self.atom_sets[member] {
                    self.coverage[atom] -= 1;
                }
            }
        }
    }

    let mut scan = Scan {
        atom_sets: &atom_sets,
        coverage: vec![0; width],
        stack: Vec::new(),
        max_size,
        // A single member always intersects itself, so 1 is an upper bound.
        best_num: 1,
        best_den: 1,
        witness: vec![0],
    };
    scan.visit(0, 0);

    Ok(MultisetScan {
        value: Rational::new((scan.best_num as i64).into(), (scan.best_den as i64).into()),
        witness: scan.witness,
    })
}

/// Scan result cross-linked against the game value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    pub value: Rational,
    pub witness: Vec<usize>,
    /// True when the scan already met the exact game value.
    pub exact: bool,
}

/// Definition-side computation with an exactness flag: the scan value is
/// always an upper bound for the intersection number, and it is exact as
/// soon as it coincides with the game value, which happens once the size
/// bound reaches the denominator of that value.
pub fn int_bruteforce(
    family: &Family,
    max_size: usize,
) -> Result<BruteForceResult, IntersectionError> {
    let scan = multiset_scan(family, max_size)?;
    let certificate = int_exact(family);
    let exact = scan.value == certificate.value;
    Ok(BruteForceResult {
        value: scan.value,
        witness: scan.witness,
        exact,
    })
}

/// Exact intersection number with optimality certificates on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionCertificate {
    pub value: Rational,
    /// A probability measure attaining the value: every member has
    /// measure at least `value`, with equality for some member.
    pub measure: Measure,
    /// An adversarial distribution over members: no atom is covered with
    /// probability above `value`, with equality for some atom.
    pub adversary: Vec<Rational>,
}

/// Intersection number as the value of the atom-by-member incidence
/// game: rows are universe atoms, columns are members, payoff 1 when the
/// atom lies in the member.
pub fn int_exact(family: &Family) -> IntersectionCertificate {
    let width = family.width();
    let mut payoff = vec![vec![Rational::zero(); family.len()]; width];
    for (j, member) in family.members().iter().enumerate() {
        for atom in member.atoms() {
            payoff[atom][j] = Rational::one();
        }
    }
    let game = solve_game(&payoff).expect("families are nonempty over nonzero members");
    let measure = Measure::new(game.row_strategy).expect("strategies are distributions");
    IntersectionCertificate {
        value: game.value,
        measure,
        adversary: game.col_strategy,
    }
}

/// The denominator of the exact value, as the multiset size needed by
/// the definition-side scan to close the gap.
pub fn value_denominator(value: &Rational) -> usize {
    value
        .denom()
        .to_usize()
        .expect("intersection denominators stay small")
}

/// Per-piece intersection numbers for a claimed decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KelleyReport {
    pub values: Vec<Rational>,
    pub all_positive: bool,
}

/// Evaluates every piece. Families of nonzero members always have
/// positive intersection number (a lone member meets itself), so the
/// interesting output is the exact values; `all_positive` records the
/// criterion's verdict anyway.
pub fn kelley_check(pieces: &[Family]) -> Result<KelleyReport, IntersectionError> {
    check_common_width(pieces)?;
    let values: Vec<Rational> = pieces.iter().map(|p| int_exact(p).value).collect();
    let all_positive = values.iter().all(|v| v.is_positive());
    Ok(KelleyReport {
        values,
        all_positive,
    })
}

/// A strictly positive measure assembled from per-piece optimal measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KelleyMeasure {
    pub measure: Measure,
    /// `w_n * int(piece_n)`: a verified floor for every member of piece `n`.
    pub per_piece_lower_bounds: Vec<Rational>,
    pub piece_values: Vec<Rational>,
}

/// Builds `μ = Σ w_n μ_n` from the per-piece optimal measures, with
/// dyadic weights `w_n = 2^{-(n+1)}` and the last weight doubled so the
/// finite list sums to exactly 1. Every reported lower bound is verified
/// by direct evaluation before returning. If the pieces cover every
/// nonzero element of an algebra, the result is strictly positive on it.
pub fn kelley_build_measure(pieces: &[Family]) -> Result<KelleyMeasure, IntersectionError> {
    check_common_width(pieces)?;
    let n_pieces = pieces.len();
    let mut weights: Vec<Rational> = (0..n_pieces).map(|n| pow2_inv(n as u32 + 1)).collect();
    weights[n_pieces - 1] = pow2_inv(n_pieces as u32 - 1);

    let certificates: Vec<IntersectionCertificate> = pieces.iter().map(int_exact).collect();
    let measures: Vec<Measure> = certificates.iter().map(|c| c.measure.clone()).collect();
    let measure = weighted_sum(&measures, &weights).expect("dyadic weights sum to 1");

    let piece_values: Vec<Rational> = certificates.iter().map(|c| c.value.clone()).collect();
    let bounds: Vec<Rational> = piece_values
        .iter()
        .zip(&weights)
        .map(|(v, w)| v * w)
        .collect();
    for ((piece, bound), _) in pieces.iter().zip(&bounds).zip(&weights) {
        for member in piece.members() {
            let mass = measure.evaluate(member).expect("widths agree");
            assert!(
                mass >= *bound,
                "per-piece lower bound must hold by construction"
            );
        }
    }

    Ok(KelleyMeasure {
        measure,
        per_piece_lower_bounds: bounds,
        piece_values,
    })
}

/// Per-piece values against the `1 - ε` threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximabilityReport {
    pub values: Vec<Rational>,
    pub threshold: Rational,
    pub ok: bool,
}

/// `ok` iff every piece has intersection number at least `1 - eps`.
/// The comparison is non-strict, so boundary decompositions pass.
pub fn approximability_check(
    pieces: &[Family],
    eps: &Rational,
) -> Result<ApproximabilityReport, IntersectionError> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(IntersectionError::EpsilonOutOfRange { eps: eps.clone() });
    }
    let report = kelley_check(pieces)?;
    let threshold = Rational::one() - eps;
    let ok = report.values.iter().all(|v| *v >= threshold);
    Ok(ApproximabilityReport {
        values: report.values,
        threshold,
        ok,
    })
}

/// Outcome of testing a measure sequence against target elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceCheck {
    pub ok: bool,
    /// Targets that no measure in the sequence pushes above 1/2.
    pub failures: Vec<Element>,
}

/// `ok` iff every target `a` has some `n` with `μ_n(a) > 1/2`, strictly.
pub fn check_approximating_sequence(
    measures: &[Measure],
    targets: &Family,
) -> Result<SequenceCheck, IntersectionError> {
    for m in measures {
        if m.width() != targets.width() {
            return Err(IntersectionError::WidthMismatch {
                measure_width: m.width(),
                family_width: targets.width(),
            });
        }
    }
    let half = Rational::new(1.into(), 2.into());
    let mut failures = Vec::new();
    for a in targets.members() {
        let witnessed = measures
            .iter()
            .any(|m| m.evaluate(a).expect("width checked") > half);
        if !witnessed {
            failures.push(a.clone());
        }
    }
    Ok(SequenceCheck {
        ok: failures.is_empty(),
        failures,
    })
}

fn check_common_width(pieces: &[Family]) -> Result<(), IntersectionError> {
    let Some(first) = pieces.first() else {
        return Err(IntersectionError::EmptyPieceList);
    };
    for p in pieces {
        if p.width() != first.width() {
            return Err(IntersectionError::MixedWidths {
                first: first.width(),
                second: p.width(),
            });
        }
    }
    Ok(())
}
