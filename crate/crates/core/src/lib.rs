//! Exact-arithmetic toolkit for finite Boolean set algebras.
//!
//! The crate computes intersection numbers of set families two
//! independent ways (definition-side multiset enumeration and an exact
//! rational matrix game), verifies and constructs strictly positive
//! finitely additive measures from combinatorial decompositions, checks
//! the finite truncation of the nonatomicity conditions on leveled
//! decompositions, and analyzes linkedness properties with exact
//! minimum-piece partition search. Every numeric value is an exact
//! rational; nothing is ever rounded.
//!
//! All operations are pure functions over immutable values and safe to
//! call concurrently on distinct inputs.

pub mod algebra;
pub mod intersection;
pub mod lp;
pub mod measure;
pub mod nonatomic;
pub mod rational;
pub mod search;

pub use algebra::{
    generate_subalgebra, is_antichain, is_atomless, AlgebraError, AntichainCheck, AtomlessCheck,
    Element, Family, SetAlgebra, ENUMERATION_LIMIT, MATERIALIZATION_CAP,
};
pub use intersection::{
    approximability_check, check_approximating_sequence, int_bruteforce, int_exact, kelley_check,
    kelley_build_measure, multiset_scan, value_denominator, ApproximabilityReport,
    BruteForceResult, IntersectionCertificate, IntersectionError, KelleyMeasure, KelleyReport,
    MultisetScan, SequenceCheck,
};
pub use lp::{
    simplex_solve, solve_game, Constraint, GameSolution, Lp, LpError, LpOutcome, LpSolution,
    Relation, Sense,
};
pub use measure::{
    is_epsilon_nonatomic, is_strictly_positive, symdiff_metric, weighted_sum,
    EpsilonNonatomicity, Measure, MeasureError, StrictPositivity,
};
pub use nonatomic::{
    check_intersection_bounds, check_nesting, check_splitting, cluster_measure,
    disjoint_refinement, dyadic_decomposition, level_measures, small_positive_subset,
    ClusterCertificate, LevelBound, LevelCertificate, LeveledDecomposition, NestingCheck,
    NonatomicError, SmallSubset, SplittingCheck, DYADIC_DEPTH_CAP,
};
pub use rational::{approx_f64, format_rational, pow2_inv, rat, rat_int, Rational};
pub use search::{
    is_centered, is_n_linked, linked_vs_int_report, min_pieces, CenteredCheck, LinkedIntRow,
    LinkednessCheck, MinPieces, PieceCriterion, SearchError,
};
