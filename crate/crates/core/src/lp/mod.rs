//! Exact rational linear programming and zero-sum matrix games.
//!
//! Dense two-phase simplex over [`Rational`](crate::Rational) with
//! Bland's pivot rule. Exact arithmetic makes degeneracy cycling a real
//! risk and these instances are small, so termination wins over speed.

mod game;
mod simplex;

pub use game::{solve_game, GameSolution};
pub use simplex::{simplex_solve, Constraint, Lp, LpOutcome, LpSolution, Relation, Sense};

use thiserror::Error;

/// Errors from LP and game construction. Infeasible and unbounded LPs
/// are outcomes, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program has no variables")]
    EmptyProblem,
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("payoff matrix must be nonempty")]
    EmptyMatrix,
    #[error("payoff row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("payoff entry ({row}, {col}) is negative")]
    NegativePayoff { row: usize, col: usize },
}
