//! Zero-sum matrix games over nonnegative payoffs.
//!
//! The row player maximizes, the column player minimizes. For the
//! incidence games used elsewhere in this crate the rows are atoms and
//! the columns are family members, and the value is the intersection
//! number of the family.

use num_traits::{One, Signed, Zero};

use super::simplex::{simplex_solve, Constraint, Lp, LpOutcome, Sense};
use super::LpError;
use crate::rational::{rational_sum, Rational};

/// Exact solution of a matrix game: the value together with optimal
/// mixed strategies for both players, certified by a zero duality gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    pub value: Rational,
    pub row_strategy: Vec<Rational>,
    pub col_strategy: Vec<Rational>,
}

impl GameSolution {
    /// `min_j (x M)_j` for the stored row strategy.
    pub fn row_guarantee(&self, payoff: &[Vec<Rational>]) -> Rational {
        (0..self.col_strategy.len())
            .map(|j| {
                payoff
                    .iter()
                    .zip(&self.row_strategy)
                    .map(|(row, x)| &row[j] * x)
                    .sum::<Rational>()
            })
            .min()
            .expect("nonempty matrix")
    }

    /// `max_i (M y)_i` for the stored column strategy.
    pub fn col_guarantee(&self, payoff: &[Vec<Rational>]) -> Rational {
        payoff
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.col_strategy)
                    .map(|(v, y)| v * y)
                    .sum::<Rational>()
            })
            .max()
            .expect("nonempty matrix")
    }
}

/// Solves `max_x min_j (x M)_j` over probability vectors, exactly.
///
/// Payoffs must be nonnegative. An all-zero column forces value 0 and is
/// handled directly; otherwise the value is positive and both strategies
/// come from one packing solve, the row strategy via the exact duals.
/// Every certificate is re-verified before returning.
pub fn solve_game(payoff: &[Vec<Rational>]) -> Result<GameSolution, LpError> {
    let n_rows = payoff.len();
    if n_rows == 0 || payoff[0].is_empty() {
        return Err(LpError::EmptyMatrix);
    }
    let n_cols = payoff[0].len();
    for (row, r) in payoff.iter().enumerate() {
        if r.len() != n_cols {
            return Err(LpError::RaggedMatrix {
                row,
                expected: n_cols,
                found: r.len(),
            });
        }
        for (col, v) in r.iter().enumerate() {
            if v.is_negative() {
                return Err(LpError::NegativePayoff { row, col });
            }
        }
    }

    if let Some(zero_col) = (0..n_cols).find(|&j| payoff.iter().all(|r| r[j].is_zero())) {
        let uniform = Rational::new(1.into(), (n_rows as i64).into());
        let mut col_strategy = vec![Rational::zero(); n_cols];
        col_strategy[zero_col] = Rational::one();
        let solution = GameSolution {
            value: Rational::zero(),
            row_strategy: vec![uniform; n_rows],
            col_strategy,
        };
        verify(&solution, payoff);
        return Ok(solution);
    }

    // Packing form: maximize 1·w subject to M w <= 1, w >= 0. The slack
    // basis is immediately feasible, and the optimal duals solve the
    // covering program min 1·u subject to Mᵀ u >= 1, u >= 0.
    let lp = Lp {
        objective: vec![Rational::one(); n_cols],
        sense: Sense::Maximize,
        constraints: payoff
            .iter()
            .map(|row| Constraint::le(row.clone(), Rational::one()))
            .collect(),
    };
    let solution = match simplex_solve(&lp)? {
        LpOutcome::Optimal(s) => s,
        outcome => unreachable!("packing program is feasible and bounded, got {outcome:?}"),
    };
    let w = solution.values;
    let u = solution.duals.expect("pure <= program yields duals");

    let pack_total = rational_sum(&w);
    let cover_total = rational_sum(&u);
    assert!(pack_total.is_positive(), "no all-zero column, so value > 0");
    assert_eq!(pack_total, cover_total, "strong duality must hold exactly");
    for j in 0..n_cols {
        let covered: Rational = payoff.iter().zip(&u).map(|(row, ui)| &row[j] * ui).sum();
        assert!(covered >= Rational::one(), "dual covering certificate");
    }

    let value = pack_total.recip();
    let row_strategy: Vec<Rational> = u.iter().map(|ui| ui / &cover_total).collect();
    let col_strategy: Vec<Rational> = w.iter().map(|wj| wj / &pack_total).collect();
    let solution = GameSolution {
        value,
        row_strategy,
        col_strategy,
    };
    verify(&solution, payoff);
    Ok(solution)
}

/// Exact zero-gap check: both strategies must guarantee the value.
fn verify(solution: &GameSolution, payoff: &[Vec<Rational>]) {
    assert_eq!(
        rational_sum(&solution.row_strategy),
        Rational::one(),
        "row strategy must be a distribution"
    );
    assert_eq!(
        rational_sum(&solution.col_strategy),
        Rational::one(),
        "column strategy must be a distribution"
    );
    assert!(solution.row_strategy.iter().all(|v| !v.is_negative()));
    assert!(solution.col_strategy.iter().all(|v| !v.is_negative()));
    assert_eq!(
        solution.row_guarantee(payoff),
        solution.value,
        "row strategy must attain the value"
    );
    assert_eq!(
        solution.col_guarantee(payoff),
        solution.value,
        "column strategy must attain the value"
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn identity_game_is_half() {
        let m = matrix(&[&[1, 0], &[0, 1]]);
        let s = solve_game(&m).unwrap();
        assert_eq!(s.value, rat(1, 2));
        assert_eq!(s.row_strategy, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(s.col_strategy, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn guaranteed_payoff_column() {
        let m = matrix(&[&[1], &[1], &[1]]);
        let s = solve_game(&m).unwrap();
        assert_eq!(s.value, rat_int(1));
    }

    #[test]
    fn zero_column_forces_zero_value() {
        let m = matrix(&[&[1, 0], &[1, 0]]);
        let s = solve_game(&m).unwrap();
        assert_eq!(s.value, rat_int(0));
        assert_eq!(s.col_strategy, vec![rat_int(0), rat_int(1)]);
    }

    #[test]
    fn empty_matrix_is_an_error() {
        assert_eq!(solve_game(&[]), Err(LpError::EmptyMatrix));
        let empty_cols: Vec<Vec<Rational>> = vec![vec![]];
        assert_eq!(solve_game(&empty_cols), Err(LpError::EmptyMatrix));
    }

    #[test]
    fn negative_entries_rejected() {
        let m = vec![vec![rat_int(1), rat_int(-1)]];
        assert_eq!(
            solve_game(&m),
            Err(LpError::NegativePayoff { row: 0, col: 1 })
        );
    }

    #[test]
    fn scaling_scales_the_value() {
        let m = matrix(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]);
        let base = solve_game(&m).unwrap();
        let scaled: Vec<Vec<Rational>> = m
            .iter()
            .map(|r| r.iter().map(|v| v * rat(3, 5)).collect())
            .collect();
        let s = solve_game(&scaled).unwrap();
        assert_eq!(s.value, base.value * rat(3, 5));
    }

    #[test]
    fn fano_incidence_game() {
        // 7 points, 7 lines, uniform optimal play on both sides.
        let lines: [[usize; 3]; 7] = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        let mut m = vec![vec![rat_int(0); 7]; 7];
        for (j, line) in lines.iter().enumerate() {
            for &p in line {
                m[p][j] = rat_int(1);
            }
        }
        let s = solve_game(&m).unwrap();
        assert_eq!(s.value, rat(3, 7));
        assert_eq!(s.row_strategy, vec![rat(1, 7); 7]);
    }
}
