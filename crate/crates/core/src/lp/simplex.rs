//! Two-phase dense simplex with Bland's rule, all arithmetic exact.

use num_traits::{One, Signed, Zero};

use super::LpError;
use crate::rational::Rational;

/// Constraint relation against the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// One row `coeffs · x  {<=, >=, =}  rhs` over implicitly nonnegative variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Le,
            rhs,
        }
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Ge,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs,
        }
    }
}

/// A linear program over nonnegative variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lp {
    pub objective: Vec<Rational>,
    pub sense: Sense,
    pub constraints: Vec<Constraint>,
}

/// Optimal basic solution with its exact objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    /// One value per original variable.
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// Constraint duals, available for pure `<=` programs with
    /// nonnegative right-hand sides (no artificial variables involved).
    pub duals: Option<Vec<Rational>>,
}

/// The three possible resolutions of a linear program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows x (cols + 1)`; last column is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row `c_j - z_j`, last entry `-objective`.
    zrow: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, row: usize) -> &Rational {
        &self.rows[row][self.cols]
    }

    /// Reduced costs for cost vector `costs` (length `cols`) under the current basis.
    fn recompute_zrow(&mut self, costs: &[Rational]) {
        let mut zrow = vec![Rational::zero(); self.cols + 1];
        for (j, cost) in costs.iter().enumerate() {
            zrow[j] = cost.clone();
        }
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = &costs[bv];
            if cb.is_zero() {
                continue;
            }
            for (z, v) in zrow.iter_mut().zip(&self.rows[i]) {
                *z -= cb * v;
            }
        }
        self.zrow = zrow;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        debug_assert!(!p.is_zero());
        for v in &mut self.rows[row] {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        let factor = self.zrow[col].clone();
        if !factor.is_zero() {
            for (v, pv) in self.zrow.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = lowest-index improving column; leaving =
    /// lexicographically safe min-ratio row, ties broken by lowest basis
    /// variable index. Returns false on an unbounded direction.
    fn run_simplex(&mut self, allowed_cols: usize) -> bool {
        loop {
            let entering = (0..allowed_cols).find(|&j| self.zrow[j].is_positive());
            let Some(col) = entering else {
                return true; // optimal
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                match &leaving {
                    None => leaving = Some((i, ratio)),
                    Some((best_row, best_ratio)) => {
                        if ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col),
                None => return false, // unbounded
            }
        }
    }
}

/// Solves the program exactly, distinguishing optimal, infeasible, and
/// unbounded. The returned solution is re-verified against the original
/// constraints before it is handed back.
pub fn simplex_solve(lp: &Lp) -> Result<LpOutcome, LpError> {
    let n = lp.objective.len();
    if n == 0 {
        return Err(LpError::EmptyProblem);
    }
    for (row, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(LpError::DimensionMismatch {
                row,
                expected: n,
                found: c.coeffs.len(),
            });
        }
    }

    // Normalize rows to nonnegative right-hand sides.
    let mut rows_data: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        if c.rhs.is_negative() {
            let coeffs = c.coeffs.iter().map(|v| -v).collect();
            let relation = match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            rows_data.push((coeffs, relation, -&c.rhs));
        } else {
            rows_data.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
        }
    }

    let n_slack = rows_data
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Eq)
        .count();
    let n_art = rows_data
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Le)
        .count();
    let cols = n + n_slack + n_art;
    let pure_le = n_art == 0;

    let m = rows_data.len();
    let mut rows = vec![vec![Rational::zero(); cols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut slack_of_row = vec![usize::MAX; m];
    let mut next_slack = n;
    let mut next_art = n + n_slack;
    for (i, (coeffs, relation, rhs)) in rows_data.iter().enumerate() {
        for (j, v) in coeffs.iter().enumerate() {
            rows[i][j] = v.clone();
        }
        rows[i][cols] = rhs.clone();
        match relation {
            Relation::Le => {
                rows[i][next_slack] = Rational::one();
                basis[i] = next_slack;
                slack_of_row[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                rows[i][next_slack] = -Rational::one();
                slack_of_row[i] = next_slack;
                next_slack += 1;
                rows[i][next_art] = Rational::one();
                basis[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                rows[i][next_art] = Rational::one();
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    let mut tableau = Tableau {
        rows,
        zrow: Vec::new(),
        basis,
        cols,
    };

    // Phase I: drive the artificial variables to zero.
    if n_art > 0 {
        let mut phase1_costs = vec![Rational::zero(); cols];
        for c in phase1_costs.iter_mut().take(cols).skip(n + n_slack) {
            *c = -Rational::one();
        }
        tableau.recompute_zrow(&phase1_costs);
        let bounded = tableau.run_simplex(cols);
        assert!(bounded, "phase I objective is bounded by zero");
        let artificial_sum = -tableau.zrow[cols].clone();
        if !artificial_sum.is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot lingering artificials out of the basis; drop redundant rows.
        let mut row = 0;
        while row < tableau.rows.len() {
            if tableau.basis[row] >= n + n_slack {
                let col = (0..n + n_slack).find(|&j| !tableau.rows[row][j].is_zero());
                match col {
                    Some(col) => tableau.pivot(row, col),
                    None => {
                        tableau.rows.remove(row);
                        tableau.basis.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }
    }

    // Phase II on the real objective (negated for minimization).
    let mut costs = vec![Rational::zero(); cols];
    for (j, c) in lp.objective.iter().enumerate() {
        costs[j] = match lp.sense {
            Sense::Maximize => c.clone(),
            Sense::Minimize => -c,
        };
    }
    tableau.recompute_zrow(&costs);
    if !tableau.run_simplex(n + n_slack) {
        return Ok(LpOutcome::Unbounded);
    }
    assert!(
        (0..n + n_slack).all(|j| !tableau.zrow[j].is_positive()),
        "optimality certificate: reduced costs must be nonpositive"
    );

    let mut values = vec![Rational::zero(); n];
    for (i, &bv) in tableau.basis.iter().enumerate() {
        if bv < n {
            values[bv] = tableau.rhs(i).clone();
        }
    }
    let objective: Rational = lp
        .objective
        .iter()
        .zip(&values)
        .map(|(c, x)| c * x)
        .sum();
    let tracked = -tableau.zrow[cols].clone();
    let tracked = match lp.sense {
        Sense::Maximize => tracked,
        Sense::Minimize => -tracked,
    };
    assert_eq!(objective, tracked, "tableau objective must match c·x exactly");
    verify_feasible(lp, &values);

    let duals = if pure_le {
        let mut d = vec![Rational::zero(); m];
        for (i, &slack) in slack_of_row.iter().enumerate() {
            d[i] = -tableau.zrow[slack].clone();
        }
        Some(d)
    } else {
        None
    };

    Ok(LpOutcome::Optimal(LpSolution {
        values,
        objective,
        duals,
    }))
}

fn verify_feasible(lp: &Lp, values: &[Rational]) {
    for (i, c) in lp.constraints.iter().enumerate() {
        let lhs: Rational = c.coeffs.iter().zip(values).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        assert!(ok, "solution violates constraint {i} exactly");
    }
    assert!(
        values.iter().all(|v| !v.is_negative()),
        "solution violates nonnegativity"
    );
}
