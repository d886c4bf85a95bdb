//! Dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's rule (lowest eligible index enters, lowest basic
//! index breaks ratio ties), which cannot cycle. Row operations skip zero
//! entries of the pivot row, which keeps the sparse game LPs cheap.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// `a·x <= b`
    Le,
    /// `a·x == b`
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub kind: RowKind,
    pub rhs: Rational,
}

/// `maximize c·x` subject to the rows, with `x >= 0` except for variables
/// marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    objective: Vec<Rational>,
    rows: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Infeasible => f.write_str("linear program is infeasible"),
            LpError::Unbounded => f.write_str("linear program is unbounded"),
        }
    }
}

impl std::error::Error for LpError {}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: Rational,
    pub values: Vec<Rational>,
    /// One multiplier per row, in the sign convention of the original rows
    /// (`>= 0` for `Le` rows, free for `Eq` rows).
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, kind: RowKind, rhs: Rational) -> usize {
        debug_assert!(coeffs.iter().all(|&(j, _)| j < self.num_vars));
        self.rows.push(Constraint { coeffs, kind, rhs });
        self.rows.len() - 1
    }

    /// `b·y` for the row multipliers `y`.
    pub fn dual_objective(&self, duals: &[Rational]) -> Rational {
        self.rows.iter().zip(duals).map(|(r, y)| &r.rhs * y).sum()
    }

    /// Checks primal and dual feasibility and equal objectives, exactly.
    pub fn verify(&self, sol: &LpSolution) -> Result<(), String> {
        for (j, v) in sol.values.iter().enumerate() {
            if !self.free[j] && v.is_negative() {
                return Err(format!("variable {j} is negative"));
            }
        }
        let mut column_sums = vec![Rational::zero(); self.num_vars];
        for (i, row) in self.rows.iter().enumerate() {
            let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &sol.values[*j]).sum();
            match row.kind {
                RowKind::Le if lhs > row.rhs => return Err(format!("row {i} violated: {lhs} > {}", row.rhs)),
                RowKind::Eq if lhs != row.rhs => return Err(format!("row {i} violated: {lhs} != {}", row.rhs)),
                _ => {}
            }
            if row.kind == RowKind::Le && sol.duals[i].is_negative() {
                return Err(format!("dual of row {i} is negative"));
            }
            for (j, a) in &row.coeffs {
                column_sums[*j] += a * &sol.duals[i];
            }
        }
        for j in 0..self.num_vars {
            let ok = if self.free[j] {
                column_sums[j] == self.objective[j]
            } else {
                column_sums[j] >= self.objective[j]
            };
            if !ok {
                return Err(format!("dual constraint for variable {j} violated"));
            }
        }
        let primal: Rational = self.objective.iter().zip(&sol.values).map(|(c, x)| c * x).sum();
        let dual = self.dual_objective(&sol.duals);
        if primal != dual || primal != sol.objective {
            return Err(format!("duality gap: primal {primal}, dual {dual}"));
        }
        Ok(())
    }

    pub fn maximize(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    z: Vec<Rational>,
    z_rhs: Rational,
    basis: Vec<usize>,
    /// Column of each structural variable's positive and (if free) negative part.
    var_cols: Vec<(usize, Option<usize>)>,
    /// Column that is the unit vector of each (normalized) row.
    unit_col: Vec<usize>,
    /// `-1` where the row was negated to make its right-hand side nonnegative.
    row_sign: Vec<Rational>,
    artificial_from: usize,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut ncols = 0;
        for j in 0..lp.num_vars {
            let pos = ncols;
            ncols += 1;
            let neg = lp.free[j].then(|| {
                ncols += 1;
                ncols - 1
            });
            var_cols.push((pos, neg));
        }
        let slack_cols: Vec<Option<usize>> = lp
            .rows
            .iter()
            .map(|r| {
                (r.kind == RowKind::Le).then(|| {
                    ncols += 1;
                    ncols - 1
                })
            })
            .collect();
        let artificial_from = ncols;
        let mut artificial: Vec<Option<usize>> = Vec::with_capacity(lp.rows.len());
        for r in &lp.rows {
            let needs = r.kind == RowKind::Eq || r.rhs.is_negative();
            artificial.push(needs.then(|| {
                ncols += 1;
                ncols - 1
            }));
        }

        let m = lp.rows.len();
        let mut rows = vec![vec![Rational::zero(); ncols]; m];
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for (i, r) in lp.rows.iter().enumerate() {
            let sign = if r.rhs.is_negative() { -Rational::one() } else { Rational::one() };
            for (j, a) in &r.coeffs {
                let (pos, neg) = var_cols[*j];
                rows[i][pos] += a * &sign;
                if let Some(neg) = neg {
                    rows[i][neg] -= a * &sign;
                }
            }
            if let Some(s) = slack_cols[i] {
                rows[i][s] = sign.clone();
            }
            if let Some(a) = artificial[i] {
                rows[i][a] = Rational::one();
                basis.push(a);
                unit_col.push(a);
            } else {
                let s = slack_cols[i].expect("Le row");
                basis.push(s);
                unit_col.push(s);
            }
            rhs.push(&r.rhs * &sign);
            row_sign.push(sign);
        }

        Tableau {
            rows,
            rhs,
            z: vec![Rational::zero(); ncols],
            z_rhs: Rational::zero(),
            basis,
            var_cols,
            unit_col,
            row_sign,
            artificial_from,
            pivots: 0,
        }
    }

    fn ncols(&self) -> usize {
        self.z.len()
    }

    /// Sets the objective row for costs `c` (maximization) and the current basis.
    fn price(&mut self, cost: &[Rational]) {
        let n = self.ncols();
        let mut z: Vec<Rational> = cost.iter().map(|c| -c).collect();
        let mut z_rhs = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, zj) in z.iter_mut().enumerate().take(n) {
                let t = &self.rows[i][j];
                if !t.is_zero() {
                    *zj += cb * t;
                }
            }
            z_rhs += cb * &self.rhs[i];
        }
        self.z = z;
        self.z_rhs = z_rhs;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let piv = self.rows[r][c].clone();
        let nz: Vec<usize> = (0..self.ncols()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        if !piv.is_one() {
            for &j in &nz {
                self.rows[r][j] = &self.rows[r][j] / &piv;
            }
            self.rhs[r] = &self.rhs[r] / &piv;
        }
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            let row = &mut self.rows[i];
            for (j, a) in &prow {
                row[*j] -= &f * a;
            }
            if !prhs.is_zero() {
                self.rhs[i] -= &f * &prhs;
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for (j, a) in &prow {
                self.z[*j] -= &f * a;
            }
            self.z_rhs -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots until optimal over columns `< limit`.
    fn iterate(&mut self, limit: usize) -> Result<(), LpError> {
        loop {
            let Some(c) = (0..limit).find(|&j| self.z[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, c);
        }
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        let n = self.ncols();
        let has_artificial = self.artificial_from < n;
        if has_artificial {
            let mut cost = vec![Rational::zero(); n];
            for c in cost.iter_mut().skip(self.artificial_from) {
                *c = -Rational::one();
            }
            self.price(&cost);
            self.iterate(n)?;
            if self.z_rhs.is_negative() {
                return Err(LpError::Infeasible);
            }
            // drive zero-level artificials out of the basis where possible
            for r in 0..self.rows.len() {
                if self.basis[r] < self.artificial_from {
                    continue;
                }
                if let Some(c) = (0..self.artificial_from).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, c);
                }
            }
        }

        let mut cost = vec![Rational::zero(); n];
        for (j, c) in lp.objective.iter().enumerate() {
            let (pos, neg) = self.var_cols[j];
            cost[pos] = c.clone();
            if let Some(neg) = neg {
                cost[neg] = -c;
            }
        }
        self.price(&cost);
        self.iterate(self.artificial_from)?;

        let mut column_value = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            column_value[b] = self.rhs[i].clone();
        }
        let values = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &column_value[pos] - &column_value[neg],
                None => column_value[pos].clone(),
            })
            .collect();
        // reduced cost of a row's unit column equals that row's multiplier
        let duals = self
            .unit_col
            .iter()
            .zip(&self.row_sign)
            .map(|(&u, s)| (&self.z[u] + &cost[u]) * s)
            .collect();
        Ok(LpSolution { objective: self.z_rhs, values, duals, pivots: self.pivots })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn r(n: i64) -> Rational {
        int(n)
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, r(3));
        lp.set_objective(1, r(5));
        lp.add_row(vec![(0, r(1))], RowKind::Le, r(4));
        lp.add_row(vec![(1, r(2))], RowKind::Le, r(12));
        lp.add_row(vec![(0, r(3)), (1, r(2))], RowKind::Le, r(18));
        let sol = lp.maximize().unwrap();
        assert_eq!(sol.objective, r(36));
        assert_eq!(sol.values, vec![r(2), r(6)]);
        assert_eq!(sol.duals, vec![r(0), ratio(3, 2), r(1)]);
        lp.verify(&sol).unwrap();
    }

    #[test]
    fn equalities_and_free_variables() {
        // max v s.t. v <= x - y, v <= y - x... matching pennies: value 0
        let mut lp = LinearProgram::new(3);
        lp.set_free(2);
        lp.set_objective(2, r(1));
        lp.add_row(vec![(2, r(1)), (0, r(-1)), (1, r(1))], RowKind::Le, r(0));
        lp.add_row(vec![(2, r(1)), (0, r(1)), (1, r(-1))], RowKind::Le, r(0));
        lp.add_row(vec![(0, r(1)), (1, r(1))], RowKind::Eq, r(1));
        let sol = lp.maximize().unwrap();
        assert_eq!(sol.objective, r(0));
        assert_eq!(sol.values, vec![ratio(1, 2), ratio(1, 2), r(0)]);
        lp.verify(&sol).unwrap();
    }

    #[test]
    fn negative_rhs_and_negative_optimum() {
        // max -x s.t. -x <= -3  -> x = 3
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, r(-1));
        lp.add_row(vec![(0, r(-1))], RowKind::Le, r(-3));
        let sol = lp.maximize().unwrap();
        assert_eq!(sol.objective, r(-3));
        lp.verify(&sol).unwrap();
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![(0, r(1))], RowKind::Le, r(1));
        lp.add_row(vec![(0, r(1))], RowKind::Eq, r(2));
        assert_eq!(lp.maximize().unwrap_err(), LpError::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, r(1));
        lp.add_row(vec![(0, r(1)), (1, r(-1))], RowKind::Le, r(1));
        assert_eq!(lp.maximize().unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn redundant_equality_rows() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, r(1));
        lp.add_row(vec![(0, r(1)), (1, r(1))], RowKind::Eq, r(1));
        lp.add_row(vec![(0, r(2)), (1, r(2))], RowKind::Eq, r(2));
        let sol = lp.maximize().unwrap();
        assert_eq!(sol.objective, r(1));
        lp.verify(&sol).unwrap();
    }
}
