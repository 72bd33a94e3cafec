use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// One `sum coeff * x >= rhs` constraint with sparse coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Row<T> {
    pub coeffs: Vec<(usize, T)>,
    pub rhs: T,
}

/// `min c.x` subject to `>=` rows and `x >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Row<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(objective: Vec<T>) -> Self {
        LpProblem { objective, rows: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, rhs: T) -> Result<()> {
        if let Some((j, _)) = coeffs.iter().find(|(j, _)| *j >= self.vars()) {
            return Err(Error::InvalidInstance(format!("row references undeclared variable {j}")));
        }
        self.rows.push(Row { coeffs, rhs });
        Ok(())
    }

    /// Left-hand side of row `i` at `x`.
    pub fn activity(&self, i: usize, x: &[T]) -> T {
        self.rows[i].coeffs.iter().map(|(j, a)| a.clone() * x[*j].clone()).sum()
    }

    pub fn is_feasible(&self, x: &[T]) -> bool {
        x.iter().all(|v| !scalar::lt(v, &T::zero()))
            && (0..self.rows.len()).all(|i| scalar::le(&self.rows[i].rhs, &self.activity(i, x)))
    }
}

fn negative<T: Scalar>(v: &T) -> bool {
    *v < T::zero() && !v.is_negligible()
}

fn positive<T: Scalar>(v: &T) -> bool {
    *v > T::zero() && !v.is_negligible()
}

/// Dense tableau; column `cols` of every row holds the right-hand side.
struct Tableau<T> {
    a: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            r[col] = T::zero();
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.obj[col] = T::zero();
        }
        self.basis[row] = col;
    }

    /// Set the objective row to reduced costs of `cost` under the current basis.
    fn price(&mut self, cost: &[T]) {
        let mut obj: Vec<T> = cost.to_vec();
        obj.push(T::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (v, a) in obj.iter_mut().zip(&self.a[i]) {
                *v = v.clone() - cb.clone() * a.clone();
            }
        }
        self.obj = obj;
    }

    /// Bland's rule iterations over the columns `allowed`.
    fn optimise(&mut self, allowed: usize) -> Result<()> {
        loop {
            let Some(col) = (0..allowed).find(|&j| negative(&self.obj[j])) else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if !positive(&row[col]) {
                    continue;
                }
                let ratio = row[self.cols].clone() / row[col].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        scalar::lt(&ratio, lr) || (scalar::approx_eq(&ratio, lr) && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, col);
        }
    }
}

/// Exact optimum by two-phase primal simplex with Bland's anti-cycling rule.
pub fn simplex_solve<T: Scalar>(lp: &LpProblem<T>) -> Result<LpSolution<T>> {
    let n = lp.vars();
    let m = lp.rows.len();
    // columns: x (n), surplus (m), artificial (one per row that needs it)
    let needs_art: Vec<bool> = lp.rows.iter().map(|r| positive(&r.rhs)).collect();
    let arts = needs_art.iter().filter(|&&b| b).count();
    let cols = n + m + arts;
    let mut a = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = n + m;
    for (i, row) in lp.rows.iter().enumerate() {
        let mut dense = vec![T::zero(); cols + 1];
        for (j, c) in &row.coeffs {
            dense[*j] = dense[*j].clone() + c.clone();
        }
        if needs_art[i] {
            dense[n + i] = -T::one();
            dense[next_art] = T::one();
            dense[cols] = row.rhs.clone();
            basis.push(next_art);
            next_art += 1;
        } else {
            for v in dense.iter_mut().take(n) {
                *v = -v.clone();
            }
            dense[n + i] = T::one();
            dense[cols] = -row.rhs.clone();
            basis.push(n + i);
        }
        a.push(dense);
    }
    let mut tab = Tableau { a, obj: Vec::new(), basis, cols };

    if arts > 0 {
        let mut phase1 = vec![T::zero(); cols];
        for c in phase1.iter_mut().skip(n + m) {
            *c = T::one();
        }
        tab.price(&phase1);
        tab.optimise(cols)?;
        let infeasibility = -tab.obj[cols].clone();
        if positive(&infeasibility) {
            return Err(Error::Infeasible(format!("phase one ends at {infeasibility}")));
        }
        // drive remaining artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < tab.a.len() {
            if tab.basis[i] >= n + m {
                match (0..n + m).find(|&j| !tab.a[i][j].is_negligible()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.a.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in tab.a.iter_mut() {
            let rhs = row[cols].clone();
            row.truncate(n + m);
            row.push(rhs);
        }
        tab.cols = n + m;
    }
    let mut cost = lp.objective.clone();
    cost.extend(std::iter::repeat_n(T::zero(), m));
    tab.price(&cost);
    tab.optimise(n + m)?;

    let mut x = vec![T::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.a[i][tab.cols].clone();
        }
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c.clone() * v.clone()).sum();
    Ok(LpSolution { value, x })
}
