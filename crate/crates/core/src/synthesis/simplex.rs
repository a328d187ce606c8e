//! Dense two-phase simplex with Bland's rule, for small programs with
//! nonnegative variables.

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LinearRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LinearRow {
    pub(crate) fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        LinearRow {
            coeffs,
            relation,
            rhs,
        }
    }

    pub(crate) fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Amount by which `x` violates the row; zero or negative when satisfied.
    pub(crate) fn violation(&self, x: &[f64]) -> f64 {
        let d = self.lhs(x) - self.rhs;
        match self.relation {
            Relation::Le => d,
            Relation::Ge => -d,
            Relation::Eq => d.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    /// `x` minimizes the total infeasibility over the nonnegative orthant.
    Infeasible { x: Vec<f64> },
    Unbounded,
}

struct Tableau {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` with respect to the current basis.
    fn reduced(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.a[r][j];
                }
            }
        }
        d
    }

    /// Minimizes `cost` over columns allowed by `enterable`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[f64], enterable: &[bool]) -> bool {
        for _ in 0..MAX_PIVOTS {
            let d = self.reduced(cost);
            // Bland: lowest-index improving column
            let Some(c) = (0..self.cols).find(|&j| enterable[j] && d[j] < -PIVOT_TOL) else {
                return true;
            };
            let rhs = self.cols;
            let leave = (0..self.a.len())
                .filter(|&r| self.a[r][c] > PIVOT_TOL)
                .map(|r| (r, self.a[r][rhs] / self.a[r][c]))
                .min_by(|x, y| {
                    x.1.total_cmp(&y.1)
                        .then(self.basis[x.0].cmp(&self.basis[y.0]))
                });
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
        true
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.cols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.a[r][self.cols];
        }
        x
    }
}

/// Minimizes `c . x` subject to `rows` and `x >= 0`.
pub(crate) fn solve_lp(c: &[f64], rows: &[LinearRow]) -> LpOutcome {
    let n = c.len();
    let m = rows.len();
    // normalize to nonnegative right-hand sides
    let rows: Vec<LinearRow> = rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                let relation = match r.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                LinearRow::new(r.coeffs.iter().map(|v| -v).collect(), relation, -r.rhs)
            } else {
                r.clone()
            }
        })
        .collect();
    let n_slack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let cols = n + n_slack + n_art;
    let mut a = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0; m];
    let (mut s, mut art) = (n, n + n_slack);
    for (i, r) in rows.iter().enumerate() {
        a[i][..n].copy_from_slice(&r.coeffs[..n]);
        a[i][cols] = r.rhs;
        match r.relation {
            Relation::Le => {
                a[i][s] = 1.0;
                basis[i] = s;
                s += 1;
            }
            Relation::Ge => {
                a[i][s] = -1.0;
                a[i][art] = 1.0;
                basis[i] = art;
                s += 1;
                art += 1;
            }
            Relation::Eq => {
                a[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            }
        }
    }
    let mut t = Tableau { a, basis, cols };
    let is_art = |j: usize| j >= n + n_slack;

    let phase1: Vec<f64> = (0..cols).map(|j| if is_art(j) { 1.0 } else { 0.0 }).collect();
    t.optimize(&phase1, &vec![true; cols]);
    let x = t.primal();
    let infeasibility: f64 = (n + n_slack..cols).map(|j| x[j]).sum();
    let scale = 1.0 + rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
    if infeasibility > FEAS_TOL * scale {
        return LpOutcome::Infeasible { x: x[..n].to_vec() };
    }
    // drive zero-level artificials out of the basis where possible
    for r in 0..m {
        if is_art(t.basis[r]) {
            if let Some(c) = (0..n + n_slack).find(|&j| t.a[r][j].abs() > PIVOT_TOL) {
                t.pivot(r, c);
            }
        }
    }
    let mut cost = c.to_vec();
    cost.resize(cols, 0.0);
    let enterable: Vec<bool> = (0..cols).map(|j| !is_art(j)).collect();
    if !t.optimize(&cost, &enterable) {
        return LpOutcome::Unbounded;
    }
    let x = t.primal()[..n].to_vec();
    let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, objective }
}
