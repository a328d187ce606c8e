//! Solution of the pole-placement program.
//!
//! `mu = 1` is a linear program solved by the simplex method. For `mu >= 2`
//! the concave power-sum rows are handled by Kelley's cutting planes: each
//! violated row is replaced by its tangent at the current iterate, an outer
//! approximation since the row is concave. The final iterate is then pulled
//! toward a point with every real-pole entry at the stability cap, which can
//! only increase the left sides, until all rows hold exactly.
//!
//! Both paths run a second stage that keeps the optimal cost and minimizes
//! `sum pi + 2 sum u`, so ties resolve toward the fastest admissible poles.

use super::program::ConvexProgram;
use super::simplex::{solve_lp, LinearRow, LpOutcome, Relation};
use crate::error::{Error, Infeasibility, Result};

const MAX_CUT_ROUNDS: usize = 400;
const CUT_TOL: f64 = 1e-11;
/// Largest constraint violation accepted in a returned point.
pub const ACCEPT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverDiagnostics {
    /// Primary cost at the returned point.
    pub objective: f64,
    /// Largest constraint violation at the returned point (nonpositive when feasible).
    pub max_violation: f64,
    /// Linear programs solved across both stages.
    pub lp_solves: usize,
    /// Whether the feasibility restoration step moved the point.
    pub restored: bool,
}

pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub diagnostics: SolverDiagnostics,
}

fn infeasible(program: &ConvexProgram, x: &[f64]) -> Error {
    let mut x = x.to_vec();
    program.complete(&mut x);
    let (constraint, violation) = program.max_violation_x(&x);
    Error::Infeasible(Box::new(Infeasibility {
        constraint,
        violation,
    }))
}

struct Stage<'a> {
    program: &'a ConvexProgram,
    cuts: Vec<LinearRow>,
    lp_solves: usize,
    tol: f64,
}

impl Stage<'_> {
    /// Minimizes `c` over the linear rows, `extra` and the concave rows.
    fn minimize(&mut self, c: &[f64], extra: &[LinearRow]) -> Result<Vec<f64>> {
        let p = self.program;
        let mut last = None;
        for _ in 0..MAX_CUT_ROUNDS {
            let rows: Vec<LinearRow> = p
                .linear
                .iter()
                .map(|l| l.row.clone())
                .chain(extra.iter().cloned())
                .chain(self.cuts.iter().cloned())
                .collect();
            self.lp_solves += 1;
            let x = match solve_lp(c, &rows) {
                LpOutcome::Optimal { x, .. } => x,
                LpOutcome::Infeasible { x } => return Err(infeasible(p, &x)),
                LpOutcome::Unbounded => {
                    return Err(Error::Verification(
                        "pole-placement program is unbounded despite the stability box".into(),
                    ))
                }
            };
            let mut cut = false;
            for (i, rhs) in p.power_rhs.iter().enumerate() {
                let k = i as u32 + 1;
                let g = p.power_lhs(k, &x);
                if g < rhs - self.tol {
                    let grad = p.power_grad(k, &x);
                    let offset: f64 = grad.iter().zip(&x).map(|(a, b)| a * b).sum();
                    self.cuts.push(LinearRow::new(grad, Relation::Ge, rhs - g + offset));
                    cut = true;
                }
            }
            if !cut {
                return Ok(x);
            }
            last = Some(x);
        }
        Ok(last.unwrap_or_default())
    }
}

fn max_violation(program: &ConvexProgram, x: &[f64]) -> f64 {
    program.max_violation_x(x).1
}

/// Moves `x` toward the point with every real-pole entry at the cap, just far
/// enough that no row is violated.
fn restore(program: &ConvexProgram, x: &[f64]) -> Option<Vec<f64>> {
    let mut top = x.to_vec();
    for v in top.iter_mut().take(program.n_r) {
        *v = program.cap();
    }
    program.complete(&mut top);
    if max_violation(program, &top) > 0.0 {
        return None;
    }
    let at = |lambda: f64| {
        let mut y: Vec<f64> = x.iter().zip(&top).map(|(a, b)| a + lambda * (b - a)).collect();
        program.complete(&mut y);
        y
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if max_violation(program, &at(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(at(hi))
}

pub(crate) fn solve(program: &ConvexProgram) -> Result<Solution> {
    let scale = program.cap().abs().max(1.0);
    let mut stage = Stage {
        program,
        cuts: Vec::new(),
        lp_solves: 0,
        tol: CUT_TOL * scale,
    };
    let x1 = stage.minimize(&program.objective, &[])?;
    let best = program.objective_x(&x1);
    let keep = LinearRow::new(
        program.objective.clone(),
        Relation::Le,
        best + 1e-9 * (1.0 + best.abs()),
    );
    let mut x = match stage.minimize(&program.tie_break, std::slice::from_ref(&keep)) {
        Ok(x2) => x2,
        Err(_) => x1,
    };
    program.complete(&mut x);
    let mut restored = false;
    if max_violation(program, &x) > 1e-12 * scale {
        if let Some(y) = restore(program, &x) {
            x = y;
            restored = true;
        }
    }
    let (label, worst) = program.max_violation_x(&x);
    if worst > ACCEPT_TOL * scale {
        return Err(Error::Infeasible(Box::new(Infeasibility {
            constraint: label,
            violation: worst,
        })));
    }
    Ok(Solution {
        diagnostics: SolverDiagnostics {
            objective: program.objective_x(&x),
            max_violation: worst,
            lp_solves: stage.lp_solves,
            restored,
        },
        x,
    })
}
