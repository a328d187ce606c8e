//! The pole-placement program in the variables `pi = w sorted`, `v`.
//!
//! Variables are laid out as `x = [pi_1..pi_nr, u_1..u_c, t]` where `u_j` is
//! the shared `v` entry of the j-th conjugate pair and `t` is the epigraph
//! variable of an absolute-value cost (present only for that cost).

use super::simplex::{LinearRow, Relation};
use super::{Cost, CustomCost, SynthesisProblem};
use crate::error::{Error, Result};
use crate::majorization::{prefix_sums, sort_desc, subsets_of_size};
use crate::Complex64;

/// Largest number of nonzero `v` entries the subset expansion accepts.
pub const MAX_ACTIVE: usize = 16;

/// Target `max (z + delta)^mu` over real zeros, and `|w_1 - target|`.
pub fn pole_zero_match_cost(w_sorted: &[f64], zeros: &[Complex64], delta: f64, mu: u32) -> Result<f64> {
    let target = pole_zero_target(zeros, delta, mu)?;
    let w1 = w_sorted.first().copied().unwrap_or(0.0);
    Ok((w1 - target).abs())
}

fn pole_zero_target(zeros: &[Complex64], delta: f64, mu: u32) -> Result<f64> {
    zeros
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| (z.re + delta).powi(mu as i32))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        .ok_or_else(|| Error::domain("pole/zero matching cost needs a real plant zero; supply a custom cost"))
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Labelled {
    pub label: String,
    pub row: LinearRow,
}

/// A feasible-or-not assignment of the transformed variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionPoint {
    /// `w` sorted descending; entries past `n_r` are zero.
    pub w_sorted: Vec<f64>,
    /// Zero for real poles, `u_j` twice per conjugate pair, `|z + delta|^mu` per zero.
    pub v: Vec<f64>,
}

impl DecisionPoint {
    pub fn midpoint(&self, other: &DecisionPoint) -> DecisionPoint {
        let mid = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        DecisionPoint {
            w_sorted: mid(&self.w_sorted, &other.w_sorted),
            v: mid(&self.v, &other.v),
        }
    }
}

/// The convex program: linear rows (stability, ordering, positivity,
/// majorization, epigraph) plus concave power-sum rows for `mu >= 2`.
#[derive(Debug, Clone)]
pub struct ConvexProgram {
    pub(crate) mu: u32,
    pub(crate) delta: f64,
    pub(crate) epsilon: f64,
    pub(crate) n_r: usize,
    pub(crate) pair_theta: Vec<f64>,
    pub(crate) zeta: Vec<f64>,
    pub(crate) power_rhs: Vec<f64>,
    pub(crate) linear: Vec<Labelled>,
    pub(crate) objective: Vec<f64>,
    pub(crate) tie_break: Vec<f64>,
    target: Option<f64>,
    prefix_count: usize,
}

pub fn formulate(problem: &SynthesisProblem) -> Result<ConvexProgram> {
    let mu = problem.mu();
    let delta = problem.delta();
    let eps = problem.epsilon();
    let n_r = problem.n_r();
    let theta = problem.theta();
    let pair_theta: Vec<f64> = theta[n_r..].iter().step_by(2).copied().collect();
    let pairs = pair_theta.len();
    let zeros = problem.plant().zeros();
    let zeta: Vec<f64> = zeros.iter().map(|z| (z + delta).norm().powi(mu as i32)).collect();
    let power_rhs: Vec<f64> = (1..mu)
        .map(|k| {
            zeros
                .iter()
                .map(|z| {
                    let s = z + delta;
                    s.norm().powi(k as i32) * (s.arg() * k as f64).cos()
                })
                .sum()
        })
        .collect();
    let active = 2 * pairs + zeros.len();
    if active > MAX_ACTIVE {
        return Err(Error::domain(format!(
            "{active} complex-pole and zero entries exceed the subset-expansion limit of {MAX_ACTIVE}"
        )));
    }
    let target = match problem.cost() {
        Cost::PoleZeroMatch => Some(pole_zero_target(zeros, delta, mu)?),
        Cost::Custom(_) => None,
    };
    let nx = n_r + pairs + usize::from(target.is_some());
    let cap = delta.powi(mu as i32) - eps;
    let unit = |i: usize, v: f64| {
        let mut c = vec![0.0; nx];
        c[i] = v;
        c
    };
    let mut linear = vec![Labelled {
        label: "stability: w1 <= delta^mu - eps".into(),
        row: LinearRow::new(unit(0, 1.0), Relation::Le, cap),
    }];
    for i in 0..n_r.saturating_sub(1) {
        let mut c = unit(i, 1.0);
        c[i + 1] = -1.0;
        linear.push(Labelled {
            label: format!("ordering: w{} >= w{}", i + 1, i + 2),
            row: LinearRow::new(c, Relation::Ge, 0.0),
        });
    }
    linear.push(Labelled {
        label: format!("positivity: w{n_r} >= eps"),
        row: LinearRow::new(unit(n_r - 1, 1.0), Relation::Ge, eps),
    });
    for j in 0..pairs {
        linear.push(Labelled {
            label: format!("positivity: u{} >= eps", j + 1),
            row: LinearRow::new(unit(n_r + j, 1.0), Relation::Ge, eps),
        });
    }

    // active v entries: (Some(pair), 0) for a complex pole, (None, zeta) for a zero
    let entries: Vec<(Option<usize>, f64)> = (0..pairs)
        .flat_map(|j| [(Some(j), 0.0), (Some(j), 0.0)])
        .chain(zeta.iter().map(|&z| (None, z)))
        .collect();
    let prefix_count = theta.len() + zeros.len();
    for k in 1..=prefix_count {
        let size = k.min(active);
        let mut seen: Vec<(Vec<f64>, f64)> = Vec::new();
        for subset in subsets_of_size(active, size) {
            let mut c = vec![0.0; nx];
            for ci in c.iter_mut().take(k.min(n_r)) {
                *ci = 1.0;
            }
            let mut rhs = 0.0;
            for &e in &subset {
                match entries[e] {
                    (Some(j), _) => c[n_r + j] -= 1.0,
                    (None, z) => rhs += z,
                }
            }
            if seen.iter().any(|(sc, sr)| *sc == c && *sr == rhs) {
                continue;
            }
            seen.push((c.clone(), rhs));
            let members: Vec<String> = subset.iter().map(|&e| format!("v{}", n_r + e + 1)).collect();
            linear.push(Labelled {
                label: format!("majorization k={k}: prefix >= {{{}}}", members.join(",")),
                row: LinearRow::new(c, Relation::Ge, rhs),
            });
        }
    }
    if let Some(target) = target {
        let t = nx - 1;
        let mut hi = unit(t, 1.0);
        hi[0] = -1.0;
        let mut lo = unit(t, 1.0);
        lo[0] = 1.0;
        linear.push(Labelled {
            label: "cost epigraph: t >= w1 - target".into(),
            row: LinearRow::new(hi, Relation::Ge, -target),
        });
        linear.push(Labelled {
            label: "cost epigraph: t >= target - w1".into(),
            row: LinearRow::new(lo, Relation::Ge, target),
        });
    }
    let objective = match problem.cost() {
        Cost::PoleZeroMatch => unit(nx - 1, 1.0),
        Cost::Custom(CustomCost::MinDominant) => unit(0, 1.0),
        Cost::Custom(CustomCost::Linear { pi, u }) => {
            if pi.len() != n_r || u.len() != pairs {
                return Err(Error::domain(format!(
                    "linear cost needs {n_r} real-pole and {pairs} pair weights"
                )));
            }
            let mut c = pi.clone();
            c.extend(u);
            c
        }
    };
    let mut tie_break = vec![1.0; n_r];
    tie_break.extend(std::iter::repeat_n(2.0, pairs));
    tie_break.resize(nx, 0.0);
    Ok(ConvexProgram {
        mu,
        delta,
        epsilon: eps,
        n_r,
        pair_theta,
        zeta,
        power_rhs,
        linear,
        objective,
        tie_break,
        target,
        prefix_count,
    })
}

impl ConvexProgram {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn pairs(&self) -> usize {
        self.pair_theta.len()
    }

    /// `mu = 1`: every constraint is affine.
    pub fn is_linear(&self) -> bool {
        self.mu == 1
    }

    /// Number of weak-majorization prefix conditions, `2n - 1 + m`.
    pub fn prefix_count(&self) -> usize {
        self.prefix_count
    }

    pub fn linear_row_count(&self) -> usize {
        self.linear.len()
    }

    pub fn power_row_count(&self) -> usize {
        self.power_rhs.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.linear.iter().map(|l| l.label.as_str())
    }

    pub fn cap(&self) -> f64 {
        self.delta.powi(self.mu as i32) - self.epsilon
    }

    /// Left side of the order-`k` power-sum row.
    pub(crate) fn power_lhs(&self, k: u32, x: &[f64]) -> f64 {
        let e = k as f64 / self.mu as f64;
        let real: f64 = x[..self.n_r].iter().map(|p| p.max(0.0).powf(e)).sum();
        let cplx: f64 = self
            .pair_theta
            .iter()
            .enumerate()
            .map(|(j, th)| 2.0 * (th * k as f64).cos() * x[self.n_r + j].max(0.0).powf(e))
            .sum();
        real + cplx
    }

    /// Gradient of [`Self::power_lhs`] with respect to `x`.
    pub(crate) fn power_grad(&self, k: u32, x: &[f64]) -> Vec<f64> {
        let e = k as f64 / self.mu as f64;
        let floor = 1e-300;
        let mut g = vec![0.0; self.n_vars()];
        for i in 0..self.n_r {
            g[i] = e * x[i].max(floor).powf(e - 1.0);
        }
        for (j, th) in self.pair_theta.iter().enumerate() {
            let i = self.n_r + j;
            g[i] = 2.0 * (th * k as f64).cos() * e * x[i].max(floor).powf(e - 1.0);
        }
        g
    }

    /// Sets the epigraph variable to the cost it bounds.
    pub(crate) fn complete(&self, x: &mut [f64]) {
        if let Some(target) = self.target {
            let t = self.n_vars() - 1;
            x[t] = (x[0] - target).abs();
        }
    }

    /// `(label, violation)` for every row; positive values are violations.
    pub(crate) fn violations_x(&self, x: &[f64]) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self
            .linear
            .iter()
            .map(|l| (l.label.clone(), l.row.violation(x)))
            .collect();
        for (i, rhs) in self.power_rhs.iter().enumerate() {
            let k = i as u32 + 1;
            out.push((format!("power sum k={k}"), rhs - self.power_lhs(k, x)));
        }
        out
    }

    pub(crate) fn max_violation_x(&self, x: &[f64]) -> (String, f64) {
        self.violations_x(x)
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or_else(|| (String::new(), 0.0))
    }

    pub(crate) fn objective_x(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn point(&self, x: &[f64]) -> DecisionPoint {
        let pairs = self.pairs();
        let len = self.prefix_count;
        let mut w = vec![0.0; len];
        w[..self.n_r].copy_from_slice(&x[..self.n_r]);
        let mut v = vec![0.0; len];
        for j in 0..pairs {
            v[self.n_r + 2 * j] = x[self.n_r + j];
            v[self.n_r + 2 * j + 1] = x[self.n_r + j];
        }
        let off = self.n_r + 2 * pairs;
        v[off..off + self.zeta.len()].copy_from_slice(&self.zeta);
        DecisionPoint { w_sorted: w, v }
    }

    /// Variable vector of a point (epigraph set to the cost).
    pub fn x_of(&self, p: &DecisionPoint) -> Vec<f64> {
        let mut x = vec![0.0; self.n_vars()];
        x[..self.n_r].copy_from_slice(&p.w_sorted[..self.n_r]);
        for j in 0..self.pairs() {
            x[self.n_r + j] = p.v[self.n_r + 2 * j];
        }
        self.complete(&mut x);
        x
    }

    /// Cost of a point.
    pub fn cost(&self, p: &DecisionPoint) -> f64 {
        self.objective_x(&self.x_of(p))
    }

    /// Every constraint of the program evaluated directly on `p`, including
    /// the affine structure that ties `w` and `v` to the pole layout.
    pub fn violations(&self, p: &DecisionPoint) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        let len = p.v.len();
        let n_r = self.n_r;
        let pairs = self.pairs();
        let neg = p.w_sorted.iter().chain(&p.v).map(|x| -x).fold(0.0, f64::max);
        out.push(("nonnegativity".to_string(), neg));
        out.push((
            "affine: w_i = 0 past n_r".to_string(),
            p.w_sorted[n_r..].iter().map(|x| x.abs()).fold(0.0, f64::max),
        ));
        out.push((
            "affine: v_i = 0 up to n_r".to_string(),
            p.v[..n_r].iter().map(|x| x.abs()).fold(0.0, f64::max),
        ));
        let off = n_r + 2 * pairs;
        out.push((
            "affine: zero entries fixed".to_string(),
            p.v[off..].iter().zip(&self.zeta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        ));
        out.push((
            "affine: conjugate entries equal".to_string(),
            (0..pairs)
                .map(|j| (p.v[n_r + 2 * j] - p.v[n_r + 2 * j + 1]).abs())
                .fold(0.0, f64::max),
        ));
        let cap = self.cap();
        out.push(("stability: w1 <= delta^mu - eps".to_string(), p.w_sorted[0] - cap));
        for i in 0..n_r.saturating_sub(1) {
            out.push((
                format!("ordering: w{} >= w{}", i + 1, i + 2),
                p.w_sorted[i + 1] - p.w_sorted[i],
            ));
        }
        out.push((format!("positivity: w{n_r} >= eps"), self.epsilon - p.w_sorted[n_r - 1]));
        for j in 0..pairs {
            out.push((format!("positivity: u{} >= eps", j + 1), self.epsilon - p.v[n_r + 2 * j]));
        }
        let pw = prefix_sums(&sort_desc(&p.w_sorted));
        let pv = prefix_sums(&sort_desc(&p.v));
        for k in 0..len {
            out.push((format!("majorization k={}", k + 1), pv[k] - pw[k]));
        }
        let x = self.x_of(p);
        for (i, rhs) in self.power_rhs.iter().enumerate() {
            let k = i as u32 + 1;
            out.push((format!("power sum k={k}"), rhs - self.power_lhs(k, &x)));
        }
        out
    }

    pub fn max_violation(&self, p: &DecisionPoint) -> f64 {
        self.violations(p).iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max)
    }
}
