//! Partial fractions and analytic time responses.
//!
//! Every time-domain quantity in this crate is a finite sum of modes
//! `c(t) exp(lambda t)` with polynomial amplitude `c`. Impulse and step
//! responses are obtained from residues, never by numerical integration.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::tf::RationalTF;

/// Poles closer than this (absolute) are treated as one repeated pole.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Samples below `-NEGATIVITY_TOL * scale` count as negative.
pub const NEGATIVITY_TOL: f64 = 1e-10;

/// Default number of samples for sign checks.
pub const DEFAULT_SAMPLES: usize = 20_000;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A term `residue / (s - pole)^order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfeTerm {
    pub pole: Complex64,
    pub order: usize,
    pub residue: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionExpansion {
    pub terms: Vec<PfeTerm>,
    /// Constant part; nonzero only for biproper systems.
    pub direct: f64,
}

/// Groups values lying within [`CLUSTER_TOL`] of each other.
///
/// Returns `(center, multiplicity)` with the center being the cluster mean.
pub(crate) fn cluster(values: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut assigned = vec![false; values.len()];
    let mut out = Vec::new();
    for i in 0..values.len() {
        if assigned[i] {
            continue;
        }
        let mut members = vec![i];
        assigned[i] = true;
        // single linkage: grow until no unassigned value is close to a member
        let mut k = 0;
        while k < members.len() {
            let anchor = values[members[k]];
            for j in 0..values.len() {
                if !assigned[j] && (values[j] - anchor).norm() <= tol {
                    assigned[j] = true;
                    members.push(j);
                }
            }
            k += 1;
        }
        let sum: Complex64 = members.iter().map(|&j| values[j]).sum();
        let mut center = sum / members.len() as f64;
        if center.im.abs() <= tol {
            center.im = 0.0;
        }
        out.push((center, members.len()));
    }
    out
}

/// Truncated Taylor coefficients (ascending) of `scale * prod (offset_j + e)`.
fn taylor_product(offsets: impl Iterator<Item = Complex64>, scale: Complex64, order: usize) -> Vec<Complex64> {
    let mut c = vec![ZERO; order];
    c[0] = scale;
    for a in offsets {
        for k in (0..order).rev() {
            let prev = if k > 0 { c[k - 1] } else { ZERO };
            c[k] = c[k] * a + prev;
        }
    }
    c
}

impl PartialFractionExpansion {
    pub fn of(tf: &RationalTF) -> Result<Self> {
        let n = tf.order();
        let m = tf.zeros().len();
        if n < m {
            return Err(Error::domain(format!(
                "improper transfer function ({m} zeros, {n} poles)"
            )));
        }
        let clusters = cluster(tf.poles(), CLUSTER_TOL);
        let mut terms = Vec::with_capacity(n);
        for (ci, &(center, mult)) in clusters.iter().enumerate() {
            // phi(s) = H(s) (s - center)^mult, expanded around the center
            let num = taylor_product(
                tf.zeros().iter().map(|&z| center - z),
                Complex64::new(tf.gain(), 0.0),
                mult,
            );
            let others = clusters
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != ci)
                .flat_map(|(_, &(q, k))| std::iter::repeat_n(center - q, k));
            let den = taylor_product(others, ONE, mult);
            let mut phi = vec![ZERO; mult];
            for k in 0..mult {
                let acc: Complex64 = (1..=k).map(|j| den[j] * phi[k - j]).sum();
                phi[k] = (num[k] - acc) / den[0];
            }
            for order in 1..=mult {
                terms.push(PfeTerm {
                    pole: center,
                    order,
                    residue: phi[mult - order],
                });
            }
        }
        let direct = if n == m { tf.gain() } else { 0.0 };
        Ok(PartialFractionExpansion { terms, direct })
    }

    /// Evaluates the expansion at `s`.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.residue / (s - t.pole).powu(t.order as u32))
            .sum::<Complex64>()
            + self.direct
    }

    /// The inverse Laplace transform without the Dirac term.
    pub fn modes(&self) -> ExpSum {
        let mut modes: Vec<Mode> = Vec::new();
        for t in &self.terms {
            let idx = match modes.iter().position(|m| m.rate == t.pole) {
                Some(i) => i,
                None => {
                    modes.push(Mode {
                        rate: t.pole,
                        amplitude: Vec::new(),
                    });
                    modes.len() - 1
                }
            };
            let amp = &mut modes[idx].amplitude;
            if amp.len() < t.order {
                amp.resize(t.order, ZERO);
            }
            amp[t.order - 1] += t.residue / factorial(t.order - 1);
        }
        ExpSum { modes }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// A mode `(sum_j amplitude[j] t^j) exp(rate t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub rate: Complex64,
    pub amplitude: Vec<Complex64>,
}

impl Mode {
    fn amplitude_at(&self, t: f64) -> Complex64 {
        self.amplitude.iter().rev().fold(ZERO, |acc, &a| acc * t + a)
    }

    fn weight(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm()).sum()
    }
}

/// A finite sum of exponential modes; its real part is the time signal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    modes: Vec<Mode>,
}

impl ExpSum {
    pub fn new(modes: Vec<Mode>) -> Self {
        ExpSum { modes }
    }

    /// `sum_i c_i exp(rate_i t)` with identical rates merged exactly.
    pub fn from_weighted_rates(terms: impl IntoIterator<Item = (Complex64, f64)>) -> Self {
        let mut modes: Vec<Mode> = Vec::new();
        for (rate, c) in terms {
            match modes.iter_mut().find(|m| (m.rate - rate).norm() <= CLUSTER_TOL) {
                Some(m) => m.amplitude[0] += c,
                None => modes.push(Mode {
                    rate,
                    amplitude: vec![Complex64::new(c, 0.0)],
                }),
            }
        }
        modes.retain(|m| m.amplitude[0].norm() != 0.0);
        ExpSum { modes }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| m.amplitude_at(t) * (m.rate * t).exp())
            .sum::<Complex64>()
            .re
    }

    /// Total amplitude weight; the reference scale for sign tolerances.
    pub fn scale(&self) -> f64 {
        self.modes.iter().map(Mode::weight).sum()
    }

    /// Largest real part among modes carrying non-negligible weight.
    pub fn leading_rate(&self) -> f64 {
        let floor = 1e-12 * self.scale();
        self.modes
            .iter()
            .filter(|m| m.weight() > floor)
            .map(|m| m.rate.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `exp(-sigma t) f(t)` with `sigma` the leading rate; same sign as `f`.
    pub fn eval_scaled(&self, t: f64) -> f64 {
        let sigma = self.leading_rate();
        if !sigma.is_finite() {
            return 0.0;
        }
        self.modes
            .iter()
            .map(|m| m.amplitude_at(t) * ((m.rate - sigma) * t).exp())
            .sum::<Complex64>()
            .re
    }

    /// Time horizon over which the sign of the signal is settled.
    ///
    /// Covers the slowest decay gap to the leading rate, the leading
    /// oscillation period and the roots of the leading amplitude polynomial.
    pub fn default_horizon(&self) -> f64 {
        let sigma = self.leading_rate();
        if !sigma.is_finite() {
            return 1.0;
        }
        let floor = 1e-12 * self.scale();
        let mut horizon: f64 = 50.0 / sigma.abs().max(1e-3);
        for m in self.modes.iter().filter(|m| m.weight() > floor) {
            let gap = sigma - m.rate.re;
            if gap > 1e-12 {
                horizon = horizon.max(50.0 / gap);
            } else {
                if m.rate.im.abs() > 1e-12 {
                    horizon = horizon.max(4.0 * std::f64::consts::PI / m.rate.im.abs());
                }
                if let Some(top) = m.amplitude.iter().rposition(|a| a.norm() > 0.0) {
                    let lead = m.amplitude[top].norm();
                    let bound = m.amplitude[..top].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
                    horizon = horizon.max(4.0 * (1.0 + bound));
                }
            }
        }
        horizon.min(1e6)
    }

    /// Smallest scaled sample over `grid` as `(t, scaled value)`.
    pub fn min_scaled(&self, grid: &[f64]) -> (f64, f64) {
        grid.iter()
            .map(|&t| (t, self.eval_scaled(t)))
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }

    /// A sample where the signal is negative beyond [`NEGATIVITY_TOL`], as
    /// `(t, value, scaled value)`.
    ///
    /// The sign is judged on the scaled signal; among negative samples the one
    /// with the most negative unscaled value is reported.
    pub fn negative_sample(&self, grid: &[f64]) -> Option<(f64, f64, f64)> {
        let floor = -NEGATIVITY_TOL * self.scale();
        grid.iter()
            .map(|&t| (t, self.eval_scaled(t)))
            .filter(|&(_, s)| s < floor)
            .map(|(t, s)| (t, self.eval(t), s))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Union of a uniform grid on `[0, t_max]` and a log grid on `[1e-6, t_max]`.
pub fn sample_grid(t_max: f64, n_samples: usize) -> Vec<f64> {
    let n_lin = (n_samples / 2).max(2);
    let n_log = n_samples.saturating_sub(n_lin).max(2);
    let mut grid: Vec<f64> = (0..n_lin)
        .map(|i| t_max * i as f64 / (n_lin - 1) as f64)
        .collect();
    let lo = (1e-6 * t_max.min(1.0)).ln();
    let hi = t_max.ln();
    grid.extend((0..n_log).map(|i| (lo + (hi - lo) * i as f64 / (n_log - 1) as f64).exp()));
    grid.push(0.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

impl RationalTF {
    pub fn partial_fractions(&self) -> Result<PartialFractionExpansion> {
        PartialFractionExpansion::of(self)
    }

    /// Regular part of the impulse response as a mode sum.
    pub fn impulse_modes(&self) -> Result<ExpSum> {
        Ok(self.partial_fractions()?.modes())
    }

    /// `h(t)` without the Dirac term that a biproper system carries at `t = 0`.
    pub fn impulse_response(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::domain("time must be nonnegative"));
        }
        Ok(self.impulse_modes()?.eval(t))
    }

    /// Step response as a mode sum, from the residues of `H(s)/s`.
    pub fn step_modes(&self) -> Result<ExpSum> {
        if self.poles().iter().any(|p| p.norm() <= CLUSTER_TOL) {
            return Err(Error::domain("pole at the origin: step response is unbounded"));
        }
        self.with_integrator().impulse_modes()
    }

    pub fn step_response(&self, grid: &[f64]) -> Result<Vec<f64>> {
        if grid.iter().any(|&t| t < 0.0 || !t.is_finite()) {
            return Err(Error::domain("time grid must be finite and nonnegative"));
        }
        let modes = self.step_modes()?;
        Ok(grid.iter().map(|&t| modes.eval(t)).collect())
    }
}
