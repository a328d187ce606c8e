//! Two-degree-of-freedom controller synthesis with monotonic step response.
//!
//! The controller `u = K_c r - (F / G) y` with `deg F = deg G = n - 1`
//! places the `2n - 1` closed-loop poles and leaves the plant zeros in place.
//! Poles are chosen by a convex program in the shifted variables
//! `w = (p + delta)^mu`, so that the closed loop passes the majorization
//! certificate by construction.

mod program;
mod sensitivity;
mod simplex;
mod solver;
mod sylvester;

use std::str::FromStr;

pub use program::{formulate, pole_zero_match_cost, ConvexProgram, DecisionPoint, MAX_ACTIVE};
pub use sensitivity::{sensitivity_peak, CascadeController};
pub use solver::{SolverDiagnostics, ACCEPT_TOL};
pub use sylvester::{
    char_poly, compute_kc, restore_poles, solve_sylvester, sylvester_matrix, COPRIME_TOL, RESIDUAL_TOL,
};

use crate::error::{Error, Result};
use crate::lcm::{angle_bound, auto_delta, certify_corollary1, LcmCertificate};
use crate::poly::Polynomial;
use crate::response::sample_grid;
use crate::tf::RationalTF;
use crate::Complex64;

/// Samples used for the impulse-response check of a synthesized loop.
pub const IMPULSE_SAMPLES: usize = 4000;
/// Floor on sampled impulse values, relative to `max(1, response scale)`.
pub const IMPULSE_FLOOR: f64 = 1e-9;
/// Allowed `|H_cl(0) - 1|`.
pub const DC_TOL: f64 = 1e-9;

/// Convex objectives available when the pole/zero matching cost does not apply.
#[derive(Debug, Clone, PartialEq)]
pub enum CustomCost {
    /// Minimize `w_1`, pushing the dominant pole as far left as allowed.
    MinDominant,
    /// Minimize `pi . a + u . b` over the real-pole entries and pair moduli.
    Linear { pi: Vec<f64>, u: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cost {
    /// `|w_1 - max over real zeros (z + delta)^mu|`.
    PoleZeroMatch,
    Custom(CustomCost),
}

impl FromStr for Cost {
    type Err = Error;

    /// `polezero`, `min-dominant`, or `linear:a1,a2,..;b1,..`.
    fn from_str(s: &str) -> Result<Cost> {
        let parse_list = |t: &str| -> Result<Vec<f64>> {
            t.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::domain(format!("invalid cost weight `{x}`")))
                })
                .collect()
        };
        match s.trim() {
            "polezero" | "pole-zero" => Ok(Cost::PoleZeroMatch),
            "min-dominant" => Ok(Cost::Custom(CustomCost::MinDominant)),
            other => match other.strip_prefix("linear:") {
                Some(rest) => {
                    let (pi, u) = rest.split_once(';').unwrap_or((rest, ""));
                    Ok(Cost::Custom(CustomCost::Linear {
                        pi: parse_list(pi)?,
                        u: parse_list(u)?,
                    }))
                }
                None => Err(Error::domain(format!("unknown cost `{other}`"))),
            },
        }
    }
}

/// User-facing tuning; unset fields take their defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Tuning {
    pub mu: u32,
    /// Defaults to `1 + max(0, -min Re z)`, widened for complex zeros.
    pub delta: Option<f64>,
    /// Number of real closed-loop poles; defaults to `2n - 1 - 2 * pair_angles.len()`.
    pub n_r: Option<usize>,
    /// One shifted angle per conjugate pole pair.
    pub pair_angles: Vec<f64>,
    /// Defaults to `1e-6 delta^mu`.
    pub epsilon: Option<f64>,
    pub cost: Cost,
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            mu: 1,
            delta: None,
            n_r: None,
            pair_angles: Vec::new(),
            epsilon: None,
            cost: Cost::PoleZeroMatch,
        }
    }
}

/// A validated synthesis problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisProblem {
    plant: RationalTF,
    mu: u32,
    delta: f64,
    delta_is_auto: bool,
    n_r: usize,
    theta: Vec<f64>,
    epsilon: f64,
    cost: Cost,
}

impl SynthesisProblem {
    /// `theta` has length `2n - 1`: `n_r` leading zeros, then `(a, -a)` pairs.
    pub fn new(
        plant: RationalTF,
        mu: u32,
        delta: f64,
        theta: Vec<f64>,
        epsilon: Option<f64>,
        cost: Cost,
    ) -> Result<Self> {
        let n_r = theta.iter().take_while(|&&t| t == 0.0).count();
        SynthesisProblem::build(plant, mu, delta, false, n_r, theta, epsilon, cost)
    }

    pub fn from_tuning(plant: RationalTF, tuning: &Tuning) -> Result<Self> {
        let n = plant.order();
        if n == 0 {
            return Err(Error::domain("plant has no poles"));
        }
        let pairs = tuning.pair_angles.len();
        let n_r = tuning.n_r.unwrap_or((2 * n - 1).saturating_sub(2 * pairs));
        if n_r + 2 * pairs != 2 * n - 1 {
            return Err(Error::domain(format!(
                "{n_r} real poles and {pairs} pairs do not make 2n - 1 = {} closed-loop poles",
                2 * n - 1
            )));
        }
        let mut theta = vec![0.0; n_r];
        for &a in &tuning.pair_angles {
            theta.push(a);
            theta.push(-a);
        }
        let (delta, is_auto) = match tuning.delta {
            Some(d) => (d, false),
            None => {
                let zeros_only = RationalTF::new(1.0, plant.zeros().to_vec(), Vec::new())?;
                (auto_delta(&zeros_only, tuning.mu), true)
            }
        };
        SynthesisProblem::build(plant, tuning.mu, delta, is_auto, n_r, theta, tuning.epsilon, tuning.cost.clone())
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        plant: RationalTF,
        mu: u32,
        delta: f64,
        delta_is_auto: bool,
        n_r: usize,
        theta: Vec<f64>,
        epsilon: Option<f64>,
        cost: Cost,
    ) -> Result<Self> {
        let n = plant.order();
        if n == 0 {
            return Err(Error::domain("plant has no poles"));
        }
        if mu == 0 {
            return Err(Error::domain("mu must be a positive integer"));
        }
        if plant.zeros().len() > n {
            return Err(Error::domain("plant must be proper (m <= n)"));
        }
        if !delta.is_finite() {
            return Err(Error::domain("delta must be finite"));
        }
        if plant.zeros().iter().any(|z| z.norm() == 0.0) {
            return Err(Error::domain(
                "plant numerator vanishes at s = 0 (B(0) = 0); unit DC gain is unreachable",
            ));
        }
        if let Some(z) = plant.zeros().iter().find(|z| z.re + delta <= 0.0) {
            return Err(Error::domain(format!(
                "delta = {delta} must exceed -Re z = {} for every plant zero",
                -z.re
            )));
        }
        if theta.len() != 2 * n - 1 {
            return Err(Error::domain(format!(
                "theta has {} entries, expected 2n - 1 = {}",
                theta.len(),
                2 * n - 1
            )));
        }
        if n_r.is_multiple_of(2) || n_r > theta.len() || theta[..n_r].iter().any(|&t| t != 0.0) {
            return Err(Error::domain("theta must start with an odd number n_r of zero angles"));
        }
        let tail = &theta[n_r..];
        if !tail.len().is_multiple_of(2) || tail.chunks(2).any(|c| c[0] != -c[1]) {
            return Err(Error::domain("complex angles must come in (a, -a) pairs"));
        }
        let bound = angle_bound(mu);
        if theta.iter().any(|t| !(t.abs() < bound)) {
            return Err(Error::domain(format!("pole angles must satisfy |theta| < {bound}")));
        }
        if plant.zeros().iter().any(|z| !((z + delta).arg().abs() < bound)) {
            return Err(Error::domain(format!(
                "shifted zero angles must satisfy |phi| < {bound}; increase delta"
            )));
        }
        let scale = delta.powi(mu as i32);
        let epsilon = epsilon.unwrap_or(1e-6 * scale);
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::domain("epsilon must be positive"));
        }
        Ok(SynthesisProblem {
            plant,
            mu,
            delta,
            delta_is_auto,
            n_r,
            theta,
            epsilon,
            cost,
        })
    }

    pub fn plant(&self) -> &RationalTF {
        &self.plant
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Whether `delta` came from the default rule.
    pub fn delta_is_auto(&self) -> bool {
        self.delta_is_auto
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn cost(&self) -> &Cost {
        &self.cost
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub f: Polynomial,
    pub g: Polynomial,
    pub kc: f64,
    pub closed_loop_poles: Vec<Complex64>,
    /// `K_c K B / (B F + A G)` in zero/pole form.
    pub closed_loop: RationalTF,
    pub point: DecisionPoint,
    pub diagnostics: SolverDiagnostics,
    /// Certificate of the closed loop at the problem's `(mu, delta)`.
    pub certificate: LcmCertificate,
    pub sensitivity_peak: f64,
    /// Largest coefficient error in `B F + A G = a_cl`.
    pub sylvester_residual: f64,
}

impl SynthesisResult {
    /// `10 / |max Re p_cl|`.
    pub fn step_horizon(&self) -> f64 {
        10.0 / self.closed_loop.pole_abscissa().abs()
    }

    /// Step response on `n >= 2` evenly spaced samples of `[0, step_horizon]`.
    pub fn step_samples(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let t_end = self.step_horizon();
        let n = n.max(2);
        let grid: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
        let y = self.closed_loop.step_response(&grid)?;
        Ok(grid.into_iter().zip(y).collect())
    }
}

/// Formulates and solves the pole-placement program, then recovers and
/// verifies the controller.
pub fn synthesize(problem: &SynthesisProblem) -> Result<SynthesisResult> {
    let program = formulate(problem)?;
    let solution = solver::solve(&program)?;
    let point = program.point(&solution.x);
    let poles = restore_poles(&point, problem);
    let radius = program.cap().max(0.0).powf(1.0 / problem.mu() as f64);
    for p in &poles {
        if !(p.re < 0.0) || (p + problem.delta()).norm() > radius * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::Verification(format!(
                "restored pole {p} leaves the stability disc of radius {radius}"
            )));
        }
    }
    let a_cl = char_poly(&poles)?;
    let plant = problem.plant();
    let (f, g) = solve_sylvester(plant, &a_cl)?;
    let kc = compute_kc(plant, &f, &g)?;
    let loop_poly = &(&plant.numerator() * &f) + &(&plant.denominator() * &g);
    let sylvester_residual = loop_poly.max_abs_diff(&a_cl);

    let closed_loop = RationalTF::new(kc * plant.gain(), plant.zeros().to_vec(), poles.clone())?;
    let dc = closed_loop.dc_gain();
    if (dc - 1.0).abs() > DC_TOL {
        return Err(Error::Verification(format!("closed-loop DC gain {dc} is not 1")));
    }
    let certificate = certify_corollary1(&closed_loop, problem.mu(), problem.delta())?;
    if !certificate.is_certified() {
        return Err(Error::Verification(format!(
            "closed loop fails its own certificate: {}",
            certificate
                .witness
                .as_ref()
                .map_or_else(|| "no witness".to_string(), |w| w.to_string())
        )));
    }
    let impulse = closed_loop.impulse_modes()?;
    let horizon = 50.0 / closed_loop.pole_abscissa().abs();
    let grid = sample_grid(horizon, IMPULSE_SAMPLES);
    let floor = -IMPULSE_FLOOR * impulse.scale().max(1.0);
    if let Some(t) = grid.iter().copied().find(|&t| impulse.eval(t) < floor) {
        return Err(Error::Verification(format!(
            "closed-loop impulse response is negative at t = {t}"
        )));
    }
    Ok(SynthesisResult {
        sensitivity_peak: sensitivity_peak(plant, &f, &g),
        f,
        g,
        kc,
        closed_loop_poles: poles,
        closed_loop,
        point,
        diagnostics: solution.diagnostics,
        certificate,
        sylvester_residual,
    })
}
