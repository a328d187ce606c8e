//! External positivity: `h(t) >= 0` for the impulse response of `H`.
//!
//! First- and second-order systems are decided exactly from the numerator
//! values at the poles; higher orders fall back to sampling.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::lcm::{certify, default_strategy};
use crate::response::{sample_grid, ExpSum, CLUSTER_TOL, DEFAULT_SAMPLES};
use crate::tf::RationalTF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExPos {
    Positive,
    NotPositive,
    /// No negative sample found; not a proof.
    PositiveSampled,
}

impl ExPos {
    pub fn label(self) -> &'static str {
        match self {
            ExPos::Positive => "positive",
            ExPos::NotPositive => "not-positive",
            ExPos::PositiveSampled => "positive-sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExPosMethod {
    FirstOrder,
    SecondOrder,
    Sampled,
}

impl ExPosMethod {
    pub fn label(self) -> &'static str {
        match self {
            ExPosMethod::FirstOrder => "first-order",
            ExPosMethod::SecondOrder => "second-order",
            ExPosMethod::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExPosWitness {
    /// `h(t) = value < 0`; `scaled` is `value` over the dominant exponential.
    Time { t: f64, value: f64, scaled: f64 },
    /// Negative impulse `weight * delta(t)` at the origin (biproper, `K < 0`).
    Dirac { weight: f64 },
    /// More zeros than poles: `h` contains derivatives of the Dirac impulse.
    Improper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExPosVerdict {
    pub verdict: ExPos,
    pub method: ExPosMethod,
    pub witness: Option<ExPosWitness>,
}

impl ExPosVerdict {
    fn positive(method: ExPosMethod) -> Self {
        ExPosVerdict {
            verdict: ExPos::Positive,
            method,
            witness: None,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.verdict != ExPos::NotPositive
    }
}

/// Most negative point of `h` on the default grid, or a negative Dirac weight.
fn locate_negativity(tf: &RationalTF, modes: &ExpSum, t_max: Option<f64>, n: usize) -> Option<ExPosWitness> {
    if tf.zeros().len() > tf.order() {
        return Some(ExPosWitness::Improper);
    }
    if tf.zeros().len() == tf.order() && tf.gain() < 0.0 {
        return Some(ExPosWitness::Dirac { weight: tf.gain() });
    }
    if modes.modes().is_empty() {
        return None;
    }
    let horizon = t_max.filter(|t| *t > 0.0).unwrap_or_else(|| modes.default_horizon());
    modes
        .negative_sample(&sample_grid(horizon, n))
        .map(|(t, value, scaled)| ExPosWitness::Time { t, value, scaled })
}

fn not_positive(tf: &RationalTF, method: ExPosMethod) -> ExPosVerdict {
    let witness = tf
        .impulse_modes()
        .ok()
        .and_then(|m| locate_negativity(tf, &m, None, DEFAULT_SAMPLES))
        .or_else(|| (tf.zeros().len() > tf.order()).then_some(ExPosWitness::Improper));
    ExPosVerdict {
        verdict: ExPos::NotPositive,
        method,
        witness,
    }
}

/// `B(s) = K prod (s - z_j)`.
fn numerator_at(tf: &RationalTF, s: f64) -> f64 {
    tf.numerator_at(Complex64::new(s, 0.0)).re
}

fn numerator_slope_at(tf: &RationalTF, s: f64) -> f64 {
    tf.numerator().derivative().eval(s)
}

/// Exact test for `n = 1`: `K > 0` and `B(p_1) >= 0`.
pub fn expos_order1(tf: &RationalTF) -> Result<ExPosVerdict> {
    if tf.order() != 1 {
        return Err(Error::domain("expos_order1 needs exactly one pole"));
    }
    if tf.zeros().len() > 1 {
        return Ok(not_positive(tf, ExPosMethod::FirstOrder));
    }
    let p = tf.poles()[0].re;
    if tf.gain() > 0.0 && numerator_at(tf, p) >= 0.0 {
        Ok(ExPosVerdict::positive(ExPosMethod::FirstOrder))
    } else {
        Ok(not_positive(tf, ExPosMethod::FirstOrder))
    }
}

/// Exact test for `n = 2` without zero/pole cancellation: real poles, `K > 0`,
/// `B(p_1) >= 0`, `B'(p_1) >= 0` and `B(p_1) >= B(p_2)` with `p_1 >= p_2`.
pub fn expos_order2(tf: &RationalTF) -> Result<ExPosVerdict> {
    if tf.order() != 2 {
        return Err(Error::domain("expos_order2 needs exactly two poles"));
    }
    let cancels = tf
        .zeros()
        .iter()
        .any(|z| tf.poles().iter().any(|p| (z - p).norm() <= CLUSTER_TOL));
    if cancels {
        return Err(Error::domain("zero/pole cancellation; reduce the transfer function first"));
    }
    if tf.zeros().len() > 2 || tf.poles()[0].im != 0.0 {
        return Ok(not_positive(tf, ExPosMethod::SecondOrder));
    }
    let (p1, p2) = {
        let (a, b) = (tf.poles()[0].re, tf.poles()[1].re);
        (a.max(b), a.min(b))
    };
    let b1 = numerator_at(tf, p1);
    let b2 = numerator_at(tf, p2);
    let d1 = numerator_slope_at(tf, p1);
    let slack = 1e-12 * (b1.abs() + b2.abs() + d1.abs());
    let ok = tf.gain() > 0.0 && b1 >= -slack && d1 >= -slack && b1 - b2 >= -slack;
    if ok {
        Ok(ExPosVerdict::positive(ExPosMethod::SecondOrder))
    } else {
        Ok(not_positive(tf, ExPosMethod::SecondOrder))
    }
}

/// Samples `h` on the mixed grid. For biproper systems the Dirac weight `K`
/// must be positive as well.
pub fn expos_oracle(tf: &RationalTF, t_max: Option<f64>, n_samples: usize) -> ExPosVerdict {
    let sampled = |witness: Option<ExPosWitness>| ExPosVerdict {
        verdict: if witness.is_some() {
            ExPos::NotPositive
        } else {
            ExPos::PositiveSampled
        },
        method: ExPosMethod::Sampled,
        witness,
    };
    match tf.impulse_modes() {
        Ok(modes) => sampled(locate_negativity(tf, &modes, t_max, n_samples)),
        Err(_) => sampled(Some(ExPosWitness::Improper)),
    }
}

/// Exact verdict for `n <= 2` (after cancelling common zero/pole pairs),
/// sampled otherwise.
pub fn external_positivity(tf: &RationalTF) -> ExPosVerdict {
    let reduced = cancel_common(tf);
    let exact = match reduced.order() {
        1 => expos_order1(&reduced).ok(),
        2 => expos_order2(&reduced).ok(),
        _ => None,
    };
    exact.unwrap_or_else(|| expos_oracle(&reduced, None, DEFAULT_SAMPLES))
}

/// Removes zero/pole pairs closer than the clustering tolerance.
pub fn cancel_common(tf: &RationalTF) -> RationalTF {
    let mut zeros = tf.zeros().to_vec();
    let mut poles = Vec::with_capacity(tf.order());
    for &p in tf.poles() {
        match zeros.iter().position(|z| (z - p).norm() <= CLUSTER_TOL) {
            Some(i) => {
                zeros.swap_remove(i);
            }
            None => poles.push(p),
        }
    }
    // conjugate pairs cancel together, so closure is preserved
    RationalTF::new(tf.gain(), zeros, poles).unwrap_or_else(|_| tf.clone())
}

/// True unless `tf` is certified LCM while failing external positivity,
/// which would contradict "LCM implies externally positive".
pub fn lcm_implies_expos_check(tf: &RationalTF) -> bool {
    let lcm = certify(tf, &default_strategy()).is_certified();
    !(lcm && external_positivity(tf).verdict == ExPos::NotPositive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(k: f64, z: &[f64], p: &[f64]) -> RationalTF {
        RationalTF::from_real(k, z, p).unwrap()
    }

    fn damped() -> RationalTF {
        RationalTF::new(
            1.0,
            vec![],
            vec![Complex64::new(-0.5, 1.0), Complex64::new(-0.5, -1.0)],
        )
        .unwrap()
    }

    fn counterexample() -> RationalTF {
        RationalTF::new(
            1.0,
            vec![Complex64::new(-0.5, 1.0), Complex64::new(-0.5, -1.0)],
            [-0.8, -1.0, -1.2].iter().map(|&p| Complex64::new(p, 0.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn first_order_examples() {
        assert_eq!(expos_order1(&tf(1.0, &[], &[-1.0])).unwrap().verdict, ExPos::Positive);
        assert_eq!(expos_order1(&tf(1.0, &[-2.0], &[-1.0])).unwrap().verdict, ExPos::Positive);
        let v = expos_order1(&tf(1.0, &[0.0], &[-1.0])).unwrap();
        assert_eq!(v.verdict, ExPos::NotPositive);
        assert!(matches!(v.witness, Some(ExPosWitness::Time { value, .. }) if value < -1e-10));
        assert!(expos_order1(&tf(1.0, &[], &[-1.0, -2.0])).is_err());
    }

    #[test]
    fn first_order_negative_gain_has_dirac_witness() {
        // B(p) = -1 * (-1 + 0.5) > 0, yet K < 0 puts a negative impulse at 0
        let v = expos_order1(&tf(-1.0, &[-0.5], &[-1.0])).unwrap();
        assert_eq!(v.verdict, ExPos::NotPositive);
        assert_eq!(v.witness, Some(ExPosWitness::Dirac { weight: -1.0 }));
    }

    #[test]
    fn second_order_examples() {
        assert_eq!(
            expos_order2(&tf(1.0, &[-3.0], &[-1.0, -2.0])).unwrap().verdict,
            ExPos::Positive
        );
        assert_eq!(expos_order2(&damped()).unwrap().verdict, ExPos::NotPositive);
        assert_eq!(
            expos_order2(&tf(1.0, &[-1.5], &[-1.0, -2.0])).unwrap().verdict,
            ExPos::Positive
        );
        assert_eq!(
            expos_order2(&tf(-1.0, &[-1.5], &[-1.0, -2.0])).unwrap().verdict,
            ExPos::NotPositive
        );
        assert!(expos_order2(&tf(1.0, &[-1.0], &[-1.0, -2.0])).is_err());
    }

    #[test]
    fn second_order_repeated_pole() {
        // (s + 2)/(s + 1)^2: h = (1 + t) e^{-t}
        assert_eq!(
            expos_order2(&tf(1.0, &[-2.0], &[-1.0, -1.0])).unwrap().verdict,
            ExPos::Positive
        );
        // (s + 0.5)/(s + 1)^2: h = (1 - 0.5 t) e^{-t}
        assert_eq!(
            expos_order2(&tf(1.0, &[-0.5], &[-1.0, -1.0])).unwrap().verdict,
            ExPos::NotPositive
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(expos_oracle(&counterexample(), None, 20_000).verdict, ExPos::PositiveSampled);
        let v = expos_oracle(&damped(), None, 20_000);
        assert_eq!(v.verdict, ExPos::NotPositive);
        assert!(matches!(v.witness, Some(ExPosWitness::Time { value, .. }) if value < -1e-10));
        assert_eq!(
            expos_oracle(&tf(1.0, &[], &[-1.0]), None, 20_000).verdict,
            ExPos::PositiveSampled
        );
        assert_eq!(
            expos_oracle(&tf(-1.0, &[-2.0], &[-1.0]), None, 100).witness,
            Some(ExPosWitness::Dirac { weight: -1.0 })
        );
    }

    #[test]
    fn lcm_within_external_positivity() {
        assert!(lcm_implies_expos_check(&tf(1.0, &[-2.0], &[-1.0])));
        assert!(lcm_implies_expos_check(&counterexample()));
        assert!(lcm_implies_expos_check(&damped()));
    }

    #[test]
    fn cancellation_reduces_order() {
        let t = tf(2.0, &[-1.0, -3.0], &[-1.0, -2.0, -4.0]);
        let r = cancel_common(&t);
        assert_eq!(r.order(), 2);
        assert_eq!(r.zeros().len(), 1);
    }
}
