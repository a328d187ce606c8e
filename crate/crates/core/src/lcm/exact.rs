//! Exact deciders for `g(t) = sum exp(p_i t) - sum exp(z_i t) >= 0` on `t >= 0`.

use num::complex::Complex64;

use super::sturm::{sign_on_ray, QPoly, Sign};
use super::{CertMethod, LcmCertificate, NecessaryCondition, Witness};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::response::{sample_grid, ExpSum};
use crate::tf::RationalTF;

/// Largest polynomial degree the exact test will build.
const MAX_DEGREE: i64 = 4096;
const INTEGER_TOL: f64 = 1e-9;

/// `G(s) = sum 1/(s - p_i) - sum 1/(s - z_j)`, whose impulse response is `g(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedRelaxation {
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
}

impl MixedRelaxation {
    pub fn of(tf: &RationalTF) -> Self {
        MixedRelaxation {
            zeros: tf.zeros().to_vec(),
            poles: tf.poles().to_vec(),
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let p: Complex64 = self.poles.iter().map(|p| (s - p).inv()).sum();
        let z: Complex64 = self.zeros.iter().map(|z| (s - z).inv()).sum();
        p - z
    }

    pub fn exp_sum(&self) -> ExpSum {
        ExpSum::from_weighted_rates(
            self.poles
                .iter()
                .map(|&p| (p, 1.0))
                .chain(self.zeros.iter().map(|&z| (z, -1.0))),
        )
    }

    /// `g(t)`.
    pub fn time_response(&self, t: f64) -> f64 {
        self.exp_sum().eval(t)
    }

    /// `(P' Z - P Z', P Z)` with `P`, `Z` the monic pole and zero polynomials.
    /// The numerator degree is below the denominator degree.
    pub fn to_coeffs(&self) -> Result<(Polynomial, Polynomial)> {
        let p = Polynomial::from_roots(&self.poles)?;
        let z = Polynomial::from_roots(&self.zeros)?;
        let num = &(&p.derivative() * &z) - &(&p * &z.derivative());
        Ok((num, &p * &z))
    }

    /// `G` in zero/pole form; fails when `G` vanishes identically.
    pub fn to_rational(&self) -> Result<RationalTF> {
        let (num, den) = self.to_coeffs()?;
        RationalTF::from_coeffs(&num, &den)
    }
}

/// Samples `g` on a mixed uniform/log grid over `[0, t_max]` plus `t = 0`.
///
/// Refutation is sound (it exhibits a sample with `g < 0`); certification holds
/// up to sampling. Negativity is judged on `g` divided by its dominant
/// exponential, relative to the total mode weight. `t_max: None` picks a
/// horizon from the mode structure.
pub fn check_exact_sampled(tf: &RationalTF, t_max: Option<f64>, n_samples: usize) -> LcmCertificate {
    if tf.gain() <= 0.0 {
        return LcmCertificate::refuted(
            CertMethod::ExactSampled,
            Witness::Condition(NecessaryCondition::PositiveGain),
        );
    }
    let g = MixedRelaxation::of(tf).exp_sum();
    if g.modes().is_empty() {
        return LcmCertificate::certified(CertMethod::ExactSampled, None);
    }
    let horizon = t_max.filter(|t| *t > 0.0).unwrap_or_else(|| g.default_horizon());
    let grid = sample_grid(horizon, n_samples);
    match g.negative_sample(&grid) {
        Some((t, value, scaled)) => {
            LcmCertificate::refuted(CertMethod::ExactSampled, Witness::Time { t, value, scaled })
        }
        None => LcmCertificate::certified(CertMethod::ExactSampled, None),
    }
}

fn integer_exponent(r: f64, gamma: f64) -> Option<i64> {
    let e = r / gamma;
    let k = e.round();
    ((e - k).abs() <= INTEGER_TOL * e.abs().max(1.0) && k.abs() <= MAX_DEGREE as f64).then_some(k as i64)
}

/// Decides `g >= 0` exactly for commensurable real spectra.
///
/// With `x = exp(gamma t)` every term becomes `x^e` for an integer `e`; after
/// multiplying by `x^(-min e)` the condition is a polynomial being nonnegative
/// on `[1, inf)`, settled with Sturm sequences over the rationals.
pub fn check_exact_polynomial(tf: &RationalTF, gamma: f64) -> Result<LcmCertificate> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain("gamma must be positive"));
    }
    if !tf.is_real_spectrum() {
        return Err(Error::domain(
            "polynomial test needs a real spectrum; use check_exact_sampled",
        ));
    }
    if tf.gain() <= 0.0 {
        return Ok(LcmCertificate::refuted(
            CertMethod::ExactPolynomial,
            Witness::Condition(NecessaryCondition::PositiveGain),
        ));
    }
    let exps = |v: &[Complex64]| -> Result<Vec<i64>> {
        v.iter()
            .map(|z| {
                integer_exponent(z.re, gamma).ok_or_else(|| {
                    Error::domain(format!(
                        "{} is not an integer multiple of gamma = {gamma}; use check_exact_sampled",
                        z.re
                    ))
                })
            })
            .collect()
    };
    let pe = exps(tf.poles())?;
    let ze = exps(tf.zeros())?;
    let Some(&lo) = pe.iter().chain(&ze).min() else {
        return Ok(LcmCertificate::certified(CertMethod::ExactPolynomial, None));
    };
    let hi = *pe.iter().chain(&ze).max().unwrap_or(&lo);
    if hi - lo > MAX_DEGREE {
        return Err(Error::domain(format!(
            "exponent span {} exceeds {MAX_DEGREE}; use check_exact_sampled",
            hi - lo
        )));
    }
    let mut coeffs = vec![0i64; (hi - lo + 1) as usize];
    for e in &pe {
        coeffs[(e - lo) as usize] += 1;
    }
    for e in &ze {
        coeffs[(e - lo) as usize] -= 1;
    }
    Ok(match sign_on_ray(&QPoly::from_integers(&coeffs)) {
        Sign::Nonnegative => LcmCertificate::certified(CertMethod::ExactPolynomial, None),
        Sign::NegativeIn { lo: x_lo, hi: x_hi } => LcmCertificate::refuted(
            CertMethod::ExactPolynomial,
            Witness::RootInterval {
                x_lo,
                x_hi,
                t_lo: x_lo.ln() / gamma,
                t_hi: x_hi.ln() / gamma,
            },
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcm::Verdict;

    fn tf(z: &[f64], p: &[f64]) -> RationalTF {
        RationalTF::from_real(1.0, z, p).unwrap()
    }

    #[test]
    fn sampled_examples() {
        assert!(check_exact_sampled(&tf(&[-2.0], &[-1.0]), Some(50.0), 20_000).is_certified());
        let c = check_exact_sampled(&tf(&[-1.0], &[-2.0]), Some(50.0), 20_000);
        assert_eq!(c.verdict, Verdict::Refuted);
        assert!(matches!(c.witness, Some(Witness::Time { t, .. }) if t > 0.0));
        let neg = RationalTF::from_real(-1.0, &[-2.0], &[-1.0]).unwrap();
        assert_eq!(check_exact_sampled(&neg, None, 100).verdict, Verdict::Refuted);
    }

    #[test]
    fn sampled_refutes_pole_sum_violation() {
        let z = [-2.0, -3.0, -5.0, -6.0, -8.0];
        let c = check_exact_sampled(&tf(&z, &[-6.5, -6.5, -1.0, -4.0, -7.0]), None, 20_000);
        assert_eq!(c.verdict, Verdict::Refuted);
        assert!(matches!(c.witness, Some(Witness::Time { t, .. }) if t < 1.0));
    }

    #[test]
    fn sampled_certifies_cancelling_spectrum() {
        let t = tf(&[-1.0, -3.0], &[-3.0, -1.0]);
        assert!(check_exact_sampled(&t, None, 1000).is_certified());
    }

    #[test]
    fn polynomial_examples() {
        assert!(check_exact_polynomial(&tf(&[-2.0], &[-1.0]), 1.0).unwrap().is_certified());
        assert!(check_exact_polynomial(&tf(&[-1.0, -1.0], &[-2.0, 0.0]), 1.0)
            .unwrap()
            .is_certified());
        let c = check_exact_polynomial(&tf(&[-1.0], &[-3.0]), 1.0).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        assert!(matches!(c.witness, Some(Witness::RootInterval { x_lo, .. }) if x_lo == 1.0));
    }

    #[test]
    fn polynomial_rejects_incommensurable() {
        assert!(check_exact_polynomial(&tf(&[-2.5], &[-1.0]), 1.0).is_err());
        assert!(check_exact_polynomial(&tf(&[-2.5], &[-1.0]), 0.5).is_ok());
        let c = RationalTF::new(
            1.0,
            vec![],
            vec![Complex64::new(-1.0, 1.0), Complex64::new(-1.0, -1.0)],
        )
        .unwrap();
        assert!(check_exact_polynomial(&c, 1.0).is_err());
    }

    #[test]
    fn polynomial_interior_sign_change() {
        // exact and sampled deciders agree on both signs
        for (z, p) in [
            (vec![-2.0, -3.0], vec![-1.0, -4.0]),
            (vec![-1.0, -4.0], vec![-2.0, -3.0]),
            (vec![-2.0, -2.0, -2.0], vec![-1.0, -3.0, -3.0]),
        ] {
            let t = tf(&z, &p);
            assert_eq!(
                check_exact_polynomial(&t, 1.0).unwrap().verdict,
                check_exact_sampled(&t, None, 20_000).verdict,
                "z={z:?} p={p:?}"
            );
        }
    }

    #[test]
    fn mixed_relaxation_matches_exponential_sum() {
        let t = tf(&[-2.0, -5.0], &[-1.0, -3.0, -4.0]);
        let g = MixedRelaxation::of(&t);
        let (num, den) = g.to_coeffs().unwrap();
        assert!(num.degree() < den.degree());
        let s = Complex64::new(0.3, 1.7);
        let direct = num.eval_complex(s) / den.eval_complex(s);
        assert!((direct - g.eval(s)).norm() < 1e-12);
        let tt: f64 = 0.7;
        let expected = (-tt).exp() + (-3.0 * tt).exp() + (-4.0 * tt).exp()
            - (-2.0 * tt).exp()
            - (-5.0 * tt).exp();
        assert!((g.time_response(tt) - expected).abs() < 1e-14);
        let impulse = g.to_rational().unwrap().impulse_response(tt).unwrap();
        assert!((impulse - expected).abs() < 1e-9);
    }
}
