//! Certification of logarithmic complete monotonicity.
//!
//! `H(s) = K prod (s - z_i) / prod (s - p_i)` is LCM exactly when `K > 0` and
//! `sum exp(p_i t) >= sum exp(z_i t)` for all `t >= 0`. This module offers the
//! cheap necessary conditions, two exact deciders for that inequality (dense
//! sampling and, for commensurable real spectra, a polynomial sign test) and the
//! majorization-based sufficient certificates.

mod exact;
mod necessary;
mod shifted;
mod sturm;

pub use exact::{check_exact_polynomial, check_exact_sampled, MixedRelaxation};
pub use necessary::check_necessary;
pub use shifted::{
    angle_bound, auto_delta, build_shifted_spectrum, certify_corollary1, certify_theorem1,
    power_sum_sides, ShiftedSpectrum,
};

use crate::response::DEFAULT_SAMPLES;
use crate::tf::RationalTF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Which test produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertMethod {
    Necessary,
    ExactSampled,
    ExactPolynomial,
    Theorem1,
    Corollary1,
}

impl CertMethod {
    pub fn label(self) -> &'static str {
        match self {
            CertMethod::Necessary => "necessary",
            CertMethod::ExactSampled => "sampled",
            CertMethod::ExactPolynomial => "polynomial",
            CertMethod::Theorem1 => "theorem1",
            CertMethod::Corollary1 => "corollary1",
        }
    }
}

/// Power `mu` and shift `delta` of a majorization certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftParams {
    pub mu: u32,
    pub delta: f64,
}

/// The necessary conditions for LCM, labelled as in the literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecessaryCondition {
    /// `K > 0`.
    PositiveGain,
    /// (a) `n >= m`.
    Properness,
    /// (b) `max Re(p) >= max Re(z)`.
    DominantPole,
    /// (c) `sum p >= sum z` when `n = m`.
    PoleSum,
}

impl NecessaryCondition {
    pub fn label(self) -> &'static str {
        match self {
            NecessaryCondition::PositiveGain => "gain (K > 0)",
            NecessaryCondition::Properness => "a (n >= m)",
            NecessaryCondition::DominantPole => "b (max Re p >= max Re z)",
            NecessaryCondition::PoleSum => "c (sum p >= sum z)",
        }
    }
}

/// Evidence attached to a non-certified outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Condition(NecessaryCondition),
    /// A time where the exponential-sum inequality fails. `scaled` is the value
    /// divided by the dominant exponential, which carries the same sign.
    Time { t: f64, value: f64, scaled: f64 },
    /// An interval of `x = exp(gamma t)` containing a sign change of the
    /// polynomial form, with the matching time interval.
    RootInterval { x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64 },
    /// Failed weak-majorization prefix (0-based index).
    Prefix { index: usize, lhs: f64, rhs: f64 },
    /// Failed power-sum inequality of order `k`.
    PowerSum { k: u32, lhs: f64, rhs: f64 },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Condition(c) => write!(f, "condition {}", c.label()),
            Witness::Time { t, value, scaled } => {
                write!(f, "t* = {t:e}, value {value:e} (scaled {scaled:e})")
            }
            Witness::RootInterval { x_lo, x_hi, t_lo, t_hi } => write!(
                f,
                "sign change for x in [{x_lo:e}, {x_hi:e}] (t in [{t_lo:e}, {t_hi:e}])"
            ),
            Witness::Prefix { index, lhs, rhs } => {
                write!(f, "majorization prefix {} : {lhs:e} < {rhs:e}", index + 1)
            }
            Witness::PowerSum { k, lhs, rhs } => write!(f, "power sum k={k} : {lhs:e} < {rhs:e}"),
        }
    }
}

/// Outcome of one certification attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct LcmCertificate {
    pub verdict: Verdict,
    pub method: CertMethod,
    pub params: Option<ShiftParams>,
    pub witness: Option<Witness>,
}

impl LcmCertificate {
    pub(crate) fn certified(method: CertMethod, params: Option<ShiftParams>) -> Self {
        LcmCertificate {
            verdict: Verdict::Certified,
            method,
            params,
            witness: None,
        }
    }

    pub(crate) fn refuted(method: CertMethod, witness: Witness) -> Self {
        LcmCertificate {
            verdict: Verdict::Refuted,
            method,
            params: None,
            witness: Some(witness),
        }
    }

    pub(crate) fn inconclusive(
        method: CertMethod,
        params: Option<ShiftParams>,
        witness: Option<Witness>,
    ) -> Self {
        LcmCertificate {
            verdict: Verdict::Inconclusive,
            method,
            params,
            witness,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

/// One step of a certification pipeline. `delta: None` selects [`auto_delta`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Theorem1 { mu: u32, delta: Option<f64> },
    Corollary1 { mu: u32, delta: Option<f64> },
    ExactPolynomial { gamma: f64 },
    ExactSampled { t_max: Option<f64>, samples: usize },
}

/// Sufficient certificates for `mu = 1..=3`, then the sampled decider.
pub fn default_strategy() -> Vec<Strategy> {
    let mut s: Vec<Strategy> = (1..=3)
        .map(|mu| Strategy::Theorem1 { mu, delta: None })
        .collect();
    s.extend((1..=3).map(|mu| Strategy::Corollary1 { mu, delta: None }));
    s.push(Strategy::ExactSampled {
        t_max: None,
        samples: DEFAULT_SAMPLES,
    });
    s
}

fn run_strategy(tf: &RationalTF, step: Strategy) -> crate::Result<LcmCertificate> {
    match step {
        Strategy::Theorem1 { mu, delta } => {
            let d = delta.unwrap_or_else(|| auto_delta(tf, mu));
            certify_theorem1(tf, mu, d)
        }
        Strategy::Corollary1 { mu, delta } => {
            let d = delta.unwrap_or_else(|| auto_delta(tf, mu));
            certify_corollary1(tf, mu, d)
        }
        Strategy::ExactPolynomial { gamma } => check_exact_polynomial(tf, gamma),
        Strategy::ExactSampled { t_max, samples } => Ok(check_exact_sampled(tf, t_max, samples)),
    }
}

/// Necessary conditions first, then each strategy in order, then the sampled
/// decider. Returns the first Certified or Refuted outcome.
///
/// Strategies that do not apply to `tf` (complex spectrum for theorem1,
/// non-commensurable spectrum for the polynomial test) are skipped.
pub fn certify(tf: &RationalTF, strategy: &[Strategy]) -> LcmCertificate {
    let necessary = check_necessary(tf);
    if necessary.verdict == Verdict::Refuted {
        return necessary;
    }
    for &step in strategy {
        if let Ok(cert) = run_strategy(tf, step) {
            if cert.verdict != Verdict::Inconclusive {
                return cert;
            }
        }
    }
    if strategy
        .iter()
        .any(|s| matches!(s, Strategy::ExactSampled { .. }))
    {
        return LcmCertificate::inconclusive(CertMethod::ExactSampled, None, None);
    }
    check_exact_sampled(tf, None, DEFAULT_SAMPLES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;

    fn prop7_counterexample() -> RationalTF {
        RationalTF::new(
            1.0,
            vec![Complex64::new(-0.5, 1.0), Complex64::new(-0.5, -1.0)],
            vec![
                Complex64::new(-0.8, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(-1.2, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pipeline_refutes_counterexample_at_necessary_stage() {
        let c = certify(&prop7_counterexample(), &default_strategy());
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.method, CertMethod::Necessary);
        assert_eq!(c.witness, Some(Witness::Condition(NecessaryCondition::DominantPole)));
    }

    #[test]
    fn pipeline_certifies_lead_via_theorem1() {
        let tf = RationalTF::from_real(1.0, &[-2.0], &[-1.0]).unwrap();
        let c = certify(&tf, &default_strategy());
        assert_eq!(c.verdict, Verdict::Certified);
        assert_eq!(c.method, CertMethod::Theorem1);
        assert_eq!(c.params.unwrap().mu, 1);
    }

    #[test]
    fn pipeline_refutes_improper() {
        let tf = RationalTF::from_real(1.0, &[-1.0, -2.0], &[-3.0]).unwrap();
        let c = certify(&tf, &default_strategy());
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.witness, Some(Witness::Condition(NecessaryCondition::Properness)));
    }

    #[test]
    fn pipeline_falls_back_to_sampling() {
        // g(t) = (1 - exp(-t))^2, decided by the sampler with no strategies given
        let tf = RationalTF::from_real(1.0, &[-1.0, -1.0], &[-2.0, 0.0]).unwrap();
        let c = certify(&tf, &[]);
        assert_eq!(c.method, CertMethod::ExactSampled);
        assert_eq!(c.verdict, Verdict::Certified);
    }
}
