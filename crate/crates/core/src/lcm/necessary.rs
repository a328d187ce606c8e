use super::{CertMethod, LcmCertificate, NecessaryCondition, Witness};
use crate::tf::RationalTF;

const SLACK: f64 = 1e-12;

/// Refutes LCM when `K <= 0` or one of conditions (a)-(c) fails.
pub fn check_necessary(tf: &RationalTF) -> LcmCertificate {
    let fail = |c| LcmCertificate::refuted(CertMethod::Necessary, Witness::Condition(c));
    let n = tf.order();
    let m = tf.zeros().len();
    if tf.gain() <= 0.0 {
        return fail(NecessaryCondition::PositiveGain);
    }
    if n < m {
        return fail(NecessaryCondition::Properness);
    }
    if m > 0 {
        let max_zero = tf.zeros().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        if tf.pole_abscissa() < max_zero - SLACK {
            return fail(NecessaryCondition::DominantPole);
        }
    }
    if n == m {
        let sp: f64 = tf.poles().iter().map(|p| p.re).sum();
        let sz: f64 = tf.zeros().iter().map(|z| z.re).sum();
        if sp < sz - SLACK {
            return fail(NecessaryCondition::PoleSum);
        }
    }
    LcmCertificate::inconclusive(CertMethod::Necessary, None, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcm::Verdict;
    use crate::{Complex64, Polynomial};

    #[test]
    fn refutes_counterexample_by_dominant_pole() {
        let tf = RationalTF::new(
            1.0,
            vec![Complex64::new(-0.5, 1.0), Complex64::new(-0.5, -1.0)],
            [-0.8, -1.0, -1.2].iter().map(|&p| Complex64::new(p, 0.0)).collect(),
        )
        .unwrap();
        let c = check_necessary(&tf);
        assert_eq!(c.witness, Some(Witness::Condition(NecessaryCondition::DominantPole)));
    }

    #[test]
    fn negative_gain_and_pole_sum() {
        let tf = RationalTF::from_real(-1.0, &[-2.0], &[-1.0]).unwrap();
        assert_eq!(
            check_necessary(&tf).witness,
            Some(Witness::Condition(NecessaryCondition::PositiveGain))
        );
        // p1 + p2 = -13 < -12
        let z = [-2.0, -3.0, -5.0, -6.0, -8.0];
        let tf = RationalTF::from_real(1.0, &z, &[-6.5, -6.5, -1.0, -4.0, -7.0]).unwrap();
        assert_eq!(
            check_necessary(&tf).witness,
            Some(Witness::Condition(NecessaryCondition::PoleSum))
        );
    }

    #[test]
    fn passes_lead_and_unstable_plant() {
        let tf = RationalTF::from_real(1.0, &[-2.0], &[-1.0]).unwrap();
        assert_eq!(check_necessary(&tf).verdict, Verdict::Inconclusive);
        let plant = RationalTF::from_coeffs(
            &Polynomial::new(vec![1.0, 2.0]),
            &Polynomial::new(vec![1.0, 0.8, -0.2]),
        )
        .unwrap();
        assert_eq!(check_necessary(&plant).verdict, Verdict::Inconclusive);
    }
}
