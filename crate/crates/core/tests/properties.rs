//! Randomized properties of the certificates, the deciders and the
//! majorization primitives. Seeds come from `LCM_SEED`.

use lcm_core::lcm::{
    auto_delta, certify_corollary1, certify_theorem1, check_exact_sampled, check_necessary, Verdict,
};
use lcm_core::majorization::{weakly_majorizes, weakly_majorizes_tol};
use lcm_core::positivity::{external_positivity, lcm_implies_expos_check, ExPos};
use lcm_core::random::{seed_from_env, SystemSampler};
use lcm_core::{Complex64, RationalTF};
use proptest::prelude::*;
use rand::Rng;

const ORACLE_T_MAX: f64 = 50.0;
const ORACLE_SAMPLES: usize = 20_000;

fn sampler(salt: u64) -> SystemSampler {
    SystemSampler::new(seed_from_env() ^ salt)
}

/// Half of the draws pair each zero with a pole to its right, which is LCM by
/// construction; the rest are unconstrained stable systems.
fn mixed_system(s: &mut SystemSampler, i: usize) -> RationalTF {
    let n = s.rng().random_range(1..=4);
    let m = s.rng().random_range(0..=n);
    if i.is_multiple_of(2) {
        let poles: Vec<f64> = (0..n).map(|_| s.uniform(-10.0, -0.1)).collect();
        let zeros: Vec<f64> = poles[..m].iter().map(|p| p - s.uniform(0.05, 5.0)).collect();
        RationalTF::from_real(s.gain(), &zeros, &poles).unwrap()
    } else {
        s.system(n, m, true)
    }
}

#[test]
fn partial_fractions_reconstruct_the_transfer_function() {
    let mut s = sampler(1);
    for _ in 0..500 {
        let n = s.rng().random_range(1..=5);
        let m = s.rng().random_range(0..=n);
        let tf = s.system(n, m, true);
        let pfe = tf.partial_fractions().unwrap();
        for w in [0.3, 1.7, 11.0] {
            let point = Complex64::new(0.5, w);
            let exact = tf.eval(point);
            let err = (pfe.eval(point) - exact).norm();
            assert!(err <= 1e-7 * (1.0 + exact.norm()), "{tf:?} at {point}: {err}");
        }
    }
}

proptest! {
    #[test]
    fn weak_majorization_is_transitive(
        base in prop::collection::vec(0.0f64..10.0, 1..8),
        lift in prop::collection::vec(0.0f64..3.0, 8),
        lift2 in prop::collection::vec(0.0f64..3.0, 8),
    ) {
        let z = base.clone();
        let y: Vec<f64> = z.iter().zip(&lift).map(|(a, b)| a + b).collect();
        let x: Vec<f64> = y.iter().zip(&lift2).map(|(a, b)| a + b).collect();
        prop_assert!(weakly_majorizes(&x, &y).unwrap());
        prop_assert!(weakly_majorizes(&y, &z).unwrap());
        prop_assert!(weakly_majorizes(&x, &z).unwrap());
    }

    #[test]
    fn weak_majorization_is_reflexive(x in prop::collection::vec(-5.0f64..5.0, 1..8)) {
        prop_assert!(weakly_majorizes(&x, &x).unwrap());
    }

    #[test]
    fn weak_majorization_ignores_order(x in prop::collection::vec(0.0f64..5.0, 2..8), y in prop::collection::vec(0.0f64..5.0, 2..8)) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        let mut xr = x.to_vec();
        xr.reverse();
        prop_assert_eq!(weakly_majorizes(x, y).unwrap(), weakly_majorizes(&xr, y).unwrap());
    }
}

#[test]
fn transitivity_holds_on_arbitrary_triples() {
    let mut s = sampler(2);
    let mut chains = 0;
    for _ in 0..5000 {
        let n = s.rng().random_range(1..=4);
        let x = s.vector(n, 3.0);
        let y = s.vector(n, 3.0);
        let z = s.vector(n, 3.0);
        if weakly_majorizes(&x, &y).unwrap() && weakly_majorizes(&y, &z).unwrap() {
            chains += 1;
            assert!(weakly_majorizes_tol(&x, &z, 1e-12).unwrap(), "{x:?} {y:?} {z:?}");
        }
    }
    assert!(chains > 100, "only {chains} chains drawn");
}

#[test]
fn larger_mu_certifies_whatever_smaller_mu_does() {
    let mut s = sampler(3);
    let mut certified = 0;
    for i in 0..500 {
        let tf = mixed_system(&mut s, i);
        if !tf.is_real_spectrum() {
            continue;
        }
        let delta = auto_delta(&tf, 1);
        for mu1 in 1..4u32 {
            if !certify_theorem1(&tf, mu1, delta).is_ok_and(|c| c.is_certified()) {
                continue;
            }
            certified += 1;
            for mu2 in mu1 + 1..=4 {
                let c = certify_theorem1(&tf, mu2, delta).unwrap();
                assert!(c.is_certified(), "{tf:?}: mu {mu1} certified, mu {mu2} gave {c:?}");
            }
        }
    }
    assert!(certified > 50, "only {certified} certificates");
}

#[test]
fn certificates_agree_with_the_sampled_decider() {
    let mut s = sampler(4);
    let mut certified = 0;
    for i in 0..500 {
        let tf = mixed_system(&mut s, i);
        let oracle = check_exact_sampled(&tf, Some(ORACLE_T_MAX), ORACLE_SAMPLES);
        for mu in 1..=3 {
            let delta = auto_delta(&tf, mu);
            let certs = [certify_theorem1(&tf, mu, delta), certify_corollary1(&tf, mu, delta)];
            for c in certs.into_iter().flatten() {
                if c.is_certified() {
                    certified += 1;
                    assert_ne!(oracle.verdict, Verdict::Refuted, "{tf:?} {c:?} {oracle:?}");
                }
            }
        }
    }
    assert!(certified > 100, "only {certified} certificates");
}

#[test]
fn certified_systems_pass_the_necessary_conditions() {
    let mut s = sampler(5);
    for i in 0..500 {
        let tf = mixed_system(&mut s, i);
        let necessary = check_necessary(&tf);
        let certified = (1..=3).any(|mu| {
            certify_corollary1(&tf, mu, auto_delta(&tf, mu)).is_ok_and(|c| c.is_certified())
        }) || check_exact_sampled(&tf, None, ORACLE_SAMPLES).is_certified();
        if necessary.verdict == Verdict::Refuted {
            assert!(!certified, "{tf:?} refuted by {necessary:?} yet certified");
        }
    }
}

#[test]
fn corollary_and_theorem_agree_on_biproper_real_spectra() {
    let mut s = sampler(6);
    let mut checked = 0;
    while checked < 200 {
        let tf = mixed_system(&mut s, checked);
        if !tf.is_real_spectrum() || tf.zeros().len() != tf.poles().len() {
            continue;
        }
        checked += 1;
        for mu in 1..=3 {
            // the corollary asks for a strict shift, so compare just above the threshold
            let delta = auto_delta(&tf, mu) + 0.5;
            let t = certify_theorem1(&tf, mu, delta).unwrap();
            let c = certify_corollary1(&tf, mu, delta).unwrap();
            assert_eq!(t.verdict, c.verdict, "{tf:?} mu {mu}: {t:?} vs {c:?}");
        }
    }
}

#[test]
fn lcm_systems_are_externally_positive() {
    let mut s = sampler(7);
    let mut positive = 0;
    for i in 0..500 {
        let tf = mixed_system(&mut s, i);
        assert!(lcm_implies_expos_check(&tf), "{tf:?}");
        if external_positivity(&tf).verdict != ExPos::NotPositive {
            positive += 1;
        }
    }
    assert!(positive > 100, "only {positive} positive systems");
}
