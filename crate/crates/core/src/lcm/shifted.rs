//! Majorization certificates on the shifted spectrum `(p + delta)^mu`.

use std::f64::consts::FRAC_PI_2;

use num::complex::Complex64;

use super::{CertMethod, LcmCertificate, ShiftParams, Witness};
use crate::error::{Error, Result};
use crate::majorization::{first_majorization_failure, prefix_sums, sort_desc, PREFIX_SLACK};
use crate::tf::RationalTF;

/// Bound on shifted angles that keeps `cos(k theta) >= 0` for `k < mu`.
pub fn angle_bound(mu: u32) -> f64 {
    if mu <= 1 {
        FRAC_PI_2
    } else {
        FRAC_PI_2 / (mu - 1) as f64
    }
}

fn min_real_part(tf: &RationalTF) -> f64 {
    tf.zeros()
        .iter()
        .chain(tf.poles())
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min)
}

/// `delta = 1 + max(0, -min Re)`, raised until every complex entry satisfies the
/// angle bound for `mu` (with a 1% margin).
pub fn auto_delta(tf: &RationalTF, mu: u32) -> f64 {
    let min_re = min_real_part(tf);
    let mut delta = 1.0 + if min_re.is_finite() { (-min_re).max(0.0) } else { 0.0 };
    if mu > 1 {
        let tan = (0.99 * angle_bound(mu)).tan();
        for z in tf.zeros().iter().chain(tf.poles()).filter(|z| z.im != 0.0) {
            delta = delta.max(z.im.abs() / tan - z.re);
        }
    }
    delta
}

/// The `(w, v, theta, phi)` transform of a spectrum.
///
/// Poles are reordered so that the `n_r` real poles come first, followed by
/// the complex poles with conjugates adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedSpectrum {
    pub mu: u32,
    pub delta: f64,
    pub n_r: usize,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
}

impl ShiftedSpectrum {
    pub fn n_poles(&self) -> usize {
        self.theta.len()
    }
}

fn real_first(poles: &[Complex64]) -> (Vec<Complex64>, usize) {
    let mut real: Vec<Complex64> = poles.iter().copied().filter(|p| p.im == 0.0).collect();
    let mut complex: Vec<Complex64> = poles.iter().copied().filter(|p| p.im != 0.0).collect();
    real.sort_by(|a, b| b.re.total_cmp(&a.re));
    complex.sort_by(|a, b| {
        b.re.total_cmp(&a.re)
            .then(a.im.abs().total_cmp(&b.im.abs()))
            .then(b.im.total_cmp(&a.im))
    });
    let n_r = real.len();
    real.extend(complex);
    (real, n_r)
}

pub fn build_shifted_spectrum(tf: &RationalTF, mu: u32, delta: f64) -> Result<ShiftedSpectrum> {
    if mu == 0 {
        return Err(Error::domain("mu must be a positive integer"));
    }
    let min_re = min_real_part(tf);
    if !(delta > -min_re) {
        return Err(Error::domain(format!(
            "delta = {delta} must exceed -min Re = {}",
            -min_re
        )));
    }
    let (poles, n_r) = real_first(tf.poles());
    let n = poles.len();
    let m = tf.zeros().len();
    let mu_f = mu as f64;
    let mut w = vec![0.0; n + m];
    let mut v = vec![0.0; n + m];
    let mut theta = vec![0.0; n];
    for (i, p) in poles.iter().enumerate() {
        let s = p + delta;
        if i < n_r {
            w[i] = s.re.powf(mu_f);
        } else {
            theta[i] = s.arg();
            v[i] = s.norm().powf(mu_f);
        }
    }
    let mut phi = vec![0.0; m];
    for (j, z) in tf.zeros().iter().enumerate() {
        let s = z + delta;
        phi[j] = if z.im == 0.0 { 0.0 } else { s.arg() };
        v[n + j] = s.norm().powf(mu_f);
    }
    Ok(ShiftedSpectrum {
        mu,
        delta,
        n_r,
        theta,
        phi,
        w,
        v,
    })
}

/// Both sides of the order-`k` power-sum inequality
/// `sum w^(k/mu) + sum_{i<=n} v^(k/mu) cos(k theta) >= sum_{i>n} v^(k/mu) cos(k phi)`.
pub fn power_sum_sides(spec: &ShiftedSpectrum, k: u32) -> (f64, f64) {
    let e = k as f64 / spec.mu as f64;
    let kf = k as f64;
    let n = spec.n_poles();
    let lhs: f64 = spec.w.iter().map(|w| w.powf(e)).sum::<f64>()
        + (0..n)
            .map(|i| spec.v[i].powf(e) * (spec.theta[i] * kf).cos())
            .sum::<f64>();
    let rhs: f64 = spec
        .phi
        .iter()
        .enumerate()
        .map(|(j, phi)| spec.v[n + j].powf(e) * (phi * kf).cos())
        .sum();
    (lhs, rhs)
}

fn majorization_witness(x: &[f64], y: &[f64]) -> Result<Option<Witness>> {
    Ok(first_majorization_failure(x, y, 0.0)?.map(|index| Witness::Prefix {
        index,
        lhs: prefix_sums(&sort_desc(x))[index],
        rhs: prefix_sums(&sort_desc(y))[index],
    }))
}

/// Sufficient test for real spectra with `m = n`:
/// `(p + delta)^mu` weakly majorizes `(z + delta)^mu` and the power sums of
/// order `1..mu-1` dominate.
///
/// `delta = -min(p, z)` is accepted: shifted values then lie in `[0, inf)`,
/// where `x^(k/mu)` is still convex and increasing for `k >= mu`.
pub fn certify_theorem1(tf: &RationalTF, mu: u32, delta: f64) -> Result<LcmCertificate> {
    if !tf.is_real_spectrum() {
        return Err(Error::domain(
            "theorem1 needs real zeros and poles; use certify_corollary1",
        ));
    }
    if tf.zeros().len() != tf.order() {
        return Err(Error::domain(
            "theorem1 needs as many zeros as poles; use certify_corollary1",
        ));
    }
    if tf.gain() <= 0.0 {
        return Err(Error::domain("theorem1 needs K > 0"));
    }
    if mu == 0 {
        return Err(Error::domain("mu must be a positive integer"));
    }
    let min_re = min_real_part(tf);
    if delta < -min_re - PREFIX_SLACK {
        return Err(Error::domain(format!(
            "delta = {delta} must be at least -min = {}",
            -min_re
        )));
    }
    let params = Some(ShiftParams { mu, delta });
    let shift = |v: &[Complex64]| -> Vec<f64> { v.iter().map(|z| (z.re + delta).max(0.0)).collect() };
    let ps = shift(tf.poles());
    let zs = shift(tf.zeros());
    let pow = |v: &[f64], k: u32| -> Vec<f64> { v.iter().map(|x| x.powi(k as i32)).collect() };
    if let Some(w) = majorization_witness(&pow(&ps, mu), &pow(&zs, mu))? {
        return Ok(LcmCertificate::inconclusive(CertMethod::Theorem1, params, Some(w)));
    }
    for k in 1..mu {
        let lhs: f64 = pow(&ps, k).iter().sum();
        let rhs: f64 = pow(&zs, k).iter().sum();
        if lhs < rhs - PREFIX_SLACK {
            return Ok(LcmCertificate::inconclusive(
                CertMethod::Theorem1,
                params,
                Some(Witness::PowerSum { k, lhs, rhs }),
            ));
        }
    }
    Ok(LcmCertificate::certified(CertMethod::Theorem1, params))
}

/// Sufficient test for general spectra with `m <= n`: `w` weakly majorizes `v`
/// and the power-sum inequalities of order `1..mu-1` hold.
pub fn certify_corollary1(tf: &RationalTF, mu: u32, delta: f64) -> Result<LcmCertificate> {
    if tf.zeros().len() > tf.order() {
        return Err(Error::domain("corollary1 needs m <= n"));
    }
    if tf.gain() <= 0.0 {
        return Err(Error::domain("corollary1 needs K > 0"));
    }
    let spec = build_shifted_spectrum(tf, mu, delta)?;
    let params = Some(ShiftParams { mu, delta });
    if let Some(w) = majorization_witness(&spec.w, &spec.v)? {
        return Ok(LcmCertificate::inconclusive(CertMethod::Corollary1, params, Some(w)));
    }
    for k in 1..mu {
        let (lhs, rhs) = power_sum_sides(&spec, k);
        if lhs < rhs - PREFIX_SLACK {
            return Ok(LcmCertificate::inconclusive(
                CertMethod::Corollary1,
                params,
                Some(Witness::PowerSum { k, lhs, rhs }),
            ));
        }
    }
    Ok(LcmCertificate::certified(CertMethod::Corollary1, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcm::Verdict;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shifted_real_spectrum() {
        let tf = RationalTF::from_real(1.0, &[-1.5, -2.5], &[-1.0, -2.0]).unwrap();
        let s = build_shifted_spectrum(&tf, 1, 3.0).unwrap();
        assert_eq!(s.n_r, 2);
        assert_eq!(s.w, vec![2.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.v, vec![0.0, 0.0, 1.5, 0.5]);
        assert!(s.theta.iter().chain(&s.phi).all(|&a| a == 0.0));
    }

    #[test]
    fn shifted_complex_pair() {
        let tf = RationalTF::new(1.0, vec![], vec![c(-1.0, 1.0), c(-1.0, -1.0)]).unwrap();
        let s = build_shifted_spectrum(&tf, 2, 2.0).unwrap();
        assert_eq!(s.n_r, 0);
        assert_eq!(s.w, vec![0.0, 0.0]);
        assert!(s.v.iter().all(|v| (v - 2.0).abs() < 1e-12));
        assert!((s.theta[0] - FRAC_PI_4).abs() < 1e-12);
        assert!((s.theta[1] + FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn shift_must_be_strict() {
        let tf = RationalTF::from_real(1.0, &[], &[-3.0]).unwrap();
        assert!(build_shifted_spectrum(&tf, 1, 3.0).is_err());
        assert!(build_shifted_spectrum(&tf, 1, 3.0 + 1e-9).is_ok());
    }

    #[test]
    fn theorem1_example_pair() {
        let tf = RationalTF::from_real(1.0, &[-1.5, -2.0], &[-1.0, -2.0]).unwrap();
        let cert = certify_theorem1(&tf, 1, 3.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
    }

    #[test]
    fn theorem1_rejects_complex_and_unequal_degree() {
        let tf = RationalTF::new(1.0, vec![], vec![c(-1.0, 1.0), c(-1.0, -1.0)]).unwrap();
        assert!(certify_theorem1(&tf, 1, 3.0).is_err());
        let tf = RationalTF::from_real(1.0, &[-2.0], &[-1.0, -3.0]).unwrap();
        assert!(certify_theorem1(&tf, 1, 4.0).is_err());
    }

    #[test]
    fn theorem1_accepts_boundary_shift() {
        // delta = -min: the slowest zero shifts to exactly 0
        let tf = RationalTF::from_real(1.0, &[-35.0], &[-5.0]).unwrap();
        assert!(certify_theorem1(&tf, 2, 35.0).unwrap().is_certified());
        assert!(certify_theorem1(&tf, 2, 34.0).is_err());
    }

    #[test]
    fn example_one_point_depends_on_shift() {
        // p1 = p2 = -5.9 lies inside p1 + p2 >= -12
        let z = [-2.0, -3.0, -5.0, -6.0, -8.0];
        let tf = RationalTF::from_real(1.0, &z, &[-5.9, -5.9, -1.0, -4.0, -7.0]).unwrap();
        let auto = auto_delta(&tf, 3);
        assert_eq!(auto, 9.0);
        assert!(certify_theorem1(&tf, 3, auto).unwrap().is_certified());
        // at delta = 13 the third cubed prefix fails: 1728+729+357.9 < 1331+1000+512
        let at13 = certify_theorem1(&tf, 3, 13.0).unwrap();
        assert_eq!(at13.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn corollary1_trivial_and_equivalence() {
        let tf = RationalTF::from_real(1.0, &[], &[-1.0]).unwrap();
        assert!(certify_corollary1(&tf, 2, 1.5).unwrap().is_certified());
        let tf = RationalTF::from_real(1.0, &[-1.5, -2.0], &[-1.0, -2.0]).unwrap();
        for mu in 1..=3 {
            assert_eq!(
                certify_corollary1(&tf, mu, 3.0).unwrap().verdict,
                certify_theorem1(&tf, mu, 3.0).unwrap().verdict
            );
        }
    }

    #[test]
    fn corollary1_example_two_complex_pair() {
        // zeros {-10,-15,-30}, poles {-5, -24 +/- 3i}, delta = 35:
        // mu = 3 certifies (hand-checked prefix and power sums)
        let tf = RationalTF::new(
            1.0,
            vec![c(-10.0, 0.0), c(-15.0, 0.0), c(-30.0, 0.0)],
            vec![c(-5.0, 0.0), c(-24.0, 3.0), c(-24.0, -3.0)],
        )
        .unwrap();
        assert!(certify_corollary1(&tf, 3, 35.0).unwrap().is_certified());
        assert!(!certify_corollary1(&tf, 1, 35.0).unwrap().is_certified());
        assert!(!certify_corollary1(&tf, 2, 35.0).unwrap().is_certified());
    }

    #[test]
    fn auto_delta_respects_angle_bound() {
        let tf = RationalTF::new(1.0, vec![], vec![c(-1.0, 4.0), c(-1.0, -4.0)]).unwrap();
        for mu in 1..=4 {
            let d = auto_delta(&tf, mu);
            let s = build_shifted_spectrum(&tf, mu, d).unwrap();
            assert!(s.theta.iter().all(|t| t.abs() < angle_bound(mu)));
        }
    }
}
