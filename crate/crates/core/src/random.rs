//! Seeded random systems for property suites.
//!
//! Real poles are uniform in `[-10, -0.1]`; conjugate pairs have real part
//! in the same range and `|Im| <= 5`. Zeros follow the same law with real
//! parts in `[-10, 5]`. Gains are uniform in `[0.5, 2]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tf::RationalTF;
use crate::Complex64;

/// Environment variable that overrides [`DEFAULT_SEED`].
pub const SEED_VAR: &str = "LCM_SEED";
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const POLE_RE: (f64, f64) = (-10.0, -0.1);
pub const ZERO_RE: (f64, f64) = (-10.0, 5.0);
pub const MAX_IM: f64 = 5.0;
pub const GAIN: (f64, f64) = (0.5, 2.0);

/// `LCM_SEED` if set and parseable, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub struct SystemSampler {
    rng: ChaCha8Rng,
}

impl SystemSampler {
    pub fn new(seed: u64) -> Self {
        SystemSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn from_env() -> Self {
        SystemSampler::new(seed_from_env())
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..=hi)
    }

    fn roots(&mut self, count: usize, re: (f64, f64), allow_complex: bool) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            if allow_complex && count - out.len() >= 2 && self.rng.random_bool(0.5) {
                let a = self.uniform(re.0, re.1);
                let b = self.uniform(0.05, MAX_IM);
                out.push(Complex64::new(a, b));
                out.push(Complex64::new(a, -b));
            } else {
                out.push(Complex64::new(self.uniform(re.0, re.1), 0.0));
            }
        }
        out
    }

    pub fn gain(&mut self) -> f64 {
        self.uniform(GAIN.0, GAIN.1)
    }

    /// `n` stable poles and `m` zeros.
    pub fn system(&mut self, n: usize, m: usize, allow_complex: bool) -> RationalTF {
        let poles = self.roots(n, POLE_RE, allow_complex);
        let zeros = self.roots(m, ZERO_RE, allow_complex);
        let gain = self.gain();
        RationalTF::new(gain, zeros, poles).expect("sampled spectrum is conjugate closed")
    }

    pub fn real_system(&mut self, n: usize, m: usize) -> RationalTF {
        self.system(n, m, false)
    }

    /// Real poles `-gamma k` and zeros `-gamma j` with integer `k, j` in
    /// `1..=max_exp`, so the spectrum is commensurable with rate `gamma`.
    pub fn commensurable_system(&mut self, n: usize, m: usize, gamma: f64, max_exp: u32) -> RationalTF {
        let mut pick = |count: usize| -> Vec<f64> {
            (0..count)
                .map(|_| -gamma * self.rng.random_range(1..=max_exp) as f64)
                .collect()
        };
        let poles = pick(n);
        let zeros = pick(m);
        RationalTF::from_real(1.0, &zeros, &poles).expect("real spectrum")
    }

    /// A random nonnegative vector of length `n` with entries in `[0, hi]`.
    pub fn vector(&mut self, n: usize, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(0.0, hi)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = SystemSampler::new(7).system(4, 2, true);
        let b = SystemSampler::new(7).system(4, 2, true);
        assert_eq!(a, b);
    }

    #[test]
    fn samples_respect_ranges() {
        let mut s = SystemSampler::new(1);
        for _ in 0..200 {
            let tf = s.system(5, 3, true);
            assert_eq!(tf.order(), 5);
            assert!(tf.poles().iter().all(|p| p.re <= -0.1 && p.re >= -10.0 && p.im.abs() <= MAX_IM));
            assert!(tf.zeros().iter().all(|z| z.re <= 5.0 && z.re >= -10.0));
            assert!(tf.gain() >= GAIN.0 && tf.gain() <= GAIN.1);
        }
        let c = s.commensurable_system(3, 2, 1.0, 12);
        assert!(c.poles().iter().all(|p| p.re.fract() == 0.0 && p.re <= -1.0 && p.re >= -12.0));
    }
}
