//! Rational transfer functions in gain/zero/pole form.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{is_real, Polynomial, REAL_TOL};

/// `H(s) = K prod (s - z_i) / prod (s - p_i)`.
///
/// Non-real zeros and poles come in conjugate pairs. Near-real entries
/// (imaginary part within `1e-9` relative) are snapped onto the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTF {
    gain: f64,
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
}

fn snap(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    for r in &mut roots {
        if is_real(*r) {
            r.im = 0.0;
        }
    }
    roots
}

/// True when every non-real entry has a distinct conjugate partner.
pub fn is_conjugate_closed(roots: &[Complex64]) -> bool {
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] || roots[i].im == 0.0 {
            continue;
        }
        used[i] = true;
        let target = roots[i].conj();
        let tol = REAL_TOL * target.norm().max(1.0);
        let partner = (0..roots.len())
            .filter(|&j| !used[j] && roots[j].im != 0.0)
            .map(|j| (j, (roots[j] - target).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

impl RationalTF {
    pub fn new(gain: f64, zeros: Vec<Complex64>, poles: Vec<Complex64>) -> Result<Self> {
        if gain == 0.0 || !gain.is_finite() {
            return Err(Error::domain("gain must be finite and nonzero"));
        }
        if zeros.iter().chain(&poles).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("zeros and poles must be finite"));
        }
        let zeros = snap(zeros);
        let poles = snap(poles);
        if !is_conjugate_closed(&zeros) {
            return Err(Error::domain("zeros are not closed under conjugation"));
        }
        if !is_conjugate_closed(&poles) {
            return Err(Error::domain("poles are not closed under conjugation"));
        }
        Ok(RationalTF { gain, zeros, poles })
    }

    pub fn from_real(gain: f64, zeros: &[f64], poles: &[f64]) -> Result<Self> {
        let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        RationalTF::new(gain, c(zeros), c(poles))
    }

    /// Builds the zero/pole form from numerator and denominator coefficients.
    pub fn from_coeffs(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::domain("numerator and denominator must be nonzero"));
        }
        RationalTF::new(num.leading() / den.leading(), num.roots(), den.roots())
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// Number of poles `n`.
    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn is_real_spectrum(&self) -> bool {
        self.zeros.iter().chain(&self.poles).all(|z| z.im == 0.0)
    }

    /// `max Re(p_i)`, or `-inf` without poles.
    pub fn pole_abscissa(&self) -> f64 {
        self.poles.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Numerator with `b_{n-m} = K` and monic denominator.
    pub fn to_coeffs(&self) -> Result<(Polynomial, Polynomial)> {
        let num = Polynomial::from_roots(&self.zeros)?.scale(self.gain);
        let den = Polynomial::from_roots(&self.poles)?;
        Ok((num, den))
    }

    /// Numerator polynomial `B(s)`.
    pub fn numerator(&self) -> Polynomial {
        Polynomial::from_roots(&self.zeros)
            .expect("conjugate closure is a type invariant")
            .scale(self.gain)
    }

    /// Monic denominator polynomial `A(s)`.
    pub fn denominator(&self) -> Polynomial {
        Polynomial::from_roots(&self.poles).expect("conjugate closure is a type invariant")
    }

    pub fn numerator_at(&self, s: Complex64) -> Complex64 {
        self.zeros.iter().fold(Complex64::new(self.gain, 0.0), |acc, &z| acc * (s - z))
    }

    pub fn denominator_at(&self, s: Complex64) -> Complex64 {
        self.poles.iter().fold(Complex64::new(1.0, 0.0), |acc, &p| acc * (s - p))
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.numerator_at(s) / self.denominator_at(s)
    }

    /// `H(0)`; infinite when a pole sits at the origin.
    pub fn dc_gain(&self) -> f64 {
        self.eval(Complex64::new(0.0, 0.0)).re
    }

    /// `|H(i w)|` as a ratio of distance products, `+inf` on an imaginary-axis pole.
    pub fn frequency_magnitude(&self, omega: f64) -> f64 {
        let s = Complex64::new(0.0, omega);
        let den: f64 = self.poles.iter().map(|&p| (s - p).norm()).product();
        if den == 0.0 {
            return f64::INFINITY;
        }
        let num: f64 = self.zeros.iter().map(|&z| (s - z).norm()).product();
        self.gain.abs() * num / den
    }

    /// The same system multiplied by `1/s`.
    pub(crate) fn with_integrator(&self) -> RationalTF {
        let mut poles = self.poles.clone();
        poles.push(Complex64::new(0.0, 0.0));
        RationalTF {
            gain: self.gain,
            zeros: self.zeros.clone(),
            poles,
        }
    }
}
