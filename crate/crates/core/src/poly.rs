//! Real polynomials in descending-power coefficient form.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num::complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used to decide whether a complex value is real, scaled by `max(1, |z|)`.
pub const REAL_TOL: f64 = 1e-9;

pub(crate) fn is_real(z: Complex64) -> bool {
    z.im.abs() <= REAL_TOL * z.norm().max(1.0)
}

/// A polynomial with real coefficients, highest power first.
///
/// The zero polynomial is stored as `[0.0]`; every other polynomial has a
/// nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        let first = coeffs.iter().position(|&c| c != 0.0);
        match first {
            Some(i) => {
                coeffs.drain(..i);
            }
            None => coeffs = vec![0.0],
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// Monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Polynomial::constant(1.0), |acc, &r| {
            &acc * &Polynomial::new(vec![1.0, -r])
        })
    }

    /// Monic polynomial `prod (s - r_i)` for a conjugate-closed root list.
    ///
    /// The expansion is carried out in complex arithmetic and projected onto
    /// the reals; a leftover imaginary part larger than `1e-10` relative to the
    /// coefficient magnitude means the roots were not conjugate-closed.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let c = complex_poly_from_roots(roots);
        let mut out = Vec::with_capacity(c.len());
        for z in &c {
            if z.im.abs() > 1e-10 * z.norm().max(1.0) {
                return Err(Error::domain(format!(
                    "roots are not conjugate-closed (imaginary coefficient residue {:e})",
                    z.im
                )));
            }
            out.push(z.re);
        }
        Ok(Polynomial::new(out))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient vector of length `len`, left-padded with zeros.
    ///
    /// Panics if `len` is smaller than the coefficient count.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        assert!(len >= self.coeffs.len(), "padding shorter than polynomial");
        let mut out = vec![0.0; len - self.coeffs.len()];
        out.extend_from_slice(&self.coeffs);
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let d = self.degree();
        if d == 0 {
            return Polynomial::zero();
        }
        let coeffs: Vec<f64> = self.coeffs[..d]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (d - i) as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    /// Roots from the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<Complex64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[0];
        let mut companion = DMatrix::<f64>::zeros(d, d);
        for j in 0..d {
            companion[(0, j)] = -self.coeffs[j + 1] / lead;
        }
        for i in 1..d {
            companion[(i, i - 1)] = 1.0;
        }
        let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
        for r in &mut roots {
            if r.im.abs() <= 1e-14 * r.norm().max(1.0) {
                r.im = 0.0;
            }
        }
        roots
    }

    /// Largest absolute coefficient difference against another polynomial.
    pub fn max_abs_diff(&self, other: &Polynomial) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let a = self.padded(len);
        let b = other.padded(len);
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Coefficients (descending) of `prod (s - r_i)` in complex arithmetic.
pub(crate) fn complex_poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= ci * r;
        }
        c = next;
    }
    c
}

fn add_coeffs(a: &[f64], b: &[f64], sign: f64) -> Polynomial {
    let len = a.len().max(b.len());
    let mut out = vec![0.0; len];
    for (i, &c) in a.iter().enumerate() {
        out[len - a.len() + i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[len - b.len() + i] += sign * c;
    }
    Polynomial::new(out)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        add_coeffs(&self.coeffs, &rhs.coeffs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        add_coeffs(&self.coeffs, &rhs.coeffs, -1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}
