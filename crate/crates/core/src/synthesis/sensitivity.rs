//! Sensitivity peak of the loop `B F + A G`.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::tf::RationalTF;
use crate::Complex64;

const GRID_POINTS: usize = 2000;
const OMEGA_MIN: f64 = 1e-3;
const OMEGA_MAX: f64 = 1e4;

fn sensitivity_at(a: &Polynomial, b: &Polynomial, f: &Polynomial, g: &Polynomial, w: f64) -> f64 {
    let s = Complex64::new(0.0, w);
    let ag = a.eval_complex(s) * g.eval_complex(s);
    let cl = b.eval_complex(s) * f.eval_complex(s) + ag;
    if cl.norm() == 0.0 {
        f64::INFINITY
    } else {
        ag.norm() / cl.norm()
    }
}

/// `max |A G / (B F + A G)|` over `omega in [1e-3, 1e4]`: a 2000-point log
/// grid followed by golden-section refinement around the best grid point.
pub fn sensitivity_peak(plant: &RationalTF, f: &Polynomial, g: &Polynomial) -> f64 {
    let a = plant.denominator();
    let b = plant.numerator();
    let at = |lw: f64| sensitivity_at(&a, &b, f, g, lw.exp());
    let (lo, hi) = (OMEGA_MIN.ln(), OMEGA_MAX.ln());
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let (best_i, best) = (0..GRID_POINTS)
        .map(|i| (i, at(lo + step * i as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let mut x0 = lo + step * best_i.saturating_sub(1) as f64;
    let mut x1 = lo + step * (best_i + 1).min(GRID_POINTS - 1) as f64;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = x1 - ratio * (x1 - x0);
    let mut d = x0 + ratio * (x1 - x0);
    let (mut fc, mut fd) = (at(c), at(d));
    for _ in 0..100 {
        if fc > fd {
            x1 = d;
            d = c;
            fd = fc;
            c = x1 - ratio * (x1 - x0);
            fc = at(c);
        } else {
            x0 = c;
            c = d;
            fc = fd;
            d = x0 + ratio * (x1 - x0);
            fd = at(d);
        }
    }
    best.max(fc).max(fd)
}

/// A cascade compensator `C = N / D` in the loop `U = C (R - Y)`.
///
/// In the two-degree-of-freedom form it is `F = N`, `G = D`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeController {
    num: Polynomial,
    den: Polynomial,
}

impl CascadeController {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::domain("controller polynomials must be nonzero"));
        }
        Ok(CascadeController { num, den })
    }

    pub fn proportional(k: f64) -> Result<Self> {
        CascadeController::new(Polynomial::constant(k), Polynomial::constant(1.0))
    }

    /// `k (s - zero) / (s - pole)`.
    pub fn first_order(k: f64, zero: f64, pole: f64) -> Result<Self> {
        CascadeController::new(
            Polynomial::from_real_roots(&[zero]).scale(k),
            Polynomial::from_real_roots(&[pole]),
        )
    }

    pub fn feedback_polynomials(&self) -> (&Polynomial, &Polynomial) {
        (&self.num, &self.den)
    }

    pub fn sensitivity_peak(&self, plant: &RationalTF) -> f64 {
        sensitivity_peak(plant, &self.num, &self.den)
    }

    /// `H C / (1 + H C)`.
    pub fn closed_loop(&self, plant: &RationalTF) -> Result<RationalTF> {
        let num = &plant.numerator() * &self.num;
        let den = &(&plant.numerator() * &self.num) + &(&plant.denominator() * &self.den);
        RationalTF::from_coeffs(&num, &den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plant() -> RationalTF {
        RationalTF::from_coeffs(
            &Polynomial::new(vec![1.0, 2.0]),
            &Polynomial::new(vec![1.0, 0.8, -0.2]),
        )
        .unwrap()
    }

    #[test]
    fn vanishing_loop_gain_gives_unit_peak() {
        let c = CascadeController::proportional(1e-9).unwrap();
        let p = RationalTF::from_real(1.0, &[], &[-1.0]).unwrap();
        assert!((c.sensitivity_peak(&p) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn proportional_comparison_controllers() {
        let fast = CascadeController::proportional(6.1665).unwrap();
        assert!((fast.sensitivity_peak(&plant()) - 1.0).abs() < 1e-2);
        let slow = CascadeController::proportional(0.2335).unwrap();
        assert!((slow.sensitivity_peak(&plant()) - 1.1678).abs() < 1e-2);
    }

    #[test]
    fn closed_loop_of_cascade() {
        let c = CascadeController::proportional(6.1665).unwrap();
        let cl = c.closed_loop(&plant()).unwrap();
        assert_eq!(cl.order(), 2);
        assert!(cl.poles().iter().all(|p| p.re < 0.0));
    }
}
