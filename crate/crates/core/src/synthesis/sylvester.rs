//! From the optimal point to controller polynomials.

use nalgebra::{DMatrix, DVector};

use super::program::DecisionPoint;
use super::SynthesisProblem;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::tf::{is_conjugate_closed, RationalTF};
use crate::Complex64;

/// Smallest `|det M|` accepted as coprime.
pub const COPRIME_TOL: f64 = 1e-10;
/// Coefficientwise residual allowed in `B F + A G = A_cl`, relative to `max(1, |a_cl|)`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Closed-loop poles `pi_j^(1/mu) - delta` for the real block and
/// `u^(1/mu) exp(i theta) - delta` for the complex block.
pub fn restore_poles(point: &DecisionPoint, problem: &SynthesisProblem) -> Vec<Complex64> {
    let mu = problem.mu() as f64;
    let delta = problem.delta();
    let n_r = problem.n_r();
    let theta = problem.theta();
    let mut poles = Vec::with_capacity(theta.len());
    for &w in &point.w_sorted[..n_r] {
        poles.push(Complex64::new(w.max(0.0).powf(1.0 / mu) - delta, 0.0));
    }
    for (i, &th) in theta.iter().enumerate().skip(n_r) {
        let r = point.v[i].max(0.0).powf(1.0 / mu);
        let mut p = Complex64::from_polar(r, th) - delta;
        if th == 0.0 {
            p.im = 0.0;
        }
        poles.push(p);
    }
    poles
}

/// Monic `prod (s - p_i)`.
pub fn char_poly(poles: &[Complex64]) -> Result<Polynomial> {
    if !is_conjugate_closed(poles) {
        return Err(Error::domain("closed-loop poles are not closed under conjugation"));
    }
    Polynomial::from_roots(poles)
}

/// `B` padded to `n + 1` descending coefficients and the monic `A`.
fn plant_polys(plant: &RationalTF) -> (Vec<f64>, Vec<f64>) {
    let n = plant.order();
    (plant.numerator().padded(n + 1), plant.denominator().padded(n + 1))
}

/// The `2n x 2n` matrix with `b_(i-j)` in columns `1..n` and `a_(i-j+n)` in
/// columns `n+1..2n` (1-based, zero outside the bands).
pub fn sylvester_matrix(plant: &RationalTF) -> DMatrix<f64> {
    let n = plant.order();
    let (b, a) = plant_polys(plant);
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (i, j) = (i as isize + 1, j as isize + 1);
        let n = n as isize;
        if j <= n && i >= j && i <= j + n {
            b[(i - j) as usize]
        } else if j > n && i >= j - n && i <= j {
            a[(i - j + n) as usize]
        } else {
            0.0
        }
    })
}

/// Solves `B F + A G = a_cl` for `F`, `G` of degree `n - 1`.
pub fn solve_sylvester(plant: &RationalTF, a_cl: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let n = plant.order();
    if n == 0 {
        return Err(Error::domain("plant has no poles"));
    }
    if a_cl.degree() != 2 * n - 1 {
        return Err(Error::domain(format!(
            "closed-loop polynomial has degree {}, expected {}",
            a_cl.degree(),
            2 * n - 1
        )));
    }
    let m = sylvester_matrix(plant);
    let det = m.determinant();
    if det.abs() <= COPRIME_TOL {
        return Err(Error::NotCoprime { resultant: det });
    }
    let rhs = DVector::from_column_slice(a_cl.coeffs());
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::NotCoprime { resultant: det })?;
    let f = Polynomial::new(sol.as_slice()[..n].to_vec());
    let g = Polynomial::new(sol.as_slice()[n..].to_vec());
    let (b, a) = plant_polys(plant);
    let lhs = &(&Polynomial::new(b) * &f) + &(&Polynomial::new(a) * &g);
    let scale = a_cl.coeffs().iter().map(|c| c.abs()).fold(1.0, f64::max);
    let residual = lhs.max_abs_diff(a_cl);
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::Verification(format!(
            "Sylvester residual {residual:e} exceeds {:e}",
            RESIDUAL_TOL * scale
        )));
    }
    Ok((f, g))
}

/// `K_c = (B(0) F(0) + A(0) G(0)) / B(0)`, giving unit DC gain.
pub fn compute_kc(plant: &RationalTF, f: &Polynomial, g: &Polynomial) -> Result<f64> {
    let b0 = plant.numerator().eval(0.0);
    if b0 == 0.0 || plant.zeros().iter().any(|z| z.norm() == 0.0) {
        return Err(Error::domain(
            "plant numerator vanishes at s = 0; unit DC gain is unreachable",
        ));
    }
    let a0 = plant.denominator().eval(0.0);
    Ok((b0 * f.eval(0.0) + a0 * g.eval(0.0)) / b0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_polynomials() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        assert_eq!(char_poly(&[c(-1.0, 0.0), c(-2.0, 0.0)]).unwrap().coeffs(), &[1.0, 3.0, 2.0]);
        assert_eq!(char_poly(&[c(-1.0, 1.0), c(-1.0, -1.0)]).unwrap().coeffs(), &[1.0, 2.0, 2.0]);
        assert_eq!(
            char_poly(&[c(-2.0, 0.0); 3]).unwrap().coeffs(),
            &[1.0, 6.0, 12.0, 8.0]
        );
        assert!(char_poly(&[c(-1.0, 1.0)]).is_err());
    }

    #[test]
    fn first_order_plant() {
        let plant = RationalTF::from_real(1.0, &[], &[-1.0]).unwrap();
        let (f, g) = solve_sylvester(&plant, &Polynomial::new(vec![1.0, 3.0])).unwrap();
        assert!((f.coeffs()[0] - 2.0).abs() < 1e-12);
        assert!((g.coeffs()[0] - 1.0).abs() < 1e-12);
        let kc = compute_kc(&plant, &f, &g).unwrap();
        assert!((kc - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unstable_plant_residual() {
        let plant = RationalTF::from_coeffs(
            &Polynomial::new(vec![1.0, 2.0]),
            &Polynomial::new(vec![1.0, 0.8, -0.2]),
        )
        .unwrap();
        let a_cl = Polynomial::from_real_roots(&[-2.0, -5.0, -5.0]);
        let (f, g) = solve_sylvester(&plant, &a_cl).unwrap();
        let lhs = &(&plant.numerator() * &f) + &(&plant.denominator() * &g);
        assert!(lhs.max_abs_diff(&a_cl) < 1e-10);
        // the closed-loop pole at the plant zero cancels it inside G
        assert!((g.coeffs()[0] - 1.0).abs() < 1e-9 && (g.coeffs()[1] - 2.0).abs() < 1e-9);
        assert!((f.coeffs()[0] - 9.2).abs() < 1e-9 && (f.coeffs()[1] - 25.2).abs() < 1e-9);
    }

    #[test]
    fn common_factor_is_rejected() {
        let plant = RationalTF::from_real(1.0, &[-1.0], &[-1.0, -2.0]).unwrap();
        let a_cl = Polynomial::from_real_roots(&[-1.0, -2.0, -3.0]);
        assert!(matches!(solve_sylvester(&plant, &a_cl), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn zero_at_origin_blocks_unit_gain() {
        let plant = RationalTF::from_real(1.0, &[0.0], &[-1.0, -2.0]).unwrap();
        let f = Polynomial::new(vec![1.0, 1.0]);
        assert!(compute_kc(&plant, &f, &f).is_err());
    }
}
