//! Exact sign analysis of integer polynomials on `[1, inf)`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial over the rationals, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct QPoly(Vec<BigRational>);

/// Where a polynomial stops being nonnegative on `[1, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Sign {
    Nonnegative,
    /// Negative somewhere in `(lo, hi)`; `hi` may coincide with a root.
    NegativeIn { lo: f64, hi: f64 },
}

impl QPoly {
    pub(crate) fn from_integers(c: &[i64]) -> Self {
        QPoly(c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn derivative(&self) -> Self {
        QPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
        .trimmed()
    }

    fn monic(&self) -> Self {
        let lead = self.leading();
        QPoly(self.0.iter().map(|c| c / &lead).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = BigRational::zero();
        QPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .trimmed()
    }

    fn neg(&self) -> Self {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (QPoly(vec![]), self.clone());
        }
        let dl = d.leading();
        let shift = r.len() - d.0.len();
        let mut q = vec![BigRational::zero(); shift + 1];
        for k in (0..=shift).rev() {
            let c = &r[k + d.degree()] / &dl;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(d.degree());
        (QPoly(q).trimmed(), QPoly(r).trimmed())
    }

    fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.monic() };
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly(out).trimmed()
    }

    /// Product of the square-free factors of odd multiplicity (Yun's algorithm).
    fn odd_part(&self) -> Self {
        let one = QPoly(vec![BigRational::one()]);
        if self.degree() == 0 {
            return one;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.exact_div(&a0);
        let c = d.exact_div(&a0);
        let mut dd = c.sub(&b.derivative());
        let mut odd = one.clone();
        let mut mult = 1usize;
        while b.degree() > 0 {
            let a = b.gcd(&dd);
            let b_next = b.exact_div(&a);
            let c_next = dd.exact_div(&a);
            dd = c_next.sub(&b_next.derivative());
            b = b_next;
            if mult % 2 == 1 {
                odd = odd.mul(&a);
            }
            mult += 1;
        }
        odd
    }

    fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                return chain;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn variations_at(chain: &[QPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|p| sign(&p.eval(x))))
}

fn variations_at_infinity(chain: &[QPoly]) -> usize {
    variations(chain.iter().map(|p| sign(&p.leading())))
}

/// Distinct real roots of a square-free polynomial in `(lo, hi]`.
fn count_roots(chain: &[QPoly], lo: &BigRational, hi: Option<&BigRational>) -> usize {
    let vl = variations_at(chain, lo);
    let vh = match hi {
        Some(h) => variations_at(chain, h),
        None => variations_at_infinity(chain),
    };
    vl.saturating_sub(vh)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Interval `(lo, hi]` around the smallest root above `lo`, refined by bisection.
fn first_root(chain: &[QPoly], lo: &BigRational) -> (BigRational, BigRational) {
    // Cauchy bound on root magnitude
    let p = &chain[0];
    let lead = p.leading().abs();
    let bound = p.0.iter().map(|c| c.abs() / &lead).max().unwrap_or_else(BigRational::zero)
        + BigRational::one();
    let mut a = lo.clone();
    let mut b = if bound > *lo { bound } else { lo + BigRational::one() };
    let two = BigRational::from_integer(BigInt::from(2));
    for _ in 0..200 {
        let mid = (&a + &b) / &two;
        if count_roots(chain, &a, Some(&mid)) > 0 {
            b = mid;
        } else {
            a = mid;
        }
        let width = to_f64(&(&b - &a));
        if width <= 1e-12 * to_f64(&b).abs().max(1.0) {
            break;
        }
    }
    (a, b)
}

/// Decides whether `p(x) >= 0` for all `x >= 1`, exactly.
///
/// Factors out `(x - 1)^r`, then the remaining polynomial must be positive at
/// 1 and have no root of odd multiplicity in `(1, inf)`.
pub(crate) fn sign_on_ray(p: &QPoly) -> Sign {
    if p.is_zero() {
        return Sign::Nonnegative;
    }
    let x_minus_one = QPoly(vec![-BigRational::one(), BigRational::one()]);
    let one = BigRational::one();
    let mut r = p.clone();
    loop {
        let (q, rem) = r.div_rem(&x_minus_one);
        if !rem.is_zero() {
            break;
        }
        r = q;
    }
    let odd = r.odd_part();
    let chain = odd.sturm_chain();
    let has_odd_root = odd.degree() > 0 && count_roots(&chain, &one, None) > 0;
    let at_one_negative = r.eval(&one).is_negative();
    match (at_one_negative, has_odd_root) {
        (false, false) => Sign::Nonnegative,
        (true, false) => Sign::NegativeIn { lo: 1.0, hi: 2.0 },
        (true, true) => {
            let (_, hi) = first_root(&chain, &one);
            Sign::NegativeIn { lo: 1.0, hi: to_f64(&hi) }
        }
        (false, true) => {
            // negative just past the first sign change: bracket the next root
            let (lo, hi) = first_root(&chain, &one);
            let upper = if count_roots(&chain, &hi, None) > 0 {
                let (_, h2) = first_root(&chain, &hi);
                to_f64(&h2)
            } else {
                2.0 * to_f64(&hi).max(1.0)
            };
            Sign::NegativeIn { lo: to_f64(&lo), hi: upper }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_integers(c)
    }

    #[test]
    fn perfect_square_is_nonnegative() {
        // x^2 - 2x + 1
        assert_eq!(sign_on_ray(&q(&[1, -2, 1])), Sign::Nonnegative);
        // (x - 1)^2 (x - 3)^2
        let p = q(&[1, -2, 1]).mul(&q(&[9, -6, 1]));
        assert_eq!(sign_on_ray(&p), Sign::Nonnegative);
    }

    #[test]
    fn detects_negative_stretch() {
        // (x - 2)(x - 3) < 0 on (2, 3)
        match sign_on_ray(&q(&[6, -5, 1])) {
            Sign::NegativeIn { lo, hi } => {
                assert!(lo <= 2.0 + 1e-9 && hi >= 2.5, "{lo} {hi}");
                assert!(lo >= 1.99);
            }
            s => panic!("{s:?}"),
        }
        // 1 - x^2 is negative right after 1
        assert!(matches!(sign_on_ray(&q(&[1, 0, -1])), Sign::NegativeIn { lo, .. } if lo == 1.0));
        // x - 1 is fine, 1 - x is not
        assert_eq!(sign_on_ray(&q(&[-1, 1])), Sign::Nonnegative);
        assert!(matches!(sign_on_ray(&q(&[1, -1])), Sign::NegativeIn { .. }));
    }

    #[test]
    fn odd_part_of_repeated_factors() {
        // (x - 2)^2 (x - 3)^3 has odd part (x - 3)
        let p = q(&[4, -4, 1]).mul(&q(&[-27, 27, -9, 1]));
        assert_eq!(p.odd_part(), q(&[-3, 1]));
    }

    #[test]
    fn root_counting() {
        let p = q(&[-6, 11, -6, 1]); // roots 1, 2, 3
        let chain = p.sturm_chain();
        let one = BigRational::one();
        assert_eq!(count_roots(&chain, &one, None), 2);
        let zero = BigRational::zero();
        assert_eq!(count_roots(&chain, &zero, None), 3);
    }
}
