//! Exact arithmetic: dense integer polynomials, fraction-free determinants
//! and characteristic polynomials over the rationals.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense univariate polynomial, coefficients in ascending degree, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Zero> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T> Poly<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    /// `x` itself.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::constant(T::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl<T: Clone + Zero + Add<Output = T>> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(k).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }
}

impl<T: Clone + Zero + Neg<Output = T>> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Clone + Zero + Add<Output = T> + Neg<Output = T>> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<T: Clone + Zero + Add<Output = T> + Mul<Output = T>> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

/// Bareiss fraction-free elimination. `m` is consumed as scratch space.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact determinant of a rational matrix: rows are cleared of denominators
/// and the integer matrix is handed to [`det_bareiss`].
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let ints = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    Rational::new(det_bareiss(ints), scale)
}

/// Characteristic polynomial `det(x I - M)` via reduction to upper
/// Hessenberg form over the rationals.
pub fn charpoly(m: &[Vec<Rational>]) -> Poly<Rational> {
    let n = m.len();
    let mut h: Vec<Vec<Rational>> = m.to_vec();
    for c in 1..n.saturating_sub(1) {
        let Some(p) = (c..n).find(|&i| !h[i][c - 1].is_zero()) else {
            continue;
        };
        if p != c {
            h.swap(p, c);
            for row in h.iter_mut() {
                row.swap(p, c);
            }
        }
        for i in c + 1..n {
            if h[i][c - 1].is_zero() {
                continue;
            }
            let u = &h[i][c - 1] / &h[c][c - 1];
            for j in 0..n {
                let v = &u * &h[c][j];
                h[i][j] -= v;
            }
            for row in h.iter_mut() {
                let v = &u * &row[i];
                row[c] += v;
            }
        }
    }
    // p[k] = charpoly of the leading k x k block.
    let x = Poly::<Rational>::x();
    let mut p: Vec<Poly<Rational>> = vec![Poly::constant(Rational::one())];
    for k in 1..=n {
        let diag = Poly::constant(h[k - 1][k - 1].clone());
        let mut next = &(&x - &diag) * &p[k - 1];
        let mut prod = Rational::one();
        for i in (1..k).rev() {
            prod *= &h[i][i - 1];
            let c = &prod * &h[i - 1][k - 1];
            next = &next - &p[i - 1].scale(&c);
        }
        p.push(next);
    }
    p.pop().expect("p has n + 1 entries")
}

/// Newton interpolation through the given `(x, y)` pairs.
pub fn interpolate(points: &[(Rational, Rational)]) -> Poly<Rational> {
    let n = points.len();
    let mut coef: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            coef[i] = num / den;
        }
    }
    let mut out = Poly::zero();
    for i in (0..n).rev() {
        let factor = Poly::new(vec![-points[i].0.clone(), Rational::one()]);
        out = &(&out * &factor) + &Poly::constant(coef[i].clone());
    }
    out
}

/// `base^exp` for a possibly negative integer exponent.
pub fn rational_pow(base: &Rational, exp: i64) -> Rational {
    let mut out = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        out *= base;
    }
    if exp < 0 {
        out.recip()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(det_bareiss(int_matrix(&[&[2, 1], &[7, 4]])), BigInt::from(1));
        assert_eq!(
            det_bareiss(int_matrix(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])),
            BigInt::from(-2)
        );
        assert_eq!(det_bareiss(int_matrix(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn rational_det_clears_denominators() {
        let m = vec![
            vec![rational(1, 2), rational(1, 3)],
            vec![rational(1, 4), rational(1, 5)],
        ];
        assert_eq!(det_rational(&m), rational(1, 10) - rational(1, 12));
    }

    #[test]
    fn charpoly_of_companion_like_matrix() {
        // eigenvalues 3, -1, -1, -1 (K4 adjacency)
        let m: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| q(i64::from(i != j))).collect())
            .collect();
        let p = charpoly(&m);
        let expected = &Poly::new(vec![q(-3), q(1)]) * &Poly::new(vec![q(1), q(1)]).pow(3);
        assert_eq!(p, expected);
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = Poly::new(vec![q(1), q(-2), q(0), rational(3, 2)]);
        let pts: Vec<_> = (0..4).map(|i| (q(i), f.eval(&q(i)))).collect();
        assert_eq!(interpolate(&pts), f);
    }

    #[test]
    fn poly_arithmetic() {
        let a = Poly::new(vec![BigInt::from(1), BigInt::from(1)]);
        let sq = a.pow(2);
        assert_eq!(sq.coeffs(), &[1, 2, 1].map(BigInt::from));
        assert!((&sq - &sq).is_zero());
        assert_eq!(sq.eval(&BigInt::from(2)), BigInt::from(9));
    }
}
