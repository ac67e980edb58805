//! Exact bivariate power series in `q` and `t`, truncated in each variable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries2 {
    max_q: usize,
    max_t: usize,
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries2 {
    pub fn zero(max_q: usize, max_t: usize) -> Self {
        Self {
            max_q,
            max_t,
            coeffs: vec![BigRational::zero(); (max_q + 1) * (max_t + 1)],
        }
    }

    pub fn one(max_q: usize, max_t: usize) -> Self {
        Self::monomial(max_q, max_t, 0, 0, BigRational::one())
    }

    /// `c q^a t^b`, or zero if it falls outside the truncation.
    pub fn monomial(max_q: usize, max_t: usize, a: usize, b: usize, c: BigRational) -> Self {
        let mut s = Self::zero(max_q, max_t);
        if a <= max_q && b <= max_t {
            *s.at_mut(a, b) = c;
        }
        s
    }

    /// `e^{c t}`.
    pub fn exp_t(max_q: usize, max_t: usize, c: i64) -> Self {
        let mut s = Self::zero(max_q, max_t);
        let mut term = BigRational::one();
        for b in 0..=max_t {
            *s.at_mut(0, b) = term.clone();
            term = term * BigRational::from_integer(BigInt::from(c))
                / BigRational::from_integer(BigInt::from(b + 1));
        }
        s
    }

    pub fn max_q(&self) -> usize {
        self.max_q
    }

    pub fn max_t(&self) -> usize {
        self.max_t
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.max_t + 1) + b
    }

    fn at_mut(&mut self, a: usize, b: usize) -> &mut BigRational {
        let i = self.idx(a, b);
        &mut self.coeffs[i]
    }

    /// Coefficient of `q^a t^b`; zero outside the truncation.
    pub fn coeff(&self, a: usize, b: usize) -> BigRational {
        if a > self.max_q || b > self.max_t {
            return BigRational::zero();
        }
        self.coeffs[self.idx(a, b)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn assert_shape(&self, other: &Self) {
        assert_eq!(
            (self.max_q, self.max_t),
            (other.max_q, other.max_t),
            "series truncations differ"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_shape(other);
        Self {
            max_q: self.max_q,
            max_t: self.max_t,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_shape(other);
        Self {
            max_q: self.max_q,
            max_t: self.max_t,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            max_q: self.max_q,
            max_t: self.max_t,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_shape(other);
        let mut out = Self::zero(self.max_q, self.max_t);
        for a1 in 0..=self.max_q {
            for b1 in 0..=self.max_t {
                let x = &self.coeffs[self.idx(a1, b1)];
                if x.is_zero() {
                    continue;
                }
                for a2 in 0..=self.max_q - a1 {
                    for b2 in 0..=self.max_t - b1 {
                        let y = &other.coeffs[other.idx(a2, b2)];
                        if !y.is_zero() {
                            *out.at_mut(a1 + a2, b1 + b2) += x * y;
                        }
                    }
                }
            }
        }
        out
    }

    /// `exp(s)` for a series with zero constant term.
    ///
    /// # Panics
    /// If the constant term is nonzero.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let mut out = Self::one(self.max_q, self.max_t);
        let mut power = Self::one(self.max_q, self.max_t);
        let mut n = 1u64;
        loop {
            power = power
                .mul(self)
                .scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
            if power.is_zero() {
                return out;
            }
            out = out.add(&power);
            n += 1;
        }
    }

    /// `self / other` where `other` has a nonzero constant term.
    pub fn div_unit(&self, other: &Self) -> Option<Self> {
        self.assert_shape(other);
        let c0 = other.coeffs[0].clone();
        if c0.is_zero() {
            return None;
        }
        let mut out = Self::zero(self.max_q, self.max_t);
        for a in 0..=self.max_q {
            for b in 0..=self.max_t {
                let mut acc = self.coeff(a, b);
                for a2 in 0..=a {
                    for b2 in 0..=b {
                        if (a2, b2) == (0, 0) {
                            continue;
                        }
                        let y = &other.coeffs[other.idx(a2, b2)];
                        if !y.is_zero() {
                            acc -= y * out.coeff(a - a2, b - b2);
                        }
                    }
                }
                *out.at_mut(a, b) = acc / &c0;
            }
        }
        Some(out)
    }

    /// Divides by `q t`, dropping one order of truncation in each variable.
    /// Returns `None` unless every nonzero term has positive degree in both.
    pub fn div_qt(&self) -> Option<Self> {
        if self.max_q == 0 || self.max_t == 0 {
            return None;
        }
        for a in 0..=self.max_q {
            for b in 0..=self.max_t {
                if (a == 0 || b == 0) && !self.coeffs[self.idx(a, b)].is_zero() {
                    return None;
                }
            }
        }
        let mut out = Self::zero(self.max_q - 1, self.max_t - 1);
        for a in 1..=self.max_q {
            for b in 1..=self.max_t {
                *out.at_mut(a - 1, b - 1) = self.coeff(a, b);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exp_of_t() {
        let t = TruncatedSeries2::monomial(0, 5, 0, 1, r(1, 1));
        assert_eq!(t.exp(), TruncatedSeries2::exp_t(0, 5, 1));
        assert_eq!(t.exp().coeff(0, 4), r(1, 24));
    }

    #[test]
    fn exp_is_multiplicative() {
        let x = TruncatedSeries2::monomial(3, 3, 1, 1, r(2, 3)).add(&TruncatedSeries2::monomial(
            3,
            3,
            0,
            1,
            r(1, 1),
        ));
        let y = TruncatedSeries2::monomial(3, 3, 1, 0, r(-1, 2));
        assert_eq!(x.add(&y).exp(), x.exp().mul(&y.exp()));
    }

    #[test]
    fn unit_division_inverts_mul() {
        let u = TruncatedSeries2::exp_t(2, 4, 3);
        let v = TruncatedSeries2::monomial(2, 4, 1, 2, r(5, 1)).add(&TruncatedSeries2::one(2, 4));
        assert_eq!(u.mul(&v).div_unit(&v).unwrap(), u);
        assert!(u.div_unit(&TruncatedSeries2::zero(2, 4)).is_none());
    }

    #[test]
    fn qt_division() {
        let s = TruncatedSeries2::monomial(2, 2, 1, 2, r(3, 1));
        let d = s.div_qt().unwrap();
        assert_eq!(d.coeff(0, 1), r(3, 1));
        assert_eq!((d.max_q(), d.max_t()), (1, 1));
        assert!(TruncatedSeries2::one(2, 2).div_qt().is_none());
    }
}
