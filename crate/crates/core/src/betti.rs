//! Closed-form Betti numbers `f(Φ, k)` and the Stirling, Bell and Dowling
//! numbers behind them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rootsys::{CartanType, Family};
use crate::series::TruncatedSeries2;

/// Pascal's triangle up to row `n`.
fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    pascal(n).swap_remove(n).swap_remove(k)
}

/// Table of `S(i, j)` for `0 <= i, j <= n`.
pub fn stirling_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = BigInt::from(j) * &s[i - 1][j] + &s[i - 1][j - 1];
        }
    }
    s
}

/// Stirling number of the second kind.
pub fn stirling(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling_table(n).swap_remove(n).swap_remove(k)
}

pub fn bell(n: usize) -> BigInt {
    stirling_table(n)[n].iter().sum()
}

/// Sum of `f(B_r, k)` over `k`.
pub fn dowling(r: usize) -> BigInt {
    (0..=r)
        .map(|k| b_formula(r, k, &stirling_table(r), &pascal(r)))
        .sum()
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn b_formula(r: usize, k: usize, s: &[Vec<BigInt>], c: &[Vec<BigInt>]) -> BigInt {
    (0..=r - k)
        .map(|i| &c[r][i] * &s[r - i][k] * pow2(r - k - i))
        .sum()
}

fn d_formula(r: usize, k: usize, s: &[Vec<BigInt>], c: &[Vec<BigInt>]) -> BigInt {
    let total: BigInt = (k..=r).map(|i| &c[r][i] * &s[i][k] * pow2(i - k)).sum();
    if k < r {
        total - BigInt::from(r) * &s[r - 1][k] * pow2(r - 1 - k)
    } else {
        total
    }
}

const E6_ROW: [u64; 7] = [1, 639, 2001, 1530, 390, 36, 1];
const E7_ROW: [u64; 8] = [1, 8821, 36435, 33411, 10395, 1281, 63, 1];
const E8_ROW: [u64; 9] = [1, 440880, 2221780, 2091600, 661542, 85680, 4900, 120, 1];
const F4_ROW: [u64; 5] = [1, 120, 122, 24, 1];
const G2_ROW: [u64; 3] = [1, 6, 1];

fn irreducible(ctype: &CartanType) -> Result<(Family, usize)> {
    ctype
        .as_irreducible()
        .ok_or_else(|| Error::ParseType(format!("{ctype} is not irreducible")))
}

/// Stored Betti rows of the exceptional types.
pub fn exceptional_table(ctype: &CartanType, k: usize) -> Result<BigInt> {
    let (family, r) = irreducible(ctype)?;
    let row: &[u64] = match (family, r) {
        (Family::E, 6) => &E6_ROW,
        (Family::E, 7) => &E7_ROW,
        (Family::E, 8) => &E8_ROW,
        (Family::F, 4) => &F4_ROW,
        (Family::G, 2) => &G2_ROW,
        _ => return Err(Error::ParseType(format!("{ctype} is not exceptional"))),
    };
    row.get(k)
        .map(|&v| BigInt::from(v))
        .ok_or(Error::RankOutOfRange { k, rank: r })
}

/// `f(Φ, k)`: the closed forms for classical types, the stored table for
/// exceptional ones.
pub fn f_closed_form(ctype: &CartanType, k: usize) -> Result<BigInt> {
    let (family, r) = irreducible(ctype)?;
    if k > r {
        return Err(Error::RankOutOfRange { k, rank: r });
    }
    match family {
        Family::A => Ok(stirling(r + 1, k + 1)),
        Family::B | Family::C => Ok(b_formula(r, k, &stirling_table(r), &pascal(r))),
        Family::D => Ok(d_formula(r, k, &stirling_table(r), &pascal(r))),
        _ => exceptional_table(ctype, k),
    }
}

/// `f(Φ, 0..=r)`.
pub fn betti_row(ctype: &CartanType) -> Result<Vec<BigInt>> {
    let r = irreducible(ctype)?.1;
    (0..=r).map(|k| f_closed_form(ctype, k)).collect()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Reads `f(X_r, k)` for `r <= max_r` off the exact expansion of the
/// generating function of the classical family (C shares B's series).
/// Row `r` of the result holds `k = 0..=r`.
pub fn series_coefficients(family: Family, max_r: usize) -> Result<Vec<Vec<BigInt>>> {
    let (series, shift) = match family {
        Family::A => {
            // (e^{q(e^t - 1)} - 1) / (qt), expanded one order higher.
            let n = max_r + 1;
            let inner = TruncatedSeries2::exp_t(n, n, 1).sub(&TruncatedSeries2::one(n, n));
            let q = TruncatedSeries2::monomial(n, n, 1, 0, BigRational::one());
            let num = q.mul(&inner).exp().sub(&TruncatedSeries2::one(n, n));
            let f = num.div_qt().expect("numerator divisible by qt");
            (f, 1)
        }
        Family::B | Family::C => {
            let n = max_r;
            let t = TruncatedSeries2::monomial(n, n, 0, 1, BigRational::one());
            (t.add(&half_q_term(n)).exp(), 0)
        }
        Family::D => {
            let n = max_r;
            let t = TruncatedSeries2::monomial(n, n, 0, 1, BigRational::one());
            let front = TruncatedSeries2::exp_t(n, n, 1).sub(&t);
            (front.mul(&half_q_term(n).exp()), 0)
        }
        _ => {
            return Err(Error::NotClassical(CartanType::irreducible(
                family,
                match family {
                    Family::E => 6,
                    Family::F => 4,
                    _ => 2,
                },
            )?))
        }
    };
    let mut table = Vec::with_capacity(max_r + 1);
    for r in 0..=max_r {
        let scale = factorial(r + shift);
        let row = (0..=r)
            .map(|k| {
                let c = series.coeff(k, r) * &scale;
                assert!(c.is_integer(), "non-integral coefficient");
                c.to_integer()
            })
            .collect();
        table.push(row);
    }
    Ok(table)
}

/// `q (e^{2t} - 1) / 2`.
fn half_q_term(n: usize) -> TruncatedSeries2 {
    let e2 = TruncatedSeries2::exp_t(n, n, 2).sub(&TruncatedSeries2::one(n, n));
    let q_half = TruncatedSeries2::monomial(n, n, 1, 0, BigRational::new(1.into(), 2.into()));
    q_half.mul(&e2)
}
