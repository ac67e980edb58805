//! Exact integer and rational linear algebra on short coordinate vectors.
//!
//! Everything here is fraction-free over the integers except
//! [`solve_in_basis`], which returns rational coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank<R: AsRef<[i64]>>(rows: &[R]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].as_ref().len();
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.as_ref().iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col];
        for i in rank + 1..nrows {
            let factor = m[i][col];
            for j in col..ncols {
                // Exact division is the Bareiss invariant.
                m[i][j] = (pivot * m[i][j] - factor * m[rank][j]) / prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

fn content(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Divides out the content and makes the first nonzero entry positive.
fn normalize(v: &mut [i128]) {
    let g = content(v);
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        if first < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Incrementally built row-echelon basis of a subspace of `Q^dim`.
///
/// Rows are kept primitive; row `k` vanishes on the pivots of rows `< k`.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce_raw(&self, v: &[i64]) -> Vec<i128> {
        debug_assert_eq!(v.len(), self.dim);
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let a = w[p];
            if a == 0 {
                continue;
            }
            let b = row[p];
            let g = a.gcd(&b);
            let (sb, sa) = (b / g, a / g);
            for (x, &y) in w.iter_mut().zip(row) {
                *x = sb * *x - sa * y;
            }
            let c = content(&w);
            if c > 1 {
                w.iter_mut().for_each(|x| *x /= c);
            }
        }
        w
    }

    /// Residual of `v` modulo the span, as a primitive vector with positive
    /// leading entry. Zero iff `v` lies in the span.
    pub fn residual(&self, v: &[i64]) -> Vec<i64> {
        let mut w = self.reduce_raw(v);
        normalize(&mut w);
        w.into_iter()
            .map(|x| i64::try_from(x).expect("residual overflow"))
            .collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce_raw(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the basis; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut w = self.reduce_raw(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        normalize(&mut w);
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// Coordinates of `v` in the (linearly independent) `basis`, or `None` when
/// `v` is outside its span.
pub fn solve_in_basis<R: AsRef<[i64]>>(basis: &[R], v: &[i64]) -> Option<Vec<BigRational>> {
    let m = basis.len();
    let n = v.len();
    // Augmented n x (m+1) system, columns are basis vectors.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis
                .iter()
                .map(|b| BigRational::from_integer(BigInt::from(b.as_ref()[i])))
                .collect();
            row.push(BigRational::from_integer(BigInt::from(v[i])));
            row
        })
        .collect();
    let mut pivot_cols = Vec::with_capacity(m);
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            // Dependent basis; callers never pass one.
            return None;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=m {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = a[i][m].clone();
    }
    Some(x)
}

/// Clears denominators: returns the least positive common denominator and
/// the scaled integer numerators.
pub fn clear_denominators(xs: &[BigRational]) -> (BigInt, Vec<BigInt>) {
    let den = xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let nums = xs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (den.abs(), nums)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = [vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]];
        assert_eq!(bareiss_rank(&rows), 2);
        let empty: [Vec<i64>; 0] = [];
        assert_eq!(bareiss_rank(&empty), 0);
        assert_eq!(bareiss_rank(&[vec![0, 0]]), 0);
    }

    #[test]
    fn bareiss_matches_echelon() {
        let rows = [
            vec![2, 2, 0, 0],
            vec![1, -1, -1, 1],
            vec![3, 1, -1, 1],
            vec![0, 0, 2, -2],
        ];
        let mut e = Echelon::new(4);
        for r in &rows {
            e.insert(r);
        }
        assert_eq!(bareiss_rank(&rows), e.rank());
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn residual_detects_parallel_directions() {
        let mut e = Echelon::new(3);
        e.insert(&[1, -1, 0]);
        let a = e.residual(&[0, 1, -1]);
        let b = e.residual(&[1, 0, -1]);
        assert_eq!(a, b);
        assert!(e.residual(&[2, -2, 0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn solve_recovers_coefficients() {
        let basis = [vec![1, -1, 0], vec![0, 1, -1]];
        let x = solve_in_basis(&basis, &[1, 0, -1]).unwrap();
        assert_eq!(x, vec![BigRational::one(), BigRational::one()]);
        assert!(solve_in_basis(&basis, &[1, 1, 1]).is_none());
        let half = solve_in_basis(&[vec![2, 0]], &[1, 0]).unwrap();
        assert_eq!(half[0], BigRational::new(1.into(), 2.into()));
    }
}
