//! Exact linear algebra over Q for small integer matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank over Q of the matrix whose rows are `rows`.
///
/// Fraction-free elimination in `i128`; on overflow the computation is
/// repeated with big integers.
pub fn rank(rows: &[&[i64]]) -> usize {
    match rank_i128(rows) {
        Some(r) => r,
        None => rank_big(rows),
    }
}

fn rank_i128(rows: &[&[i64]]) -> Option<usize> {
    if rows.is_empty() {
        return Some(0);
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            for c in col + 1..ncols {
                let v = m[rank][col]
                    .checked_mul(m[r][c])?
                    .checked_sub(m[r][col].checked_mul(m[rank][c])?)?;
                m[r][c] = v / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Some(rank)
}

fn rank_big(rows: &[&[i64]]) -> usize {
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    row_reduce(m).1.len()
}

/// Reduced row echelon form; returns the matrix and the pivot columns.
pub fn row_reduce(mut m: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// A basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[&[i64]], ncols: usize) -> Vec<Vec<BigRational>> {
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let (red, pivots) = row_reduce(m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -red[i][f].clone();
            }
            v
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
    if g.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| if x.is_negative() { -BigInt::one() } else { BigInt::one() })
        .unwrap();
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// Square matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub n: usize,
    pub e: Vec<Vec<BigRational>>,
}

impl QMat {
    pub fn from_cols(cols: &[Vec<BigRational>]) -> Self {
        let n = cols.len();
        let e = (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect();
        QMat { n, e }
    }

    pub fn from_i64_cols(cols: &[&[i64]]) -> Self {
        let cols: Vec<Vec<BigRational>> = cols
            .iter()
            .map(|c| c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_cols(&cols)
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        let n = self.n;
        let e = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(BigRational::zero(), |acc, k| acc + &self.e[i][k] * &o.e[k][j])
                    })
                    .collect()
            })
            .collect();
        QMat { n, e }
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| (0..self.n).fold(BigRational::zero(), |acc, k| acc + &self.e[i][k] * &v[k]))
            .collect()
    }

    pub fn transpose(&self) -> QMat {
        let e = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.e[j][i].clone()).collect())
            .collect();
        QMat { n: self.n, e }
    }

    pub fn inverse(&self) -> Option<QMat> {
        let n = self.n;
        let aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row = self.e[i].clone();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        let (red, pivots) = row_reduce(aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(QMat {
            n,
            e: red.into_iter().map(|row| row[n..].to_vec()).collect(),
        })
    }

    /// Solve `self · x = b`.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        Some(self.inverse()?.apply(b))
    }
}

/// `Some(c)` with `u = c·v` when the vectors are proportional (`v` nonzero).
pub fn proportionality(u: &[BigRational], v: &[BigRational]) -> Option<BigRational> {
    let k = v.iter().position(|x| !x.is_zero())?;
    let c = &u[k] / &v[k];
    u.iter()
        .zip(v)
        .all(|(a, b)| *a == &c * b)
        .then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let a: [&[i64]; 3] = [&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]];
        assert_eq!(rank(&a), 2);
        let b: [&[i64]; 2] = [&[0, 0], &[0, 0]];
        assert_eq!(rank(&b), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn big_fallback_agrees() {
        let big = i64::MAX / 3;
        let a: [&[i64]; 3] = [&[big, 1, 7], &[3, big, 2], &[big - 1, big + 1, 9]];
        assert_eq!(rank_i128(&a).unwrap_or_else(|| rank_big(&a)), rank_big(&a));
    }

    #[test]
    fn nullspace_of_point() {
        // x_i + x_{i+1} for i = 0..4 in P^5 meet at (1:-1:1:-1:1:-1)
        let rows: Vec<Vec<i64>> = (0..5)
            .map(|i| {
                let mut v = vec![0; 6];
                v[i] = 1;
                v[i + 1] = 1;
                v
            })
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let ns = nullspace(&refs, 6);
        assert_eq!(ns.len(), 1);
        let v: Vec<i64> = primitive_integer(&ns[0])
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(v, vec![1, -1, 1, -1, 1, -1]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMat::from_i64_cols(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 3]]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id.e[i][j], if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
        let singular = QMat::from_i64_cols(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }
}
