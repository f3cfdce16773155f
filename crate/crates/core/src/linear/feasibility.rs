//! Exact phase-one simplex for `{A x = 0, x ≥ 1}`.
//!
//! Substituting `x = 1 + s` gives `A s = −A·1, s ≥ 0`. A positive rational
//! solution scales to a positive integer one, so feasibility here decides
//! whether the homogeneous system has a solution in the positive integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// A primitive positive integer vector in the kernel of `a`, if one exists.
pub fn positive_kernel_vector(a: &IntMatrix) -> Option<Vec<BigInt>> {
    let r = a.rows();
    let m = a.cols();
    if m == 0 {
        return None;
    }
    let width = m + r + 1;
    let rhs_col = m + r;
    let sums = a.row_sums();
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = vec![BigRational::zero(); width];
        let flip = sums[i].is_positive();
        for j in 0..m {
            let v = BigRational::from_integer(a.get(i, j).clone());
            row[j] = if flip { -v } else { v };
        }
        row[m + i] = BigRational::one();
        let rhs = BigRational::from_integer(-&sums[i]);
        row[rhs_col] = if flip { -rhs } else { rhs };
        t.push(row);
    }
    let mut basis: Vec<usize> = (m..m + r).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut w = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..m {
            w[j] -= &row[j];
        }
        w[rhs_col] -= &row[rhs_col];
    }
    loop {
        let Some(enter) = (0..m + r).find(|&j| w[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..r {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs_col] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let (p, _) = leave.expect("phase-one objective is bounded");
        let inv = t[p][enter].recip();
        for x in t[p].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        let f = w[enter].clone();
        for (x, y) in w.iter_mut().zip(&pivot_row) {
            *x -= &f * y;
        }
        basis[p] = enter;
    }
    if !w[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::one(); m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            x[b] += &t[i][rhs_col];
        }
    }
    let lcm = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    Some(ints.into_iter().map(|v| v / &g).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(rows: &[&[i64]]) -> Option<Vec<i64>> {
        positive_kernel_vector(&IntMatrix::from_i64_rows(rows))
            .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
    }

    #[test]
    fn examples() {
        assert_eq!(witness(&[&[1, -2, 1]]), Some(vec![1, 1, 1]));
        assert_eq!(witness(&[&[1, 1]]), None);
        assert_eq!(witness(&[&[1, 1, -1]]), Some(vec![1, 1, 2]));
        assert_eq!(witness(&[&[1, 1, -1, -1]]), Some(vec![1, 1, 1, 1]));
        assert_eq!(witness(&[&[0, 0]]), Some(vec![1, 1]));
        assert_eq!(witness(&[&[1, -1, 0], &[0, 1, 0]]), None);
    }

    #[test]
    fn witness_is_positive_kernel_vector() {
        let a = IntMatrix::from_i64_rows(&[&[3, -1, -1, 0], &[1, 1, 0, -5], &[2, -2, -1, 5]]);
        let x = positive_kernel_vector(&a).unwrap();
        assert!(x.iter().all(Signed::is_positive));
        assert!(a.mul_vec(&x).iter().all(Zero::is_zero));
    }
}
