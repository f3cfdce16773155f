//! Two-variable relations forced by non-abundant systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::{normalize_row, to_rational_rows};
use super::{is_abundant, rref, IntMatrix, LinearSystem};
use crate::error::{Error, Result};

/// Every solution satisfies `v1·x[i1] + v2·x[i2] = rhs`, with `(v1, v2) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingCertificate {
    pub i1: usize,
    pub i2: usize,
    #[serde(serialize_with = "ser_big")]
    pub v1: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub v2: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigInt,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

impl PairingCertificate {
    pub fn new(i1: usize, i2: usize, v1: i64, v2: i64, rhs: i64) -> Self {
        PairingCertificate {
            i1,
            i2,
            v1: v1.into(),
            v2: v2.into(),
            rhs: rhs.into(),
        }
    }

    /// Finds the first pair of columns (lexicographically) whose deletion
    /// lowers the rank, then a row combination vanishing on every other column.
    pub fn for_system(sys: &LinearSystem) -> Result<Self> {
        let a = sys.matrix();
        let r = a.rank();
        if r == 0 {
            return Err(Error::precondition("pairing needs a matrix of positive rank"));
        }
        if is_abundant(a) {
            return Err(Error::precondition("abundant matrices have no pairing certificate"));
        }
        let m = a.cols();
        let pairs = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
        let (i1, i2) = if m == 1 {
            (0, 0)
        } else {
            pairs
                .into_iter()
                .find(|&(i, j)| {
                    let keep: Vec<usize> = (0..m).filter(|&c| c != i && c != j).collect();
                    a.select_columns(&keep).rank() < r
                })
                .expect("non-abundant matrix of positive rank has a rank-lowering pair")
        };
        let keep: Vec<usize> = (0..m).filter(|&c| c != i1 && c != i2).collect();
        let y = left_kernel(&a.select_columns(&keep))
            .into_iter()
            .find(|y| {
                let combo = combine(y, a);
                !combo[i1].is_zero() || !combo[i2].is_zero()
            })
            .expect("rank drop implies a combination supported on the pair");
        let combo = combine(&y, a);
        let rhs: BigInt = y.iter().zip(sys.rhs()).map(|(c, b)| c * b).sum();
        let v2 = if i2 == i1 { BigInt::zero() } else { combo[i2].clone() };
        Ok(PairingCertificate {
            i1,
            i2,
            v1: combo[i1].clone(),
            v2,
            rhs,
        })
    }

    /// Values in `[1, n]` that complete the relation with `value` on the other side.
    pub fn targets(&self, value: i64, n: i64) -> Vec<i64> {
        let x = BigInt::from(value);
        let mut out = Vec::new();
        for (known, other) in [(&self.v1, &self.v2), (&self.v2, &self.v1)] {
            if other.is_zero() {
                continue;
            }
            let num = &self.rhs - known * &x;
            let (q, rem) = num.div_rem(other);
            if rem.is_zero() {
                if let Some(t) = q.to_i64() {
                    if (1..=n).contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn combine(y: &[BigInt], a: &IntMatrix) -> Vec<BigInt> {
    (0..a.cols())
        .map(|j| y.iter().enumerate().map(|(i, c)| c * a.get(i, j)).sum())
        .collect()
}

/// Integer basis of `{ y : yᵀ A = 0 }`.
fn left_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let r = a.rows();
    if a.cols() == 0 {
        return (0..r)
            .map(|i| (0..r).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
    }
    // kernel of the transpose
    let t: Vec<Vec<BigRational>> = (0..a.cols())
        .map(|j| {
            to_rational_rows(a)
                .iter()
                .map(|row| row[j].clone())
                .collect()
        })
        .collect();
    let (reduced, pivots) = rref(&t);
    let free: Vec<usize> = (0..r).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); r];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[i][f].clone();
            }
            let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            normalize_row(&mut ints);
            ints
        })
        .collect()
}
