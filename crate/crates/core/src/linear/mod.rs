//! Integer linear systems `A x = b`: ranks, abundance, positivity, the
//! maximum 1-density, induced subsystems, partition contractions, solution
//! enumeration and the game boards built from solutions.

mod feasibility;
mod matrix;
mod pairing;
mod partition;
mod solutions;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub use feasibility::positive_kernel_vector;
pub use matrix::{rref, IntMatrix};
pub use pairing::PairingCertificate;
pub use partition::{classify_partition, contract, PartitionClass, PartitionClassifier, SetPartition};
pub use solutions::{
    ap_hypergraph, ap_system, build_rado_hypergraph, enumerate_solutions, for_each_solution,
    SolutionMode, DEFAULT_ENUMERATION_BUDGET,
};

/// Largest column count for which subset enumeration over columns is attempted.
pub const MAX_SUBSET_COLUMNS: usize = 20;

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::bigint_vec::nested::serialize(&self.to_rows(), s)
    }
}

/// The system `A x = b` with integer `A` (r×m) and `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    a: IntMatrix,
    b: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    #[serde(rename = "A", with = "crate::serde_util::bigint_vec::nested")]
    a: Vec<Vec<BigInt>>,
    #[serde(default, with = "crate::serde_util::bigint_vec")]
    b: Vec<BigInt>,
}

impl LinearSystem {
    pub fn new(a: IntMatrix, b: Vec<BigInt>) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::input("matrix must have at least one row and one column"));
        }
        if b.len() != a.rows() {
            return Err(Error::input(format!(
                "right-hand side has length {} but the matrix has {} rows",
                b.len(),
                a.rows()
            )));
        }
        Ok(LinearSystem { a, b })
    }

    pub fn homogeneous(a: IntMatrix) -> Result<Self> {
        let b = vec![BigInt::zero(); a.rows()];
        Self::new(a, b)
    }

    pub fn from_i64(rows: &[&[i64]], b: &[i64]) -> Result<Self> {
        let a = IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .ok_or_else(|| Error::input("rows have different lengths"))?;
        Self::new(a, b.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `x₁ + x₂ = x₃ + x₄`.
    pub fn sidon() -> Self {
        Self::from_i64(&[&[1, 1, -1, -1]], &[0]).expect("valid")
    }

    /// `x₁ + x₂ = x₃`.
    pub fn schur() -> Self {
        Self::from_i64(&[&[1, 1, -1]], &[0]).expect("valid")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[BigInt] {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b.iter().all(Zero::is_zero)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        let a = IntMatrix::from_rows(file.a).ok_or_else(|| Error::input("rows have different lengths"))?;
        if file.b.is_empty() {
            Self::homogeneous(a)
        } else {
            Self::new(a, file.b)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SystemFile {
            a: self.a.to_rows(),
            b: self.b.clone(),
        })
        .expect("serializable")
    }
}

/// A set `Q` of column indices of an `m`-column matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ColumnSelection {
    m: usize,
    cols: Vec<usize>,
}

impl ColumnSelection {
    pub fn new(m: usize, mut cols: Vec<usize>) -> Result<Self> {
        cols.sort_unstable();
        cols.dedup();
        if let Some(&c) = cols.iter().find(|&&c| c >= m) {
            return Err(Error::input(format!("column {c} out of range for {m} columns")));
        }
        Ok(ColumnSelection { m, cols })
    }

    pub fn all(m: usize) -> Self {
        ColumnSelection { m, cols: (0..m).collect() }
    }

    pub fn columns(&self) -> &[usize] {
        &self.cols
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.m).filter(|j| self.cols.binary_search(j).is_err()).collect()
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    a.rank()
}

/// `r_Q = rank(A) − rank(A restricted to the columns outside Q)`.
pub fn column_defect(a: &IntMatrix, q: &ColumnSelection) -> usize {
    a.rank() - a.select_columns(&q.complement()).rank()
}

/// Positive rank, and deleting any one or two columns keeps the rank.
pub fn is_abundant(a: &IntMatrix) -> bool {
    let r = a.rank();
    if r == 0 {
        return false;
    }
    let m = a.cols();
    if m <= 2 {
        return false;
    }
    for i in 0..m {
        for j in i..m {
            let keep: Vec<usize> = (0..m).filter(|&c| c != i && c != j).collect();
            if a.select_columns(&keep).rank() < r {
                return false;
            }
        }
    }
    true
}

/// Whether `A x = 0` has a solution with every entry a positive integer.
pub fn is_positive(a: &IntMatrix) -> bool {
    positive_kernel_vector(a).is_some()
}

/// `rank(A^{Q̄})` for every column mask `Q`, indexed by mask.
pub(crate) fn complement_ranks(a: &IntMatrix) -> Result<Vec<usize>> {
    let m = a.cols();
    if m > MAX_SUBSET_COLUMNS {
        return Err(Error::capacity("column-subset enumeration", MAX_SUBSET_COLUMNS as u64));
    }
    let full = (1u32 << m) - 1;
    Ok((0..=full)
        .map(|mask| {
            let keep: Vec<usize> = (0..m).filter(|&j| (full & !mask) >> j & 1 == 1).collect();
            a.select_columns(&keep).rank()
        })
        .collect())
}

/// The maximum 1-density together with a maximizing column set of minimum size
/// (lexicographically first among those).
#[derive(Clone, Debug, Serialize)]
pub struct OneDensity {
    #[serde(with = "crate::serde_util::ratio")]
    pub value: BigRational,
    pub witness: ColumnSelection,
}

fn density_ratio(size: usize, defect: usize) -> BigRational {
    BigRational::new(BigInt::from(size as i64 - 1), BigInt::from(size as i64 - defect as i64 - 1))
}

/// `m₁(A) = max_{|Q| ≥ 2} (|Q| − 1)/(|Q| − r_Q − 1)` for abundant `A`.
pub fn max_one_density(a: &IntMatrix) -> Result<OneDensity> {
    if !is_abundant(a) {
        return Err(Error::precondition("the maximum 1-density needs an abundant matrix"));
    }
    let m = a.cols();
    let ranks = complement_ranks(a)?;
    let r = a.rank();
    let mut best: Option<(BigRational, usize, Vec<usize>)> = None;
    for mask in 1u32..1 << m {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let ratio = density_ratio(size, r - ranks[mask as usize]);
        let cols: Vec<usize> = (0..m).filter(|&j| mask >> j & 1 == 1).collect();
        let better = match &best {
            None => true,
            Some((v, s, c)) => match ratio.cmp(v) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => (size, &cols) < (*s, c),
            },
        };
        if better {
            best = Some((ratio, size, cols));
        }
    }
    let (value, _, cols) = best.expect("abundant matrices have at least three columns");
    Ok(OneDensity {
        value,
        witness: ColumnSelection { m, cols },
    })
}

/// Every nonempty proper column set with at least two columns has ratio strictly below `m₁(A)`.
pub fn is_strictly_balanced(a: &IntMatrix) -> Result<bool> {
    let m1 = max_one_density(a)?.value;
    let m = a.cols();
    let ranks = complement_ranks(a)?;
    let r = a.rank();
    let full = (1u32 << m) - 1;
    Ok((1..full)
        .filter(|mask: &u32| mask.count_ones() >= 2)
        .all(|mask| density_ratio(mask.count_ones() as usize, r - ranks[mask as usize]) < m1))
}

/// `B(A,Q)` and `c(A,Q,b)` with the row transformation `P` that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct SubsystemResult {
    pub columns: ColumnSelection,
    pub defect: usize,
    pub b_matrix: IntMatrix,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub c: Vec<BigInt>,
    /// Invertible `P` whose first `defect` rows of `P·A` vanish outside `Q`.
    pub transform: IntMatrix,
}

impl SubsystemResult {
    pub fn system(&self) -> LinearSystem {
        LinearSystem {
            a: self.b_matrix.clone(),
            b: self.c.clone(),
        }
    }

    /// Re-derives the block structure of `P·A` from the stored transform.
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        let r = sys.rows();
        let p = &self.transform;
        if p.rows() != r || p.cols() != r || p.rank() != r {
            return false;
        }
        let pa = p.mul(sys.matrix());
        let pb = p.mul_vec(sys.rhs());
        let top: Vec<usize> = (0..self.defect).collect();
        let rest: Vec<usize> = (self.defect..r).collect();
        let qbar = self.columns.complement();
        pa.select_rows(&top).select_columns(&qbar).is_zero()
            && pa.select_rows(&top).select_columns(self.columns.columns()) == self.b_matrix
            && pb[..self.defect] == self.c[..]
            && self.b_matrix.rank() == self.defect
            && pa.select_rows(&rest).select_columns(&qbar).rank() == sys.matrix().rank() - self.defect
    }
}

/// Builds `B(A,Q)` by fraction-free elimination on the columns outside `Q`
/// (leftmost column first, smallest available row as pivot), then keeping the
/// first `r_Q` independent rows among those zeroed outside `Q`.
pub fn induced_subsystem(sys: &LinearSystem, q: &ColumnSelection) -> Result<SubsystemResult> {
    let a = sys.matrix();
    let (r, m) = (a.rows(), a.cols());
    if q.m != m {
        return Err(Error::input("column selection does not match the matrix width"));
    }
    let defect = column_defect(a, q);
    if defect == 0 {
        return Err(Error::precondition("induced subsystem needs r_Q > 0"));
    }
    // augmented rows [A | b | I]
    let mut rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(sys.rhs()[i].clone());
            row.extend((0..r).map(|j| BigInt::from((i == j) as i64)));
            row
        })
        .collect();
    let mut used = vec![false; r];
    for &col in &q.complement() {
        let Some(p) = (0..r).find(|&i| !used[i] && !rows[i][col].is_zero()) else {
            continue;
        };
        used[p] = true;
        let pivot_row = rows[p].clone();
        for i in 0..r {
            if used[i] || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            let lead = &pivot_row[col];
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                *x = lead * &*x - &f * y;
            }
            matrix::normalize_row(&mut rows[i]);
        }
    }
    let mut selected: Vec<usize> = Vec::new();
    for i in (0..r).filter(|&i| !used[i]) {
        let mut trial: Vec<Vec<BigInt>> = selected
            .iter()
            .map(|&s| q.cols.iter().map(|&c| rows[s][c].clone()).collect())
            .collect();
        trial.push(q.cols.iter().map(|&c| rows[i][c].clone()).collect());
        if IntMatrix::from_rows(trial).expect("rectangular").rank() == selected.len() + 1 {
            selected.push(i);
            if selected.len() == defect {
                break;
            }
        }
    }
    debug_assert_eq!(selected.len(), defect);
    let order: Vec<usize> = selected
        .iter()
        .copied()
        .chain((0..r).filter(|i| !selected.contains(i)))
        .collect();
    let b_matrix = IntMatrix::from_rows(
        selected
            .iter()
            .map(|&s| q.cols.iter().map(|&c| rows[s][c].clone()).collect())
            .collect(),
    )
    .expect("rectangular");
    let c = selected.iter().map(|&s| rows[s][m].clone()).collect();
    let transform = IntMatrix::from_rows(order.iter().map(|&i| rows[i][m + 1..].to_vec()).collect())
        .expect("rectangular");
    Ok(SubsystemResult {
        columns: q.clone(),
        defect,
        b_matrix,
        c,
        transform,
    })
}

/// `B(A,Q)` for a minimum-size `Q` attaining `m₁(A)`; the result is checked to
/// be abundant, positive and strictly balanced with the same maximum 1-density.
pub fn strictly_balanced_subsystem(sys: &LinearSystem) -> Result<SubsystemResult> {
    let a = sys.matrix();
    if !is_positive(a) {
        return Err(Error::precondition("matrix is not positive"));
    }
    let density = max_one_density(a)?;
    let sub = induced_subsystem(sys, &density.witness)?;
    let b = &sub.b_matrix;
    if !is_abundant(b) {
        return Err(Error::precondition("induced subsystem is not abundant"));
    }
    if !is_positive(b) {
        return Err(Error::precondition("induced subsystem is not positive"));
    }
    if max_one_density(b)?.value != density.value {
        return Err(Error::precondition("induced subsystem changed the maximum 1-density"));
    }
    if !is_strictly_balanced(b)? {
        return Err(Error::precondition("induced subsystem is not strictly balanced"));
    }
    Ok(sub)
}
