//! Enumeration of solutions in `[1, n]^m` and the Rado game boards built from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::matrix::to_rational_rows;
use super::partition::{PartitionClass, PartitionClassifier, SetPartition};
use super::{rref, IntMatrix, LinearSystem};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Default cap on the number of free-variable assignments scanned.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Which equality patterns among the entries of a solution are kept.
#[derive(Clone, Debug)]
pub enum SolutionMode {
    AllInteger,
    /// Pairwise distinct entries.
    Proper,
    /// Entries equal exactly within the blocks of the partition.
    MatchingPartition(SetPartition),
    /// Equality pattern is one of the listed partitions.
    Family(Vec<SetPartition>),
    /// Equality pattern classified as proper or non-degenerate.
    NonDegenerate,
}

/// The `(k−2)×k` system whose solutions are the `k`-term arithmetic progressions.
pub fn ap_system(k: usize) -> Result<LinearSystem> {
    if k < 3 {
        return Err(Error::input(format!("progression length {k} is below 3")));
    }
    let rows: Vec<Vec<BigInt>> = (0..k - 2)
        .map(|i| {
            (0..k)
                .map(|j| {
                    BigInt::from(match j.wrapping_sub(i) {
                        0 | 2 => 1,
                        1 => -2,
                        _ => 0,
                    })
                })
                .collect()
        })
        .collect();
    LinearSystem::homogeneous(IntMatrix::from_rows(rows).expect("rectangular"))
}

/// The board of all `k`-term progressions in `[1, n]`, with value `x` at vertex `x − 1`.
pub fn ap_hypergraph(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::input(format!("progression length {k} is below 2")));
    }
    let mut verts: Vec<Vertex> = Vec::new();
    for a in 0..n {
        let mut d = 1;
        while a + (k - 1) * d < n {
            verts.extend((0..k).map(|i| (a + i * d) as Vertex));
            d += 1;
        }
    }
    Hypergraph::from_sorted_uniform(n, k, verts)
}

/// Pivot rows `den·x_pivot = constant − Σ coeff·x_free`, in integers.
struct Parametrization {
    pivots: Vec<usize>,
    free: Vec<usize>,
    dens: Vec<i128>,
    consts: Vec<i128>,
    coeffs: Vec<Vec<i128>>,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128()
        .ok_or_else(|| Error::capacity("solution parametrization coefficient size", i128::MAX as u64))
}

fn parametrize(sys: &LinearSystem) -> Result<Option<Parametrization>> {
    let m = sys.cols();
    let mut rows = to_rational_rows(sys.matrix());
    for (row, b) in rows.iter_mut().zip(sys.rhs()) {
        row.push(BigRational::from_integer(b.clone()));
    }
    let (reduced, pivots) = rref(&rows);
    if pivots.contains(&m) {
        return Ok(None);
    }
    let free: Vec<usize> = (0..m).filter(|j| !pivots.contains(j)).collect();
    let mut dens = Vec::new();
    let mut consts = Vec::new();
    let mut coeffs = Vec::new();
    for (i, _) in pivots.iter().enumerate() {
        let row = &reduced[i];
        let lcm = row.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let scale = |v: &BigRational| v.numer() * (&lcm / v.denom());
        dens.push(to_i128(&lcm)?);
        consts.push(to_i128(&scale(&row[m]))?);
        coeffs.push(free.iter().map(|&f| to_i128(&scale(&row[f]))).collect::<Result<Vec<_>>>()?);
    }
    Ok(Some(Parametrization {
        pivots,
        free,
        dens,
        consts,
        coeffs,
    }))
}

fn equality_pattern_matches(x: &[i64], labels: &[usize]) -> bool {
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if (x[i] == x[j]) != (labels[i] == labels[j]) {
                return false;
            }
        }
    }
    true
}

fn is_proper(x: &[i64]) -> bool {
    (0..x.len()).all(|i| (i + 1..x.len()).all(|j| x[i] != x[j]))
}

enum Filter {
    All,
    Proper,
    Labels(Vec<Vec<usize>>),
    Classified(PartitionClassifier),
}

impl Filter {
    fn new(sys: &LinearSystem, mode: &SolutionMode) -> Result<Self> {
        let m = sys.cols();
        let check = |p: &SetPartition| {
            if p.ground_size() == m {
                Ok(p.labels())
            } else {
                Err(Error::input("partition does not match the number of columns"))
            }
        };
        Ok(match mode {
            SolutionMode::AllInteger => Filter::All,
            SolutionMode::Proper => Filter::Proper,
            SolutionMode::MatchingPartition(p) => Filter::Labels(vec![check(p)?]),
            SolutionMode::Family(ps) => Filter::Labels(ps.iter().map(check).collect::<Result<_>>()?),
            SolutionMode::NonDegenerate => Filter::Classified(PartitionClassifier::new(sys)?),
        })
    }

    fn keep(&self, x: &[i64]) -> Result<bool> {
        Ok(match self {
            Filter::All => true,
            Filter::Proper => is_proper(x),
            Filter::Labels(ls) => ls.iter().any(|l| equality_pattern_matches(x, l)),
            Filter::Classified(c) => {
                is_proper(x) || c.classify(&SetPartition::from_labels(x))? != PartitionClass::Degenerate
            }
        })
    }
}

/// Calls `f` on every solution in `[1, n]^m` of the requested kind, in
/// lexicographic order of the free variables. Pivot variables are the first
/// columns that are independent from the earlier ones. Returns the number of
/// solutions visited.
pub fn for_each_solution(
    sys: &LinearSystem,
    n: u64,
    mode: &SolutionMode,
    budget: u64,
    mut f: impl FnMut(&[i64]),
) -> Result<u64> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    if n > i64::MAX as u64 / 4 {
        return Err(Error::input("n is too large"));
    }
    let filter = Filter::new(sys, mode)?;
    let Some(par) = parametrize(sys)? else {
        return Ok(0);
    };
    let cost = (n as f64).powi(par.free.len() as i32);
    if cost > budget as f64 {
        return Err(Error::capacity(
            format!("enumeration of {n}^{} free assignments", par.free.len()),
            budget,
        ));
    }
    let m = sys.cols();
    let n = n as i64;
    let mut x = vec![0i64; m];
    let mut free_vals = vec![1i64; par.free.len()];
    // numerators for the current free assignment
    let mut nums: Vec<i128> = (0..par.pivots.len())
        .map(|i| par.consts[i] - par.coeffs[i].iter().sum::<i128>())
        .collect();
    let mut count = 0u64;
    'outer: loop {
        let mut ok = true;
        for (i, &p) in par.pivots.iter().enumerate() {
            let (q, r) = nums[i].div_rem(&par.dens[i]);
            if r != 0 || q < 1 || q > n as i128 {
                ok = false;
                break;
            }
            x[p] = q as i64;
        }
        if ok {
            for (k, &fcol) in par.free.iter().enumerate() {
                x[fcol] = free_vals[k];
            }
            if filter.keep(&x)? {
                count += 1;
                f(&x);
            }
        }
        // advance the odometer, last free variable fastest
        let mut k = par.free.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if free_vals[k] < n {
                free_vals[k] += 1;
                for (i, num) in nums.iter_mut().enumerate() {
                    *num -= par.coeffs[i][k];
                }
                break;
            }
            for (i, num) in nums.iter_mut().enumerate() {
                *num += par.coeffs[i][k] * (n as i128 - 1);
            }
            free_vals[k] = 1;
        }
    }
    Ok(count)
}

/// All solutions in `[1, n]^m` of the requested kind.
pub fn enumerate_solutions(sys: &LinearSystem, n: u64, mode: &SolutionMode) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for_each_solution(sys, n, mode, DEFAULT_ENUMERATION_BUDGET, |x| out.push(x.to_vec()))?;
    Ok(out)
}

/// The board on `[1, n]` (value `x` at vertex `x − 1`) whose edges are the
/// entry sets of the enumerated solutions.
pub fn build_rado_hypergraph(sys: &LinearSystem, n: u64, mode: &SolutionMode) -> Result<Hypergraph> {
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    for_each_solution(sys, n, mode, DEFAULT_ENUMERATION_BUDGET, |x| {
        let mut e: Vec<Vertex> = x.iter().map(|&v| (v - 1) as Vertex).collect();
        e.sort_unstable();
        e.dedup();
        edges.push(e);
    })?;
    Hypergraph::new(n as usize, edges)
}
