//! Set partitions of the column indices, column contraction and the
//! classification of repeated-entry solution families.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{is_abundant, is_positive, max_one_density, IntMatrix, LinearSystem};
use crate::error::{Error, Result};

/// A partition of `[0, m)` into nonempty blocks, each sorted, ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        let mut out = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::input("partition has an empty block"));
            }
            block.sort_unstable();
            for &x in &block {
                if x >= m {
                    return Err(Error::input(format!("index {x} out of range for {m} columns")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::input(format!("index {x} appears twice")));
                }
            }
            out.push(block);
        }
        if let Some(x) = seen.iter().position(|&s| !s) {
            return Err(Error::input(format!("index {x} is not covered")));
        }
        out.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { blocks: out })
    }

    pub fn discrete(m: usize) -> Self {
        SetPartition {
            blocks: (0..m).map(|i| vec![i]).collect(),
        }
    }

    /// Partition whose blocks are the classes of equal labels.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut index: HashMap<&T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let b = *index.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
        }
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Block index of every element; blocks are numbered by first appearance.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.ground_size()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = i;
            }
        }
        out
    }

    /// Every partition of `[0, m)`, in restricted-growth order.
    pub fn all(m: usize) -> Vec<SetPartition> {
        let mut out = Vec::new();
        let mut labels = vec![0usize; m];
        fn go(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
            if i == labels.len() {
                out.push(SetPartition::from_labels(labels));
                return;
            }
            for l in 0..=max + 1 {
                labels[i] = l;
                go(i + 1, max.max(l), labels, out);
            }
        }
        if m == 0 {
            return out;
        }
        go(1, 0, &mut labels, &mut out);
        out
    }
}

/// `A_p`: one column per block, the sum of the block's columns.
pub fn contract(a: &IntMatrix, p: &SetPartition) -> Result<IntMatrix> {
    if p.ground_size() != a.cols() {
        return Err(Error::input(format!(
            "partition of {} indices does not match {} columns",
            p.ground_size(),
            a.cols()
        )));
    }
    let rows = (0..a.rows())
        .map(|i| {
            p.blocks()
                .iter()
                .map(|b| b.iter().map(|&j| a.get(i, j)).sum::<BigInt>())
                .collect()
        })
        .collect();
    Ok(IntMatrix::from_rows(rows).expect("rectangular"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PartitionClass {
    Proper,
    NonDegenerate,
    Degenerate,
}

/// Caches the properties of `A` needed to classify many partitions.
#[derive(Debug)]
pub struct PartitionClassifier {
    a: IntMatrix,
    positive: bool,
    m1: Option<BigRational>,
    cache: Mutex<HashMap<Vec<usize>, PartitionClass>>,
}

impl PartitionClassifier {
    pub fn new(sys: &LinearSystem) -> Result<Self> {
        let a = sys.matrix().clone();
        let positive = is_positive(&a);
        let m1 = if positive && is_abundant(&a) {
            Some(max_one_density(&a)?.value)
        } else {
            None
        };
        Ok(PartitionClassifier {
            a,
            positive,
            m1,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn classify(&self, p: &SetPartition) -> Result<PartitionClass> {
        if p.is_empty() {
            return Err(Error::input("partition has no blocks"));
        }
        let key = p.labels();
        if let Some(&c) = self.cache.lock().expect("poisoned").get(&key) {
            return Ok(c);
        }
        let class = self.classify_uncached(p)?;
        self.cache.lock().expect("poisoned").insert(key, class);
        Ok(class)
    }

    fn classify_uncached(&self, p: &SetPartition) -> Result<PartitionClass> {
        let contracted = contract(&self.a, p)?;
        if p.is_discrete() {
            return Ok(PartitionClass::Proper);
        }
        if !self.positive || p.len() < 2 || contracted.rank() == 0 {
            return Ok(PartitionClass::Degenerate);
        }
        let Some(m1) = &self.m1 else {
            return Ok(PartitionClass::NonDegenerate);
        };
        let keeps_order = if is_abundant(&contracted) {
            max_one_density(&contracted)?.value >= *m1
        } else {
            true
        };
        Ok(if keeps_order {
            PartitionClass::NonDegenerate
        } else {
            PartitionClass::Degenerate
        })
    }
}

pub fn classify_partition(sys: &LinearSystem, p: &SetPartition) -> Result<PartitionClass> {
    if p.ground_size() != sys.cols() {
        return Err(Error::input("partition does not match the number of columns"));
    }
    PartitionClassifier::new(sys)?.classify(p)
}
