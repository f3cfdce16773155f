//! Pattern hypergraphs `G` and the boards whose edges are the copies of `G`
//! inside the complete `r`-uniform hypergraph on `[n]`.
//!
//! Board vertices are the `r`-subsets of `[n]`, indexed in colex order:
//! `{c₁ < … < c_r}` has index `Σ C(c_i, i)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{for_each_combination, Hypergraph, Vertex};

/// Largest pattern edge count for which subpatterns are enumerated.
pub const MAX_PATTERN_EDGES: usize = 20;

/// An `r`-uniform pattern on `[0, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pattern {
    r: usize,
    vertices: usize,
    edges: Vec<Vec<u32>>,
}

impl Pattern {
    pub fn new(r: usize, vertices: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        if r < 2 {
            return Err(Error::input("pattern uniformity must be at least 2"));
        }
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != r {
                return Err(Error::input(format!("edge {e:?} does not have {r} vertices")));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("edge {e:?} repeats a vertex")));
            }
            if e[r - 1] as usize >= vertices {
                return Err(Error::input(format!("edge {e:?} leaves [0, {vertices})")));
            }
            out.push(e);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Pattern { r, vertices, edges: out })
    }

    pub fn complete(r: usize, vertices: usize) -> Result<Self> {
        let all: Vec<u32> = (0..vertices as u32).collect();
        let mut edges = Vec::new();
        for_each_combination(&all, r, |c| edges.push(c.to_vec()));
        Self::new(r, vertices, edges)
    }

    pub fn triangle() -> Self {
        Self::complete(2, 3).expect("valid")
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Vertices lying in at least one edge.
    pub fn non_isolated_count(&self) -> usize {
        count_covered(self.edges.iter())
    }

    /// Drops isolated vertices, relabelling the rest in increasing order.
    pub fn without_isolated(&self) -> Pattern {
        let mut map = vec![u32::MAX; self.vertices];
        let mut next = 0;
        for v in 0..self.vertices {
            if self.edges.iter().any(|e| e.contains(&(v as u32))) {
                map[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| map[v as usize]).collect())
            .collect();
        Pattern::new(self.r, next as usize, edges).expect("relabelled pattern stays valid")
    }

    /// At least two edges and all edges pairwise disjoint.
    pub fn is_matching(&self) -> bool {
        self.edges.len() >= 2 && self.non_isolated_count() == self.r * self.edges.len()
    }

    /// Text form: `r <r>`, `v <v>`, then one edge per line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut r = None;
        let mut v = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let mut parts = line.split_whitespace();
            if r.is_none() || v.is_none() {
                let key = parts.next();
                let val = parts
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| err("expected `r <int>` or `v <int>`"))?;
                match (key, r.is_none()) {
                    (Some("r"), true) => r = Some(val),
                    (Some("v"), false) => v = Some(val),
                    _ => return Err(err("header must be `r <r>` then `v <v>`")),
                }
                continue;
            }
            let edge = parts
                .map(|s| s.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| err(&e.to_string()))?;
            edges.push(edge);
        }
        match (r, v) {
            (Some(r), Some(v)) => Pattern::new(r, v, edges),
            _ => Err(Error::Parse {
                line: 0,
                msg: "missing `r` or `v` header".into(),
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("r {}\nv {}\n", self.r, self.vertices);
        for e in &self.edges {
            let items: Vec<String> = e.iter().map(u32::to_string).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }
}

fn count_covered<'a>(edges: impl Iterator<Item = &'a Vec<u32>>) -> usize {
    let mut seen: HashSet<u32> = HashSet::new();
    for e in edges {
        seen.extend(e.iter().copied());
    }
    seen.len()
}

/// The r-density and a maximizing subpattern with the fewest edges
/// (lexicographically smallest edge list among those).
#[derive(Clone, Debug, Serialize)]
pub struct RDensity {
    #[serde(with = "crate::serde_util::ratio")]
    pub value: BigRational,
    pub witness: Pattern,
}

/// `m_r(G) = max (e(F) − 1)/(v(F) − r)` over subpatterns with `v(F) ≥ r + 1`,
/// where `v(F)` counts only vertices covered by `F`.
pub fn r_density(g: &Pattern) -> Result<RDensity> {
    let r = g.r;
    if g.edges.is_empty() || g.non_isolated_count() <= r {
        return Err(Error::precondition(format!(
            "pattern needs at least one edge and {} non-isolated vertices",
            r + 1
        )));
    }
    let e = g.edges.len();
    if e > MAX_PATTERN_EDGES {
        return Err(Error::capacity("subpattern enumeration", MAX_PATTERN_EDGES as u64));
    }
    let mut best: Option<(BigRational, Vec<Vec<u32>>)> = None;
    for mask in 1u32..1 << e {
        let chosen: Vec<Vec<u32>> = (0..e).filter(|&i| mask >> i & 1 == 1).map(|i| g.edges[i].clone()).collect();
        let v = count_covered(chosen.iter());
        if v <= r {
            continue;
        }
        let ratio = BigRational::new(BigInt::from(chosen.len() - 1), BigInt::from(v - r));
        let better = match &best {
            None => true,
            Some((bv, be)) => ratio > *bv || (ratio == *bv && (chosen.len(), &chosen) < (be.len(), be)),
        };
        if better {
            best = Some((ratio, chosen));
        }
    }
    let (value, edges) = best.expect("the full pattern qualifies");
    Ok(RDensity {
        value,
        witness: Pattern::new(r, g.vertices, edges)?.without_isolated(),
    })
}

/// A strictly `r`-balanced subpattern attaining `m_r(G)`: no proper
/// subpattern on at least `r + 1` vertices reaches the same ratio.
pub fn strictly_balanced_sub(g: &Pattern) -> Result<Pattern> {
    Ok(r_density(g)?.witness)
}

/// Colex rank of a strictly increasing set.
pub fn colex_index(set: &[u32]) -> u64 {
    set.iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_index`] for `r`-sets.
pub fn colex_unrank(mut index: u64, r: usize) -> Vec<u32> {
    let mut out = vec![0u32; r];
    for i in (1..=r).rev() {
        let mut c = i as u64 - 1;
        while binomial(c + 1, i as u64) <= index {
            c += 1;
        }
        out[i - 1] = c as u32;
        index -= binomial(c, i as u64);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Size limits for [`build_building_hypergraph`].
#[derive(Clone, Copy, Debug)]
pub struct BuildLimits {
    pub max_vertices: u64,
    /// Cap on `C(n, v(G))·v(G)!` placements examined.
    pub max_placements: u64,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            max_vertices: 5_000_000,
            max_placements: 200_000_000,
        }
    }
}

/// All copies of `G` in the complete `r`-uniform hypergraph on `[n]`; each copy
/// is the set of colex indices of its edges.
pub fn build_building_hypergraph(g: &Pattern, n: usize, limits: BuildLimits) -> Result<Hypergraph> {
    let g = g.without_isolated();
    let v = g.vertices;
    if n < v {
        return Err(Error::input(format!("n = {n} is below the pattern's {v} vertices")));
    }
    let board_vertices = binomial(n as u64, g.r as u64);
    if board_vertices > limits.max_vertices || board_vertices > u32::MAX as u64 {
        return Err(Error::capacity("board vertex count C(n, r)", limits.max_vertices));
    }
    let placements = (binomial(n as u64, v as u64) as f64) * (1..=v).map(|i| i as f64).product::<f64>();
    if placements > limits.max_placements as f64 {
        return Err(Error::capacity("pattern placements C(n, v)·v!", limits.max_placements));
    }
    let ground: Vec<u32> = (0..n as u32).collect();
    let mut perm: Vec<usize> = (0..v).collect();
    let mut copies: Vec<Vec<Vertex>> = Vec::new();
    let mut local: HashSet<Vec<Vertex>> = HashSet::new();
    let mut image = vec![0u32; g.r];
    for_each_combination(&ground, v, |subset| {
        local.clear();
        for_each_permutation(&mut perm, &mut |p| {
            let mut sig: Vec<Vertex> = g
                .edges
                .iter()
                .map(|e| {
                    for (slot, &x) in image.iter_mut().zip(e) {
                        *slot = subset[p[x as usize]];
                    }
                    image.sort_unstable();
                    colex_index(&image) as Vertex
                })
                .collect();
            sig.sort_unstable();
            if local.insert(sig.clone()) {
                copies.push(sig);
            }
        });
    });
    Hypergraph::new(board_vertices as usize, copies)
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
