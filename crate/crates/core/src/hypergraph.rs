//! Finite hypergraphs and the degree, density and stability parameters the
//! criteria and strategies are built on.
//!
//! Edges are stored flat: every edge is a strictly increasing run of vertex
//! indices inside one `Vec<u32>`, and the edge list itself is sorted
//! lexicographically with duplicates removed. A vertex-to-edge incidence index
//! is built lazily the first time it is needed.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Default cap on `|T|` for the exact independence-number computation.
pub const STABILITY_CAP: usize = 24;

#[derive(Clone, Debug)]
struct Incidence {
    offsets: Vec<usize>,
    edges: Vec<u32>,
}

/// A finite hypergraph on the vertex set `[0, vertex_count)`.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    vertex_count: usize,
    verts: Vec<Vertex>,
    edge_count: usize,
    /// Edge length when every edge has the same size, else 0 and `offsets` is used.
    stride: usize,
    offsets: Vec<usize>,
    uniformity: Option<usize>,
    incidence: OnceLock<Incidence>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edge_count == other.edge_count
            && self.edges().eq(other.edges())
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary edge lists. Vertices inside an edge
    /// may come in any order; repeated edges are merged.
    pub fn new<I, E>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if vertex_count > u32::MAX as usize {
            return Err(Error::input("vertex count exceeds u32 range"));
        }
        let mut verts = Vec::new();
        let mut offsets = vec![0usize];
        for edge in edges {
            let start = verts.len();
            verts.extend_from_slice(edge.as_ref());
            let slot = &mut verts[start..];
            slot.sort_unstable();
            for w in slot.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::input(format!("edge repeats vertex {}", w[0])));
                }
            }
            if let Some(&last) = slot.last() {
                if last as usize >= vertex_count {
                    return Err(Error::input(format!(
                        "vertex {last} out of range for {vertex_count} vertices"
                    )));
                }
            }
            offsets.push(verts.len());
        }
        Ok(Self::canonicalize(vertex_count, verts, offsets))
    }

    /// Builds a uniform hypergraph from a flat buffer of edges that are each
    /// already strictly increasing and listed in strictly increasing
    /// lexicographic order. Only checks the ordering, so it stays linear.
    pub(crate) fn from_sorted_uniform(vertex_count: usize, k: usize, verts: Vec<Vertex>) -> Result<Self> {
        if k == 0 || verts.len() % k != 0 {
            return Err(Error::input("flat edge buffer is not a multiple of the uniformity"));
        }
        let e = verts.len() / k;
        for i in 0..e {
            let edge = &verts[i * k..(i + 1) * k];
            if edge.windows(2).any(|w| w[0] >= w[1]) || edge[k - 1] as usize >= vertex_count {
                return Err(Error::input("edge not strictly increasing or out of range"));
            }
            if i > 0 && verts[(i - 1) * k..i * k] >= *edge {
                return Err(Error::input("edges not in strictly increasing order"));
            }
        }
        Ok(Hypergraph {
            vertex_count,
            verts,
            edge_count: e,
            stride: k,
            offsets: Vec::new(),
            uniformity: if e > 0 { Some(k) } else { None },
            incidence: OnceLock::new(),
        })
    }

    fn canonicalize(vertex_count: usize, verts: Vec<Vertex>, offsets: Vec<usize>) -> Self {
        let e = offsets.len() - 1;
        let slice = |i: usize| &verts[offsets[i]..offsets[i + 1]];
        let mut order: Vec<usize> = (0..e).collect();
        order.sort_unstable_by(|&a, &b| slice(a).cmp(slice(b)));
        order.dedup_by(|a, b| slice(*a) == slice(*b));

        let mut out_verts = Vec::with_capacity(verts.len());
        let mut out_offsets = Vec::with_capacity(order.len() + 1);
        out_offsets.push(0);
        let mut uniformity: Option<Option<usize>> = None;
        for &i in &order {
            let s = slice(i);
            out_verts.extend_from_slice(s);
            out_offsets.push(out_verts.len());
            uniformity = match uniformity {
                None => Some(Some(s.len())),
                Some(Some(k)) if k == s.len() => Some(Some(k)),
                _ => Some(None),
            };
        }
        let uniformity = uniformity.flatten();
        let stride = match uniformity {
            Some(k) if k > 0 => k,
            _ => 0,
        };
        Hypergraph {
            vertex_count,
            verts: out_verts,
            edge_count: order.len(),
            stride,
            offsets: if stride > 0 { Vec::new() } else { out_offsets },
            uniformity,
            incidence: OnceLock::new(),
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Hypergraph {
            vertex_count,
            verts: Vec::new(),
            edge_count: 0,
            stride: 0,
            offsets: vec![0],
            uniformity: None,
            incidence: OnceLock::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `Some(k)` iff the hypergraph is nonempty and every edge has `k` vertices.
    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        if self.stride > 0 {
            &self.verts[i * self.stride..(i + 1) * self.stride]
        } else {
            &self.verts[self.offsets[i]..self.offsets[i + 1]]
        }
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        (0..self.edge_count()).map(move |i| self.edge(i))
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges().map(<[Vertex]>::len).max().unwrap_or(0)
    }

    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges().map(<[Vertex]>::len).min()
    }

    /// The empty edge sorts first, so this is a constant-time check.
    pub fn has_empty_edge(&self) -> bool {
        self.edge_count > 0 && self.edge(0).is_empty()
    }

    /// Number of edges of each size, indexed by size.
    pub fn edge_size_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.max_edge_size() + 1];
        for e in self.edges() {
            hist[e.len()] += 1;
        }
        hist
    }

    fn incidence(&self) -> &Incidence {
        self.incidence.get_or_init(|| {
            let mut counts = vec![0usize; self.vertex_count + 1];
            for &v in &self.verts {
                counts[v as usize + 1] += 1;
            }
            for i in 1..counts.len() {
                counts[i] += counts[i - 1];
            }
            let offsets = counts.clone();
            let mut fill = counts;
            let mut edges = vec![0u32; self.verts.len()];
            for e in 0..self.edge_count() {
                for &v in self.edge(e) {
                    edges[fill[v as usize]] = e as u32;
                    fill[v as usize] += 1;
                }
            }
            Incidence { offsets, edges }
        })
    }

    /// Ids of the edges containing `v`, increasing.
    pub fn incident_edges(&self, v: Vertex) -> &[u32] {
        let inc = self.incidence();
        &inc.edges[inc.offsets[v as usize]..inc.offsets[v as usize + 1]]
    }

    fn check_vertices(&self, s: &[Vertex]) -> Result<()> {
        match s.iter().find(|&&v| v as usize >= self.vertex_count) {
            Some(v) => Err(Error::input(format!(
                "vertex {v} out of range for {} vertices",
                self.vertex_count
            ))),
            None => Ok(()),
        }
    }

    /// Number of edges containing every vertex of `s`.
    pub fn degree(&self, s: &[Vertex]) -> Result<u64> {
        if s.is_empty() {
            return Err(Error::input("degree of the empty set is undefined"));
        }
        self.check_vertices(s)?;
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let anchor = *sorted
            .iter()
            .min_by_key(|&&v| self.incident_edges(v).len())
            .expect("nonempty");
        let count = self
            .incident_edges(anchor)
            .iter()
            .filter(|&&e| is_subset(&sorted, self.edge(e as usize)))
            .count();
        Ok(count as u64)
    }

    /// Maximum ℓ-degree `Δ_ℓ`, computed by bucketing the ℓ-subsets of edges
    /// grouped by their smallest vertex.
    pub fn max_ell_degree(&self, ell: usize) -> Result<u64> {
        if ell == 0 {
            return Err(Error::input("ℓ must be at least 1"));
        }
        if ell > self.vertex_count {
            return Err(Error::input(format!(
                "ℓ = {ell} exceeds the vertex count {}",
                self.vertex_count
            )));
        }
        if ell > self.max_edge_size() {
            return Ok(0);
        }
        if ell == 1 {
            return Ok((0..self.vertex_count as Vertex)
                .map(|v| self.incident_edges(v).len() as u64)
                .max()
                .unwrap_or(0));
        }
        let mut best = 0u64;
        if ell == 2 {
            let mut counts = vec![0u32; self.vertex_count];
            let mut touched = Vec::new();
            for v in 0..self.vertex_count as Vertex {
                for &e in self.incident_edges(v) {
                    for &u in self.edge(e as usize) {
                        if u > v {
                            if counts[u as usize] == 0 {
                                touched.push(u);
                            }
                            counts[u as usize] += 1;
                        }
                    }
                }
                for &u in &touched {
                    best = best.max(counts[u as usize] as u64);
                    counts[u as usize] = 0;
                }
                touched.clear();
            }
            return Ok(best);
        }
        let mut buckets: HashMap<Vec<Vertex>, u64> = HashMap::new();
        let mut rest = Vec::new();
        for v in 0..self.vertex_count as Vertex {
            for &e in self.incident_edges(v) {
                rest.clear();
                rest.extend(self.edge(e as usize).iter().copied().filter(|&u| u > v));
                for_each_combination(&rest, ell - 1, |c| {
                    *buckets.entry(c.to_vec()).or_insert(0) += 1;
                });
            }
            if let Some(&m) = buckets.values().max() {
                best = best.max(m);
            }
            buckets.clear();
        }
        Ok(best)
    }

    /// Exact density `e(H)/v(H)`.
    pub fn density(&self) -> Result<BigRational> {
        if self.vertex_count == 0 {
            return Err(Error::input("density of a hypergraph without vertices"));
        }
        Ok(BigRational::new(
            BigInt::from(self.edge_count()),
            BigInt::from(self.vertex_count),
        ))
    }

    /// Density, the Δ_ℓ table for `1 ≤ ℓ ≤ max edge size`, and f(H) when defined.
    pub fn parameters(&self) -> Result<ParameterTable> {
        let density = self.density()?;
        let top = self.max_edge_size().min(self.vertex_count);
        let max_degrees = (1..=top)
            .map(|l| self.max_ell_degree(l))
            .collect::<Result<Vec<_>>>()?;
        let f_value = match self.uniformity {
            Some(k) if k >= 2 => Some(f_from_table(&density, &max_degrees, k)),
            _ => None,
        };
        Ok(ParameterTable {
            density,
            max_degrees,
            f_value,
        })
    }

    /// `f(H) = min_{2≤ℓ≤k} (d(H)/Δ_ℓ)^{1/(ℓ−1)}` with the minimizing ℓ.
    pub fn maker_f(&self) -> Result<FValue> {
        let k = match self.uniformity {
            Some(k) if k >= 2 => k,
            Some(_) => return Err(Error::precondition("f(H) needs uniformity k ≥ 2")),
            None => return Err(Error::precondition("f(H) needs a nonempty uniform hypergraph")),
        };
        let density = self.density()?;
        let degrees = (1..=k)
            .map(|l| self.max_ell_degree(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(f_from_table(&density, &degrees, k))
    }

    /// Whether some edge lies inside `t`.
    pub fn contains_edge(&self, t: &[Vertex]) -> Result<bool> {
        self.check_vertices(t)?;
        let mut mask = vec![false; self.vertex_count];
        for &v in t {
            mask[v as usize] = true;
        }
        Ok(self.contains_edge_masked(&mask, t))
    }

    /// `contains_edge` for callers that already hold a membership mask of `t`.
    pub fn contains_edge_masked(&self, mask: &[bool], members: &[Vertex]) -> bool {
        if self.has_empty_edge() {
            return true;
        }
        members.iter().any(|&v| {
            self.incident_edges(v).iter().any(|&e| {
                let edge = self.edge(e as usize);
                // only test each edge from its smallest member
                edge[0] == v && edge.iter().all(|&u| mask[u as usize])
            })
        })
    }

    /// Edges lying entirely inside `t`, as bitmasks over the positions of `t`.
    fn induced_masks(&self, t: &[Vertex]) -> Vec<u32> {
        let pos: HashMap<Vertex, usize> = t.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut masks = Vec::new();
        if self.has_empty_edge() {
            masks.push(0);
        }
        for &v in t {
            for &e in self.incident_edges(v) {
                let edge = self.edge(e as usize);
                if edge[0] != v {
                    continue;
                }
                let mut m = 0u32;
                if edge.iter().all(|u| match pos.get(u) {
                    Some(&i) => {
                        m |= 1 << i;
                        true
                    }
                    None => false,
                }) {
                    masks.push(m);
                }
            }
        }
        masks.sort_unstable();
        masks.dedup();
        masks
    }

    /// Independence number of the subhypergraph induced on `t`.
    pub fn induced_independence_number(&self, t: &[Vertex], cap: usize) -> Result<usize> {
        self.check_vertices(t)?;
        let mut t = t.to_vec();
        t.sort_unstable();
        t.dedup();
        if t.len() > cap.min(32) {
            return Err(Error::capacity(
                format!("exact independence number on {} vertices", t.len()),
                cap.min(32) as u64,
            ));
        }
        let masks = self.induced_masks(&t);
        if masks.contains(&0) {
            return Ok(0);
        }
        Ok(max_independent(t.len(), &masks))
    }

    /// `t` is δ-stable iff every `S ⊆ t` with `|S| ≥ δ|t|` contains an edge,
    /// i.e. the induced independence number is below `δ|t|`.
    pub fn is_delta_stable(&self, t: &[Vertex], delta: f64, cap: usize) -> Result<bool> {
        if t.is_empty() {
            return Err(Error::input("δ-stability needs a nonempty set"));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::input(format!("δ = {delta} is not in (0,1)")));
        }
        let alpha = self.induced_independence_number(t, cap)?;
        let mut distinct = t.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        Ok((alpha as f64) < delta * distinct.len() as f64)
    }

    /// Plain-text form: `v <N>` then one edge per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("v {}\n", self.vertex_count);
        for e in self.edges() {
            let mut first = true;
            for v in e {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut vertex_count = None;
        let mut edges: Vec<Vec<Vertex>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: idx + 1, msg };
            match vertex_count {
                None => {
                    let mut parts = line.split_whitespace();
                    if parts.next() != Some("v") {
                        return Err(parse_err("expected header `v <N>`".into()));
                    }
                    let n = parts
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| parse_err("bad vertex count".into()))?;
                    if parts.next().is_some() {
                        return Err(parse_err("trailing tokens after vertex count".into()));
                    }
                    vertex_count = Some(n);
                }
                Some(_) => {
                    let edge = line
                        .split_whitespace()
                        .map(|s| s.parse::<Vertex>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| parse_err(e.to_string()))?;
                    edges.push(edge);
                }
            }
        }
        let n = vertex_count.ok_or(Error::Parse {
            line: 0,
            msg: "missing header `v <N>`".into(),
        })?;
        Hypergraph::new(n, edges)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Exact parameters of a hypergraph.
#[derive(Clone, Debug, Serialize)]
pub struct ParameterTable {
    #[serde(with = "crate::serde_util::ratio")]
    pub density: BigRational,
    /// `max_degrees[ℓ-1] = Δ_ℓ`.
    pub max_degrees: Vec<u64>,
    pub f_value: Option<FValue>,
}

impl ParameterTable {
    pub fn max_degree(&self, ell: usize) -> u64 {
        if ell == 0 {
            return 0;
        }
        self.max_degrees.get(ell - 1).copied().unwrap_or(0)
    }
}

/// f(H) stored as the minimizing pair `(ℓ*, d(H)/Δ_ℓ*)` plus its real value
/// `(d/Δ_ℓ*)^{1/(ℓ*−1)}`.
#[derive(Clone, Debug, Serialize)]
pub struct FValue {
    pub ell: usize,
    #[serde(with = "crate::serde_util::ratio")]
    pub base: BigRational,
    pub value: f64,
}

impl FValue {
    fn new(ell: usize, base: BigRational) -> Self {
        let value = ratio_to_f64(&base).powf(1.0 / (ell as f64 - 1.0));
        FValue { ell, base, value }
    }

    /// Exact comparison of two candidates `(d/Δ_a)^{1/(a-1)}` vs `(d/Δ_b)^{1/(b-1)}`.
    pub fn cmp_exact(&self, other: &FValue) -> Ordering {
        let lhs: BigRational = Pow::pow(&self.base, (other.ell - 1) as u32);
        let rhs: BigRational = Pow::pow(&other.base, (self.ell - 1) as u32);
        lhs.cmp(&rhs)
    }

    /// Exact test of `f(H) > 1`.
    pub fn exceeds_one(&self) -> bool {
        self.base > BigRational::one()
    }
}

fn f_from_table(density: &BigRational, degrees: &[u64], k: usize) -> FValue {
    let mut best: Option<FValue> = None;
    for ell in 2..=k {
        let delta = degrees[ell - 1];
        // Δ_ℓ ≥ Δ_k = 1 for nonempty k-uniform H
        debug_assert!(delta > 0);
        let cand = FValue::new(ell, density / BigRational::from_integer(BigInt::from(delta)));
        best = match best {
            Some(b) if b.cmp_exact(&cand) != Ordering::Greater => Some(b),
            _ => Some(cand),
        };
    }
    best.expect("k ≥ 2")
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratios whose parts overflow f64: go through logarithms
        let n = r.numer().to_string().len() as f64;
        let d = r.denom().to_string().len() as f64;
        10f64.powf(n - d)
    })
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Calls `f` on every `r`-combination of `items`, in lexicographic order.
pub(crate) fn for_each_combination<T: Copy>(items: &[T], r: usize, mut f: impl FnMut(&[T])) {
    let n = items.len();
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - r {
            return;
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..r {
            buf[j] = items[idx[j]];
        }
    }
}

/// Maximum independent set size in a hypergraph on `n ≤ 32` vertices given
/// as edge bitmasks (no empty edge).
fn max_independent(n: usize, edges: &[u32]) -> usize {
    // edges_of[v]: edges whose highest vertex is v, so a choice of v can only
    // complete edges once all lower members are decided
    let mut edges_of: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &m in edges {
        let top = 31 - m.leading_zeros() as usize;
        edges_of[top].push(m);
    }
    let mut best = 0;
    fn go(v: usize, n: usize, chosen: u32, size: usize, edges_of: &[Vec<u32>], best: &mut usize) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        let with = chosen | (1 << v);
        if edges_of[v].iter().all(|&m| with & m != m) {
            go(v + 1, n, with, size + 1, edges_of, best);
        }
        go(v + 1, n, chosen, size, edges_of, best);
    }
    go(0, n, 0, 0, &edges_of, &mut best);
    best
}

/// Uniform random `m`-subset of `[0, n)`, sorted.
pub fn sample_uniform_subset<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Vec<Vertex>> {
    if m > n {
        return Err(Error::input(format!("cannot sample {m} elements out of {n}")));
    }
    let mut out: Vec<Vertex> = rand::seq::index::sample(rng, n, m)
        .into_iter()
        .map(|i| i as Vertex)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Binomial random subset of `[0, n)`: each element independently with probability `p`.
pub fn sample_binomial_subset<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<Vertex>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("probability {p} is not in [0,1]")));
    }
    Ok((0..n as Vertex).filter(|_| rng.gen_bool(p)).collect())
}

/// `Σ count(s)·(q+1)^{-s}` over an edge-size histogram.
pub(crate) fn weighted_edge_sum(hist: &[u64], q: u64) -> BigRational {
    let base = BigInt::from(q + 1);
    let top = hist.len().saturating_sub(1) as u32;
    let mut num = BigInt::zero();
    for (size, &count) in hist.iter().enumerate() {
        if count > 0 {
            num += BigInt::from(count) * Pow::pow(&base, top - size as u32);
        }
    }
    BigRational::new(num, Pow::pow(&base, top))
}
