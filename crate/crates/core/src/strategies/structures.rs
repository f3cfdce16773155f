//! Almost complete edges, simple fans and clusters.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::engine::{GameState, Owner};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// An edge split into its major part and one open element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AlmostComplete {
    pub edge: usize,
    pub major: Vec<Vertex>,
    pub open: Vertex,
}

impl AlmostComplete {
    pub fn new(board: &Hypergraph, edge: usize, open: Vertex) -> Self {
        let major = board.edge(edge).iter().copied().filter(|&v| v != open).collect();
        AlmostComplete { edge, major, open }
    }
}

/// Edges whose vertices are all Maker's except one free open element.
pub fn dangerous_acs(state: &GameState<'_>) -> Vec<AlmostComplete> {
    let board = state.board();
    (0..board.edge_count())
        .filter_map(|e| dangerous_in(state, e))
        .collect()
}

/// Dangerous almost complete edges through `v`, in edge order.
pub fn dangerous_acs_through(state: &GameState<'_>, v: Vertex) -> Vec<AlmostComplete> {
    state
        .board()
        .incident_edges(v)
        .iter()
        .filter_map(|&e| dangerous_in(state, e as usize))
        .collect()
}

fn dangerous_in(state: &GameState<'_>, e: usize) -> Option<AlmostComplete> {
    let mut open = None;
    for &u in state.board().edge(e) {
        match state.owner(u) {
            Owner::Maker => {}
            Owner::Free if open.is_none() => open = Some(u),
            _ => return None,
        }
    }
    open.map(|h| AlmostComplete::new(state.board(), e, h))
}

/// A simple fan: almost complete edges whose major parts pairwise meet in
/// exactly the common elements, with no open element inside any major part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanRecord {
    pub members: Vec<AlmostComplete>,
    pub common: Vec<Vertex>,
}

impl FanRecord {
    pub fn union(&self) -> Vec<Vertex> {
        let set: BTreeSet<Vertex> = self.members.iter().flat_map(|m| m.major.iter().copied()).collect();
        set.into_iter().collect()
    }
}

/// Distinct edges sharing at least two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterRecord {
    pub edges: Vec<usize>,
    /// overlap of each edge with the union of its predecessors, first entry 2
    pub characteristic: Vec<usize>,
    pub union_size: usize,
    pub common: Vec<Vertex>,
}

impl ClusterRecord {
    pub fn union(&self, board: &Hypergraph) -> Vec<Vertex> {
        let set: BTreeSet<Vertex> = self.edges.iter().flat_map(|&e| board.edge(e).iter().copied()).collect();
        set.into_iter().collect()
    }
}

fn intersect(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn overflow(what: &str, cap: usize) -> Error {
    Error::capacity(format!("number of {what}"), cap as u64)
}

/// All simple `t`-fans, grouped by common vertex. A 1-fan is a single
/// almost complete edge and is listed once.
pub fn enumerate_simple_fans(board: &Hypergraph, t: usize, cap: usize) -> Result<Vec<FanRecord>> {
    if t == 0 {
        return Err(Error::input("fan size must be at least 1"));
    }
    let mut out = Vec::new();
    if t == 1 {
        for (i, e) in board.edges().enumerate().filter(|(_, e)| e.len() >= 2) {
            for &h in e {
                if out.len() == cap {
                    return Err(overflow("fans", cap));
                }
                let m = AlmostComplete::new(board, i, h);
                out.push(FanRecord {
                    common: m.major.clone(),
                    members: vec![m],
                });
            }
        }
        return Ok(out);
    }
    for c in 0..board.vertex_count() as Vertex {
        let candidates: Vec<AlmostComplete> = board
            .incident_edges(c)
            .iter()
            .flat_map(|&e| {
                board
                    .edge(e as usize)
                    .iter()
                    .filter(move |&&h| h != c)
                    .map(move |&h| AlmostComplete::new(board, e as usize, h))
            })
            .collect();
        let mut chosen: Vec<usize> = Vec::with_capacity(t);
        grow_fan(&candidates, c, t, 0, &mut chosen, &mut out, cap)?;
    }
    Ok(out)
}

fn grow_fan(
    cands: &[AlmostComplete],
    c: Vertex,
    t: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<FanRecord>,
    cap: usize,
) -> Result<()> {
    if chosen.len() == t {
        if out.len() == cap {
            return Err(overflow("fans", cap));
        }
        out.push(FanRecord {
            members: chosen.iter().map(|&i| cands[i].clone()).collect(),
            common: vec![c],
        });
        return Ok(());
    }
    for i in from..cands.len() {
        let next = &cands[i];
        let fits = chosen.iter().all(|&j| {
            let prev = &cands[j];
            intersect(&prev.major, &next.major) == [c]
                && prev.major.binary_search(&next.open).is_err()
                && next.major.binary_search(&prev.open).is_err()
        });
        if fits {
            chosen.push(i);
            grow_fan(cands, c, t, i + 1, chosen, out, cap)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// All `t`-clusters, each reported once under the two smallest vertices of
/// its common intersection, with edges in increasing index order.
pub fn enumerate_clusters(board: &Hypergraph, t: usize, cap: usize) -> Result<Vec<ClusterRecord>> {
    if t == 0 {
        return Err(Error::input("cluster size must be at least 1"));
    }
    let mut out = Vec::new();
    for a in 0..board.vertex_count() as Vertex {
        let through_a = board.incident_edges(a);
        let mut partners: BTreeSet<Vertex> = BTreeSet::new();
        for &e in through_a {
            partners.extend(board.edge(e as usize).iter().copied().filter(|&b| b > a));
        }
        for b in partners {
            let pair: Vec<usize> = through_a
                .iter()
                .map(|&e| e as usize)
                .filter(|&e| board.edge(e).binary_search(&b).is_ok())
                .collect();
            let mut chosen = Vec::with_capacity(t);
            grow_cluster(board, &pair, (a, b), t, 0, &mut chosen, &mut out, cap)?;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn grow_cluster(
    board: &Hypergraph,
    pool: &[usize],
    anchor: (Vertex, Vertex),
    t: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<ClusterRecord>,
    cap: usize,
) -> Result<()> {
    if chosen.len() == t {
        let mut common = board.edge(chosen[0]).to_vec();
        for &e in &chosen[1..] {
            common = intersect(&common, board.edge(e));
        }
        if common[..2] != [anchor.0, anchor.1] {
            return Ok(());
        }
        if out.len() == cap {
            return Err(overflow("clusters", cap));
        }
        let mut seen: BTreeSet<Vertex> = board.edge(chosen[0]).iter().copied().collect();
        let mut characteristic = vec![2];
        for &e in &chosen[1..] {
            let edge = board.edge(e);
            characteristic.push(edge.iter().filter(|v| seen.contains(v)).count());
            seen.extend(edge.iter().copied());
        }
        out.push(ClusterRecord {
            edges: chosen.clone(),
            characteristic,
            union_size: seen.len(),
            common,
        });
        return Ok(());
    }
    for i in from..pool.len() {
        chosen.push(pool[i]);
        grow_cluster(board, pool, anchor, t, i + 1, chosen, out, cap)?;
        chosen.pop();
    }
    Ok(())
}

/// Hypergraph whose edges are the unions of the major parts of simple fans.
pub fn fan_hypergraph(board: &Hypergraph, t: usize, cap: usize) -> Result<Hypergraph> {
    let fans = enumerate_simple_fans(board, t, cap)?;
    Hypergraph::new(board.vertex_count(), fans.iter().map(FanRecord::union))
}

/// Hypergraph whose edges are the unions of clusters.
pub fn cluster_hypergraph(board: &Hypergraph, t: usize, cap: usize) -> Result<Hypergraph> {
    let clusters = enumerate_clusters(board, t, cap)?;
    Hypergraph::new(board.vertex_count(), clusters.iter().map(|c| c.union(board)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Player;
    use crate::hypergraph::{for_each_combination, sample_uniform_subset};
    use crate::linear::ap_hypergraph;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn v(labels: &[Vertex]) -> Vec<Vertex> {
        labels.iter().map(|x| x - 1).collect()
    }

    #[test]
    fn dangerous_examples() {
        let ap5 = ap_hypergraph(5, 3).unwrap();
        let mut s = GameState::new(&ap5, 1);
        assert!(dangerous_acs(&s).is_empty());
        s.occupy(Player::Maker, 0).unwrap();
        s.occupy(Player::Maker, 2).unwrap();
        let found = dangerous_acs(&s);
        assert!(found.iter().any(|a| a.major == v(&[1, 3]) && a.open == 4));
        assert!(found.iter().any(|a| a.major == v(&[1, 3]) && a.open == 1));
        s.occupy(Player::Breaker, 4).unwrap();
        let found = dangerous_acs(&s);
        assert!(!found.iter().any(|a| a.open == 4));
        assert_eq!(dangerous_acs_through(&s, 2), found);
    }

    #[test]
    fn single_fans_on_five() {
        let ap5 = ap_hypergraph(5, 3).unwrap();
        assert_eq!(enumerate_simple_fans(&ap5, 1, 100).unwrap().len(), 12);
        assert!(matches!(
            enumerate_simple_fans(&ap5, 1, 11),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn pair_clusters_on_five() {
        let ap5 = ap_hypergraph(5, 3).unwrap();
        let clusters = enumerate_clusters(&ap5, 2, 100).unwrap();
        let unions: Vec<Vec<Vertex>> = clusters.iter().map(|c| c.union(&ap5)).collect();
        assert!(unions.contains(&v(&[1, 2, 3, 5])));
        for c in &clusters {
            assert_eq!(c.union_size, 3 + (3 - c.characteristic[1]));
        }
    }

    /// Every family of `t` almost complete edges, filtered by the definitions.
    fn brute_fans(board: &Hypergraph, t: usize) -> Vec<Vec<AlmostComplete>> {
        let all: Vec<AlmostComplete> = board
            .edges()
            .enumerate()
            .flat_map(|(i, e)| e.iter().map(move |&h| (i, h)).collect::<Vec<_>>())
            .map(|(i, h)| AlmostComplete::new(board, i, h))
            .collect();
        let idx: Vec<usize> = (0..all.len()).collect();
        let mut out = Vec::new();
        for_each_combination(&idx, t, |pick| {
            let fam: Vec<&AlmostComplete> = pick.iter().map(|&i| &all[i]).collect();
            let mut common = fam[0].major.clone();
            for m in &fam[1..] {
                common = intersect(&common, &m.major);
            }
            let pairwise = fam.iter().enumerate().all(|(i, a)| {
                fam[i + 1..].iter().all(|b| intersect(&a.major, &b.major).len() == 1)
            });
            let opens_outside = fam
                .iter()
                .all(|a| fam.iter().all(|b| !b.major.contains(&a.open)));
            if !common.is_empty() && pairwise && opens_outside {
                let mut f: Vec<AlmostComplete> = fam.into_iter().cloned().collect();
                f.sort();
                out.push(f);
            }
        });
        out.sort();
        out
    }

    fn brute_clusters(board: &Hypergraph, t: usize) -> Vec<Vec<usize>> {
        let idx: Vec<usize> = (0..board.edge_count()).collect();
        let mut out = Vec::new();
        for_each_combination(&idx, t, |pick| {
            let mut common = board.edge(pick[0]).to_vec();
            for &e in &pick[1..] {
                common = intersect(&common, board.edge(e));
            }
            if common.len() >= 2 {
                out.push(pick.to_vec());
            }
        });
        out.sort();
        out
    }

    fn check_against_brute(board: &Hypergraph, t: usize) {
        let mut fans: Vec<Vec<AlmostComplete>> = enumerate_simple_fans(board, t, 1 << 20)
            .unwrap()
            .into_iter()
            .map(|f| {
                let mut m = f.members;
                m.sort();
                m
            })
            .collect();
        fans.sort();
        assert_eq!(fans, brute_fans(board, t));
        let clusters = enumerate_clusters(board, t, 1 << 20).unwrap();
        for c in &clusters {
            assert!(c.common.len() >= 2);
            assert!(c.characteristic.iter().all(|&l| l >= 2));
            let k = board.edge(c.edges[0]).len();
            if board.uniformity().is_some() {
                let predicted = k + c.characteristic[1..].iter().map(|l| k - l).sum::<usize>();
                assert_eq!(c.union_size, predicted);
            }
        }
        let mut found: Vec<Vec<usize>> = clusters.into_iter().map(|c| c.edges).collect();
        found.sort();
        assert_eq!(found, brute_clusters(board, t));
    }

    #[test]
    fn progression_boards_match_brute_force() {
        for n in 5..=12 {
            let board = ap_hypergraph(n, 3).unwrap();
            for t in 1..=3 {
                check_against_brute(&board, t);
            }
        }
        check_against_brute(&ap_hypergraph(12, 4).unwrap(), 2);
    }

    #[test]
    fn two_fans_meet_in_one_vertex() {
        let board = ap_hypergraph(12, 3).unwrap();
        for f in enumerate_simple_fans(&board, 2, 1 << 20).unwrap() {
            assert_eq!(intersect(&f.members[0].major, &f.members[1].major).len(), 1);
            assert_eq!(f.union().len(), 2 * (3 - 2) + 1);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_boards_match_brute_force(seed in 0u64..10_000, k in 2usize..5, e in 1usize..14, t in 1usize..4) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 10;
            let edges: Vec<Vec<Vertex>> = (0..e).map(|_| sample_uniform_subset(n, k, &mut rng).unwrap()).collect();
            let board = Hypergraph::new(n, edges).unwrap();
            check_against_brute(&board, t);
        }
    }
}
