//! The Erdős–Selfridge potential and the greedy Breaker that spends it.

use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::engine::{GameRng, GameState, MoveRecord, Owner, Player, Strategy};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Exact potential `Σ (q+1)^{-free(e)}` over edges without a Breaker vertex,
/// multiplied by `q+1` when Breaker moves second.
pub fn es_potential(state: &GameState<'_>, breaker_first: bool) -> BigRational {
    let board = state.board();
    let base = BigInt::from(state.q() as u64 + 1);
    let top = board.max_edge_size() as u32;
    let mut num = BigInt::zero();
    for (i, e) in board.edges().enumerate() {
        if !state.is_edge_alive(i) {
            continue;
        }
        let free = e.iter().filter(|&&v| state.is_free(v)).count() as u32;
        num += Pow::pow(&base, top - free);
    }
    let mut value = BigRational::new(num, Pow::pow(&base, top));
    if !breaker_first {
        value *= BigRational::from_integer(base);
    }
    value
}

/// Reference greedy Breaker turn computed from scratch with exact weights:
/// `budget` times, the free vertex whose surviving edges carry the most weight.
pub fn es_breaker_move(state: &GameState<'_>, budget: usize) -> Vec<Vertex> {
    let board = state.board();
    let q1 = BigRational::from_integer(BigInt::from(state.q() as u64 + 1));
    let unit = BigRational::one() / q1;
    let mut owner: Vec<Owner> = state.owners().to_vec();
    let mut alive: Vec<bool> = (0..board.edge_count()).map(|e| state.is_edge_alive(e)).collect();
    let mut out = Vec::with_capacity(budget);
    for _ in 0..budget.min(state.free_count()) {
        let mut best: Option<(BigRational, Vertex)> = None;
        for v in 0..board.vertex_count() as Vertex {
            if owner[v as usize] != Owner::Free {
                continue;
            }
            let mut score = BigRational::zero();
            for &e in board.incident_edges(v) {
                if alive[e as usize] {
                    let free = board
                        .edge(e as usize)
                        .iter()
                        .filter(|&&u| owner[u as usize] == Owner::Free)
                        .count();
                    score += Pow::pow(&unit, free as u32);
                }
            }
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, v));
            }
        }
        let (_, v) = best.expect("free vertex exists");
        owner[v as usize] = Owner::Breaker;
        for &e in board.incident_edges(v) {
            alive[e as usize] = false;
        }
        out.push(v);
    }
    out
}

trait Weight: Copy + PartialOrd + Default + AddAssign + SubAssign + std::fmt::Debug {}
impl Weight for u128 {}
impl Weight for f64 {}

const DEAD: u8 = u8::MAX;

#[derive(Clone, Debug)]
struct Table<W> {
    /// weight of a surviving edge by its number of free vertices
    pow: Vec<W>,
    free_left: Vec<u8>,
    score: Vec<W>,
    total: W,
}

impl<W: Weight> Table<W> {
    fn new(board: &Hypergraph, pow: Vec<W>) -> Self {
        let mut score = vec![W::default(); board.vertex_count()];
        let mut total = W::default();
        let mut free_left = Vec::with_capacity(board.edge_count());
        for e in board.edges() {
            let w = pow[e.len()];
            total += w;
            for &v in e {
                score[v as usize] += w;
            }
            free_left.push(e.len() as u8);
        }
        Table {
            pow,
            free_left,
            score,
            total,
        }
    }

    fn maker_takes(&mut self, board: &Hypergraph, v: Vertex) {
        for &e in board.incident_edges(v) {
            let f = self.free_left[e as usize];
            if f == DEAD {
                continue;
            }
            let old = self.pow[f as usize];
            let new = self.pow[f as usize - 1];
            self.free_left[e as usize] = f - 1;
            let mut delta = new;
            delta -= old;
            self.total += delta;
            for &u in board.edge(e as usize) {
                self.score[u as usize] += delta;
            }
        }
    }

    fn breaker_takes(&mut self, board: &Hypergraph, v: Vertex) {
        for &e in board.incident_edges(v) {
            let f = self.free_left[e as usize];
            if f == DEAD {
                continue;
            }
            let w = self.pow[f as usize];
            self.free_left[e as usize] = DEAD;
            self.total -= w;
            for &u in board.edge(e as usize) {
                self.score[u as usize] -= w;
            }
        }
    }

    fn best(&self, taken: &[bool]) -> Option<Vertex> {
        let mut best: Option<(W, usize)> = None;
        for (v, &s) in self.score.iter().enumerate() {
            if taken[v] {
                continue;
            }
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, v));
            }
        }
        best.map(|(_, v)| v as Vertex)
    }
}

#[derive(Clone, Debug)]
enum Weights {
    Exact(Table<u128>),
    Float(Table<f64>),
}

/// Incrementally maintained potential and per-vertex weights for one board
/// and bias. Integer weights `(q+1)^{K-free}` are used whenever they fit in
/// 128 bits, otherwise floating weights `(q+1)^{-free}`.
#[derive(Clone, Debug)]
pub struct PotentialTracker {
    q: usize,
    top: usize,
    weights: Weights,
    taken: Vec<bool>,
}

impl PotentialTracker {
    pub fn new(board: &Hypergraph, q: usize) -> Result<Self> {
        let top = board.max_edge_size();
        if top >= DEAD as usize {
            return Err(Error::capacity("edge size for the potential tracker", DEAD as u64 - 1));
        }
        let base = q as u128 + 1;
        let exact = (0..top as u32)
            .try_fold(1u128, |acc, _| acc.checked_mul(base))
            .and_then(|p| p.checked_mul(board.edge_count().max(1) as u128))
            .is_some_and(|m| m < 1u128 << 126);
        let weights = if exact {
            let pow = (0..=top).map(|f| base.pow((top - f) as u32)).collect();
            Weights::Exact(Table::new(board, pow))
        } else {
            let pow = (0..=top).map(|f| (base as f64).powi(-(f as i32))).collect();
            Weights::Float(Table::new(board, pow))
        };
        Ok(PotentialTracker {
            q,
            top,
            weights,
            taken: vec![false; board.vertex_count()],
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.weights, Weights::Exact(_))
    }

    pub fn is_taken(&self, v: Vertex) -> bool {
        self.taken[v as usize]
    }

    pub fn apply(&mut self, board: &Hypergraph, player: Player, v: Vertex) {
        if std::mem::replace(&mut self.taken[v as usize], true) {
            return;
        }
        match (&mut self.weights, player) {
            (Weights::Exact(t), Player::Maker) => t.maker_takes(board, v),
            (Weights::Exact(t), Player::Breaker) => t.breaker_takes(board, v),
            (Weights::Float(t), Player::Maker) => t.maker_takes(board, v),
            (Weights::Float(t), Player::Breaker) => t.breaker_takes(board, v),
        }
    }

    /// Untaken vertex of largest weight, lowest index on ties.
    pub fn best_vertex(&self) -> Option<Vertex> {
        match &self.weights {
            Weights::Exact(t) => t.best(&self.taken),
            Weights::Float(t) => t.best(&self.taken),
        }
    }

    /// Unscaled potential `Σ (q+1)^{-free}` as a float.
    pub fn potential(&self) -> f64 {
        match &self.weights {
            Weights::Exact(t) => {
                let scale = ((self.q + 1) as f64).ln() * self.top as f64;
                if t.total == 0 {
                    0.0
                } else {
                    ((t.total as f64).ln() - scale).exp()
                }
            }
            Weights::Float(t) => t.total.max(0.0),
        }
    }

    /// Weight of a vertex relative to `(q+1)^{-free}` units.
    pub fn vertex_weight(&self, v: Vertex) -> f64 {
        match &self.weights {
            Weights::Exact(t) => {
                t.score[v as usize] as f64 / ((self.q + 1) as f64).powi(self.top as i32)
            }
            Weights::Float(t) => t.score[v as usize],
        }
    }
}

/// Greedily picks `count` vertices on `tracker`, applying each as Breaker's.
pub(crate) fn greedy_breaker_picks(
    tracker: &mut PotentialTracker,
    board: &Hypergraph,
    count: usize,
) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(v) = tracker.best_vertex() else { break };
        tracker.apply(board, Player::Breaker, v);
        out.push(v);
    }
    out
}

/// Breaker playing the greedy potential rule on the game board.
#[derive(Clone, Debug)]
pub struct EsBreaker {
    tracker: PotentialTracker,
}

impl EsBreaker {
    pub fn new(board: &Hypergraph, q: usize) -> Result<Self> {
        Ok(EsBreaker {
            tracker: PotentialTracker::new(board, q)?,
        })
    }

    /// Starts from a tracker prepared for a fresh game.
    pub fn from_tracker(tracker: PotentialTracker) -> Self {
        EsBreaker { tracker }
    }

    pub fn tracker(&self) -> &PotentialTracker {
        &self.tracker
    }
}

impl Strategy for EsBreaker {
    fn name(&self) -> String {
        "es-breaker".into()
    }

    fn choose(&mut self, state: &GameState<'_>, budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
        Ok(greedy_breaker_picks(&mut self.tracker, state.board(), budget))
    }

    fn observe(&mut self, state: &GameState<'_>, record: &MoveRecord) {
        self.tracker.apply(state.board(), record.player, record.vertex);
    }
}

/// Maker taking the vertex of largest weighted degree.
#[derive(Clone, Debug)]
pub struct GreedyMaker {
    tracker: PotentialTracker,
}

impl GreedyMaker {
    pub fn new(board: &Hypergraph, q: usize) -> Result<Self> {
        Ok(GreedyMaker {
            tracker: PotentialTracker::new(board, q)?,
        })
    }

    pub fn from_tracker(tracker: PotentialTracker) -> Self {
        GreedyMaker { tracker }
    }
}

impl Strategy for GreedyMaker {
    fn name(&self) -> String {
        "greedy-maker".into()
    }

    fn choose(&mut self, state: &GameState<'_>, _budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
        let v = self
            .tracker
            .best_vertex()
            .or_else(|| state.lowest_free())
            .ok_or_else(|| Error::precondition("no free vertex"))?;
        Ok(vec![v])
    }

    fn observe(&mut self, state: &GameState<'_>, record: &MoveRecord) {
        self.tracker.apply(state.board(), record.player, record.vertex);
    }
}
