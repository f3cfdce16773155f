//! Exact optimal play on tiny boards by memoized game-tree search.

use std::collections::HashMap;

use crate::engine::{GameRng, GameState, MoveRecord, Owner, Player, Strategy};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Default limit on the number of vertices the solver accepts.
pub const DEFAULT_SOLVER_CAP: usize = 28;

/// Search over (Maker mask, Breaker mask, Breaker moves left this round).
/// Zero moves left means Maker is to move.
#[derive(Debug)]
pub struct Solver {
    n: usize,
    q: usize,
    edges: Vec<u32>,
    empty_edge: bool,
    memo: HashMap<(u64, u8), bool>,
}

impl Solver {
    pub fn new(board: &Hypergraph, q: usize, cap: usize) -> Result<Self> {
        let n = board.vertex_count();
        if n > cap.min(32) {
            return Err(Error::capacity("vertices for the exact solver", cap.min(32) as u64));
        }
        if q == 0 {
            return Err(Error::input("Breaker's bias must be at least 1"));
        }
        if q > u8::MAX as usize {
            return Err(Error::input("bias too large for the exact solver"));
        }
        let edges = board
            .edges()
            .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        Ok(Solver {
            n,
            q,
            edges,
            empty_edge: board.has_empty_edge(),
            memo: HashMap::new(),
        })
    }

    fn all(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// Vertices of edges not yet touched by Breaker, and the open vertices of
    /// edges missing exactly one element for Maker.
    fn scan(&self, maker: u32, breaker: u32) -> (u32, u32, bool) {
        let mut live = 0;
        let mut threats = 0;
        let mut covered = false;
        for &e in &self.edges {
            if e & breaker != 0 {
                continue;
            }
            let missing = e & !maker;
            if missing == 0 {
                covered = true;
            } else if missing.is_power_of_two() {
                threats |= missing;
            }
            live |= missing;
        }
        (live, threats, covered)
    }

    /// Whether Maker wins from the given position with optimal play.
    pub fn maker_wins(&mut self, maker: u32, breaker: u32, left: usize) -> bool {
        if self.empty_edge {
            return true;
        }
        let key = ((maker as u64) | (breaker as u64) << 32, left as u8);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let (live, threats, covered) = self.scan(maker, breaker);
        let free = self.all() & !maker & !breaker;
        let result = if covered {
            true
        } else if live == 0 || free == 0 {
            false
        } else if left == 0 {
            threats != 0 || bits(live).any(|v| self.after_maker(maker | 1 << v, breaker))
        } else if threats.count_ones() as usize > left.min(free.count_ones() as usize) {
            true
        } else if threats != 0 {
            let v = threats.trailing_zeros();
            self.after_breaker(maker, breaker | 1 << v, left)
        } else {
            bits(live).all(|v| self.after_breaker(maker, breaker | 1 << v, left))
        };
        self.memo.insert(key, result);
        result
    }

    fn after_maker(&mut self, maker: u32, breaker: u32) -> bool {
        let free = self.all() & !maker & !breaker;
        if self.edges.iter().any(|&e| e & !maker == 0) {
            return true;
        }
        if free == 0 {
            return false;
        }
        self.maker_wins(maker, breaker, self.q)
    }

    fn after_breaker(&mut self, maker: u32, breaker: u32, left: usize) -> bool {
        let free = self.all() & !maker & !breaker;
        let left = if left == 1 || free == 0 { 0 } else { left - 1 };
        self.maker_wins(maker, breaker, left)
    }

    /// Whether Maker wins from a game state, given who is to move.
    pub fn evaluate(&mut self, state: &GameState<'_>) -> bool {
        let (maker, breaker) = masks(state);
        let left = match state.to_move() {
            Player::Maker => 0,
            Player::Breaker => self.q,
        };
        self.maker_wins(maker, breaker, left)
    }

    /// An optimal choice for the player to move; lowest index among equals.
    pub fn best_move(&mut self, state: &GameState<'_>, budget: usize) -> Vec<Vertex> {
        let (maker, mut breaker) = masks(state);
        let free = self.all() & !maker & !breaker;
        match state.to_move() {
            Player::Maker => {
                let pick = bits(free)
                    .find(|&v| self.after_maker(maker | 1 << v, breaker))
                    .or_else(|| bits(free).next());
                pick.map(|v| vec![v]).unwrap_or_default()
            }
            Player::Breaker => {
                let mut out = Vec::new();
                let mut left = budget;
                while left > 0 {
                    let free = self.all() & !maker & !breaker;
                    if free == 0 {
                        break;
                    }
                    let pick = bits(free)
                        .find(|&v| !self.after_breaker(maker, breaker | 1 << v, left))
                        .unwrap_or_else(|| bits(free).next().expect("free vertex"));
                    breaker |= 1 << pick;
                    out.push(pick);
                    left -= 1;
                }
                out
            }
        }
    }
}

fn masks(state: &GameState<'_>) -> (u32, u32) {
    let mut maker = 0u32;
    let mut breaker = 0u32;
    for (v, o) in state.owners().iter().enumerate() {
        match o {
            Owner::Maker => maker |= 1 << v,
            Owner::Breaker => breaker |= 1 << v,
            Owner::Free => {}
        }
    }
    (maker, breaker)
}

fn bits(mut m: u32) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros();
            m &= m - 1;
            Some(v)
        }
    })
}

/// Winner of `G(board; q)` under optimal play.
pub fn solve(board: &Hypergraph, q: usize, first: Player) -> Result<Player> {
    solve_with_cap(board, q, first, DEFAULT_SOLVER_CAP)
}

pub fn solve_with_cap(board: &Hypergraph, q: usize, first: Player, cap: usize) -> Result<Player> {
    let mut s = Solver::new(board, q, cap)?;
    let left = match first {
        Player::Maker => 0,
        Player::Breaker => q,
    };
    Ok(if s.maker_wins(0, 0, left) {
        Player::Maker
    } else {
        Player::Breaker
    })
}

/// Smallest `q` at which Breaker wins with Maker moving first; `None` when
/// Maker wins at every bias (an edge of size at most one).
pub fn threshold_bias_exact(board: &Hypergraph) -> Result<Option<usize>> {
    threshold_bias_exact_with_cap(board, DEFAULT_SOLVER_CAP)
}

pub fn threshold_bias_exact_with_cap(board: &Hypergraph, cap: usize) -> Result<Option<usize>> {
    let top = board.vertex_count().max(1);
    for q in 1..=top {
        if solve_with_cap(board, q, Player::Maker, cap)? == Player::Breaker {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// Plays optimally for whichever side it is asked to move.
#[derive(Debug)]
pub struct ExactStrategy {
    solver: Solver,
}

impl ExactStrategy {
    pub fn new(board: &Hypergraph, q: usize) -> Result<Self> {
        Ok(ExactStrategy {
            solver: Solver::new(board, q, DEFAULT_SOLVER_CAP)?,
        })
    }
}

impl Strategy for ExactStrategy {
    fn name(&self) -> String {
        "exact".into()
    }

    fn choose(&mut self, state: &GameState<'_>, budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
        Ok(self.solver.best_move(state, budget))
    }

    fn observe(&mut self, _state: &GameState<'_>, _record: &MoveRecord) {}
}
