//! Turn-by-turn execution of the biased Maker-Breaker game.
//!
//! Maker claims one vertex per turn and Breaker claims `q` (or whatever is
//! left). A Breaker strategy that asks for fewer vertices is padded with the
//! lowest-index free vertices. Maker wins as soon as one of the edges is fully
//! hers, which is only checked right after Maker moves.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

pub type GameRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Owner {
    Free,
    Maker,
    Breaker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Maker,
    Breaker,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub round: u32,
    pub player: Player,
    pub vertex: Vertex,
}

/// Something a strategy wants reported without aborting the game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyEvent {
    pub round: u32,
    pub kind: String,
    pub detail: String,
}

/// Ownership of every vertex plus the move history.
#[derive(Clone, Debug)]
pub struct GameState<'a> {
    board: &'a Hypergraph,
    q: usize,
    owner: Vec<Owner>,
    maker: Vec<Vertex>,
    breaker: Vec<Vertex>,
    history: Vec<MoveRecord>,
    round: u32,
    to_move: Player,
    first: Player,
    free_cursor: usize,
    /// Edges not yet touched by Breaker.
    alive: usize,
    killed: Vec<bool>,
}

impl<'a> GameState<'a> {
    pub fn new(board: &'a Hypergraph, q: usize) -> Self {
        Self::with_first_player(board, q, Player::Maker)
    }

    pub fn with_first_player(board: &'a Hypergraph, q: usize, first: Player) -> Self {
        GameState {
            board,
            q,
            owner: vec![Owner::Free; board.vertex_count()],
            maker: Vec::new(),
            breaker: Vec::new(),
            history: Vec::new(),
            round: 0,
            to_move: first,
            first,
            free_cursor: 0,
            alive: board.edge_count(),
            killed: vec![false; board.edge_count()],
        }
    }

    pub fn board(&self) -> &'a Hypergraph {
        self.board
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn owner(&self, v: Vertex) -> Owner {
        self.owner[v as usize]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.owner.get(v as usize) == Some(&Owner::Free)
    }

    /// Maker's vertices in the order taken.
    pub fn maker_vertices(&self) -> &[Vertex] {
        &self.maker
    }

    /// Breaker's vertices in the order taken.
    pub fn breaker_vertices(&self) -> &[Vertex] {
        &self.breaker
    }

    pub fn last_maker_move(&self) -> Option<Vertex> {
        self.maker.last().copied()
    }

    pub fn free_count(&self) -> usize {
        self.owner.len() - self.maker.len() - self.breaker.len()
    }

    pub fn lowest_free(&self) -> Option<Vertex> {
        (self.free_cursor..self.owner.len())
            .find(|&v| self.owner[v] == Owner::Free)
            .map(|v| v as Vertex)
    }

    pub fn free_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (self.free_cursor..self.owner.len())
            .filter(|&v| self.owner[v] == Owner::Free)
            .map(|v| v as Vertex)
    }

    pub fn history(&self) -> &[MoveRecord] {
        &self.history
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn first_player(&self) -> Player {
        self.first
    }

    /// Edges without a Breaker vertex.
    pub fn alive_edge_count(&self) -> usize {
        self.alive
    }

    pub fn is_edge_alive(&self, e: usize) -> bool {
        !self.killed[e]
    }

    /// Hands a vertex to `player`, recording it in the current round.
    pub fn occupy(&mut self, player: Player, v: Vertex) -> Result<()> {
        match self.owner.get(v as usize) {
            None => return Err(Error::input(format!("vertex {v} out of range"))),
            Some(Owner::Free) => {}
            Some(_) => return Err(Error::input(format!("vertex {v} is already taken"))),
        }
        if self.round == 0 {
            self.round = 1;
        }
        match player {
            Player::Maker => {
                self.owner[v as usize] = Owner::Maker;
                self.maker.push(v);
            }
            Player::Breaker => {
                self.owner[v as usize] = Owner::Breaker;
                self.breaker.push(v);
                for &e in self.board.incident_edges(v) {
                    if !std::mem::replace(&mut self.killed[e as usize], true) {
                        self.alive -= 1;
                    }
                }
            }
        }
        while self.free_cursor < self.owner.len() && self.owner[self.free_cursor] != Owner::Free {
            self.free_cursor += 1;
        }
        self.history.push(MoveRecord {
            round: self.round,
            player,
            vertex: v,
        });
        Ok(())
    }

    fn end_turn(&mut self) {
        self.to_move = self.to_move.other();
        if self.to_move == self.first {
            self.round += 1;
        }
    }

    /// An edge made entirely of Maker's vertices that contains `v`.
    pub fn completed_edge_through(&self, v: Vertex) -> Option<usize> {
        self.board.incident_edges(v).iter().map(|&e| e as usize).find(|&e| {
            self.board
                .edge(e)
                .iter()
                .all(|&u| self.owner[u as usize] == Owner::Maker)
        })
    }

    pub fn winner(&self) -> Outcome {
        if self.board.has_empty_edge() || self.maker.iter().any(|&v| self.completed_edge_through(v).is_some()) {
            Outcome::Maker
        } else if self.free_count() == 0 {
            Outcome::Breaker
        } else {
            Outcome::Undecided
        }
    }
}

/// A player's move rule. One instance plays one game.
pub trait Strategy: Send {
    fn name(&self) -> String;

    /// Vertices to claim this turn: exactly one for Maker, at most `budget` for Breaker.
    fn choose(&mut self, state: &GameState<'_>, budget: usize, rng: &mut GameRng) -> Result<Vec<Vertex>>;

    /// Called after every claimed vertex, by either player, including padding.
    fn observe(&mut self, _state: &GameState<'_>, _record: &MoveRecord) {}

    fn events(&self) -> Vec<StrategyEvent> {
        Vec::new()
    }
}

#[derive(Clone, Debug)]
pub struct PlayOptions {
    pub first_player: Player,
    /// End the game at Maker's first completed edge.
    pub stop_at_first_edge: bool,
    /// End the game as soon as every edge holds a Breaker vertex.
    pub stop_when_decided: bool,
}

impl Default for PlayOptions {
    fn default() -> Self {
        PlayOptions {
            first_player: Player::Maker,
            stop_at_first_edge: true,
            stop_when_decided: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transcript {
    pub winner: Player,
    pub terminating_edge: Option<Vec<Vertex>>,
    pub moves: Vec<MoveRecord>,
    pub q: usize,
    pub seed: u64,
    pub maker_strategy: String,
    pub breaker_strategy: String,
    pub first_player: Player,
    pub rounds: u32,
    pub maker_set: Vec<Vertex>,
    pub breaker_set: Vec<Vertex>,
    /// Whether the game ended before the board filled up.
    pub stopped_early: bool,
    pub events: Vec<StrategyEvent>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Number of edges entirely inside `maker_set`.
pub fn covered_edge_count(board: &Hypergraph, maker_set: &[Vertex]) -> usize {
    let mut mine = vec![false; board.vertex_count()];
    for &v in maker_set {
        mine[v as usize] = true;
    }
    board.edges().filter(|e| e.iter().all(|&v| mine[v as usize])).count()
}

fn fault(strategy: &dyn Strategy, reason: String) -> Error {
    Error::StrategyFault {
        strategy: strategy.name(),
        reason,
    }
}

/// Plays one game to the end and returns its transcript.
pub fn play(
    board: &Hypergraph,
    q: usize,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    seed: u64,
    options: &PlayOptions,
) -> Result<Transcript> {
    if q == 0 {
        return Err(Error::input("Breaker's bias must be at least 1"));
    }
    let mut rng = GameRng::seed_from_u64(seed);
    let mut state = GameState::with_first_player(board, q, options.first_player);
    let mut first_edge: Option<usize> = None;
    let empty_edge_win = board.has_empty_edge();
    let mut stopped_early = false;
    state.round = 1;
    while state.free_count() > 0 && !empty_edge_win {
        match state.to_move {
            Player::Maker => {
                let picks = maker.choose(&state, 1, &mut rng)?;
                if picks.len() != 1 {
                    return Err(fault(maker, format!("returned {} vertices instead of 1", picks.len())));
                }
                let v = picks[0];
                if !state.is_free(v) {
                    return Err(fault(maker, format!("vertex {v} is not free")));
                }
                state.occupy(Player::Maker, v)?;
                let record = *state.history.last().expect("just pushed");
                maker.observe(&state, &record);
                breaker.observe(&state, &record);
                if first_edge.is_none() {
                    first_edge = state.completed_edge_through(v);
                }
                if first_edge.is_some() && options.stop_at_first_edge {
                    stopped_early = state.free_count() > 0;
                    break;
                }
            }
            Player::Breaker => {
                let budget = q.min(state.free_count());
                let picks = breaker.choose(&state, budget, &mut rng)?;
                if picks.len() > budget {
                    return Err(fault(breaker, format!("returned {} vertices with budget {budget}", picks.len())));
                }
                for &v in &picks {
                    if !state.is_free(v) {
                        return Err(fault(breaker, format!("vertex {v} is not free or was listed twice")));
                    }
                    state.occupy(Player::Breaker, v)?;
                    let record = *state.history.last().expect("just pushed");
                    maker.observe(&state, &record);
                    breaker.observe(&state, &record);
                }
                for _ in picks.len()..budget {
                    let v = state.lowest_free().expect("budget bounded by free count");
                    state.occupy(Player::Breaker, v)?;
                    let record = *state.history.last().expect("just pushed");
                    maker.observe(&state, &record);
                    breaker.observe(&state, &record);
                }
                if options.stop_when_decided && first_edge.is_none() && state.alive == 0 {
                    stopped_early = state.free_count() > 0;
                    break;
                }
            }
        }
        state.end_turn();
    }
    if empty_edge_win {
        first_edge = Some(0);
    }
    let winner = if first_edge.is_some() {
        Player::Maker
    } else {
        Player::Breaker
    };
    let mut events = maker.events();
    events.extend(breaker.events());
    let mut maker_set = state.maker.clone();
    maker_set.sort_unstable();
    let mut breaker_set = state.breaker.clone();
    breaker_set.sort_unstable();
    Ok(Transcript {
        winner,
        terminating_edge: first_edge.map(|e| board.edge(e).to_vec()),
        moves: state.history.clone(),
        q,
        seed,
        maker_strategy: maker.name(),
        breaker_strategy: breaker.name(),
        first_player: options.first_player,
        rounds: state.history.last().map_or(0, |m| m.round),
        maker_set,
        breaker_set,
        stopped_early,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plays a fixed list of vertices, then the lowest free vertex.
    struct Scripted {
        moves: Vec<Vertex>,
        at: usize,
    }

    impl Scripted {
        fn new(moves: &[Vertex]) -> Self {
            Scripted {
                moves: moves.to_vec(),
                at: 0,
            }
        }
    }

    impl Strategy for Scripted {
        fn name(&self) -> String {
            "scripted".into()
        }

        fn choose(&mut self, state: &GameState<'_>, budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
            let want = if state.to_move() == Player::Maker { 1 } else { budget };
            let take = want.min(self.moves.len() - self.at);
            let out: Vec<Vertex> = self.moves[self.at..self.at + take].to_vec();
            self.at += take;
            let mut out = out;
            if out.is_empty() && state.to_move() == Player::Maker {
                out.push(state.lowest_free().unwrap());
            }
            Ok(out)
        }
    }

    fn ap5() -> Hypergraph {
        Hypergraph::new(5, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [0, 2, 4]]).unwrap()
    }

    #[test]
    fn single_vertex_edge_is_won_at_once() {
        let board = Hypergraph::new(3, [[0]]).unwrap();
        let t = play(&board, 2, &mut Scripted::new(&[0]), &mut Scripted::new(&[]), 1, &PlayOptions::default()).unwrap();
        assert_eq!(t.winner, Player::Maker);
        assert_eq!(t.moves.len(), 1);
        assert_eq!(t.terminating_edge, Some(vec![0]));
    }

    #[test]
    fn breaker_blocks_single_pair() {
        let board = Hypergraph::new(2, [[0, 1]]).unwrap();
        let t = play(&board, 1, &mut Scripted::new(&[0]), &mut Scripted::new(&[1]), 1, &PlayOptions::default()).unwrap();
        assert_eq!(t.winner, Player::Breaker);
        assert_eq!(t.breaker_set, vec![1]);
    }

    #[test]
    fn winner_examples() {
        let board = ap5();
        let mut s = GameState::new(&board, 1);
        assert_eq!(s.winner(), Outcome::Undecided);
        for v in [0, 2, 4] {
            s.occupy(Player::Maker, v).unwrap();
        }
        assert_eq!(s.winner(), Outcome::Maker);

        let mut s = GameState::new(&board, 1);
        for v in [0, 1, 3] {
            s.occupy(Player::Maker, v).unwrap();
        }
        for v in [2, 4] {
            s.occupy(Player::Breaker, v).unwrap();
        }
        assert_eq!(s.winner(), Outcome::Breaker);
        assert!(s.occupy(Player::Maker, 2).is_err());
        assert!(s.occupy(Player::Maker, 9).is_err());
    }

    #[test]
    fn faults_name_the_strategy() {
        let board = ap5();
        let err = play(&board, 1, &mut Scripted::new(&[0, 0]), &mut Scripted::new(&[]), 1, &PlayOptions::default());
        match err {
            Err(Error::StrategyFault { strategy, .. }) => assert_eq!(strategy, "scripted"),
            other => panic!("expected a fault, got {other:?}"),
        }
        let err = play(&board, 1, &mut Scripted::new(&[0]), &mut Scripted::new(&[7]), 1, &PlayOptions::default());
        assert!(matches!(err, Err(Error::StrategyFault { .. })));
    }

    #[test]
    fn rounds_hand_out_exactly_q_while_supply_lasts() {
        let board = Hypergraph::new(10, [[0, 9]]).unwrap();
        let opts = PlayOptions {
            stop_at_first_edge: false,
            ..PlayOptions::default()
        };
        let t = play(&board, 3, &mut Scripted::new(&[]), &mut Scripted::new(&[]), 5, &opts).unwrap();
        let per_round = |p: Player| {
            let mut counts = vec![0usize; t.rounds as usize + 1];
            for m in t.moves.iter().filter(|m| m.player == p) {
                counts[m.round as usize] += 1;
            }
            counts
        };
        // 10 vertices: rounds 1 and 2 take 1 + 3, round 3 takes 1 + 1
        assert_eq!(per_round(Player::Maker)[1..], [1, 1, 1]);
        assert_eq!(per_round(Player::Breaker)[1..], [3, 3, 1]);
        assert_eq!(t.maker_set.len() + t.breaker_set.len(), 10);
    }

    #[test]
    fn breaker_may_move_first() {
        let board = Hypergraph::new(4, [[0, 1]]).unwrap();
        let opts = PlayOptions {
            first_player: Player::Breaker,
            ..PlayOptions::default()
        };
        let t = play(&board, 1, &mut Scripted::new(&[]), &mut Scripted::new(&[2]), 1, &opts).unwrap();
        assert_eq!(t.moves[0], MoveRecord { round: 1, player: Player::Breaker, vertex: 2 });
        assert_eq!(t.moves[1].player, Player::Maker);
    }

    #[test]
    fn early_stop_once_every_edge_is_blocked() {
        let board = Hypergraph::new(8, [[0, 1]]).unwrap();
        let opts = PlayOptions {
            stop_when_decided: true,
            ..PlayOptions::default()
        };
        let t = play(&board, 1, &mut Scripted::new(&[0]), &mut Scripted::new(&[1]), 1, &opts).unwrap();
        assert_eq!(t.winner, Player::Breaker);
        assert!(t.stopped_early);
        assert_eq!(t.moves.len(), 2);
    }

    #[test]
    fn transcript_serializes() {
        let board = ap5();
        let t = play(&board, 1, &mut Scripted::new(&[2]), &mut Scripted::new(&[]), 9, &PlayOptions::default()).unwrap();
        let back: Transcript = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back.moves, t.moves);
        assert_eq!(back.winner, t.winner);
        // Maker ends with {1, 2, 4} against Breaker's padding {0, 3}
        assert!(t.to_json().contains("\"winner\": \"breaker\""));
    }
}
