//! Maker choosing uniformly at random among elements it has not yet picked.

use rand::Rng;

use crate::engine::{GameRng, GameState, Owner, Strategy};
use crate::error::{Error, Result};
use crate::hypergraph::Vertex;

/// Picks uniformly among never-picked elements. A pick already held by
/// Breaker is a failure; Maker then claims the lowest free vertex instead,
/// without marking it as picked.
#[derive(Clone, Debug, Default)]
pub struct RandomMaker {
    unpicked: Option<Vec<Vertex>>,
    failures: u64,
    /// failure count after each of Maker's moves
    failure_history: Vec<u64>,
}

impl RandomMaker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    pub fn failure_history(&self) -> &[u64] {
        &self.failure_history
    }

    fn pick(&mut self, state: &GameState<'_>, rng: &mut GameRng) -> Option<Vertex> {
        let n = state.board().vertex_count() as Vertex;
        let pool = self.unpicked.get_or_insert_with(|| (0..n).collect());
        if pool.is_empty() {
            return None;
        }
        let i = rng.gen_range(0..pool.len());
        Some(pool.swap_remove(i))
    }
}

impl Strategy for RandomMaker {
    fn name(&self) -> String {
        "random-maker".into()
    }

    fn choose(&mut self, state: &GameState<'_>, _budget: usize, rng: &mut GameRng) -> Result<Vec<Vertex>> {
        let choice = match self.pick(state, rng) {
            Some(v) if state.is_free(v) => Some(v),
            Some(v) => {
                if state.owner(v) == Owner::Breaker {
                    self.failures += 1;
                }
                state.lowest_free()
            }
            None => state.lowest_free(),
        };
        let v = choice.ok_or_else(|| Error::precondition("no free vertex for Maker"))?;
        self.failure_history.push(self.failures);
        Ok(vec![v])
    }
}
