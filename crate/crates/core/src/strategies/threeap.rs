//! Breaker blocking every 3-term progression through Maker's last element
//! and one of its earlier elements.

use crate::engine::{GameRng, GameState, Strategy, StrategyEvent};
use crate::error::Result;
use crate::hypergraph::Vertex;

/// Free third elements of the progressions containing `x` and `y`.
pub fn progression_completions(x: Vertex, y: Vertex, n: usize) -> Vec<Vertex> {
    let (x, y) = (x as i64, y as i64);
    let mut out = vec![2 * x - y, 2 * y - x];
    if (x + y) % 2 == 0 {
        out.push((x + y) / 2);
    }
    let mut out: Vec<Vertex> = out
        .into_iter()
        .filter(|&z| (0..n as i64).contains(&z) && z != x && z != y)
        .map(|z| z as Vertex)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, Default)]
pub struct ThreeApBreaker {
    events: Vec<StrategyEvent>,
    overloads: u64,
}

impl ThreeApBreaker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn overloads(&self) -> u64 {
        self.overloads
    }
}

impl Strategy for ThreeApBreaker {
    fn name(&self) -> String {
        "threeap-breaker".into()
    }

    fn choose(&mut self, state: &GameState<'_>, budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
        let maker = state.maker_vertices();
        let Some((&x, earlier)) = maker.split_last() else {
            return Ok(Vec::new());
        };
        let n = state.board().vertex_count();
        let mut want: Vec<Vertex> = Vec::new();
        for &y in earlier {
            for z in progression_completions(x, y, n) {
                if state.is_free(z) && !want.contains(&z) {
                    want.push(z);
                }
            }
        }
        if want.len() > budget {
            self.overloads += 1;
            self.events.push(StrategyEvent {
                round: state.round(),
                kind: "overload".into(),
                detail: format!("{} completions, budget {}", want.len(), budget),
            });
            want.truncate(budget);
        }
        Ok(want)
    }

    fn events(&self) -> Vec<StrategyEvent> {
        self.events.clone()
    }
}
