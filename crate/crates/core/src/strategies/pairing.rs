//! Breaker answering each Maker element with its forced partners.

use crate::engine::{GameRng, GameState, Strategy};
use crate::error::Result;
use crate::hypergraph::Vertex;
use crate::linear::{LinearSystem, PairingCertificate};

/// Vertex `x` stands for the integer `x + 1`.
#[derive(Clone, Debug)]
pub struct PairingBreaker {
    cert: PairingCertificate,
}

impl PairingBreaker {
    pub fn new(sys: &LinearSystem) -> Result<Self> {
        Ok(PairingBreaker {
            cert: PairingCertificate::for_system(sys)?,
        })
    }

    pub fn from_certificate(cert: PairingCertificate) -> Self {
        PairingBreaker { cert }
    }
}

impl Strategy for PairingBreaker {
    fn name(&self) -> String {
        "pairing-breaker".into()
    }

    fn choose(&mut self, state: &GameState<'_>, budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
        let Some(x) = state.last_maker_move() else {
            return Ok(Vec::new());
        };
        let n = state.board().vertex_count() as i64;
        Ok(self
            .cert
            .targets(x as i64 + 1, n)
            .into_iter()
            .map(|t| (t - 1) as Vertex)
            .filter(|&v| state.is_free(v))
            .take(budget)
            .collect())
    }
}
