//! Breaker splitting its bias between blocking, fan prevention and cluster
//! prevention.

use std::sync::Arc;

use crate::criteria::breaker_bound;
use crate::engine::{GameRng, GameState, MoveRecord, Player, Strategy, StrategyEvent};
use crate::error::Result;
use crate::hypergraph::{Hypergraph, Vertex};

use super::potential::{greedy_breaker_picks, PotentialTracker};
use super::structures::{cluster_hypergraph, dangerous_acs, fan_hypergraph};

/// Default cap on enumerated fans or clusters.
pub const DEFAULT_STRUCTURE_CAP: usize = 5_000_000;

/// Board-level data shared by every game played with the same parameters.
#[derive(Clone, Debug)]
pub struct CompositePlan {
    pub t: usize,
    pub q: usize,
    pub block_budget: usize,
    pub fan_budget: usize,
    pub cluster_budget: usize,
    pub fans: Arc<Hypergraph>,
    pub clusters: Arc<Hypergraph>,
    fan_tracker: PotentialTracker,
    cluster_tracker: PotentialTracker,
    /// whether t > (2k)^k and q reaches the Breaker criterion's bound
    pub preconditions_met: bool,
}

impl CompositePlan {
    pub fn new(board: &Hypergraph, q: usize, t: usize, cap: usize) -> Result<Self> {
        let block_budget = q / 2;
        let fan_budget = q / 4;
        let cluster_budget = q / 4;
        let fans = fan_hypergraph(board, t, cap)?;
        let clusters = cluster_hypergraph(board, t, cap)?;
        let fan_tracker = PotentialTracker::new(&fans, fan_budget.max(1))?;
        let cluster_tracker = PotentialTracker::new(&clusters, cluster_budget.max(1))?;
        let preconditions_met = match board.uniformity() {
            Some(k) if k >= 2 => {
                let big_t = (2.0 * k as f64).powi(k as i32);
                let bound = breaker_bound(board, t)?;
                (t as f64) > big_t && (q as f64).ln() >= bound.ln_value
            }
            _ => false,
        };
        Ok(CompositePlan {
            t,
            q,
            block_budget,
            fan_budget,
            cluster_budget,
            fans: Arc::new(fans),
            clusters: Arc::new(clusters),
            fan_tracker,
            cluster_tracker,
            preconditions_met,
        })
    }

    pub fn instantiate(&self) -> CompositeBreaker {
        CompositeBreaker {
            plan: self.clone(),
            events: Vec::new(),
            overloads: 0,
            announced: false,
        }
    }
}

/// Each turn: up to q/2 moves on open elements of dangerous almost complete
/// edges, q/4 greedy potential moves on the fan hypergraph, q/4 on the
/// cluster hypergraph. Demand beyond q/2 is reported as an overload event.
#[derive(Clone, Debug)]
pub struct CompositeBreaker {
    plan: CompositePlan,
    events: Vec<StrategyEvent>,
    overloads: u64,
    announced: bool,
}

impl CompositeBreaker {
    pub fn new(board: &Hypergraph, q: usize, t: usize) -> Result<Self> {
        Ok(CompositePlan::new(board, q, t, DEFAULT_STRUCTURE_CAP)?.instantiate())
    }

    pub fn overloads(&self) -> u64 {
        self.overloads
    }

    pub fn plan(&self) -> &CompositePlan {
        &self.plan
    }

    fn take(&mut self, v: Vertex) {
        let plan = &mut self.plan;
        plan.fan_tracker.apply(&plan.fans, Player::Breaker, v);
        plan.cluster_tracker.apply(&plan.clusters, Player::Breaker, v);
    }
}

impl Strategy for CompositeBreaker {
    fn name(&self) -> String {
        format!("composite-breaker:t={}", self.plan.t)
    }

    fn choose(&mut self, state: &GameState<'_>, budget: usize, _rng: &mut GameRng) -> Result<Vec<Vertex>> {
        if !self.announced {
            self.announced = true;
            if !self.plan.preconditions_met {
                self.events.push(StrategyEvent {
                    round: state.round(),
                    kind: "theory-preconditions-unmet".into(),
                    detail: format!("t = {}, q = {}", self.plan.t, self.plan.q),
                });
            }
        }
        let mut opens: Vec<Vertex> = dangerous_acs(state).into_iter().map(|a| a.open).collect();
        opens.sort_unstable();
        opens.dedup();
        let block_budget = self.plan.block_budget.min(budget);
        if opens.len() > block_budget {
            self.overloads += 1;
            self.events.push(StrategyEvent {
                round: state.round(),
                kind: "overload".into(),
                detail: format!("{} open elements, blocking budget {}", opens.len(), block_budget),
            });
        }
        let mut picks: Vec<Vertex> = opens.into_iter().take(block_budget).collect();
        for &v in &picks {
            self.take(v);
        }
        let fan_count = self.plan.fan_budget.min(budget - picks.len());
        let plan = &mut self.plan;
        let fan_picks = greedy_breaker_picks(&mut plan.fan_tracker, &plan.fans, fan_count);
        for &v in &fan_picks {
            plan.cluster_tracker.apply(&plan.clusters, Player::Breaker, v);
        }
        picks.extend(fan_picks);
        let cluster_count = plan.cluster_budget.min(budget - picks.len());
        let cluster_picks = greedy_breaker_picks(&mut plan.cluster_tracker, &plan.clusters, cluster_count);
        for &v in &cluster_picks {
            plan.fan_tracker.apply(&plan.fans, Player::Breaker, v);
        }
        picks.extend(cluster_picks);
        Ok(picks)
    }

    fn observe(&mut self, _state: &GameState<'_>, record: &MoveRecord) {
        let plan = &mut self.plan;
        plan.fan_tracker.apply(&plan.fans, record.player, record.vertex);
        plan.cluster_tracker.apply(&plan.clusters, record.player, record.vertex);
    }

    fn events(&self) -> Vec<StrategyEvent> {
        self.events.clone()
    }
}
