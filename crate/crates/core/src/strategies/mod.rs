//! Maker and Breaker strategies, and the fan and cluster structures behind
//! the composite Breaker.

mod composite;
mod maker;
mod pairing;
mod potential;
mod structures;
mod threeap;

use std::str::FromStr;

pub use composite::{CompositeBreaker, CompositePlan, DEFAULT_STRUCTURE_CAP};
pub use maker::RandomMaker;
pub use pairing::PairingBreaker;
pub use potential::{es_breaker_move, es_potential, EsBreaker, GreedyMaker, PotentialTracker};
pub use structures::{
    cluster_hypergraph, dangerous_acs, dangerous_acs_through, enumerate_clusters, enumerate_simple_fans,
    fan_hypergraph, AlmostComplete, ClusterRecord, FanRecord,
};
pub use threeap::{progression_completions, ThreeApBreaker};

use crate::engine::Strategy;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::linear::{LinearSystem, PairingCertificate};
use crate::solver::ExactStrategy;

/// A strategy name as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategySpec {
    RandomMaker,
    GreedyMaker,
    EsBreaker,
    CompositeBreaker { t: usize },
    ThreeApBreaker,
    PairingBreaker,
    Exact,
}

impl FromStr for StrategySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random-maker" => StrategySpec::RandomMaker,
            "greedy-maker" => StrategySpec::GreedyMaker,
            "es-breaker" => StrategySpec::EsBreaker,
            "threeap-breaker" => StrategySpec::ThreeApBreaker,
            "pairing-breaker" => StrategySpec::PairingBreaker,
            "exact" => StrategySpec::Exact,
            other => {
                let t = other
                    .strip_prefix("composite-breaker:t=")
                    .ok_or_else(|| Error::input(format!("unknown strategy `{other}`")))?;
                let t = t
                    .parse()
                    .map_err(|_| Error::input(format!("bad t in `{other}`")))?;
                StrategySpec::CompositeBreaker { t }
            }
        })
    }
}

impl std::fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StrategySpec::RandomMaker => f.write_str("random-maker"),
            StrategySpec::GreedyMaker => f.write_str("greedy-maker"),
            StrategySpec::EsBreaker => f.write_str("es-breaker"),
            StrategySpec::CompositeBreaker { t } => write!(f, "composite-breaker:t={t}"),
            StrategySpec::ThreeApBreaker => f.write_str("threeap-breaker"),
            StrategySpec::PairingBreaker => f.write_str("pairing-breaker"),
            StrategySpec::Exact => f.write_str("exact"),
        }
    }
}

/// Per-board precomputation, cloned into a fresh strategy for every game.
#[derive(Clone, Debug)]
enum Prepared {
    Plain,
    Tracker(PotentialTracker),
    Composite(Box<CompositePlan>),
    Pairing(PairingCertificate),
}

/// Builds fresh strategy instances for one (board, bias) pair.
#[derive(Clone, Debug)]
pub struct StrategyFactory {
    spec: StrategySpec,
    prepared: Prepared,
}

impl StrategyFactory {
    /// `system` is needed only by the pairing Breaker.
    pub fn new(spec: StrategySpec, board: &Hypergraph, q: usize, system: Option<&LinearSystem>) -> Result<Self> {
        let prepared = match &spec {
            StrategySpec::GreedyMaker | StrategySpec::EsBreaker => Prepared::Tracker(PotentialTracker::new(board, q)?),
            StrategySpec::CompositeBreaker { t } => {
                Prepared::Composite(Box::new(CompositePlan::new(board, q, *t, DEFAULT_STRUCTURE_CAP)?))
            }
            StrategySpec::PairingBreaker => {
                let sys = system.ok_or_else(|| Error::precondition("the pairing Breaker needs a linear system"))?;
                Prepared::Pairing(PairingCertificate::for_system(sys)?)
            }
            StrategySpec::ThreeApBreaker => {
                check_progression_board(board)?;
                Prepared::Plain
            }
            StrategySpec::Exact => {
                ExactStrategy::new(board, q)?;
                Prepared::Plain
            }
            StrategySpec::RandomMaker => Prepared::Plain,
        };
        Ok(StrategyFactory { spec, prepared })
    }

    pub fn spec(&self) -> &StrategySpec {
        &self.spec
    }

    pub fn build(&self, board: &Hypergraph, q: usize) -> Result<Box<dyn Strategy>> {
        Ok(match (&self.spec, &self.prepared) {
            (StrategySpec::RandomMaker, _) => Box::new(RandomMaker::new()),
            (StrategySpec::GreedyMaker, Prepared::Tracker(t)) => Box::new(GreedyMaker::from_tracker(t.clone())),
            (StrategySpec::EsBreaker, Prepared::Tracker(t)) => Box::new(EsBreaker::from_tracker(t.clone())),
            (StrategySpec::CompositeBreaker { .. }, Prepared::Composite(p)) => Box::new(p.instantiate()),
            (StrategySpec::ThreeApBreaker, _) => Box::new(ThreeApBreaker::new()),
            (StrategySpec::PairingBreaker, Prepared::Pairing(c)) => Box::new(PairingBreaker::from_certificate(c.clone())),
            (StrategySpec::Exact, _) => Box::new(ExactStrategy::new(board, q)?),
            _ => unreachable!("factory state matches its spec"),
        })
    }
}

/// Parses a name and builds one strategy instance.
pub fn strategy_from_name(
    name: &str,
    board: &Hypergraph,
    q: usize,
    system: Option<&LinearSystem>,
) -> Result<Box<dyn Strategy>> {
    StrategyFactory::new(name.parse()?, board, q, system)?.build(board, q)
}

fn check_progression_board(board: &Hypergraph) -> Result<()> {
    let n = board.vertex_count();
    let expected: usize = (1..n).map(|d| n.saturating_sub(2 * d)).sum();
    let ok = board.edge_count() == expected
        && board.edges().all(|e| e.len() == 3 && e[1] - e[0] == e[2] - e[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::precondition("the progression Breaker needs the 3-term progression board"))
    }
}
